//! C ABI over `sumset-core`.
//!
//! Sets cross the boundary as opaque `SumsetSet` handles owned by the caller
//! and released with `sumset_set_free`. Every fallible function returns a
//! `SumsetStatus`; on failure `sumset_last_error` describes the cause for the
//! calling thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Duration;

use sumset_core::profiles::{profile_lower_bound, CosetProfile};
use sumset_core::search::{rho, Goal, SearchConfig, Strategy};
use sumset_core::{double_restricted, restricted_sumset, sumset, Error, Modulus, PointSet};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumsetStatus {
    Ok = 0,
    NullPointer = 1,
    Usage = 2,
    Unsupported = 3,
    Parse = 4,
    Infeasible = 5,
    Checkpoint = 6,
    Io = 7,
    BufferTooSmall = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumsetStrategy {
    Exhaustive = 0,
    Orbit = 1,
    BranchAndBound = 2,
}

/// Opaque set of points of Z_p^r.
pub struct SumsetSet(PointSet);

/// Result of `sumset_rho`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct SumsetRhoResult {
    /// Least |2^A| found; meaningful only when `found` is nonzero.
    pub value: u32,
    pub found: bool,
    /// Whether every m-subset was covered.
    pub complete: bool,
    pub coverage: f64,
    pub nodes_visited: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn status_of(e: &Error) -> SumsetStatus {
    match e {
        Error::Usage(_) => SumsetStatus::Usage,
        Error::Unsupported(_) => SumsetStatus::Unsupported,
        Error::Parse { .. } => SumsetStatus::Parse,
        Error::Infeasible { .. } => SumsetStatus::Infeasible,
        Error::Checkpoint(_) => SumsetStatus::Checkpoint,
        Error::Io { .. } => SumsetStatus::Io,
        Error::Internal(_) => SumsetStatus::Internal,
    }
}

enum Failure {
    Core(Error),
    Status(SumsetStatus, &'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

const NULL: Failure = Failure::Status(SumsetStatus::NullPointer, "null pointer argument");

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SumsetStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SumsetStatus::Ok,
        Ok(Err(Failure::Core(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_last_error(msg);
            s
        }
        Err(_) => {
            set_last_error("panic inside sumset library");
            SumsetStatus::Internal
        }
    }
}

unsafe fn slice<'a, T>(ptr: *const T, len: usize) -> Result<&'a [T], Failure> {
    if len == 0 {
        Ok(&[])
    } else if ptr.is_null() {
        Err(NULL)
    } else {
        Ok(std::slice::from_raw_parts(ptr, len))
    }
}

unsafe fn handle<'a>(ptr: *const SumsetSet) -> Result<&'a PointSet, Failure> {
    ptr.as_ref().map(|s| &s.0).ok_or(NULL)
}

unsafe fn emit<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(NULL);
    }
    out.write(value);
    Ok(())
}

fn boxed(set: PointSet) -> *mut SumsetSet {
    Box::into_raw(Box::new(SumsetSet(set)))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sumset_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread. Valid until the next
/// failing call on the same thread; empty if none failed.
#[no_mangle]
pub extern "C" fn sumset_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a set in Z_p^r from flat indices (index = c0 + p c1 + p^2 c2 ...).
#[no_mangle]
pub unsafe extern "C" fn sumset_set_new(
    p: u32,
    r: u32,
    indices: *const u32,
    len: usize,
    out: *mut *mut SumsetSet,
) -> SumsetStatus {
    guard(|| {
        let idx = slice(indices, len)?;
        let set = PointSet::from_indices(Modulus::new(p, r)?, idx.iter().map(|&i| i as usize))?;
        emit(out, boxed(set))
    })
}

/// Releases a handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sumset_set_free(set: *mut SumsetSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

#[no_mangle]
pub unsafe extern "C" fn sumset_set_len(set: *const SumsetSet, out: *mut usize) -> SumsetStatus {
    guard(|| emit(out, handle(set)?.len()))
}

/// Copies sorted flat indices into `buf`. `needed` always receives the set
/// size; if it exceeds `cap`, nothing is copied and `BufferTooSmall` is
/// returned.
#[no_mangle]
pub unsafe extern "C" fn sumset_set_indices(
    set: *const SumsetSet,
    buf: *mut u32,
    cap: usize,
    needed: *mut usize,
) -> SumsetStatus {
    guard(|| {
        let s = handle(set)?;
        emit(needed, s.len())?;
        if s.len() > cap {
            return Err(Failure::Status(
                SumsetStatus::BufferTooSmall,
                "index buffer too small",
            ));
        }
        if s.is_empty() {
            return Ok(());
        }
        if buf.is_null() {
            return Err(NULL);
        }
        for (k, i) in s.indices().enumerate() {
            buf.add(k).write(i as u32);
        }
        Ok(())
    })
}

/// A + B, or the restricted sum {a + b : a != b} when `restricted` is set.
#[no_mangle]
pub unsafe extern "C" fn sumset_sumset(
    a: *const SumsetSet,
    b: *const SumsetSet,
    restricted: bool,
    out: *mut *mut SumsetSet,
) -> SumsetStatus {
    guard(|| {
        let (a, b) = (handle(a)?, handle(b)?);
        let s = if restricted {
            restricted_sumset(a, b)?
        } else {
            sumset(a, b)?
        };
        emit(out, boxed(s))
    })
}

/// |2^A|, the size of the restricted sumset of A with itself.
#[no_mangle]
pub unsafe extern "C" fn sumset_restricted_size(
    a: *const SumsetSet,
    out: *mut usize,
) -> SumsetStatus {
    guard(|| emit(out, double_restricted(handle(a)?).len()))
}

/// Minimum |2^A| over m-subsets of Z_p^r. `budget_secs <= 0` means no
/// budget; long unbudgeted runs are refused with `Infeasible`.
#[no_mangle]
pub unsafe extern "C" fn sumset_rho(
    p: u32,
    r: u32,
    m: usize,
    strategy: SumsetStrategy,
    budget_secs: f64,
    out: *mut SumsetRhoResult,
) -> SumsetStatus {
    guard(|| {
        if out.is_null() {
            return Err(NULL);
        }
        let strategy = match strategy {
            SumsetStrategy::Exhaustive => Strategy::Exhaustive,
            SumsetStrategy::Orbit => Strategy::Orbit,
            SumsetStrategy::BranchAndBound => Strategy::BranchAndBound,
        };
        let budget = (budget_secs.is_finite() && budget_secs > 0.0)
            .then(|| Duration::from_secs_f64(budget_secs));
        let config = SearchConfig {
            time_budget: budget,
            ..SearchConfig::new(p, r, m, strategy).goal(Goal::Minimize { target: None })
        };
        let w = rho(&config)?;
        emit(
            out,
            SumsetRhoResult {
                value: w.best_value.unwrap_or(0),
                found: w.best_value.is_some(),
                complete: w.complete,
                coverage: w.coverage(),
                nodes_visited: w.nodes_visited,
            },
        )
    })
}

/// Lower bound on |2^A| for any A in Z_p^2 whose coset sizes with respect
/// to some order-p subgroup are `sizes` (p entries, any order).
#[no_mangle]
pub unsafe extern "C" fn sumset_profile_bound(
    p: u32,
    sizes: *const u32,
    len: usize,
    out: *mut u32,
) -> SumsetStatus {
    guard(|| {
        let raw = slice(sizes, len)?;
        let profile = CosetProfile::from_raw(p, raw)?;
        emit(out, profile_lower_bound(&profile).value)
    })
}
