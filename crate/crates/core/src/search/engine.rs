//! Depth-first enumeration of m-subsets as 128-bit masks.
//!
//! Elements are added in increasing index order and 2^P is maintained
//! incrementally: 2^(P ∪ {x}) = 2^P ∪ (P + x). In rank 2 the orbit and
//! branch-and-bound strategies only visit sets in a normal form that every
//! affine orbit meets: {0, 1} ⊆ A and the x-axis is a line holding the most
//! points of A.

use std::sync::atomic::{AtomicBool, AtomicU32, Ordering};
use std::time::Instant;

use super::{Goal, Strategy};
use crate::error::Result;
use crate::group::{all_subgroups, Modulus};
use crate::profiles::CompletionBound;

/// Upper limit on stored hits per work unit.
pub(crate) const UNIT_HIT_LIMIT: usize = 4096;

pub(crate) struct Tables {
    pub n: usize,
    pub p: u32,
    pub m: usize,
    add: Vec<u8>,
    /// number of line directions tracked; zero outside the normal form
    dirs: usize,
    labels: Vec<u8>,
    weights: Vec<u64>,
    row_dir: usize,
    pub normal_form: bool,
    pub bnb: bool,
}

impl Tables {
    pub fn new(modulus: Modulus, m: usize, strategy: Strategy) -> Result<Self> {
        let n = modulus.order();
        let p = modulus.p();
        let mut add = vec![0u8; n * n];
        for x in 0..n {
            for y in 0..n {
                add[x * n + y] = modulus.add_index(x, y) as u8;
            }
        }
        let normal_form = strategy != Strategy::Exhaustive && m >= 2;
        let (mut dirs, mut labels, mut row_dir) = (0, Vec::new(), 0);
        if normal_form {
            let subs = all_subgroups(modulus)?;
            dirs = subs.len();
            for (d, h) in subs.iter().enumerate() {
                let table = h.coset_table()?;
                if table[..p as usize].iter().all(|&l| l == 0) {
                    row_dir = d;
                }
                labels.extend(table.iter().map(|&l| l as u8));
            }
        }
        Ok(Tables {
            n,
            p,
            m,
            add,
            dirs,
            labels,
            weights: CompletionBound::weights(p),
            row_dir,
            normal_form,
            bnb: strategy == Strategy::BranchAndBound && normal_form,
        })
    }

    pub fn forced(&self) -> Vec<u8> {
        if self.normal_form {
            vec![0, 1]
        } else {
            Vec::new()
        }
    }

    /// Restricted sumset of a mask, for re-checking results.
    pub fn restricted_sums(&self, set: u128) -> u128 {
        let mut out = 0u128;
        let mut s = set;
        while s != 0 {
            let x = s.trailing_zeros() as usize;
            s &= s - 1;
            let mut rest = s;
            while rest != 0 {
                let y = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                out |= 1u128 << self.add[x * self.n + y];
            }
        }
        out
    }
}

/// State shared by every worker of one run.
pub(crate) struct Control {
    pub best: AtomicU32,
    pub stop: AtomicBool,
    pub deadline: Option<Instant>,
}

impl Control {
    fn cutoff(&self, goal: Goal) -> u32 {
        match goal {
            Goal::Minimize { target } => {
                let best = self.best.load(Ordering::Relaxed).saturating_add(1);
                target.map_or(best, |t| t.min(best))
            }
            Goal::Exact(v) => v + 1,
        }
    }
}

/// What one finished unit contributes.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct UnitResult {
    /// Least recorded value, with the first hits attaining it.
    pub min: Option<u32>,
    pub hits: Vec<u128>,
    pub truncated: bool,
}

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Counters {
    pub nodes: u64,
    pub pruned: u64,
    pub audited: u64,
    pub violations: u64,
}

pub(crate) struct Worker<'a> {
    t: &'a Tables,
    ctl: &'a Control,
    goal: Goal,
    bounds: Vec<Option<CompletionBound>>,
    audit_depth: Option<usize>,

    set: u128,
    sums: u128,
    len: usize,
    counts: Vec<u8>,
    keys: Vec<u64>,
    cap: u32,
    row_done: bool,
    undo: Vec<(u128, bool)>,

    since_check: u32,
    aborted: bool,
    pub counters: Counters,
    result: UnitResult,
}

impl<'a> Worker<'a> {
    pub fn new(
        t: &'a Tables,
        ctl: &'a Control,
        goal: Goal,
        completion: &'a [Option<CompletionBound>],
        audit_depth: Option<usize>,
    ) -> Self {
        let p = t.p as usize;
        Worker {
            t,
            ctl,
            goal,
            bounds: completion.to_vec(),
            audit_depth,
            set: 0,
            sums: 0,
            len: 0,
            counts: vec![0; t.dirs * p],
            keys: vec![0; t.dirs],
            cap: t.p,
            row_done: false,
            undo: Vec::with_capacity(t.m),
            since_check: 0,
            aborted: false,
            counters: Counters::default(),
            result: UnitResult::default(),
        }
    }

    fn reset(&mut self) {
        self.set = 0;
        self.sums = 0;
        self.len = 0;
        self.counts.iter_mut().for_each(|c| *c = 0);
        self.keys.iter_mut().for_each(|k| *k = 0);
        self.cap = self.t.p;
        self.row_done = false;
        self.undo.clear();
        self.aborted = false;
        self.result = UnitResult::default();
    }

    /// Adds x if the normal form allows it.
    fn push(&mut self, x: usize) -> bool {
        let t = self.t;
        let p = t.p as usize;
        let mut entered = false;
        if t.normal_form && !self.row_done && x >= p {
            let k0 = self.counts[t.row_dir * p] as usize;
            if (p - 1) * k0 < t.m - k0 {
                return false;
            }
            entered = true;
            self.row_done = true;
            self.cap = k0 as u32;
        }
        let mut over = false;
        for d in 0..t.dirs {
            let l = t.labels[d * t.n + x] as usize;
            let c = &mut self.counts[d * p + l];
            *c += 1;
            self.keys[d] += t.weights[l];
            over |= self.row_done && *c as u32 > self.cap;
        }
        let mut shifted = 0u128;
        let mut s = self.set;
        let row = &t.add[x * t.n..(x + 1) * t.n];
        while s != 0 {
            shifted |= 1u128 << row[s.trailing_zeros() as usize];
            s &= s - 1;
        }
        self.undo.push((self.sums, entered));
        self.sums |= shifted;
        self.set |= 1u128 << x;
        self.len += 1;
        if over {
            self.pop(x);
            return false;
        }
        true
    }

    fn pop(&mut self, x: usize) {
        let t = self.t;
        let p = t.p as usize;
        let (sums, entered) = self.undo.pop().expect("balanced push/pop");
        self.sums = sums;
        self.set &= !(1u128 << x);
        self.len -= 1;
        for d in 0..t.dirs {
            let l = t.labels[d * t.n + x] as usize;
            self.counts[d * p + l] -= 1;
            self.keys[d] -= t.weights[l];
        }
        if entered {
            self.row_done = false;
            self.cap = t.p;
        }
    }

    fn poll(&mut self) -> bool {
        self.since_check += 1;
        if self.since_check >= 4096 {
            self.since_check = 0;
            if self.ctl.stop.load(Ordering::Relaxed)
                || self.ctl.deadline.is_some_and(|d| Instant::now() >= d)
            {
                self.ctl.stop.store(true, Ordering::Relaxed);
                self.aborted = true;
            }
        }
        self.aborted
    }

    /// A cutoff such that the current prefix cannot lead to a set worth
    /// recording, if any.
    fn prune_cutoff(&mut self) -> Option<u32> {
        if !self.t.bnb {
            return None;
        }
        let cutoff = self.ctl.cutoff(self.goal);
        if self.sums.count_ones() >= cutoff {
            return Some(cutoff);
        }
        let table = self.bounds[self.cap as usize]
            .as_mut()
            .expect("table for every cap");
        for d in 0..self.t.dirs {
            if table.lookup(self.keys[d]) >= cutoff {
                return Some(cutoff);
            }
        }
        None
    }

    fn leaf(&mut self) {
        let value = self.sums.count_ones();
        let keep = match self.goal {
            Goal::Minimize { .. } => {
                let keep = value < self.ctl.cutoff(self.goal);
                if keep {
                    self.ctl.best.fetch_min(value, Ordering::Relaxed);
                }
                keep
            }
            Goal::Exact(v) => value == v,
        };
        if !keep {
            return;
        }
        let r = &mut self.result;
        if r.min.is_none_or(|m| value < m) {
            r.min = Some(value);
            r.hits.clear();
            r.truncated = false;
        }
        if r.min == Some(value) {
            if r.hits.len() < UNIT_HIT_LIMIT {
                r.hits.push(self.set);
            } else {
                r.truncated = true;
            }
        }
    }

    fn dfs(&mut self, start: usize) {
        if self.len == self.t.m {
            self.leaf();
            return;
        }
        let need = self.t.m - self.len;
        for x in start..=(self.t.n - need) {
            if !self.push(x) {
                continue;
            }
            self.counters.nodes += 1;
            self.visit(x);
            self.pop(x);
            if self.aborted {
                return;
            }
        }
    }

    fn visit(&mut self, last: usize) {
        if self.poll() {
            return;
        }
        match self.prune_cutoff() {
            Some(cutoff) => {
                self.counters.pruned += 1;
                if self.audit_depth.is_some_and(|d| self.t.m - self.len <= d) {
                    self.counters.audited += 1;
                    self.counters.violations += self.exhaust(last + 1, cutoff);
                }
            }
            None => self.dfs(last + 1),
        }
    }

    /// Completions of the current prefix with value below `cutoff`.
    fn exhaust(&mut self, start: usize, cutoff: u32) -> u64 {
        if self.len == self.t.m {
            return (self.sums.count_ones() < cutoff) as u64;
        }
        let need = self.t.m - self.len;
        let mut bad = 0;
        for x in start..=(self.t.n - need) {
            if self.push(x) {
                bad += self.exhaust(x + 1, cutoff);
                self.pop(x);
            }
        }
        bad
    }

    /// Runs the subtree below `prefix`; `None` if stopped before finishing.
    pub fn run_unit(&mut self, prefix: &[u8]) -> Option<UnitResult> {
        self.reset();
        for &x in prefix {
            let ok = self.push(x as usize);
            debug_assert!(ok, "unit prefixes satisfy the normal form");
        }
        self.counters.nodes += 1;
        let last = prefix.last().map_or(0, |&x| x as usize + 1);
        if self.len == self.t.m {
            self.leaf();
        } else if prefix.is_empty() {
            self.dfs(0);
        } else {
            self.visit(last - 1);
        }
        if self.aborted {
            None
        } else {
            Some(std::mem::take(&mut self.result))
        }
    }

    /// Every normal-form prefix of length `depth`, in DFS order.
    pub fn prefixes(&mut self, depth: usize) -> Vec<Vec<u8>> {
        self.reset();
        let forced = self.t.forced();
        for &x in &forced {
            self.push(x as usize);
        }
        let mut out = Vec::new();
        let mut stack = forced.clone();
        let start = forced.last().map_or(0, |&x| x as usize + 1);
        self.collect(start, depth, &mut stack, &mut out);
        out
    }

    fn collect(&mut self, start: usize, depth: usize, stack: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if self.len == depth {
            out.push(stack.clone());
            return;
        }
        let need = self.t.m - self.len;
        for x in start..=(self.t.n - need) {
            if self.push(x) {
                stack.push(x as u8);
                self.collect(x + 1, depth, stack, out);
                stack.pop();
                self.pop(x);
            }
        }
    }
}
