//! Coset profiles and the lower bounds on |2^A| that depend on nothing else.
//!
//! Fix an order-p subgroup H of Z_p^2 and write A_i = A ∩ H_i. Every bound
//! here is a function of the sizes |A_i| and their positions i only, so it
//! holds for every set with that profile. That is what makes them safe to
//! prune a search with.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::bounds::{block_bounds, min0_capped};
use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::setops::PointSet;

/// Sizes |A ∩ H_i|, rotated so that index 0 holds a largest block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CosetProfile {
    p: u32,
    sizes: Vec<u32>,
    total: u32,
}

impl CosetProfile {
    /// Normalizes raw per-coset counts. Among the rotations that put a
    /// maximal entry at index 0 the lexicographically greatest is kept.
    pub fn from_raw(p: u32, raw: &[u32]) -> Result<Self> {
        if raw.len() != p as usize {
            return Err(Error::usage(format!(
                "profile needs {p} entries, got {}",
                raw.len()
            )));
        }
        if let Some(&bad) = raw.iter().find(|&&s| s > p) {
            return Err(Error::usage(format!(
                "a coset holds at most {p} points, got {bad}"
            )));
        }
        let n = raw.len();
        let max = *raw.iter().max().expect("p >= 3");
        let sizes = (0..n)
            .filter(|&k| raw[k] == max)
            .map(|k| (0..n).map(|i| raw[(i + k) % n]).collect::<Vec<u32>>())
            .max()
            .expect("some entry is maximal");
        Ok(CosetProfile {
            p,
            total: sizes.iter().sum(),
            sizes,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    /// |A_0| after normalization.
    pub fn largest(&self) -> u32 {
        self.sizes[0]
    }

    /// Number of nonzero indices i with A_i nonempty.
    pub fn occupied(&self) -> u32 {
        self.sizes[1..].iter().filter(|&&s| s > 0).count() as u32
    }

    /// Sets of size 2p+1 with p >= 5, where the closed-form 4p bounds apply.
    pub fn is_two_p_plus_one(&self) -> bool {
        self.p >= 5 && self.total == 2 * self.p + 1
    }

    pub fn case(&self) -> CaseTag {
        classify(self)
    }
}

/// Raw counts |A ∩ H_i| in the labeling fixed by `h`.
pub fn raw_profile(a: &PointSet, h: &Subgroup) -> Result<Vec<u32>> {
    a.modulus().ensure_same(&h.modulus())?;
    let table = h.coset_table()?;
    let mut counts = vec![0u32; a.modulus().p() as usize];
    for i in a.indices() {
        counts[table[i] as usize] += 1;
    }
    Ok(counts)
}

pub fn profile_of(a: &PointSet, h: &Subgroup) -> Result<CosetProfile> {
    CosetProfile::from_raw(a.modulus().p(), &raw_profile(a, h)?)
}

/// Sizes |B_i| of the pieces B_i = 2^A ∩ H_i, in the labeling fixed by `h`.
pub fn sum_blocks(a: &PointSet, h: &Subgroup) -> Result<Vec<u32>> {
    raw_profile(&crate::setops::double_restricted(a), h)
}

/// D'_w = #{i : |B_i| >= w} for w = 1..=p, so that Σ_w D'_w = Σ_i |B_i|.
pub fn layer_tails(blocks: &[u32], p: u32) -> Vec<u32> {
    (1..=p)
        .map(|w| blocks.iter().filter(|&&b| b >= w).count() as u32)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// Largest block at most (p+1)/2 and at least (p+1)/2 other blocks.
    Case1A,
    /// Largest block at most (p+1)/2 and at most (p-1)/2 other blocks.
    Case1B,
    /// Largest block at least (p+3)/2.
    Case2,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::Case1A => "1A",
            CaseTag::Case1B => "1B",
            CaseTag::Case2 => "2",
        })
    }
}

pub fn classify(profile: &CosetProfile) -> CaseTag {
    let p = profile.p;
    if profile.largest() > p.div_ceil(2) {
        CaseTag::Case2
    } else if profile.occupied() >= p.div_ceil(2) {
        CaseTag::Case1A
    } else {
        CaseTag::Case1B
    }
}

/// C_w = number of cosets holding exactly w points, for w = 0..=p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountVector {
    p: u32,
    counts: Vec<u32>,
}

impl CountVector {
    pub fn from_profile(profile: &CosetProfile) -> Self {
        let mut counts = vec![0u32; profile.p as usize + 1];
        for &s in &profile.sizes {
            counts[s as usize] += 1;
        }
        CountVector {
            p: profile.p,
            counts,
        }
    }

    pub fn new(p: u32, counts: Vec<u32>) -> Result<Self> {
        if counts.len() != p as usize + 1 {
            return Err(Error::usage(format!(
                "count vector needs {} entries",
                p + 1
            )));
        }
        if counts.iter().sum::<u32>() != p {
            return Err(Error::usage("counts must cover exactly p cosets"));
        }
        Ok(CountVector { p, counts })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn get(&self, w: usize) -> u32 {
        self.counts.get(w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u32 {
        self.counts
            .iter()
            .enumerate()
            .map(|(w, &c)| w as u32 * c)
            .sum()
    }

    pub fn largest(&self) -> u32 {
        self.counts.iter().rposition(|&c| c > 0).unwrap_or(0) as u32
    }

    /// Nonempty cosets other than a largest one.
    pub fn occupied(&self) -> u32 {
        self.counts[1..].iter().sum::<u32>().saturating_sub(1)
    }
}

/// Which argument produced a certificate. The display strings are the tags
/// written to logs and reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LemmaTag {
    BlockSum,
    CaseOneBlocks,
    DensityLayers,
    SparseCaseOne,
    DenseBlocks,
    DenseManyFull,
    DenseTwoFullSpread,
    DenseTwoFullOneSmall,
    DenseTwoFullOnly,
    DenseOneFull,
    DenseOneFullTwoSmall,
    DenseNoFull,
}

impl fmt::Display for LemmaTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LemmaTag::BlockSum => "EQ1-SUM",
            LemmaTag::CaseOneBlocks => "L2.1",
            LemmaTag::DensityLayers => "L2.3-2.5-combo",
            LemmaTag::SparseCaseOne => "L2.16",
            LemmaTag::DenseBlocks => "L3.2",
            LemmaTag::DenseManyFull => "L3.3",
            LemmaTag::DenseTwoFullSpread => "L3.4",
            LemmaTag::DenseTwoFullOneSmall => "L3.5",
            LemmaTag::DenseTwoFullOnly => "L3.6",
            LemmaTag::DenseOneFull => "L3.7",
            LemmaTag::DenseOneFullTwoSmall => "L3.8",
            LemmaTag::DenseNoFull => "L3.10",
        })
    }
}

/// A lower bound on |2^A| valid for every set with a given profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCertificate {
    pub value: u32,
    pub lemma: LemmaTag,
    pub inputs: Vec<(&'static str, i64)>,
}

impl BoundCertificate {
    fn new(value: i64, lemma: LemmaTag, inputs: Vec<(&'static str, i64)>) -> Self {
        BoundCertificate {
            value: value.max(0) as u32,
            lemma,
            inputs,
        }
    }
}

/// Indices reachable as i + j with i != j among the m+1 occupied cosets,
/// minus the occupied ones themselves: each such coset of 2^A is nonempty.
fn guaranteed_new_blocks(p: u32, m: u32) -> i64 {
    let reach = min0_capped(2 * m as i64 - 1, p as i64) as i64;
    (reach - (m as i64 + 1)).max(0)
}

/// Sum of per-coset lower bounds over all p cosets.
pub fn block_sum_bound(profile: &CosetProfile) -> BoundCertificate {
    let b = block_bounds(profile);
    let sum: u32 = b.iter().sum();
    BoundCertificate::new(
        sum as i64,
        LemmaTag::BlockSum,
        vec![("cosets", profile.p as i64)],
    )
}

/// For profiles whose largest block is at most (p+1)/2:
/// `(m+1)(|A_0|-1) + |A| - 2` from the occupied cosets, plus one for each
/// coset that must be hit outside them. With |A| = 2p+1 the middle term is
/// `2p - 1`.
pub fn case_one_bound(profile: &CosetProfile) -> Result<BoundCertificate> {
    let case = classify(profile);
    if case == CaseTag::Case2 {
        return Err(Error::usage(format!(
            "profile {:?} is not in case 1",
            profile.sizes
        )));
    }
    let m = profile.occupied() as i64;
    let a0 = profile.largest() as i64;
    let total = profile.total as i64;
    let tail = guaranteed_new_blocks(profile.p, profile.occupied());
    let value = (m + 1) * (a0 - 1) + total - 2 + tail;
    Ok(BoundCertificate::new(
        value,
        LemmaTag::CaseOneBlocks,
        vec![("m", m), ("a0", a0), ("total", total), ("tail", tail)],
    ))
}

/// Lower bounds on D'_w = #{i : |B_i| >= w} for w = 1..=5 when the largest
/// block has exactly 3 points and at least (p+1)/2 other cosets are hit.
fn layer_counts(counts: &CountVector) -> Result<[u32; 5]> {
    let p = counts.p;
    if counts.largest() != 3 {
        return Err(Error::usage(format!(
            "layer bound needs largest block 3, got {}",
            counts.largest()
        )));
    }
    let m = counts.occupied();
    if m < p.div_ceil(2) || 3 > p.div_ceil(2) {
        return Err(Error::usage("layer bound needs case 1A"));
    }
    Ok(layer_formula(
        p,
        counts.get(1),
        counts.get(2),
        counts.get(3),
        m,
    ))
}

fn layer_formula(p: u32, c1: u32, c2: u32, c3: u32, m: u32) -> [u32; 5] {
    let (c1, c2, c3, cap) = (c1 as i64, c2 as i64, c3 as i64, p as i64);
    let d5 = min0_capped(2 * c3 - 3, cap);
    let mixed = if c2 > 0 {
        min0_capped(c3 + c2 - 1, cap)
    } else {
        0
    };
    let d4 = mixed.max(d5);
    let d3 = min0_capped(2 * c3 + c2 + c1 - 1, cap).max(d4);
    let d1 = min0_capped(2 * m as i64 - 1, cap).max(d3);
    [d1, d3, d3, d4, d5]
}

/// Sum of the D'_w lower bounds, w = 1..=5, which lower-bounds |2^A| because
/// |2^A| = Σ_w D'_w.
pub fn layered_bound(counts: &CountVector) -> Result<BoundCertificate> {
    let d = layer_counts(counts)?;
    let value: u32 = d.iter().sum();
    Ok(BoundCertificate::new(
        value as i64,
        LemmaTag::DensityLayers,
        vec![
            ("c1", counts.get(1) as i64),
            ("c2", counts.get(2) as i64),
            ("c3", counts.get(3) as i64),
            ("d3", d[2] as i64),
            ("d4", d[3] as i64),
            ("d5", d[4] as i64),
        ],
    ))
}

/// [`layered_bound`] with each D'_w also bounded by how many per-coset block
/// bounds reach w.
fn layered_with_blocks(profile: &CosetProfile, blocks: &[u32]) -> Option<BoundCertificate> {
    let lemma = layer_counts(&CountVector::from_profile(profile)).ok()?;
    let top = blocks.iter().copied().max().unwrap_or(0) as usize;
    let mut value = 0u32;
    for w in 1..=top.max(5) {
        let reached = blocks.iter().filter(|&&b| b as usize >= w).count() as u32;
        let from_lemma = if w <= 5 { lemma[w - 1] } else { 0 };
        value += reached.max(from_lemma);
    }
    Some(BoundCertificate::new(
        value as i64,
        LemmaTag::DensityLayers,
        vec![("with_blocks", 1)],
    ))
}

/// Case-1B profiles of 2p+1 points have |2^A| >= 4p.
pub fn sparse_case_one_bound(profile: &CosetProfile) -> Result<BoundCertificate> {
    if classify(profile) != CaseTag::Case1B || !profile.is_two_p_plus_one() {
        return Err(Error::usage(
            "needs a case-1B profile with 2p+1 points, p >= 5",
        ));
    }
    let d = profile.largest() as i64 * (profile.occupied() as i64 + 1) - profile.total as i64;
    Ok(BoundCertificate::new(
        4 * profile.p as i64,
        LemmaTag::SparseCaseOne,
        vec![("m", profile.occupied() as i64), ("deficit", d)],
    ))
}

/// Profiles whose largest block has at least (p+3)/2 points.
///
/// `full` counts the blocks A_i (i != 0) with |A_0| + |A_i| - 1 >= p, each of
/// which forces a whole coset of 2^A; `small` counts the other nonempty ones.
/// The general bound is p for coset 0, p per full block, |A_0| + |A_i| - 1
/// per small block, plus one per coset that must be hit elsewhere. For 2p+1
/// points with p >= 5 every branch reaches 4p.
pub fn case_two_bound(profile: &CosetProfile) -> Result<BoundCertificate> {
    if classify(profile) != CaseTag::Case2 {
        return Err(Error::usage(format!(
            "profile {:?} is not in case 2",
            profile.sizes
        )));
    }
    let p = profile.p as i64;
    let a0 = profile.largest() as i64;
    let mut full = 0i64;
    let mut small = 0i64;
    let mut small_sum = 0i64;
    let mut full_size = 0i64;
    for &s in &profile.sizes[1..] {
        if s == 0 {
            continue;
        }
        if a0 + s as i64 > p {
            full += 1;
            full_size = s as i64;
        } else {
            small += 1;
            small_sum += a0 + s as i64 - 1;
        }
    }
    let tail = guaranteed_new_blocks(profile.p, profile.occupied());
    let general = p + full * p + small_sum + tail;
    let inputs = vec![("l", full), ("s", small), ("a0", a0), ("tail", tail)];

    let closed = if profile.is_two_p_plus_one() {
        match (full, small) {
            (3.., _) => Some(LemmaTag::DenseManyFull),
            (2, 2..) => Some(LemmaTag::DenseTwoFullSpread),
            (2, 1) => Some(LemmaTag::DenseTwoFullOneSmall),
            (2, 0) => Some(LemmaTag::DenseTwoFullOnly),
            (1, 2) if full_size == a0 => Some(LemmaTag::DenseOneFullTwoSmall),
            (1, 2..) => Some(LemmaTag::DenseOneFull),
            (0, _) => Some(LemmaTag::DenseNoFull),
            // one full block with fewer than two small ones cannot hold 2p+1 points
            _ => None,
        }
    } else {
        None
    };
    Ok(match closed {
        Some(tag) => BoundCertificate::new(general.max(4 * p), tag, inputs),
        None => BoundCertificate::new(general, LemmaTag::DenseBlocks, inputs),
    })
}

/// The strongest certificate that applies to `profile`.
pub fn profile_lower_bound(profile: &CosetProfile) -> BoundCertificate {
    let blocks = block_bounds(profile);
    let mut candidates: Vec<BoundCertificate> = Vec::with_capacity(4);
    match classify(profile) {
        CaseTag::Case1A => {
            candidates.extend(case_one_bound(profile).ok());
            candidates.extend(layered_with_blocks(profile, &blocks));
        }
        CaseTag::Case1B => {
            candidates.extend(case_one_bound(profile).ok());
            candidates.extend(sparse_case_one_bound(profile).ok());
        }
        CaseTag::Case2 => candidates.extend(case_two_bound(profile).ok()),
    }
    candidates.push(BoundCertificate::new(
        blocks.iter().sum::<u32>() as i64,
        LemmaTag::BlockSum,
        vec![("cosets", profile.p as i64)],
    ));
    let mut best = candidates.swap_remove(0);
    for c in candidates {
        if c.value > best.value {
            best = c;
        }
    }
    best
}

/// `p=5 sizes=[3,2,2,2,2] case=1A bound=19 lemma=L2.1`
pub struct ProfileReport<'a> {
    pub profile: &'a CosetProfile,
    pub certificate: &'a BoundCertificate,
}

impl fmt::Display for ProfileReport<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<String> = self.profile.sizes.iter().map(u32::to_string).collect();
        write!(
            f,
            "p={} sizes=[{}] case={} bound={} lemma={}",
            self.profile.p,
            sizes.join(","),
            classify(self.profile),
            self.certificate.value,
            self.certificate.lemma
        )
    }
}

/// Returned for partial profiles that cannot be completed at all.
pub const NO_COMPLETION: u32 = u32::MAX;

const DENSE_LIMIT: u64 = 1 << 22;

/// Smallest [`profile_lower_bound`] over every way of adding points to a
/// partial profile until it holds `total` points, with no coset above `cap`.
///
/// A partial profile is keyed by `Σ count_i * (p+1)^i` over raw coset labels,
/// so a search can update the key incrementally. Small p get a precomputed
/// table shared between clones; larger p memoize lazily per clone.
#[derive(Clone)]
pub struct CompletionBound {
    p: u32,
    total: u32,
    cap: u32,
    store: Store,
}

#[derive(Clone)]
enum Store {
    Dense(Arc<Vec<u16>>),
    Lazy(HashMap<u64, u32>),
}

impl CompletionBound {
    pub fn new(p: u32, total: u32, cap: u32) -> Result<Self> {
        if cap == 0 || cap > p {
            return Err(Error::usage(format!("coset cap {cap} outside 1..={p}")));
        }
        if total > p * p {
            return Err(Error::usage("more points than Z_p^2 holds"));
        }
        let dense = (p as u64 + 1)
            .checked_pow(p)
            .is_some_and(|n| n <= DENSE_LIMIT);
        let mut cb = CompletionBound {
            p,
            total,
            cap,
            store: Store::Lazy(HashMap::new()),
        };
        if dense {
            cb.store = Store::Dense(Arc::new(cb.build_dense()));
        }
        Ok(cb)
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// (p+1)^i for each coset label i.
    pub fn weights(p: u32) -> Vec<u64> {
        (0..p).map(|i| (p as u64 + 1).pow(i)).collect()
    }

    fn decode(&self, mut key: u64) -> Vec<u32> {
        let base = self.p as u64 + 1;
        (0..self.p)
            .map(|_| {
                let d = (key % base) as u32;
                key /= base;
                d
            })
            .collect()
    }

    fn full_bound(&self, raw: &[u32]) -> u32 {
        let prof = CosetProfile::from_raw(self.p, raw).expect("entries within cap");
        profile_lower_bound(&prof).value
    }

    fn build_dense(&self) -> Vec<u16> {
        let p = self.p as usize;
        let weights = Self::weights(self.p);
        let size = (self.p as u64 + 1).pow(self.p) as usize;
        let mut table = vec![u16::MAX; size];
        let mut by_sum: Vec<Vec<u64>> = vec![Vec::new(); self.total as usize + 1];
        let mut v = vec![0u32; p];
        collect_vectors(&mut v, 0, 0, self.cap, self.total, &weights, &mut by_sum);
        for s in (0..=self.total as usize).rev() {
            for &key in &by_sum[s] {
                let val = if s == self.total as usize {
                    self.full_bound(&self.decode(key)).min(u16::MAX as u32 - 1) as u16
                } else {
                    let digits = self.decode(key);
                    (0..p)
                        .filter(|&i| digits[i] < self.cap)
                        .map(|i| table[(key + weights[i]) as usize])
                        .min()
                        .unwrap_or(u16::MAX)
                };
                table[key as usize] = val;
            }
        }
        table
    }

    fn lazy(&mut self, key: u64, weights: &[u64]) -> u32 {
        if let Store::Lazy(memo) = &self.store {
            if let Some(&v) = memo.get(&key) {
                return v;
            }
        }
        let digits = self.decode(key);
        let sum: u32 = digits.iter().sum();
        let val = if sum == self.total {
            self.full_bound(&digits)
        } else if sum > self.total {
            NO_COMPLETION
        } else {
            let mut best = NO_COMPLETION;
            for i in 0..self.p as usize {
                if digits[i] < self.cap {
                    best = best.min(self.lazy(key + weights[i], weights));
                }
            }
            best
        };
        if let Store::Lazy(memo) = &mut self.store {
            memo.insert(key, val);
        }
        val
    }

    /// Completion bound for an incrementally maintained key.
    #[inline]
    pub fn lookup(&mut self, key: u64) -> u32 {
        match &self.store {
            Store::Dense(t) => match t.get(key as usize) {
                Some(&v) if v != u16::MAX => v as u32,
                _ => NO_COMPLETION,
            },
            Store::Lazy(_) => {
                let w = Self::weights(self.p);
                self.lazy(key, &w)
            }
        }
    }

    /// Completion bound for raw per-coset counts; `None` if no completion
    /// within the cap exists.
    pub fn min_completion(&mut self, raw: &[u32]) -> Option<u32> {
        if raw.len() != self.p as usize || raw.iter().any(|&c| c > self.cap) {
            return None;
        }
        let w = Self::weights(self.p);
        let key: u64 = raw.iter().zip(&w).map(|(&c, &wi)| c as u64 * wi).sum();
        match self.lookup(key) {
            NO_COMPLETION => None,
            v => Some(v),
        }
    }
}

fn collect_vectors(
    v: &mut Vec<u32>,
    pos: usize,
    sum: u32,
    cap: u32,
    total: u32,
    weights: &[u64],
    out: &mut [Vec<u64>],
) {
    if pos == v.len() {
        let key = v.iter().zip(weights).map(|(&c, &w)| c as u64 * w).sum();
        out[sum as usize].push(key);
        return;
    }
    for c in 0..=cap.min(total - sum) {
        v[pos] = c;
        collect_vectors(v, pos + 1, sum + c, cap, total, weights, out);
    }
    v[pos] = 0;
}
