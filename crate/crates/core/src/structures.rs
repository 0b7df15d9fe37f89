//! Structured families in Z_p^2: coset-based extremal sets, the difference-d
//! family built from a μ-sequence, and a checker for the difference
//! structure such a family must have when |2^A| <= 4p - 1.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{all_subgroups, CosetIndex, GroupElement, Modulus, Subgroup};
use crate::profiles::raw_profile;
use crate::setops::{double_restricted, PointSet};

/// Parameters of a set A = {0, d, 2d} ∪ ⋃_{i=1}^{p-1} {a_i, a_i + d}, with
/// a_{i+1} = a_1 + a_i + μ_{i+1} d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuSequence {
    d: GroupElement,
    a1: GroupElement,
    /// μ_2, ..., μ_{p-1}
    mu: Vec<i32>,
}

impl MuSequence {
    pub fn new(d: GroupElement, a1: GroupElement, mu: Vec<i32>) -> Result<Self> {
        let m = d.modulus();
        m.require_rank(2)?;
        m.ensure_same(&a1.modulus())?;
        let p = m.p() as usize;
        if d.is_zero() {
            return Err(Error::usage("the difference d must be nonzero"));
        }
        if mu.len() != p - 2 {
            return Err(Error::usage(format!(
                "need μ_2..μ_{}, got {} values",
                p - 1,
                mu.len()
            )));
        }
        if !(-2..=1).contains(&mu[0]) || mu[1..].iter().any(|&u| !(0..=1).contains(&u)) {
            return Err(Error::usage(
                "μ_2 must lie in -2..=1 and later μ_i in 0..=1",
            ));
        }
        if mu.iter().sum::<i32>() != 1 {
            return Err(Error::usage("the μ values must sum to 1"));
        }
        let h = Subgroup::new(&d)?;
        if h.coset_index(&a1)? != CosetIndex(1) {
            return Err(Error::usage("a_1 must lie in the coset labeled 1 of <d>"));
        }
        Ok(MuSequence { d, a1, mu })
    }

    pub fn d(&self) -> &GroupElement {
        &self.d
    }

    pub fn a1(&self) -> &GroupElement {
        &self.a1
    }

    pub fn mu(&self) -> &[i32] {
        &self.mu
    }

    /// a_1, ..., a_{p-1}.
    pub fn base_points(&self) -> Vec<GroupElement> {
        let mut pts = vec![self.a1.clone()];
        for &u in &self.mu {
            let last = pts.last().expect("nonempty");
            let next = last
                .add(&self.a1)
                .and_then(|x| x.add(&self.d.scale(u as i64)))
                .expect("same modulus");
            pts.push(next);
        }
        pts
    }
}

/// Every admissible (μ_2, ..., μ_{p-1}) in lexicographic order.
pub fn mu_vectors(p: u32) -> Vec<Vec<i32>> {
    let tail = p as usize - 3;
    let mut out = Vec::new();
    for mu2 in -2..=1i32 {
        let ones = (1 - mu2) as usize;
        if ones > tail {
            continue;
        }
        for mask in 0u64..(1 << tail) {
            if mask.count_ones() as usize != ones {
                continue;
            }
            let mut v = vec![mu2];
            v.extend((0..tail).map(|k| (mask >> (tail - 1 - k) & 1) as i32));
            out.push(v);
        }
    }
    out.sort();
    out
}

pub fn build_mu_set(seq: &MuSequence) -> PointSet {
    let d = &seq.d;
    let m = d.modulus();
    let mut a = PointSet::empty(m);
    for k in 0..3 {
        a.insert(d.scale(k).index());
    }
    for ai in seq.base_points() {
        a.insert(ai.index());
        a.insert(ai.add(d).expect("same modulus").index());
    }
    a
}

#[derive(Clone, Debug)]
pub struct MuSweepRow {
    pub d: GroupElement,
    pub a1: GroupElement,
    pub mu: Vec<i32>,
    pub size: usize,
    pub value: u32,
    pub meets_threshold: bool,
    /// a_1 + a_{p-1} = d
    pub endpoint_identity: bool,
}

/// All μ-sequence sets over every nonzero d, every a_1 in the coset labeled
/// 1, and every admissible μ vector. Rows come back in parameter order.
pub fn sweep_mu(p: u32) -> Result<Vec<MuSweepRow>> {
    let m = Modulus::new(p, 2)?;
    m.require_theorem_scale()?;
    let mus = mu_vectors(p);
    let mut params = Vec::new();
    for d in m.elements().filter(|e| !e.is_zero()) {
        let h = Subgroup::new(&d)?;
        for a1 in h.coset_indices(CosetIndex(1))? {
            for mu in &mus {
                params.push((d.clone(), m.from_index(a1)?, mu.clone()));
            }
        }
    }
    params
        .into_par_iter()
        .map(|(d, a1, mu)| {
            let seq = MuSequence::new(d, a1, mu)?;
            let set = build_mu_set(&seq);
            let value = double_restricted(&set).len() as u32;
            let pts = seq.base_points();
            let endpoint = pts[0].add(&pts[pts.len() - 1])? == seq.d;
            Ok(MuSweepRow {
                size: set.len(),
                value,
                meets_threshold: value >= 4 * p,
                endpoint_identity: endpoint,
                d: seq.d,
                a1: seq.a1,
                mu: seq.mu,
            })
        })
        .collect()
}

/// Outcome of the five difference-structure claims on one set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceReport {
    pub value: u32,
    /// B_i = {a_i + kd : k = 0..3} for every nonzero i.
    pub blocks_are_runs: bool,
    /// a_j + a_{i-j} ∈ A_i for nonzero i != j.
    pub pair_sums_land: bool,
    /// a_{2i} = 2a_i + δd with δ ∈ {-2, -1, 0, 1}.
    pub doubling: bool,
    /// B_0 = {d, 2d, 3d}.
    pub zero_block: bool,
    /// a_i + a_{-i} = d.
    pub opposite_sum: bool,
    /// value <= 4p - 1 implies all five claims.
    pub implication_holds: bool,
}

impl DifferenceReport {
    pub fn all_claims(&self) -> bool {
        self.blocks_are_runs
            && self.pair_sums_land
            && self.doubling
            && self.zero_block
            && self.opposite_sum
    }
}

pub fn check_difference_structure(
    a: &PointSet,
    h: &Subgroup,
    d: &GroupElement,
) -> Result<DifferenceReport> {
    check_difference_structure_with(a, h, d, &double_restricted(a))
}

/// As [`check_difference_structure`], with 2^A supplied by the caller.
pub fn check_difference_structure_with(
    a: &PointSet,
    h: &Subgroup,
    d: &GroupElement,
    sums: &PointSet,
) -> Result<DifferenceReport> {
    let m = a.modulus();
    m.require_rank(2)?;
    m.ensure_same(&h.modulus())?;
    m.ensure_same(&sums.modulus())?;
    let p = m.p();
    if d.is_zero() || !h.contains(d) {
        return Err(Error::usage("d must be a nonzero element of H"));
    }
    let table = h.coset_table()?;
    let run = |start: &GroupElement, ks: std::ops::Range<i64>| -> Vec<usize> {
        let mut v: Vec<usize> = ks
            .map(|k| start.add(&d.scale(k)).expect("same modulus").index())
            .collect();
        v.sort_unstable();
        v
    };
    let block =
        |s: &PointSet, i: u32| -> Vec<usize> { s.indices().filter(|&x| table[x] == i).collect() };

    let zero = m.zero();
    if block(a, 0) != run(&zero, 0..3) {
        return Err(Error::usage("A ∩ H_0 must be {0, d, 2d}"));
    }
    // a[i] for i = 1..p-1; a[0] is unused
    let mut base = vec![zero.clone()];
    for i in 1..p {
        let pts = block(a, i);
        let start = pts
            .iter()
            .map(|&x| m.from_index(x).expect("in range"))
            .find(|x| run(x, 0..2) == pts)
            .ok_or_else(|| Error::usage(format!("A ∩ H_{i} is not a pair {{a, a + d}}")))?;
        base.push(start);
    }
    let idx = |i: u32| (i % p) as usize;
    let in_a_i = |x: &GroupElement, i: u32| run(&base[idx(i)], 0..2).contains(&x.index());

    let blocks_are_runs = (1..p).all(|i| block(sums, i) == run(&base[i as usize], 0..4));
    let pair_sums_land = (1..p).all(|i| {
        (1..p)
            .filter(|&j| j != i)
            .all(|j| in_a_i(&base[idx(j)].add(&base[idx(i + p - j)]).expect("same"), i))
    });
    let doubling = (1..p).all(|i| {
        let twice = base[idx(i)].scale(2);
        (-2..=1).any(|k| twice.add(&d.scale(k)).expect("same") == base[idx(2 * i)])
    });
    let zero_block = block(sums, 0) == run(&zero, 1..4);
    let opposite_sum = (1..p).all(|i| base[idx(i)].add(&base[idx(p - i)]).expect("same") == *d);

    let value = sums.len() as u32;
    let mut report = DifferenceReport {
        value,
        blocks_are_runs,
        pair_sums_land,
        doubling,
        zero_block,
        opposite_sum,
        implication_holds: true,
    };
    report.implication_holds = value > 4 * p - 1 || report.all_claims();
    Ok(report)
}

/// The two coset-based extremal shapes.
#[derive(Clone, Debug)]
pub enum ExtremalTemplate {
    /// One coset of `subgroup` plus one point outside it; p + 1 points.
    CosetPlusPoint {
        subgroup: Subgroup,
        coset: u32,
        extra: GroupElement,
    },
    /// Two cosets of `subgroup` plus one point whose coset label completes a
    /// three-term progression with theirs; 2p + 1 points. |2^A| is 4p when
    /// the extra label is an end of the progression and 5p when it is the
    /// middle.
    TwoCosetsPlusPoint {
        subgroup: Subgroup,
        first: u32,
        second: u32,
        extra: GroupElement,
    },
}

impl ExtremalTemplate {
    /// Coset y = 0 of the horizontal subgroup plus the point (0, 1).
    pub fn standard_coset_plus_point(m: Modulus) -> Result<Self> {
        Ok(ExtremalTemplate::CosetPlusPoint {
            subgroup: Subgroup::new(&m.element(&[1, 0])?)?,
            coset: 0,
            extra: m.element(&[0, 1])?,
        })
    }

    /// Rows y = 0 and y = 1 plus the point (0, 2).
    pub fn standard_two_cosets(m: Modulus) -> Result<Self> {
        Ok(ExtremalTemplate::TwoCosetsPlusPoint {
            subgroup: Subgroup::new(&m.element(&[1, 0])?)?,
            first: 0,
            second: 1,
            extra: m.element(&[0, 2])?,
        })
    }
}

fn three_term_progression(x: u32, y: u32, z: u32, p: u32) -> bool {
    let distinct = x != y && y != z && x != z;
    let mid = |a: u32, b: u32, c: u32| (2 * a) % p == (b + c) % p;
    distinct && (mid(x, y, z) || mid(y, x, z) || mid(z, x, y))
}

pub fn build_extremal(template: &ExtremalTemplate) -> Result<PointSet> {
    match template {
        ExtremalTemplate::CosetPlusPoint {
            subgroup,
            coset,
            extra,
        } => {
            let m = subgroup.modulus();
            m.require_rank(2)?;
            let c = CosetIndex(coset % m.p());
            if subgroup.coset_index(extra)? == c {
                return Err(Error::usage("the extra point lies in the chosen coset"));
            }
            let mut a = PointSet::from_indices(m, subgroup.coset_indices(c)?)?;
            a.insert(extra.index());
            Ok(a)
        }
        ExtremalTemplate::TwoCosetsPlusPoint {
            subgroup,
            first,
            second,
            extra,
        } => {
            let m = subgroup.modulus();
            m.require_rank(2)?;
            let p = m.p();
            let (f, s) = (first % p, second % p);
            let e = subgroup.coset_index(extra)?.0;
            if e == f || e == s {
                return Err(Error::usage(
                    "the extra point lies in one of the chosen cosets",
                ));
            }
            if !three_term_progression(f, s, e, p) {
                return Err(Error::usage(format!(
                    "coset labels {f}, {s}, {e} do not form a three-term progression"
                )));
            }
            let mut idx = subgroup.coset_indices(CosetIndex(f))?;
            idx.extend(subgroup.coset_indices(CosetIndex(s))?);
            idx.push(extra.index());
            PointSet::from_indices(m, idx)
        }
    }
}

/// A subgroup Z and point a with A ∖ {a} a union of two Z-cosets and the
/// three coset labels of A in progression, if any.
pub fn matches_two_coset_shape(a: &PointSet) -> Result<Option<(Subgroup, GroupElement)>> {
    let m = a.modulus();
    m.require_rank(2)?;
    let p = m.p();
    if a.len() != 2 * p as usize + 1 {
        return Ok(None);
    }
    for z in all_subgroups(m)? {
        let counts = raw_profile(a, &z)?;
        let full: Vec<u32> = (0..p).filter(|&i| counts[i as usize] == p).collect();
        let single: Vec<u32> = (0..p).filter(|&i| counts[i as usize] == 1).collect();
        if full.len() == 2
            && single.len() == 1
            && three_term_progression(full[0], full[1], single[0], p)
        {
            let table = z.coset_table()?;
            let x = a
                .indices()
                .find(|&x| table[x] == single[0])
                .expect("one point there");
            return Ok(Some((z, m.from_index(x)?)));
        }
    }
    Ok(None)
}

/// A subgroup Z and point a with A ∖ {a} a single Z-coset, if any.
pub fn matches_coset_plus_point_shape(a: &PointSet) -> Result<Option<(Subgroup, GroupElement)>> {
    let m = a.modulus();
    m.require_rank(2)?;
    let p = m.p();
    if a.len() != p as usize + 1 {
        return Ok(None);
    }
    for z in all_subgroups(m)? {
        let counts = raw_profile(a, &z)?;
        if let (Some(_), Some(single)) = (
            counts.iter().position(|&c| c == p),
            counts.iter().position(|&c| c == 1),
        ) {
            let table = z.coset_table()?;
            let x = a
                .indices()
                .find(|&x| table[x] == single as u32)
                .expect("one point there");
            return Ok(Some((z, m.from_index(x)?)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u32) -> Modulus {
        Modulus::new(p, 2).unwrap()
    }

    #[test]
    fn mu_vector_counts() {
        assert_eq!(
            mu_vectors(5),
            vec![vec![-1, 1, 1], vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]
        );
        // μ_2 = 1, 0, -1, -2 with 0, 1, 2, 3 ones among four slots
        assert_eq!(mu_vectors(7).len(), 1 + 4 + 6 + 4);
        assert!(mu_vectors(7).iter().all(|v| v.iter().sum::<i32>() == 1));
    }

    #[test]
    fn mu_sequence_validation() {
        let g = m(5);
        let d = g.element(&[1, 0]).unwrap();
        let a1 = g.element(&[0, 1]).unwrap();
        assert!(MuSequence::new(d.clone(), a1.clone(), vec![1, 0, 0]).is_ok());
        assert!(MuSequence::new(d.clone(), a1.clone(), vec![1, 1, 0]).is_err());
        assert!(MuSequence::new(d.clone(), a1.clone(), vec![2, -1, 0]).is_err());
        assert!(MuSequence::new(d.clone(), g.element(&[0, 2]).unwrap(), vec![1, 0, 0]).is_err());
        assert!(MuSequence::new(g.zero(), a1, vec![1, 0, 0]).is_err());
    }

    #[test]
    fn mu_set_shape() {
        let g = m(7);
        let d = g.element(&[1, 0]).unwrap();
        let seq =
            MuSequence::new(d.clone(), g.element(&[3, 1]).unwrap(), vec![0, 0, 1, 0, 0]).unwrap();
        let a = build_mu_set(&seq);
        assert_eq!(a.len(), 15);
        let h = Subgroup::new(&d).unwrap();
        let mut raw = raw_profile(&a, &h).unwrap();
        raw.sort_unstable();
        assert_eq!(raw, vec![2, 2, 2, 2, 2, 2, 3]);
        let pts = seq.base_points();
        assert_eq!(pts[0].add(&pts[5]).unwrap(), d);
    }

    #[test]
    fn sweep_at_five_meets_threshold() {
        let rows = sweep_mu(5).unwrap();
        assert_eq!(rows.len(), 24 * 5 * 4);
        assert!(rows
            .iter()
            .all(|r| r.size == 11 && r.value >= 20 && r.endpoint_identity));
    }

    #[test]
    fn templates() {
        for p in [5, 7] {
            let ek = build_extremal(&ExtremalTemplate::standard_coset_plus_point(m(p)).unwrap())
                .unwrap();
            assert_eq!(ek.len(), p as usize + 1);
            assert_eq!(double_restricted(&ek).len(), 2 * p as usize);
            assert!(matches_coset_plus_point_shape(&ek).unwrap().is_some());

            let two =
                build_extremal(&ExtremalTemplate::standard_two_cosets(m(p)).unwrap()).unwrap();
            assert_eq!(two.len(), 2 * p as usize + 1);
            assert_eq!(double_restricted(&two).len(), 4 * p as usize);
            let (_, extra) = matches_two_coset_shape(&two).unwrap().unwrap();
            assert_eq!(extra.coords(), &[0, 2]);
        }
    }

    #[test]
    fn template_violations() {
        let g = m(7);
        let h = Subgroup::new(&g.element(&[1, 0]).unwrap()).unwrap();
        let inside = ExtremalTemplate::CosetPlusPoint {
            subgroup: h.clone(),
            coset: 0,
            extra: g.element(&[3, 0]).unwrap(),
        };
        assert!(build_extremal(&inside).is_err());
        // labels 0, 1, 3 are not in progression mod 7
        let skew = ExtremalTemplate::TwoCosetsPlusPoint {
            subgroup: h,
            first: 0,
            second: 1,
            extra: g.element(&[0, 3]).unwrap(),
        };
        assert!(build_extremal(&skew).is_err());
    }

    #[test]
    fn difference_checker_and_negative_control() {
        let g = m(7);
        let d = g.element(&[1, 0]).unwrap();
        let h = Subgroup::new(&d).unwrap();
        let seq =
            MuSequence::new(d.clone(), g.element(&[0, 1]).unwrap(), vec![1, 0, 0, 0, 0]).unwrap();
        let a = build_mu_set(&seq);
        let report = check_difference_structure(&a, &h, &d).unwrap();
        assert!(report.implication_holds);

        // pretend 2^A is the run structure with B_0 wrong
        let mut fake = PointSet::empty(g);
        for i in 1..7u32 {
            let ai = &seq.base_points()[i as usize - 1];
            for k in 0..4 {
                fake.insert(ai.add(&d.scale(k)).unwrap().index());
            }
        }
        // {0, d, 2d} in place of {d, 2d, 3d}, so |2^A| = 27 < 4p
        for k in 0..3 {
            fake.insert(d.scale(k).index());
        }
        let broken = check_difference_structure_with(&a, &h, &d, &fake).unwrap();
        assert!(!broken.zero_block);
        assert!(!broken.implication_holds);

        let not_shaped =
            build_extremal(&ExtremalTemplate::standard_two_cosets(g).unwrap()).unwrap();
        assert!(check_difference_structure(&not_shaped, &h, &d).is_err());
    }
}
