//! Lower bounds on sumset sizes in Z_p, and the arithmetic-progression test
//! used when those bounds are tight.

use std::fmt;

use crate::error::{Error, Result};
use crate::profiles::CosetProfile;
use crate::setops::PointSet;

/// Which inequality produced a [`BoundValue`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundSource {
    /// |A + B| >= min{|A| + |B| - 1, p}
    CauchyDavenport,
    /// |A +^ B| >= min0{|A| + |B| - 3, p}
    DiasDaSilvaHamidoune,
    /// |A +^ B| >= min0{|A| + |B| - 2, p} when |A| != |B|
    DiasDaSilvaHamidouneDistinct,
    /// Clamped to zero, or nothing to bound.
    Min0,
}

impl fmt::Display for BoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundSource::CauchyDavenport => "CD",
            BoundSource::DiasDaSilvaHamidoune => "DSH",
            BoundSource::DiasDaSilvaHamidouneDistinct => "DSH-distinct",
            BoundSource::Min0 => "MIN0",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundValue {
    pub value: u32,
    pub source: BoundSource,
}

/// max(0, min(x, cap)).
#[inline]
pub fn min0_capped(x: i64, cap: i64) -> u32 {
    x.min(cap).max(0) as u32
}

pub fn cd_bound(a: u32, b: u32, p: u32) -> BoundValue {
    if a == 0 || b == 0 {
        return BoundValue {
            value: 0,
            source: BoundSource::Min0,
        };
    }
    BoundValue {
        value: min0_capped(a as i64 + b as i64 - 1, p as i64),
        source: BoundSource::CauchyDavenport,
    }
}

pub fn dsh_bound(a: u32, b: u32, p: u32, distinct_sizes: bool) -> BoundValue {
    let (slack, source) = if distinct_sizes {
        (2, BoundSource::DiasDaSilvaHamidouneDistinct)
    } else {
        (3, BoundSource::DiasDaSilvaHamidoune)
    };
    let value = min0_capped(a as i64 + b as i64 - slack, p as i64);
    BoundValue {
        value,
        source: if value == 0 {
            BoundSource::Min0
        } else {
            source
        },
    }
}

/// Lower bound on |B_i| = |2^A ∩ H_i| from every pair of blocks
/// (A_j, A_{i-j}) that lands in coset i.
///
/// Distinct blocks are disjoint, so their restricted sum is a full sumset
/// and loses 1; a block added to itself loses 3.
pub fn pairwise_block_bound(profile: &CosetProfile, i: u32) -> BoundValue {
    let p = profile.p();
    let sizes = profile.sizes();
    let mut best = BoundValue {
        value: 0,
        source: BoundSource::Min0,
    };
    for j in 0..p {
        let k = (i + p - j) % p;
        let (a, b) = (sizes[j as usize], sizes[k as usize]);
        if a == 0 || b == 0 {
            continue;
        }
        let cand = if j == k {
            dsh_bound(a, b, p, false)
        } else {
            cd_bound(a, b, p)
        };
        if cand.value > best.value {
            best = cand;
        }
    }
    best
}

/// Per-coset lower bounds for the whole profile, same as calling
/// [`pairwise_block_bound`] for each i but without re-walking pairs.
pub fn block_bounds(profile: &CosetProfile) -> Vec<u32> {
    let p = profile.p() as usize;
    let sizes = profile.sizes();
    let mut out = vec![0u32; p];
    for j in 0..p {
        if sizes[j] == 0 {
            continue;
        }
        for k in j..p {
            if sizes[k] == 0 {
                continue;
            }
            let i = (j + k) % p;
            let v = if j == k {
                min0_capped(2 * sizes[j] as i64 - 3, p as i64)
            } else {
                min0_capped(sizes[j] as i64 + sizes[k] as i64 - 1, p as i64)
            };
            if v > out[i] {
                out[i] = v;
            }
        }
    }
    out
}

/// Differences d in [1, (p-1)/2] for which `s` is an arithmetic progression
/// with difference d (or -d).
fn progression_differences(s: &PointSet) -> Vec<u32> {
    let p = s.modulus().p();
    let k = s.len();
    let pts: Vec<u32> = s.indices().map(|i| i as u32).collect();
    (1..=(p - 1) / 2)
        .filter(|&d| {
            if k as u32 == p {
                return true;
            }
            // an AP of length k < p overlaps its shift by d in exactly k-1 points
            let overlap = pts
                .iter()
                .filter(|&&x| s.contains_index(((x + d) % p) as usize))
                .count();
            overlap + 1 == k
        })
        .collect()
}

/// The smallest normalized common difference of two arithmetic progressions
/// in Z_p, or `None` when they share no difference.
pub fn is_ap_pair(a: &PointSet, b: &PointSet) -> Result<Option<u32>> {
    a.modulus().ensure_same(&b.modulus())?;
    a.modulus().require_rank(1)?;
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::usage(
            "progression test needs sets of size at least 2",
        ));
    }
    let da = progression_differences(a);
    let db = progression_differences(b);
    Ok(da.into_iter().find(|d| db.contains(d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Modulus;

    fn zp(p: u32, idx: &[usize]) -> PointSet {
        PointSet::from_indices(Modulus::new(p, 1).unwrap(), idx.iter().copied()).unwrap()
    }

    #[test]
    fn min0_examples() {
        assert_eq!(min0_capped(-3, 5), 0);
        assert_eq!(min0_capped(7, 5), 5);
        assert_eq!(min0_capped(3, 5), 3);
    }

    #[test]
    fn cd_examples() {
        assert_eq!(cd_bound(3, 3, 5).value, 5);
        assert_eq!(cd_bound(1, 1, 7).value, 1);
        assert_eq!(cd_bound(4, 4, 5).value, 5);
        assert_eq!(
            cd_bound(0, 4, 5),
            BoundValue {
                value: 0,
                source: BoundSource::Min0
            }
        );
    }

    #[test]
    fn dsh_examples() {
        assert_eq!(dsh_bound(2, 2, 5, false).value, 1);
        assert_eq!(dsh_bound(1, 1, 5, false).value, 0);
        assert_eq!(dsh_bound(3, 2, 5, true).value, 3);
        assert_eq!(
            dsh_bound(3, 2, 5, true).source,
            BoundSource::DiasDaSilvaHamidouneDistinct
        );
    }

    #[test]
    fn pairwise_examples() {
        let prof = CosetProfile::from_raw(5, &[3, 2, 2, 2, 2]).unwrap();
        assert_eq!(pairwise_block_bound(&prof, 1).value, 4);
        let lone = CosetProfile::from_raw(5, &[3, 0, 0, 0, 0]).unwrap();
        assert_eq!(pairwise_block_bound(&lone, 0).value, 3);
        let empty = CosetProfile::from_raw(5, &[0; 5]).unwrap();
        assert!((0..5).all(|i| pairwise_block_bound(&empty, i).value == 0));
    }

    #[test]
    fn block_bounds_agree_with_pairwise() {
        for raw in [
            [3u32, 2, 2, 2, 2],
            [5, 5, 1, 0, 0],
            [4, 0, 3, 1, 3],
            [1, 1, 0, 0, 0],
        ] {
            let prof = CosetProfile::from_raw(5, &raw).unwrap();
            let fast = block_bounds(&prof);
            for i in 0..5 {
                assert_eq!(fast[i as usize], pairwise_block_bound(&prof, i).value);
            }
        }
    }

    #[test]
    fn ap_pairs() {
        assert_eq!(
            is_ap_pair(&zp(5, &[0, 1, 2]), &zp(5, &[4, 0])).unwrap(),
            Some(1)
        );
        assert_eq!(
            is_ap_pair(&zp(5, &[0, 1, 2]), &zp(5, &[0, 2])).unwrap(),
            None
        );
        assert!(is_ap_pair(&zp(5, &[0, 1]), &zp(5, &[0, 1]))
            .unwrap()
            .is_some());
        assert!(is_ap_pair(&zp(5, &[0]), &zp(5, &[0, 1])).is_err());
        // 0,3,6 in Z_7 has difference 3
        assert_eq!(
            is_ap_pair(&zp(7, &[0, 3, 6]), &zp(7, &[1, 4])).unwrap(),
            Some(3)
        );
        assert_eq!(
            is_ap_pair(&zp(7, &[0, 1, 3]), &zp(7, &[1, 2])).unwrap(),
            None
        );
    }
}
