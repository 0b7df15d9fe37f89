//! Sumset kernels.
//!
//! For p <= 64 a set is viewed as p^(r-1) rows of p bits, row `y` holding the
//! first coordinates x with `x + p*y` in the set. Adding a point b rotates
//! every row by b's first coordinate and moves it to the row shifted by the
//! rest of b, so A + B is an OR of |B| row-rotated copies of A.

use super::PointSet;
use crate::group::Modulus;

pub(super) fn sum(a: &PointSet, b: &PointSet, restricted: bool) -> PointSet {
    let m = a.modulus;
    if m.p() <= 64 {
        rows_sum(a, b, restricted)
    } else {
        pairwise_sum(a, b, restricted)
    }
}

fn pairwise_sum(a: &PointSet, b: &PointSet, restricted: bool) -> PointSet {
    let m = a.modulus;
    let mut out = PointSet::empty(m);
    for x in a.indices() {
        for y in b.indices() {
            if restricted && x == y {
                continue;
            }
            out.insert(m.add_index(x, y));
        }
    }
    out
}

#[inline]
fn rotate(row: u64, k: u32, p: u32, mask: u64) -> u64 {
    if k == 0 {
        row
    } else {
        ((row << k) | (row >> (p - k))) & mask
    }
}

fn to_rows(s: &PointSet) -> Vec<u64> {
    let p = s.modulus.p() as usize;
    let mut rows = vec![0u64; s.modulus.order() / p];
    for i in s.indices() {
        rows[i / p] |= 1 << (i % p);
    }
    rows
}

fn from_rows(m: Modulus, rows: &[u64]) -> PointSet {
    let p = m.p() as usize;
    let mut out = PointSet::empty(m);
    for (y, &row) in rows.iter().enumerate() {
        let mut bits = row;
        while bits != 0 {
            let x = bits.trailing_zeros() as usize;
            out.insert(x + p * y);
            bits &= bits - 1;
        }
    }
    out
}

fn rows_sum(a: &PointSet, b: &PointSet, restricted: bool) -> PointSet {
    let m = a.modulus;
    let p = m.p();
    let mask = if p == 64 { u64::MAX } else { (1u64 << p) - 1 };
    let mut a_rows = to_rows(a);
    let nrows = a_rows.len();
    let row_modulus =
        (m.r() > 1).then(|| Modulus::new(p, m.r() - 1).expect("smaller rank is valid"));
    let mut out = vec![0u64; nrows];

    for bi in b.indices() {
        let (bx, by) = ((bi % p as usize) as u32, bi / p as usize);
        let drop_self = restricted && a.contains_index(bi);
        if drop_self {
            a_rows[by] &= !(1 << bx);
        }
        for (y, &row) in a_rows.iter().enumerate() {
            if row == 0 {
                continue;
            }
            let ty = match &row_modulus {
                None => 0,
                Some(rm) => rm.add_index(y, by),
            };
            out[ty] |= rotate(row, bx, p, mask);
        }
        if drop_self {
            a_rows[by] |= 1 << bx;
        }
    }
    from_rows(m, &out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_kernels_agree_on_small_cases() {
        for (p, r) in [(3, 1), (5, 2), (3, 3), (7, 2)] {
            let m = Modulus::new(p, r).unwrap();
            let n = m.order();
            let a = PointSet::from_indices(m, (0..n).filter(|i| i % 3 != 1)).unwrap();
            let b = PointSet::from_indices(m, (0..n).filter(|i| i % 4 == 0)).unwrap();
            for restricted in [false, true] {
                assert_eq!(
                    rows_sum(&a, &b, restricted),
                    pairwise_sum(&a, &b, restricted)
                );
                assert_eq!(
                    rows_sum(&a, &a, restricted),
                    pairwise_sum(&a, &a, restricted)
                );
            }
        }
    }

    #[test]
    fn large_prime_uses_pairwise_path() {
        let m = Modulus::new(67, 1).unwrap();
        let a = PointSet::from_indices(m, [0, 1, 2]).unwrap();
        assert_eq!(sum(&a, &a, true).indices().collect::<Vec<_>>(), [1, 2, 3]);
    }
}
