//! Test-side oracles, written against coordinates so they share no code with
//! the bit-vector kernels they check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::Rng;
use sumset_core::{Modulus, PointSet};

pub fn coords(p: u32, r: u32, mut index: usize) -> Vec<u32> {
    let mut c = Vec::with_capacity(r as usize);
    for _ in 0..r {
        c.push((index % p as usize) as u32);
        index /= p as usize;
    }
    c
}

pub fn index_of(p: u32, c: &[u32]) -> usize {
    c.iter()
        .rev()
        .fold(0, |acc, &x| acc * p as usize + x as usize)
}

/// {a + b : a in A, b in B}, optionally with a != b, by a double loop over
/// coordinate vectors.
pub fn naive_sumset(p: u32, r: u32, a: &[usize], b: &[usize], restricted: bool) -> BTreeSet<usize> {
    let ca: Vec<Vec<u32>> = a.iter().map(|&x| coords(p, r, x)).collect();
    let cb: Vec<Vec<u32>> = b.iter().map(|&y| coords(p, r, y)).collect();
    let mut sum = vec![0u32; r as usize];
    let mut out = BTreeSet::new();
    for (x, u) in a.iter().zip(&ca) {
        for (y, v) in b.iter().zip(&cb) {
            if restricted && x == y {
                continue;
            }
            for k in 0..r as usize {
                sum[k] = (u[k] + v[k]) % p;
            }
            out.insert(index_of(p, &sum));
        }
    }
    out
}

/// |2^A| by the double loop.
pub fn naive_restricted_size(a: &PointSet) -> usize {
    let m = a.modulus();
    let idx: Vec<usize> = a.indices().collect();
    naive_sumset(m.p(), m.r(), &idx, &idx, true).len()
}

pub fn random_set<R: Rng>(rng: &mut R, modulus: Modulus, size: usize) -> PointSet {
    PointSet::from_indices(modulus, sample(rng, modulus.order(), size).into_vec()).unwrap()
}

/// Every k-subset of 0..n, as sorted index vectors.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n - (k - cur.len()) {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Minimum |2^A| over all m-subsets, by brute force over masks.
pub fn brute_rho(modulus: Modulus, m: usize) -> u32 {
    subsets(modulus.order(), m)
        .into_iter()
        .map(|s| naive_restricted_size(&PointSet::from_indices(modulus, s).unwrap()) as u32)
        .min()
        .unwrap()
}

/// The rotation offsets k with sizes[i] = raw[(i + k) % p].
pub fn rotations(raw: &[u32], sizes: &[u32]) -> Vec<usize> {
    let n = raw.len();
    (0..n)
        .filter(|&k| (0..n).all(|i| sizes[i] == raw[(i + k) % n]))
        .collect()
}
