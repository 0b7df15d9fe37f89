use std::fmt;

use super::PointSet;
use crate::error::{Error, Result};
use crate::group::{inverse_mod, GroupElement, Modulus};

/// x -> Lx + s with L invertible over F_p.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    modulus: Modulus,
    // r x r, row-major
    linear: Vec<u32>,
    shift: GroupElement,
}

impl AffineMap {
    pub fn new(modulus: Modulus, linear: &[u32], shift: GroupElement) -> Result<Self> {
        let r = modulus.r() as usize;
        if linear.len() != r * r {
            return Err(Error::usage(format!("linear part needs {} entries", r * r)));
        }
        modulus.ensure_same(&shift.modulus())?;
        let p = modulus.p();
        let linear: Vec<u32> = linear.iter().map(|&v| v % p).collect();
        if determinant(&linear, r, p) == 0 {
            return Err(Error::usage("linear part is singular"));
        }
        Ok(AffineMap {
            modulus,
            linear,
            shift,
        })
    }

    pub fn identity(modulus: Modulus) -> Self {
        let r = modulus.r() as usize;
        let mut linear = vec![0; r * r];
        for i in 0..r {
            linear[i * r + i] = 1;
        }
        AffineMap {
            modulus,
            linear,
            shift: modulus.zero(),
        }
    }

    pub fn translation(g: &GroupElement) -> Self {
        AffineMap {
            shift: g.clone(),
            ..Self::identity(g.modulus())
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn linear(&self) -> &[u32] {
        &self.linear
    }

    pub fn shift(&self) -> &GroupElement {
        &self.shift
    }

    fn apply_coords(&self, x: &[u32]) -> Vec<u32> {
        let r = self.modulus.r() as usize;
        let p = self.modulus.p() as u64;
        (0..r)
            .map(|i| {
                let dot: u64 = (0..r)
                    .map(|j| self.linear[i * r + j] as u64 * x[j] as u64)
                    .sum();
                ((dot + self.shift.coords()[i] as u64) % p) as u32
            })
            .collect()
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        self.modulus.ensure_same(&x.modulus())?;
        self.modulus.element(&self.apply_coords(x.coords()))
    }

    pub fn apply_index(&self, i: usize) -> usize {
        let x = self.modulus.from_index(i).expect("index in range");
        let y = self.apply_coords(x.coords());
        let p = self.modulus.p() as usize;
        y.iter().rev().fold(0, |acc, &c| acc * p + c as usize)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &AffineMap) -> Result<AffineMap> {
        self.modulus.ensure_same(&first.modulus)?;
        let r = self.modulus.r() as usize;
        let p = self.modulus.p() as u64;
        let mut linear = vec![0u32; r * r];
        for i in 0..r {
            for j in 0..r {
                let v: u64 = (0..r)
                    .map(|k| self.linear[i * r + k] as u64 * first.linear[k * r + j] as u64)
                    .sum();
                linear[i * r + j] = (v % p) as u32;
            }
        }
        let moved = AffineMap {
            modulus: self.modulus,
            linear: self.linear.clone(),
            shift: self.modulus.zero(),
        }
        .apply(&first.shift)?;
        let shift = moved.add(&self.shift)?;
        Ok(AffineMap {
            modulus: self.modulus,
            linear,
            shift,
        })
    }
}

impl fmt::Debug for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffineMap({:?} + {:?})", self.linear, self.shift)
    }
}

fn determinant(m: &[u32], r: usize, p: u32) -> u32 {
    let p64 = p as u64;
    let mut a: Vec<u64> = m.iter().map(|&v| v as u64 % p64).collect();
    let mut det: u64 = 1;
    for col in 0..r {
        let Some(piv) = (col..r).find(|&row| a[row * r + col] != 0) else {
            return 0;
        };
        if piv != col {
            for k in 0..r {
                a.swap(piv * r + k, col * r + k);
            }
            det = (p64 - det) % p64;
        }
        let pv = a[col * r + col];
        det = det * pv % p64;
        let inv = inverse_mod(pv as u32, p) as u64;
        for row in col + 1..r {
            let factor = a[row * r + col] * inv % p64;
            if factor == 0 {
                continue;
            }
            for k in col..r {
                let sub = factor * a[col * r + k] % p64;
                a[row * r + k] = (a[row * r + k] + p64 - sub) % p64;
            }
        }
    }
    det as u32
}

/// All invertible linear maps, for rank 1 or 2.
pub fn linear_group(modulus: Modulus) -> Result<Vec<Vec<u32>>> {
    let p = modulus.p();
    match modulus.r() {
        1 => Ok((1..p).map(|u| vec![u]).collect()),
        2 => {
            let mut out = Vec::with_capacity(((p * p - 1) * (p * p - p)) as usize);
            for a in 0..p {
                for b in 0..p {
                    for c in 0..p {
                        for d in 0..p {
                            if (a * d + p * p - (b * c) % (p * p)) % p != 0 {
                                out.push(vec![a, b, c, d]);
                            }
                        }
                    }
                }
            }
            Ok(out)
        }
        r => Err(Error::unsupported(format!(
            "group enumeration for rank {r}"
        ))),
    }
}

/// Every affine map of Z_p^r for rank 1 or 2. Sizes grow as p^6, so this is
/// meant for small p.
pub fn affine_group(modulus: Modulus) -> Result<Vec<AffineMap>> {
    let lin = linear_group(modulus)?;
    let mut out = Vec::with_capacity(lin.len() * modulus.order());
    for l in &lin {
        for g in modulus.elements() {
            out.push(AffineMap {
                modulus,
                linear: l.clone(),
                shift: g,
            });
        }
    }
    Ok(out)
}

/// The least image of `a` under the affine group, in [`PointSet::lex_cmp`]
/// order. Supported for ranks 1 and 2.
///
/// The least image of a set with at least two points contains indices 0 and
/// 1, so only maps sending some point of `a` to the origin and some other
/// point to (1, 0, ...) need to be tried.
pub fn canonical_form(a: &PointSet) -> Result<PointSet> {
    let m = a.modulus();
    let p = m.p() as i64;
    let pts: Vec<(i64, i64)> = a
        .elements()
        .map(|e| {
            let c = e.coords();
            (c[0] as i64, c.get(1).copied().unwrap_or(0) as i64)
        })
        .collect();
    if m.r() > 2 {
        return Err(Error::unsupported("canonical form needs rank 1 or 2"));
    }
    if pts.len() <= 1 {
        return PointSet::from_indices(m, (!pts.is_empty()).then_some(0));
    }

    let mut best: Option<Vec<usize>> = None;
    let mut image: Vec<usize> = Vec::with_capacity(pts.len());
    let mut consider = |image: &mut Vec<usize>| {
        image.sort_unstable();
        if best
            .as_ref()
            .is_none_or(|b| image.as_slice() < b.as_slice())
        {
            best = Some(image.clone());
        }
    };

    if m.r() == 1 {
        for &(ax, _) in &pts {
            for u in 1..p {
                image.clear();
                image.extend(
                    pts.iter()
                        .map(|&(x, _)| ((x - ax) * u).rem_euclid(p) as usize),
                );
                consider(&mut image);
            }
        }
    } else {
        for &(ax, ay) in &pts {
            for &(bx, by) in &pts {
                if (ax, ay) == (bx, by) {
                    continue;
                }
                let (v0, v1) = ((bx - ax).rem_euclid(p), (by - ay).rem_euclid(p));
                for w0 in 0..p {
                    for w1 in 0..p {
                        let det = (v0 * w1 - w0 * v1).rem_euclid(p);
                        if det == 0 {
                            continue;
                        }
                        let inv = inverse_mod(det as u32, p as u32) as i64;
                        // inverse of the matrix with columns v, w
                        let l = [
                            w1 * inv % p,
                            (p - w0) * inv % p,
                            (p - v1) * inv % p,
                            v0 * inv % p,
                        ];
                        image.clear();
                        image.extend(pts.iter().map(|&(x, y)| {
                            let (dx, dy) = (x - ax, y - ay);
                            let nx = (l[0] * dx + l[1] * dy).rem_euclid(p);
                            let ny = (l[2] * dx + l[3] * dy).rem_euclid(p);
                            (nx + p * ny) as usize
                        }));
                        consider(&mut image);
                    }
                }
            }
        }
    }
    PointSet::from_indices(m, best.expect("at least one map tried"))
}
