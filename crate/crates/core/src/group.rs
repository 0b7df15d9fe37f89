//! Arithmetic in the elementary abelian group Z_p^r.
//!
//! Elements are addressed by a flat index `c0 + p*c1 + p^2*c2 + ...`, which is
//! also the bit position used by [`crate::setops::PointSet`]. For r = 2 this is
//! row-major with the second coordinate selecting the row.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order we address with bit vectors.
pub const MAX_ORDER: usize = 1 << 26;

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The pair (p, r) naming the group Z_p^r.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modulus {
    p: u32,
    r: u32,
    order: usize,
}

impl Modulus {
    /// Validates that `p` is an odd prime and that p^r is addressable.
    pub fn new(p: u32, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::usage(format!("{p} is not prime")));
        }
        if p == 2 {
            return Err(Error::unsupported("p = 2 is not supported"));
        }
        if r == 0 {
            return Err(Error::usage("rank must be at least 1"));
        }
        let mut order: usize = 1;
        for _ in 0..r {
            order = order
                .checked_mul(p as usize)
                .filter(|&o| o <= MAX_ORDER)
                .ok_or_else(|| {
                    Error::unsupported(format!("{p}^{r} exceeds the addressable order"))
                })?;
        }
        Ok(Modulus { p, r, order })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// p^r, the number of group elements.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Commands that reason about sets of size 2p+1 need p >= 5.
    pub fn require_theorem_scale(&self) -> Result<()> {
        if self.p < 5 {
            return Err(Error::usage(format!("p = {} is below 5", self.p)));
        }
        Ok(())
    }

    pub fn require_rank(&self, r: u32) -> Result<()> {
        if self.r != r {
            return Err(Error::unsupported(format!(
                "operation needs rank {r}, got rank {}",
                self.r
            )));
        }
        Ok(())
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            modulus: *self,
            coords: vec![0; self.r as usize],
        }
    }

    pub fn element(&self, coords: &[u32]) -> Result<GroupElement> {
        if coords.len() != self.r as usize {
            return Err(Error::usage(format!(
                "expected {} coordinates, got {}",
                self.r,
                coords.len()
            )));
        }
        if let Some(c) = coords.iter().find(|&&c| c >= self.p) {
            return Err(Error::usage(format!(
                "coordinate {c} is not a residue mod {}",
                self.p
            )));
        }
        Ok(GroupElement {
            modulus: *self,
            coords: coords.to_vec(),
        })
    }

    /// Like [`Modulus::element`] but reduces arbitrary integers mod p.
    pub fn element_reduced(&self, coords: &[i64]) -> Result<GroupElement> {
        let p = self.p as i64;
        let reduced: Vec<u32> = coords.iter().map(|&c| c.rem_euclid(p) as u32).collect();
        self.element(&reduced)
    }

    pub fn from_index(&self, mut index: usize) -> Result<GroupElement> {
        if index >= self.order {
            return Err(Error::usage(format!(
                "index {index} out of range for order {}",
                self.order
            )));
        }
        let p = self.p as usize;
        let mut coords = Vec::with_capacity(self.r as usize);
        for _ in 0..self.r {
            coords.push((index % p) as u32);
            index /= p;
        }
        Ok(GroupElement {
            modulus: *self,
            coords,
        })
    }

    /// Digit-wise sum of two flat indices.
    #[inline]
    pub fn add_index(&self, a: usize, b: usize) -> usize {
        let p = self.p as usize;
        if self.r == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.r {
            let s = a % p + b % p;
            out += if s >= p { s - p } else { s } * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn neg_index(&self, a: usize) -> usize {
        let p = self.p as usize;
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.r {
            let d = a % p;
            out += if d == 0 { 0 } else { p - d } * place;
            a /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn sub_index(&self, a: usize, b: usize) -> usize {
        self.add_index(a, self.neg_index(b))
    }

    /// All elements in flat-index order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(move |i| self.from_index(i).expect("index in range"))
    }

    fn check_same(&self, other: &Modulus) -> Result<()> {
        if self != other {
            return Err(Error::usage(format!(
                "mismatched moduli: Z_{}^{} vs Z_{}^{}",
                self.p, self.r, other.p, other.r
            )));
        }
        Ok(())
    }

    pub(crate) fn ensure_same(&self, other: &Modulus) -> Result<()> {
        self.check_same(other)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}^{}", self.p, self.r)
    }
}

/// A point of Z_p^r.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    modulus: Modulus,
    coords: Vec<u32>,
}

impl GroupElement {
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn index(&self) -> usize {
        let p = self.modulus.p as usize;
        self.coords
            .iter()
            .rev()
            .fold(0usize, |acc, &c| acc * p + c as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        self.modulus.check_same(&other.modulus)?;
        let p = self.modulus.p;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        Ok(GroupElement {
            modulus: self.modulus,
            coords,
        })
    }

    pub fn neg(&self) -> GroupElement {
        let p = self.modulus.p;
        GroupElement {
            modulus: self.modulus,
            coords: self.coords.iter().map(|&c| (p - c) % p).collect(),
        }
    }

    pub fn sub(&self, other: &GroupElement) -> Result<GroupElement> {
        self.add(&other.neg())
    }

    /// k * self for an integer k (negative allowed).
    pub fn scale(&self, k: i64) -> GroupElement {
        let p = self.modulus.p as i64;
        let k = k.rem_euclid(p);
        GroupElement {
            modulus: self.modulus,
            coords: self
                .coords
                .iter()
                .map(|&c| ((c as i64 * k) % p) as u32)
                .collect(),
        }
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Label i of a coset H_i of an order-p subgroup H of Z_p^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetIndex(pub u32);

/// An order-p subgroup, stored with the homomorphism that labels its cosets.
///
/// The labeling is the linear functional that vanishes on the subgroup and
/// takes the value 1 on the lexicographically smallest element outside it,
/// so `coset_index(x + y) = coset_index(x) + coset_index(y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    generator: GroupElement,
    members: Vec<GroupElement>,
    // coefficients of the labeling functional; only meaningful for r = 2
    functional: Option<[u32; 2]>,
}

impl Subgroup {
    /// The cyclic subgroup generated by a nonzero element. The stored
    /// generator is rescaled so its first nonzero coordinate is 1.
    pub fn new(generator: &GroupElement) -> Result<Self> {
        if generator.is_zero() {
            return Err(Error::usage("the trivial subgroup has no cosets to index"));
        }
        let m = generator.modulus;
        let p = m.p;
        let lead = *generator.coords.iter().find(|&&c| c != 0).expect("nonzero");
        let generator = generator.scale(inverse_mod(lead, p) as i64);
        let members: Vec<GroupElement> = (0..p as i64).map(|k| generator.scale(k)).collect();

        let functional = if m.r == 2 {
            let (g0, g1) = (generator.coords[0], generator.coords[1]);
            // f(x) = g1*x0 - g0*x1 vanishes on <g>
            let raw = [g1 % p, (p - g0) % p];
            let complement = lex_smallest_outside(&members, m);
            let at_c = (raw[0] * complement.coords[0] + raw[1] * complement.coords[1]) % p;
            let scale = inverse_mod(at_c, p);
            Some([(raw[0] * scale) % p, (raw[1] * scale) % p])
        } else {
            None
        };

        Ok(Subgroup {
            generator,
            members,
            functional,
        })
    }

    pub fn generator(&self) -> &GroupElement {
        &self.generator
    }

    pub fn members(&self) -> &[GroupElement] {
        &self.members
    }

    pub fn modulus(&self) -> Modulus {
        self.generator.modulus
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.members.iter().any(|m| m == x)
    }

    /// The label i with x in H_i.
    pub fn coset_index(&self, x: &GroupElement) -> Result<CosetIndex> {
        self.modulus().check_same(&x.modulus)?;
        let f = self.functional.ok_or_else(|| {
            Error::usage(format!(
                "an order-p subgroup of {} has no coset labeling by Z_p",
                self.modulus()
            ))
        })?;
        let p = self.modulus().p;
        Ok(CosetIndex((f[0] * x.coords[0] + f[1] * x.coords[1]) % p))
    }

    /// Coset label of every flat index, in index order.
    pub fn coset_table(&self) -> Result<Vec<u32>> {
        let m = self.modulus();
        let f = self
            .functional
            .ok_or_else(|| Error::usage("coset labeling needs rank 2"))?;
        let p = m.p as usize;
        Ok((0..m.order())
            .map(|i| ((f[0] as usize * (i % p) + f[1] as usize * (i / p)) % p) as u32)
            .collect())
    }

    /// Some element with coset label i.
    pub fn coset_representative(&self, i: CosetIndex) -> Result<GroupElement> {
        let m = self.modulus();
        let table = self.coset_table()?;
        let idx = table
            .iter()
            .position(|&c| c == i.0 % m.p)
            .expect("labeling is surjective");
        m.from_index(idx)
    }

    /// Flat indices of H_i, ascending.
    pub fn coset_indices(&self, i: CosetIndex) -> Result<Vec<usize>> {
        let table = self.coset_table()?;
        Ok(table
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == i.0)
            .map(|(x, _)| x)
            .collect())
    }
}

fn lex_smallest_outside(members: &[GroupElement], m: Modulus) -> GroupElement {
    let mut best: Option<GroupElement> = None;
    for e in m.elements() {
        if members.contains(&e) {
            continue;
        }
        if best.as_ref().is_none_or(|b| e.coords < b.coords) {
            best = Some(e);
        }
    }
    best.expect("a proper subgroup misses some element")
}

/// The p + 1 order-p subgroups of Z_p^2, ordered by their normalized
/// generators (0,1), (1,0), (1,1), ..., (1,p-1).
pub fn all_subgroups(m: Modulus) -> Result<Vec<Subgroup>> {
    m.require_rank(2)?;
    let mut gens = vec![m.element(&[0, 1])?];
    for k in 0..m.p {
        gens.push(m.element(&[1, k])?);
    }
    gens.iter().map(Subgroup::new).collect()
}

/// Multiplicative inverse of a nonzero residue modulo a prime.
pub fn inverse_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    pow_mod(a % p, p - 2, p)
}

fn pow_mod(mut base: u32, mut exp: u32, p: u32) -> u32 {
    let mut acc: u64 = 1;
    let mut b = base as u64;
    let p64 = p as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p64;
        }
        b = b * b % p64;
        exp >>= 1;
    }
    base = acc as u32;
    base
}
