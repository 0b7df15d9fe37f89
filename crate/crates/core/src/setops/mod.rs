//! Subsets of Z_p^r as bit vectors, and the sumset operations on them.

mod affine;
mod io;
mod kernel;

use std::cmp::Ordering;
use std::fmt;

pub use affine::{affine_group, canonical_form, linear_group, AffineMap};
pub use io::{parse_index_list, read_set_file};

use crate::error::{Error, Result};
use crate::group::{GroupElement, Modulus};

/// A subset of Z_p^r. Bit `i` of the vector is the element with flat index `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    modulus: Modulus,
    words: Vec<u64>,
    len: usize,
}

impl PointSet {
    pub fn empty(modulus: Modulus) -> Self {
        PointSet {
            modulus,
            words: vec![0; modulus.order().div_ceil(64)],
            len: 0,
        }
    }

    pub fn full(modulus: Modulus) -> Self {
        let mut s = Self::empty(modulus);
        for i in 0..modulus.order() {
            s.insert(i);
        }
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(
        modulus: Modulus,
        indices: I,
    ) -> Result<Self> {
        let mut s = Self::empty(modulus);
        for i in indices {
            if i >= modulus.order() {
                return Err(Error::usage(format!(
                    "index {i} out of range for {modulus} (order {})",
                    modulus.order()
                )));
            }
            s.insert(i);
        }
        Ok(s)
    }

    pub fn from_elements<'a, I: IntoIterator<Item = &'a GroupElement>>(
        modulus: Modulus,
        elements: I,
    ) -> Result<Self> {
        let mut s = Self::empty(modulus);
        for e in elements {
            modulus.ensure_same(&e.modulus())?;
            s.insert(e.index());
        }
        Ok(s)
    }

    /// Builds a set from a packed mask; only valid for orders up to 128.
    pub fn from_mask(modulus: Modulus, mask: u128) -> Self {
        debug_assert!(modulus.order() <= 128);
        let mut s = Self::empty(modulus);
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            s.insert(i);
            m &= m - 1;
        }
        s
    }

    /// Packed mask of a set over a group of order at most 128.
    pub fn to_mask(&self) -> Option<u128> {
        if self.modulus.order() > 128 {
            return None;
        }
        let lo = self.words.first().copied().unwrap_or(0) as u128;
        let hi = self.words.get(1).copied().unwrap_or(0) as u128;
        Some(lo | (hi << 64))
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains_index(&self, i: usize) -> bool {
        i < self.modulus.order() && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        e.modulus() == self.modulus && self.contains_index(e.index())
    }

    /// Returns true when the index was newly added.
    pub fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        let fresh = self.words[w] >> b & 1 == 0;
        self.words[w] |= 1 << b;
        self.len += fresh as usize;
        fresh
    }

    pub fn remove(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        let present = self.words[w] >> b & 1 == 1;
        self.words[w] &= !(1 << b);
        self.len -= present as usize;
        present
    }

    /// Flat indices in ascending order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.indices()
            .map(|i| self.modulus.from_index(i).expect("stored index in range"))
    }

    fn zip_words(&self, other: &PointSet, f: impl Fn(u64, u64) -> u64) -> Result<PointSet> {
        self.modulus.ensure_same(&other.modulus)?;
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| f(a, b))
            .collect();
        let len = words.iter().map(|w| w.count_ones() as usize).sum();
        Ok(PointSet {
            modulus: self.modulus,
            words,
            len,
        })
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &PointSet) -> Result<PointSet> {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &PointSet) -> Result<PointSet> {
        self.zip_words(other, |a, b| a & !b)
    }

    /// Order on sets of the same modulus: compare ascending index lists
    /// lexicographically, with a proper prefix sorting first.
    pub fn lex_cmp(&self, other: &PointSet) -> Ordering {
        let mut a = self.indices();
        let mut b = other.indices();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) if x != y => return x.cmp(&y),
                _ => {}
            }
        }
    }

    /// Text form: a `p r` header line, then one flat index per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.modulus.p(), self.modulus.r());
        for i in self.indices() {
            out.push_str(&i.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        io::parse_text(text)
    }

    /// Raw little-endian bit vector of `ceil(p^r / 8)` bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let nbytes = self.modulus.order().div_ceil(8);
        self.words
            .iter()
            .flat_map(|w| w.to_le_bytes())
            .take(nbytes)
            .collect()
    }

    pub fn from_bytes(modulus: Modulus, bytes: &[u8]) -> Result<Self> {
        io::parse_bytes(modulus, bytes)
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.modulus)?;
        f.debug_set().entries(self.indices()).finish()
    }
}

/// A + B.
pub fn sumset(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    a.modulus.ensure_same(&b.modulus)?;
    Ok(kernel::sum(a, b, false))
}

/// A +^ B: sums a + b with a != b.
pub fn restricted_sumset(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    a.modulus.ensure_same(&b.modulus)?;
    Ok(kernel::sum(a, b, true))
}

/// 2^A = A +^ A.
pub fn double_restricted(a: &PointSet) -> PointSet {
    kernel::sum(a, a, true)
}

/// A + g.
pub fn translate(a: &PointSet, g: &GroupElement) -> Result<PointSet> {
    a.modulus.ensure_same(&g.modulus())?;
    let gi = g.index();
    let m = a.modulus;
    PointSet::from_indices(m, a.indices().map(|i| m.add_index(i, gi)))
}

pub fn apply_affine(a: &PointSet, t: &AffineMap) -> Result<PointSet> {
    a.modulus.ensure_same(&t.modulus())?;
    PointSet::from_indices(a.modulus, a.indices().map(|i| t.apply_index(i)))
}
