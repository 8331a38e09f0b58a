//! Multi-indices α = (α₁, …, α_k) over k coordinates.
//!
//! A multi-index addresses one mixed moment/cumulant/derivative pattern: |α| =
//! Σαᵢ is its total order, α! = Παᵢ! its factorial, and tᵅ = Πtᵢ^αᵢ the
//! monomial it labels. Everything downstream (moment tensors, frequency
//! polynomials, Gaussian derivative tensors) is keyed by this type.
//!
//! The canonical order — ascending total degree, lexicographically
//! *descending* within a degree — is fixed here once, as the `Ord` impl, so
//! that containers iterate and files serialize identically everywhere. For
//! k = 2, degree 3 that reads: (3,0), (2,1), (1,2), (0,3).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::EmptyIndex);
        }
        Ok(MultiIndex(exponents))
    }

    /// Panicking constructor for literals; use `new` on untrusted input.
    pub fn from_slice(exponents: &[u32]) -> Self {
        Self::new(exponents.to_vec()).expect("multi-index literal must be non-empty")
    }

    /// The pure power `d·e_i` in `k` coordinates.
    pub fn axis(k: usize, i: usize, d: u32) -> Self {
        let mut e = vec![0; k];
        e[i] = d;
        MultiIndex(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // guaranteed non-empty by construction
    }

    /// Total order |α| = Σ αᵢ.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// α! = Π αᵢ!, exactly. Overflow is reported, not wrapped: the result must
    /// stay a faithful integer because it lands in exact-rational denominators.
    pub fn factorial(&self) -> Result<u64> {
        let mut acc: u64 = 1;
        for &a in &self.0 {
            for f in 2..=u64::from(a) {
                acc = acc.checked_mul(f).ok_or(Error::FactorialOverflow)?;
            }
        }
        Ok(acc)
    }

    /// tᵅ = Π tᵢ^αᵢ. Empty products are 1.
    pub fn monomial<T: Scalar>(&self, t: &[T]) -> Result<T> {
        if t.len() != self.0.len() {
            return Err(Error::DimensionMismatch {
                expected: self.0.len(),
                got: t.len(),
            });
        }
        let mut acc = T::one();
        for (ti, &a) in t.iter().zip(&self.0) {
            for _ in 0..a {
                acc = acc * ti.clone();
            }
        }
        Ok(acc)
    }

    /// Component-wise sum α + β (the index of a product monomial).
    pub fn sum(&self, other: &MultiIndex) -> Result<MultiIndex> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0)) // lexicographically descending
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    /// Text form `a1,a2,...,ak` — the on-disk format for file records.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for a in &self.0 {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let exps: std::result::Result<Vec<u32>, _> =
            s.split(',').map(|p| p.trim().parse::<u32>()).collect();
        match exps {
            Ok(v) if !v.is_empty() => MultiIndex::new(v),
            _ => Err(Error::Parse(format!("bad multi-index '{s}'"))),
        }
    }
}

/// All multi-indices with k components and total degree exactly d, in the
/// canonical (lexicographically descending) order.
pub fn enumerate_degree(k: usize, d: u32) -> Vec<MultiIndex> {
    assert!(k >= 1, "need at least one coordinate");
    let mut out = Vec::new();
    let mut cur = vec![0u32; k];
    fill(&mut out, &mut cur, 0, d);
    out
}

fn fill(out: &mut Vec<MultiIndex>, cur: &mut Vec<u32>, pos: usize, rest: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = rest;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for a in (0..=rest).rev() {
        cur[pos] = a;
        fill(out, cur, pos + 1, rest - a);
    }
}

/// All multi-indices with 1 ≤ |α| ≤ m, in the canonical order (degree-major).
pub fn enumerate_up_to(k: usize, m: u32) -> Vec<MultiIndex> {
    (1..=m).flat_map(|d| enumerate_degree(k, d)).collect()
}
