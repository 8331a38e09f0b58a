//! Shared dense storage for moment and cumulant tensors: one scalar per
//! multi-index with 1 ≤ |α| ≤ m, iterated in the canonical order. The text
//! format lives here too so moment and cumulant files stay line-compatible:
//!
//! ```text
//! # k=2 m=4 mode=exact
//! 1,0;0
//! 0,1;0
//! 2,0;1
//! ...
//! ```

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::multiindex::{enumerate_up_to, MultiIndex};
use crate::scalar::{ArithmeticMode, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Tensor<T> {
    k: usize,
    m: u32,
    vals: BTreeMap<MultiIndex, T>,
}

impl<T: Scalar> Tensor<T> {
    pub fn from_fn(k: usize, m: u32, mut f: impl FnMut(&MultiIndex) -> T) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyIndex);
        }
        if m == 0 {
            return Err(Error::ZeroOrder);
        }
        let mut vals = BTreeMap::new();
        for alpha in enumerate_up_to(k, m) {
            let v = f(&alpha);
            vals.insert(alpha, v);
        }
        Ok(Tensor { k, m, vals })
    }

    pub fn try_from_fn(
        k: usize,
        m: u32,
        mut f: impl FnMut(&MultiIndex) -> Result<T>,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyIndex);
        }
        if m == 0 {
            return Err(Error::ZeroOrder);
        }
        let mut vals = BTreeMap::new();
        for alpha in enumerate_up_to(k, m) {
            let v = f(&alpha)?;
            vals.insert(alpha, v);
        }
        Ok(Tensor { k, m, vals })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn get(&self, alpha: &MultiIndex) -> Result<&T> {
        if alpha.len() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, got: alpha.len() });
        }
        let d = alpha.degree();
        if d == 0 || d > self.m {
            return Err(Error::InsufficientOrder { needed: d as usize, have: self.m as usize });
        }
        Ok(self.vals.get(alpha).expect("dense tensor is complete by construction"))
    }

    /// Canonical-order iteration (degree-major, descending lexicographic).
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &T)> {
        self.vals.iter()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Tensor<U> {
        Tensor {
            k: self.k,
            m: self.m,
            vals: self.vals.iter().map(|(a, v)| (a.clone(), f(v))).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# k={} m={} mode={}\n", self.k, self.m, T::MODE.name());
        for (alpha, v) in &self.vals {
            s.push_str(&format!("{alpha};{}\n", v.encode()));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty tensor file".into()))?;
        let (k, m, mode) = parse_header(header)?;
        if mode != T::MODE {
            return Err(Error::Parse(format!(
                "file is in {} mode but {} mode was requested",
                mode.name(),
                T::MODE.name()
            )));
        }
        let mut vals = BTreeMap::new();
        for line in lines {
            let (idx, val) = line
                .split_once(';')
                .ok_or_else(|| Error::Parse(format!("missing ';' in record '{line}'")))?;
            let alpha: MultiIndex = idx.parse()?;
            if alpha.len() != k {
                return Err(Error::Parse(format!(
                    "index '{alpha}' has {} components, header says k={k}",
                    alpha.len()
                )));
            }
            let d = alpha.degree();
            if d == 0 || d > m {
                return Err(Error::Parse(format!(
                    "index '{alpha}' of degree {d} is outside 1..={m}"
                )));
            }
            if vals.insert(alpha.clone(), T::decode(val)?).is_some() {
                return Err(Error::Parse(format!("duplicate record for '{alpha}'")));
            }
        }
        let expected = enumerate_up_to(k, m);
        if vals.len() != expected.len() {
            let missing = expected
                .iter()
                .find(|a| !vals.contains_key(*a))
                .map(|a| a.to_string())
                .unwrap_or_default();
            return Err(Error::Parse(format!(
                "incomplete tensor: {} of {} records (first missing: {missing})",
                vals.len(),
                expected.len()
            )));
        }
        Ok(Tensor { k, m, vals })
    }
}

fn parse_header(line: &str) -> Result<(usize, u32, ArithmeticMode)> {
    let bad = || Error::Parse(format!("bad header '{line}' (want '# k=<k> m=<m> mode=<mode>')"));
    let body = line.strip_prefix('#').ok_or_else(bad)?;
    let mut k = None;
    let mut m = None;
    let mut mode = None;
    for field in body.split_whitespace() {
        match field.split_once('=') {
            Some(("k", v)) => k = v.parse::<usize>().ok(),
            Some(("m", v)) => m = v.parse::<u32>().ok(),
            Some(("mode", "exact")) => mode = Some(ArithmeticMode::Exact),
            Some(("mode", "float")) => mode = Some(ArithmeticMode::Float),
            _ => return Err(bad()),
        }
    }
    match (k, m, mode) {
        (Some(k), Some(m), Some(mode)) if k >= 1 && m >= 1 => Ok((k, m, mode)),
        _ => Err(bad()),
    }
}
