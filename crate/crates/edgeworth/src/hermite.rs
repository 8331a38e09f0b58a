//! Probabilists' Hermite polynomials and Gaussian derivative tensors.
//!
//! # Background
//!
//! Every correction term this crate produces is a constant times a partial
//! derivative of the standard Gaussian density φ, and those derivatives have
//! the closed form
//!
//! ```text
//! ∂ᵅφ(x) = (−1)^|α| · Π He_{αᵢ}(xᵢ) · φ(x),
//! ```
//!
//! where He_n is the probabilists' (monic) Hermite polynomial: He₀ = 1,
//! He₁ = x, He_{n+1} = x·He_n − n·He_{n−1}. The coefficients are exact
//! integers, so the tables here are computed once in integer arithmetic and
//! evaluated by Horner's rule in whatever scalar type the caller is using —
//! the exact-rational test pipeline evaluates the same tables as the `f64`
//! production path.
//!
//! One-dimensional antiderivatives are what make box probabilities exact:
//! ∫ₐᵇ φ₁⁽ⁿ⁾ = φ₁⁽ⁿ⁻¹⁾(b) − φ₁⁽ⁿ⁻¹⁾(a) for n ≥ 1 (the integrand is a perfect
//! derivative), and Φ(b) − Φ(a) for n = 0. Φ itself is evaluated through the
//! complementary error function from `libm` (the FreeBSD/Sun rational
//! approximation, absolute error well under 1e-14), as Φ(x) = erfc(−x/√2)/2 —
//! the erfc form keeps the lower tail accurate where 1 − erf(·)/2 would
//! cancel catastrophically.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::scalar::Scalar;

/// Highest Hermite degree the cached table carries. Expansion orders s ≤ 4
/// need derivatives up to |α| = 8 per coordinate at most; 12 leaves headroom.
pub const MAX_HERMITE: usize = 12;

/// One probabilists' Hermite polynomial with exact integer coefficients,
/// stored in ascending powers (`coeffs[i]` multiplies xⁱ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitePoly {
    degree: usize,
    coeffs: Vec<i64>,
}

impl HermitePoly {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Horner evaluation in any scalar type.
    pub fn eval<T: Scalar>(&self, x: &T) -> T {
        let mut acc = T::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + T::from_int(c);
        }
        acc
    }
}

fn build_table() -> Vec<HermitePoly> {
    let mut table: Vec<HermitePoly> = Vec::with_capacity(MAX_HERMITE + 1);
    table.push(HermitePoly { degree: 0, coeffs: vec![1] });
    table.push(HermitePoly { degree: 1, coeffs: vec![0, 1] });
    for n in 1..MAX_HERMITE {
        // He_{n+1} = x·He_n − n·He_{n−1}, on coefficient vectors.
        let prev = &table[n - 1].coeffs;
        let cur = &table[n].coeffs;
        let mut next = vec![0i64; n + 2];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= n as i64 * c;
        }
        table.push(HermitePoly { degree: n + 1, coeffs: next });
    }
    table
}

/// The cached table entry for He_n; n ≤ [`MAX_HERMITE`].
pub fn hermite(n: usize) -> Result<&'static HermitePoly> {
    static TABLE: OnceLock<Vec<HermitePoly>> = OnceLock::new();
    let table = TABLE.get_or_init(build_table);
    table.get(n).ok_or(Error::OrderTooHigh { got: n, max: MAX_HERMITE })
}

/// Standard normal density in one dimension.
pub fn phi_1d(x: f64) -> f64 {
    (-x * x / 2.0).exp() / (2.0 * PI).sqrt()
}

/// Standard normal distribution function Φ, absolute error < 1e-14 across the
/// whole line (see module docs for why the erfc form).
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// k-dimensional standard Gaussian density φ(x) = (2π)^{−k/2} e^{−|x|²/2}.
pub fn standard_normal_density(x: &[f64]) -> f64 {
    let q: f64 = x.iter().map(|v| v * v).sum();
    (-q / 2.0).exp() / (2.0 * PI).powf(x.len() as f64 / 2.0)
}

/// n-th derivative of the one-dimensional density: φ₁⁽ⁿ⁾(x) = (−1)ⁿ He_n(x) φ₁(x).
pub fn phi_deriv_1d(n: usize, x: f64) -> Result<f64> {
    if x.is_infinite() {
        return Ok(0.0);
    }
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * hermite(n)?.eval(&x) * phi_1d(x))
}

/// Π He_{αᵢ}(xᵢ) — the polynomial factor of a Gaussian derivative tensor,
/// without the sign and without φ. This is the piece the exact-rational
/// equivalence tests compare.
pub fn hermite_product<T: Scalar>(alpha: &MultiIndex, x: &[T]) -> Result<T> {
    if x.len() != alpha.len() {
        return Err(Error::DimensionMismatch { expected: alpha.len(), got: x.len() });
    }
    let mut acc = T::one();
    for (xi, &a) in x.iter().zip(alpha.exponents()) {
        acc = acc * hermite(a as usize)?.eval(xi);
    }
    Ok(acc)
}

/// Mixed partial ∂ᵅφ at x, via the Hermite product form.
pub fn gaussian_derivative(alpha: &MultiIndex, x: &[f64]) -> Result<f64> {
    let sign = if alpha.degree().is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * hermite_product(alpha, x)? * standard_normal_density(x))
}

/// ∫ₐᵇ φ₁⁽ⁿ⁾(t) dt with −∞ ≤ a ≤ b ≤ +∞.
///
/// For n = 0 this is Φ(b) − Φ(a); for n ≥ 1 the integrand is the exact
/// derivative of φ₁⁽ⁿ⁻¹⁾, which vanishes at ±∞, so no quadrature is involved
/// anywhere in a box probability.
pub fn gaussian_partial_integral(n: usize, a: f64, b: f64) -> Result<f64> {
    if a.is_nan() || b.is_nan() {
        return Err(Error::Numeric("NaN integration bound".into()));
    }
    if a > b {
        return Err(Error::InvalidSet(format!("lower bound {a} exceeds upper bound {b}")));
    }
    if n == 0 {
        let hi = if b == f64::INFINITY { 1.0 } else { normal_cdf(b) };
        let lo = if a == f64::NEG_INFINITY { 0.0 } else { normal_cdf(a) };
        Ok(hi - lo)
    } else {
        Ok(phi_deriv_1d(n - 1, b)? - phi_deriv_1d(n - 1, a)?)
    }
}
