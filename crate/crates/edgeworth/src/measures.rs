//! Measures of convex regions: exact Gaussian measures of boxes, balls and
//! half-spaces, and corrected-expansion measures of boxes (closed form) or
//! arbitrary regions (importance-sampled Monte Carlo).
//!
//! Box measures of a corrected expansion are exact up to rounding: each term
//! c_ν·H_ν(x)·φ(x) integrates over a rectangle to a product of
//! one-dimensional Gaussian partial integrals,
//!
//! ```text
//! ∫_B H_ν φ = (−1)^{|ν|} · Π_i [φ^{(ν_i−1)}]_{lo_i}^{hi_i},
//! ```
//!
//! so no quadrature is involved. Ball measures of the Gaussian itself reduce
//! to a one-dimensional radial integral against a noncentral slice,
//! integrated adaptively; expansion measures of non-box regions fall back to
//! Monte Carlo with the correction ratio as an importance weight.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::expansion::EdgeworthExpansion;
use crate::hermite::{gaussian_partial_integral, normal_cdf, phi_1d};

/// A convex region of ℝᵏ: an axis-aligned box (possibly unbounded), a
/// Euclidean ball, or a half-space {x : ⟨u, x⟩ ≤ c}.
///
/// The text form is `box lo1,…,lok hi1,…,hik` (with `inf`/`-inf` for
/// unbounded edges), `ball c1,…,ck r`, or `halfspace u1,…,uk c`.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexSetSpec {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    HalfSpace { normal: Vec<f64>, offset: f64 },
}

impl ConvexSetSpec {
    pub fn k(&self) -> usize {
        match self {
            ConvexSetSpec::Box { lo, .. } => lo.len(),
            ConvexSetSpec::Ball { center, .. } => center.len(),
            ConvexSetSpec::HalfSpace { normal, .. } => normal.len(),
        }
    }

    /// Checks internal consistency: matching dimensions, ordered finite-or-
    /// infinite box edges, positive radius, nonzero normal, no NaN anywhere.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSet(msg));
        match self {
            ConvexSetSpec::Box { lo, hi } => {
                if lo.is_empty() || lo.len() != hi.len() {
                    return bad(format!(
                        "box needs matching non-empty corner lists, got {} and {}",
                        lo.len(),
                        hi.len()
                    ));
                }
                for (i, (a, b)) in lo.iter().zip(hi).enumerate() {
                    if a.is_nan() || b.is_nan() {
                        return bad(format!("box corner {i} is NaN"));
                    }
                    if a > b {
                        return bad(format!("box has lo > hi at coordinate {i}: {a} > {b}"));
                    }
                }
            }
            ConvexSetSpec::Ball { center, radius } => {
                if center.is_empty() {
                    return bad("ball needs a non-empty center".into());
                }
                if center.iter().any(|c| !c.is_finite()) {
                    return bad("ball center must be finite".into());
                }
                if !(radius.is_finite() && *radius > 0.0) {
                    return bad(format!("ball radius must be finite and positive, got {radius}"));
                }
            }
            ConvexSetSpec::HalfSpace { normal, offset } => {
                if normal.is_empty() {
                    return bad("half-space needs a non-empty normal".into());
                }
                if normal.iter().any(|c| !c.is_finite()) {
                    return bad("half-space normal must be finite".into());
                }
                if normal.iter().all(|c| *c == 0.0) {
                    return bad("half-space normal must be nonzero".into());
                }
                if !offset.is_finite() {
                    return bad(format!("half-space offset must be finite, got {offset}"));
                }
            }
        }
        Ok(())
    }

    /// Closed-set membership.
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            ConvexSetSpec::Box { lo, hi } => {
                x.len() == lo.len()
                    && x.iter().zip(lo).all(|(v, a)| v >= a)
                    && x.iter().zip(hi).all(|(v, b)| v <= b)
            }
            ConvexSetSpec::Ball { center, radius } => {
                x.len() == center.len() && {
                    let d2: f64 = x.iter().zip(center).map(|(v, c)| (v - c) * (v - c)).sum();
                    d2 <= radius * radius
                }
            }
            ConvexSetSpec::HalfSpace { normal, offset } => {
                x.len() == normal.len() && {
                    let dot: f64 = x.iter().zip(normal).map(|(v, u)| v * u).sum();
                    dot <= *offset
                }
            }
        }
    }
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            match tok {
                "inf" | "+inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                _ => tok
                    .parse::<f64>()
                    .ok()
                    .filter(|v| !v.is_nan())
                    .ok_or_else(|| Error::Parse(format!("bad number {tok:?} in set description"))),
            }
        })
        .collect()
}

fn fmt_f64_list(vals: &[f64]) -> String {
    vals.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl std::str::FromStr for ConvexSetSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        let set = match parts.as_slice() {
            ["box", lo, hi] => ConvexSetSpec::Box { lo: parse_f64_list(lo)?, hi: parse_f64_list(hi)? },
            ["ball", center, r] => ConvexSetSpec::Ball {
                center: parse_f64_list(center)?,
                radius: r
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad ball radius {r:?}")))?,
            },
            ["halfspace", normal, c] => ConvexSetSpec::HalfSpace {
                normal: parse_f64_list(normal)?,
                offset: c
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad half-space offset {c:?}")))?,
            },
            _ => {
                return Err(Error::Parse(format!(
                    "expected \"box <lo> <hi>\", \"ball <center> <r>\" or \
                     \"halfspace <normal> <c>\", got {s:?}"
                )))
            }
        };
        set.validate()?;
        Ok(set)
    }
}

impl std::fmt::Display for ConvexSetSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConvexSetSpec::Box { lo, hi } => {
                write!(f, "box {} {}", fmt_f64_list(lo), fmt_f64_list(hi))
            }
            ConvexSetSpec::Ball { center, radius } => {
                write!(f, "ball {} {}", fmt_f64_list(center), radius)
            }
            ConvexSetSpec::HalfSpace { normal, offset } => {
                write!(f, "halfspace {} {}", fmt_f64_list(normal), offset)
            }
        }
    }
}

/// Cumulative chi-square distribution with integer degrees of freedom,
/// by downward recursion from the one- and two-degree closed forms:
/// F_{d+2}(y) = F_d(y) − (y/2)^{d/2} e^{−y/2} / Γ(d/2 + 1).
fn chi_square_cdf(dof: u32, y: f64) -> f64 {
    assert!(dof >= 1);
    if y <= 0.0 {
        return 0.0;
    }
    let (mut d, mut f, mut u) = if dof % 2 == 1 {
        // F₁(y) = 2Φ(√y) − 1,  u₁ = √(2y/π)·e^{−y/2}
        (
            1,
            2.0 * normal_cdf(y.sqrt()) - 1.0,
            (2.0 * y / std::f64::consts::PI).sqrt() * (-y / 2.0).exp(),
        )
    } else {
        // F₂(y) = 1 − e^{−y/2},  u₂ = (y/2)·e^{−y/2}
        (2, 1.0 - (-y / 2.0).exp(), y / 2.0 * (-y / 2.0).exp())
    };
    while d < dof {
        f -= u;
        u *= y / f64::from(d + 2);
        d += 2;
    }
    f.clamp(0.0, 1.0)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    adaptive_simpson(&f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Standard Gaussian measure of the region, exact for boxes and half-spaces
/// and by adaptive radial integration (absolute accuracy ≈ 1e−12) for balls.
pub fn gaussian_measure(set: &ConvexSetSpec) -> Result<f64> {
    set.validate()?;
    match set {
        ConvexSetSpec::Box { lo, hi } => {
            let mut p = 1.0;
            for (a, b) in lo.iter().zip(hi) {
                p *= gaussian_partial_integral(0, *a, *b)?;
            }
            Ok(p)
        }
        ConvexSetSpec::HalfSpace { normal, offset } => {
            let norm = normal.iter().map(|u| u * u).sum::<f64>().sqrt();
            Ok(normal_cdf(offset / norm))
        }
        ConvexSetSpec::Ball { center, radius } => {
            let delta = center.iter().map(|c| c * c).sum::<f64>().sqrt();
            let r = *radius;
            let k = center.len();
            if k == 1 {
                return Ok(normal_cdf(delta + r) - normal_cdf(delta - r));
            }
            let dof = (k - 1) as u32;
            // Rotate the center onto the first axis and condition on that
            // coordinate: the rest contributes a chi-square factor.
            let f = |t: f64| {
                let slack = r * r - (t - delta) * (t - delta);
                phi_1d(t) * chi_square_cdf(dof, slack)
            };
            // φ is negligible outside ±10 at the 1e−12 scale.
            let a = (delta - r).max(-10.0);
            let b = (delta + r).min(10.0);
            Ok(integrate(f, a, b, 1e-13).clamp(0.0, 1.0))
        }
    }
}

/// Measure of an axis-aligned box under the corrected expansion, by the
/// closed product formula — no quadrature, no sampling.
pub fn expansion_measure_box(exp: &EdgeworthExpansion, lo: &[f64], hi: &[f64]) -> Result<f64> {
    let set = ConvexSetSpec::Box { lo: lo.to_vec(), hi: hi.to_vec() };
    set.validate()?;
    if lo.len() != exp.k() {
        return Err(Error::DimensionMismatch { expected: exp.k(), got: lo.len() });
    }
    let mut total = 1.0;
    for (a, b) in lo.iter().zip(hi) {
        total *= gaussian_partial_integral(0, *a, *b)?;
    }
    let mut correction = 0.0;
    for r in 1..=exp.order() {
        let q = exp.factor(r).expect("factor present for r <= order");
        for (nu, c) in q.coefficients() {
            let sign = if nu.degree() % 2 == 0 { 1.0 } else { -1.0 };
            let mut prod = 1.0;
            for ((n, a), b) in nu.exponents().iter().zip(lo).zip(hi) {
                prod *= gaussian_partial_integral(*n as usize, *a, *b)?;
                if prod == 0.0 {
                    break;
                }
            }
            correction += c * sign * prod;
        }
    }
    Ok(total + exp.sign().factor() * correction)
}

/// Monte Carlo measure of an arbitrary region under the corrected expansion:
/// draws standard normal points and averages 1_B(Z)·(correction ratio),
/// which estimates the signed measure with φ as the importance density.
/// Returns the estimate and its standard error.
pub fn expansion_measure_mc(
    exp: &EdgeworthExpansion,
    set: &ConvexSetSpec,
    samples: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    set.validate()?;
    if set.k() != exp.k() {
        return Err(Error::DimensionMismatch { expected: exp.k(), got: set.k() });
    }
    if samples < 1000 {
        return Err(Error::Config(format!(
            "Monte Carlo measure needs at least 1000 samples, got {samples}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = exp.k();
    let mut z = vec![0.0f64; k];
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        for zi in z.iter_mut() {
            *zi = StandardNormal.sample(&mut rng);
        }
        let w = if set.contains(&z) { exp.correction_ratio(&z)? } else { 0.0 };
        sum += w;
        sum_sq += w * w;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok((mean, (var / n).sqrt()))
}
