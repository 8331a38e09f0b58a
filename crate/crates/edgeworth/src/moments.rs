//! Mixed moments μ_α = E Xᵅ and the catalog of product distributions the
//! experiments draw from.
//!
//! Every catalog entry has i.i.d. coordinates, so a mixed moment factorizes
//! into one-dimensional moments, and all of those are rational numbers —
//! which is what lets the conversion pipeline run with zero arithmetic error
//! in exact mode. The catalog covers the regimes the rate experiments need:
//! two symmetric laws with fourth moment on either side of the Gaussian 3
//! (Rademacher 1, uniform 9/5), a tunable symmetric family, the Gaussian
//! control, and one deliberately skewed law whose nonzero third moment
//! violates the vanishing-third-moment hypothesis the corrected rate relies
//! on.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// Highest order the analytic moment rules are defined for.
pub const MAX_ANALYTIC_ORDER: u32 = 5;

/// Dense tensor of mixed moments for 1 ≤ |α| ≤ m.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSet<T>(pub(crate) Tensor<T>);

impl<T: Scalar> MomentSet<T> {
    pub fn from_fn(k: usize, m: u32, f: impl FnMut(&MultiIndex) -> T) -> Result<Self> {
        Tensor::from_fn(k, m, f).map(MomentSet)
    }

    pub fn k(&self) -> usize {
        self.0.k()
    }

    /// Maximum total order stored.
    pub fn order(&self) -> u32 {
        self.0.m()
    }

    pub fn value(&self, alpha: &MultiIndex) -> Result<&T> {
        self.0.get(alpha)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &T)> {
        self.0.iter()
    }

    pub fn to_f64(&self) -> MomentSet<f64> {
        MomentSet(self.0.map(Scalar::to_f64))
    }

    pub fn to_text(&self) -> String {
        self.0.to_text()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Tensor::from_text(text).map(MomentSet)
    }
}

/// One-dimensional coordinate law of a product spec.
#[derive(Debug, Clone, PartialEq)]
pub enum CoordinateLaw {
    /// ±1 with probability 1/2 each; μ₄ = 1.
    Rademacher,
    /// Uniform on [−√3, √3]; μ₄ = 9/5.
    Uniform,
    /// Standard normal control; μ₄ = 3.
    Gaussian,
    /// Symmetric three-point law on {−a, 0, +a} with P(±a) = 1/(2a²), so the
    /// variance is 1 and μ₄ = a². Requires a² ≥ 1 (a² = 1 is Rademacher).
    ThreePoint { a_sq: f64 },
    /// Standardized Bernoulli(1/5): −1/2 w.p. 4/5, +2 w.p. 1/5. Mean 0,
    /// variance 1, and a deliberately nonzero third moment μ₃ = 3/2.
    ShiftedBernoulli,
}

impl CoordinateLaw {
    /// m-th one-dimensional moment, exact. Defined for m ≤ [`MAX_ANALYTIC_ORDER`].
    fn moment_1d<T: Scalar>(&self, m: u32) -> Result<T> {
        if m > MAX_ANALYTIC_ORDER {
            return Err(Error::OrderTooHigh { got: m as usize, max: MAX_ANALYTIC_ORDER as usize });
        }
        let odd = m % 2 == 1;
        Ok(match self {
            CoordinateLaw::Rademacher => {
                if odd { T::zero() } else { T::one() }
            }
            CoordinateLaw::Uniform => {
                // E X^{2j} = 3^j / (2j + 1)
                if odd {
                    T::zero()
                } else {
                    let j = m / 2;
                    T::from_ratio(3i64.pow(j), i64::from(2 * j + 1))
                }
            }
            CoordinateLaw::Gaussian => {
                // E X^{2j} = (2j − 1)!!
                if odd {
                    T::zero()
                } else {
                    let mut acc = 1i64;
                    let mut f = m as i64 - 1;
                    while f > 0 {
                        acc *= f;
                        f -= 2;
                    }
                    T::from_int(acc)
                }
            }
            CoordinateLaw::ThreePoint { a_sq } => {
                // E X^{2j} = (a²)^{j−1}
                if odd {
                    T::zero()
                } else if m == 0 {
                    T::one()
                } else {
                    let a2 = T::from_f64_exact(*a_sq)?;
                    let mut acc = T::one();
                    for _ in 0..(m / 2 - 1) {
                        acc = acc * a2.clone();
                    }
                    acc
                }
            }
            CoordinateLaw::ShiftedBernoulli => {
                // E X^m = (4·(−1/2)^m + 2^m) / 5
                let half = T::from_ratio(-1, 2);
                let two = T::from_int(2);
                let mut hm = T::one();
                let mut tm = T::one();
                for _ in 0..m {
                    hm = hm * half.clone();
                    tm = tm * two.clone();
                }
                (T::from_int(4) * hm + tm) / T::from_int(5)
            }
        })
    }

    /// Finite support with probabilities, if the law is discrete.
    fn support(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            CoordinateLaw::Rademacher => Some(vec![(-1.0, 0.5), (1.0, 0.5)]),
            CoordinateLaw::ThreePoint { a_sq } => {
                let a = a_sq.sqrt();
                let p = 1.0 / (2.0 * a_sq);
                Some(vec![(-a, p), (0.0, 1.0 - 2.0 * p), (a, p)])
            }
            CoordinateLaw::ShiftedBernoulli => Some(vec![(-0.5, 0.8), (2.0, 0.2)]),
            CoordinateLaw::Uniform | CoordinateLaw::Gaussian => None,
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            CoordinateLaw::Rademacher => {
                if rng.random::<bool>() { 1.0 } else { -1.0 }
            }
            CoordinateLaw::Uniform => {
                let s = 3f64.sqrt();
                rng.random_range(-s..s)
            }
            CoordinateLaw::Gaussian => StandardNormal.sample(rng),
            CoordinateLaw::ThreePoint { a_sq } => {
                let p = 1.0 / (2.0 * a_sq);
                let u: f64 = rng.random();
                if u < p {
                    a_sq.sqrt()
                } else if u < 2.0 * p {
                    -a_sq.sqrt()
                } else {
                    0.0
                }
            }
            CoordinateLaw::ShiftedBernoulli => {
                if rng.random::<f64>() < 0.2 { 2.0 } else { -0.5 }
            }
        }
    }
}

/// A k-dimensional product distribution from the catalog: i.i.d. coordinates,
/// standardized (mean zero, identity covariance) by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSpec {
    name: String,
    k: usize,
    law: CoordinateLaw,
}

impl DistributionSpec {
    pub fn rademacher(k: usize) -> Self {
        DistributionSpec { name: "rademacher".into(), k, law: CoordinateLaw::Rademacher }
    }

    pub fn uniform(k: usize) -> Self {
        DistributionSpec { name: "uniform".into(), k, law: CoordinateLaw::Uniform }
    }

    pub fn gaussian(k: usize) -> Self {
        DistributionSpec { name: "gaussian".into(), k, law: CoordinateLaw::Gaussian }
    }

    pub fn three_point(k: usize, a_sq: f64) -> Result<Self> {
        if a_sq < 1.0 || !a_sq.is_finite() {
            return Err(Error::Config(format!(
                "three-point parameter a² must be a finite number ≥ 1, got {a_sq}"
            )));
        }
        Ok(DistributionSpec {
            name: format!("three_point(a²={a_sq})"),
            k,
            law: CoordinateLaw::ThreePoint { a_sq },
        })
    }

    pub fn shifted_bernoulli(k: usize) -> Self {
        DistributionSpec {
            name: "shifted_bernoulli".into(),
            k,
            law: CoordinateLaw::ShiftedBernoulli,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn law(&self) -> &CoordinateLaw {
        &self.law
    }

    /// True when every coordinate has a finite support table.
    pub fn is_discrete(&self) -> bool {
        self.law.support().is_some()
    }

    /// True when all odd coordinate moments vanish (symmetric laws).
    pub fn has_vanishing_odd_moments(&self) -> bool {
        !matches!(self.law, CoordinateLaw::ShiftedBernoulli)
    }

    /// Per-coordinate support with probabilities, for exact enumeration.
    pub fn support_1d(&self) -> Result<Vec<(f64, f64)>> {
        self.law.support().ok_or_else(|| Error::NotDiscrete(self.name.clone()))
    }

    /// Mixed moments to total order m ≤ 5, exact: μ_α = Π E X^{αᵢ}.
    pub fn analytic_moments<T: Scalar>(&self, m: u32) -> Result<MomentSet<T>> {
        let law = &self.law;
        Tensor::try_from_fn(self.k, m, |alpha| {
            let mut acc = T::one();
            for &a in alpha.exponents() {
                acc = acc * law.moment_1d::<T>(a)?;
            }
            Ok(acc)
        })
        .map(MomentSet)
    }

    /// One draw of the k-vector.
    pub fn sample_vector<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.k);
        for v in out.iter_mut() {
            *v = self.law.sample(rng);
        }
    }
}

/// Serializable selector for a catalog entry, used by experiment configs and
/// the CLI (`rademacher`, `uniform`, `gaussian`, `shifted_bernoulli`,
/// `three_point:<a²>`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum SpecConfig {
    Rademacher,
    Uniform,
    Gaussian,
    ThreePoint { a_sq: f64 },
    ShiftedBernoulli,
}

impl SpecConfig {
    pub fn build(&self, k: usize) -> Result<DistributionSpec> {
        Ok(match self {
            SpecConfig::Rademacher => DistributionSpec::rademacher(k),
            SpecConfig::Uniform => DistributionSpec::uniform(k),
            SpecConfig::Gaussian => DistributionSpec::gaussian(k),
            SpecConfig::ThreePoint { a_sq } => DistributionSpec::three_point(k, *a_sq)?,
            SpecConfig::ShiftedBernoulli => DistributionSpec::shifted_bernoulli(k),
        })
    }
}

impl std::str::FromStr for SpecConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(arg) = s.strip_prefix("three_point:") {
            let a_sq: f64 = arg
                .parse()
                .map_err(|e| Error::Config(format!("bad three_point parameter '{arg}': {e}")))?;
            return Ok(SpecConfig::ThreePoint { a_sq });
        }
        match s {
            "rademacher" => Ok(SpecConfig::Rademacher),
            "uniform" => Ok(SpecConfig::Uniform),
            "gaussian" => Ok(SpecConfig::Gaussian),
            "shifted_bernoulli" => Ok(SpecConfig::ShiftedBernoulli),
            _ => Err(Error::Config(format!(
                "unknown distribution '{s}' (expected rademacher, uniform, gaussian, \
                 shifted_bernoulli, or three_point:<a²>)"
            ))),
        }
    }
}

/// Sample mixed moments of a cloud of k-vectors, dense to order m.
pub fn empirical_moments(samples: &[Vec<f64>], m: u32) -> Result<MomentSet<f64>> {
    let first = samples.first().ok_or(Error::EmptySamples)?;
    let k = first.len();
    if k == 0 {
        return Err(Error::EmptyIndex);
    }
    let n = samples.len() as f64;
    Tensor::try_from_fn(k, m, |alpha| {
        let mut acc = 0.0;
        for s in samples {
            acc += alpha.monomial(s.as_slice())?;
        }
        Ok(acc / n)
    })
    .map(MomentSet)
}

/// Per-condition outcome of the standardization check: mean zero, identity
/// covariance, vanishing third moments.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardizedReport {
    pub tol: f64,
    /// max |μ_α| over |α| = 1
    pub mean_violation: f64,
    /// max |μ_α − δ_α| over |α| = 2 (δ = 1 on pure squares, 0 on mixed)
    pub covariance_violation: f64,
    /// max |μ_α| over |α| = 3
    pub third_violation: f64,
}

impl StandardizedReport {
    pub fn is_standardized(&self) -> bool {
        self.mean_violation <= self.tol
            && self.covariance_violation <= self.tol
            && self.third_violation <= self.tol
    }

    pub fn worst(&self) -> f64 {
        self.mean_violation.max(self.covariance_violation).max(self.third_violation)
    }
}

/// Checks the hypotheses the corrected expansion's rate argument needs:
/// EX = 0, EXXᵀ = I, and all third moments zero. Requires order ≥ 3.
pub fn check_standardized<T: Scalar>(ms: &MomentSet<T>, tol: f64) -> Result<StandardizedReport> {
    if ms.order() < 3 {
        return Err(Error::InsufficientOrder { needed: 3, have: ms.order() as usize });
    }
    let mut rep = StandardizedReport {
        tol,
        mean_violation: 0.0,
        covariance_violation: 0.0,
        third_violation: 0.0,
    };
    for (alpha, v) in ms.iter() {
        let v = v.to_f64();
        match alpha.degree() {
            1 => rep.mean_violation = rep.mean_violation.max(v.abs()),
            2 => {
                let is_square = alpha.exponents().contains(&2);
                let target = if is_square { 1.0 } else { 0.0 };
                rep.covariance_violation = rep.covariance_violation.max((v - target).abs());
            }
            3 => rep.third_violation = rep.third_violation.max(v.abs()),
            _ => {}
        }
    }
    Ok(rep)
}
