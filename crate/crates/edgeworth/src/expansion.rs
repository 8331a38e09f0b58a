//! Edgeworth correction polynomials and corrected densities.
//!
//! The corrected density of order s multiplies the standard normal density by
//! a polynomial factor built from the cumulants of the (already weighted)
//! sum:
//!
//! ```text
//! density(x) = φ(x) · [ 1 ± (Q₁(x) + Q₂(x) + … + Q_s(x)) ]
//! ```
//!
//! Each correction polynomial Q_r collects every way of multiplying together
//! cumulant tensors whose orders exceed two by a total of r. Concretely,
//! writing S_i(x) = Σ_{|ν| = i+2} κ_ν H_ν(x)/ν! for the order-(i+2) cumulant
//! layer (H_ν is the product of probabilists' Hermite polynomials
//! He_{ν₁}(x₁)⋯He_{ν_k}(x_k)),
//!
//! ```text
//! Q_r = Σ_{m=1}^{r} (1/m!) Σ_{i₁+⋯+i_m = r, i_j ≥ 1} S_{i₁} ⋯ S_{i_m},
//! ```
//!
//! so Q₁ is the skewness layer, Q₂ combines the excess-kurtosis layer with
//! the squared skewness layer, and so on. In one dimension this reproduces
//! the classical series: Q₁ = κ₃He₃/6 and Q₂ = κ₄He₄/24 + κ₃²He₆/72.
//!
//! Two sign conventions are supported. [`SignConvention::Plus`] adds the
//! corrections as written above; it is the convention under which the
//! one-dimensional distribution function acquires the familiar
//! −κ₄/(8n)·(x³−3x)·φ(x) term, and it is the default everywhere.
//! [`SignConvention::Minus`] negates every correction term and is kept as an
//! explicit comparison mode for the rate experiments.
//!
//! The polynomial algebra is generic over the scalar type, so every
//! coefficient can be produced exactly in rational arithmetic and compared
//! against independently derived closed forms; the floating-point path uses
//! the same code.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cumulants::CumulantSet;
use crate::error::{Error, Result};
use crate::hermite::{hermite_product, standard_normal_density, MAX_HERMITE};
use crate::moments::MomentSet;
use crate::multiindex::{enumerate_degree, MultiIndex};
use crate::scalar::Scalar;

/// Highest supported correction order.
pub const MAX_CORRECTION_ORDER: u32 = 4;

/// Which sign the correction terms carry relative to the base Gaussian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    /// Corrections enter with the sign produced by substituting Gaussian
    /// derivatives for frequency powers; reproduces the classical
    /// one-dimensional series. Default.
    Plus,
    /// Every correction term negated. Comparison mode only.
    Minus,
}

impl SignConvention {
    pub fn factor(self) -> f64 {
        match self {
            SignConvention::Plus => 1.0,
            SignConvention::Minus => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SignConvention::Plus => "plus",
            SignConvention::Minus => "minus",
        }
    }
}

impl std::str::FromStr for SignConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" => Ok(SignConvention::Plus),
            "minus" => Ok(SignConvention::Minus),
            other => Err(Error::Parse(format!(
                "unknown sign convention {other:?} (expected \"plus\" or \"minus\")"
            ))),
        }
    }
}

/// How the summand cumulants are scaled before building an expansion for a
/// weighted sum of n terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleConvention {
    /// Scale order p by the signed power sum Σⱼ θⱼᵖ of the actual weights.
    PerTheta,
    /// Scale order p by the leading sphere average of that power sum:
    /// 0 for odd p and (p−1)!!·n^{1−p/2} for even p.
    Averaged,
}

impl ScaleConvention {
    pub fn name(self) -> &'static str {
        match self {
            ScaleConvention::PerTheta => "theta",
            ScaleConvention::Averaged => "avg",
        }
    }
}

impl std::str::FromStr for ScaleConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" | "per_theta" => Ok(ScaleConvention::PerTheta),
            "avg" | "averaged" => Ok(ScaleConvention::Averaged),
            other => Err(Error::Parse(format!(
                "unknown scale convention {other:?} (expected \"theta\" or \"avg\")"
            ))),
        }
    }
}

/// Polynomial combination Σ_ν c_ν · H_ν of Hermite products, stored sparsely
/// by multi-index. The building block of every correction term.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteCombination<T> {
    k: usize,
    coeffs: BTreeMap<MultiIndex, T>,
}

impl<T: Scalar> HermiteCombination<T> {
    pub(crate) fn zero(k: usize) -> Self {
        HermiteCombination { k, coeffs: BTreeMap::new() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of stored (possibly zero) terms.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&MultiIndex, &T)> {
        self.coeffs.iter()
    }

    /// Coefficient of H_ν (zero when the term is absent).
    pub fn coeff(&self, nu: &MultiIndex) -> T {
        self.coeffs.get(nu).cloned().unwrap_or_else(T::zero)
    }

    pub fn max_degree(&self) -> u32 {
        self.coeffs.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    fn add_term(&mut self, nu: MultiIndex, value: T) {
        match self.coeffs.get_mut(&nu) {
            Some(v) => *v = v.clone() + value,
            None => {
                self.coeffs.insert(nu, value);
            }
        }
    }

    fn add_scaled(&mut self, other: &Self, factor: &T) {
        for (nu, v) in &other.coeffs {
            self.add_term(nu.clone(), factor.clone() * v.clone());
        }
    }

    /// Product, using He_a(x)·He_b(x) ↦ H at summed indices — valid because
    /// these combinations only ever multiply through the frequency side,
    /// where H_ν stands for the monomial tᵛ.
    fn mul(&self, other: &Self) -> Result<Self> {
        if self.k != other.k {
            return Err(Error::DimensionMismatch { expected: self.k, got: other.k });
        }
        let mut out = HermiteCombination::zero(self.k);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                out.add_term(a.sum(b)?, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    /// Evaluates Σ_ν c_ν · Π_i He_{ν_i}(x_i).
    pub fn eval(&self, x: &[T]) -> Result<T> {
        if x.len() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, got: x.len() });
        }
        let mut acc = T::zero();
        for (nu, c) in &self.coeffs {
            acc = acc + c.clone() * hermite_product(nu, x)?;
        }
        Ok(acc)
    }
}

fn factorial_scalar<T: Scalar>(nu: &MultiIndex) -> Result<T> {
    let f = nu.factorial()?;
    let f = i64::try_from(f).map_err(|_| Error::FactorialOverflow)?;
    Ok(T::from_int(f))
}

/// Ordered lists of `parts` positive integers summing to `total`.
fn compositions(total: u32, parts: u32) -> Vec<Vec<u32>> {
    fn rec(total: u32, parts: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 1..=(total - parts + 1) {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts >= 1 && parts <= total {
        rec(total, parts, &mut Vec::new(), &mut out);
    }
    out
}

/// The correction polynomial Q_r for the given cumulants, as a Hermite
/// combination. Requires cumulants up to order r + 2.
pub fn correction_polynomial<T: Scalar>(r: u32, cs: &CumulantSet<T>) -> Result<HermiteCombination<T>> {
    if r == 0 {
        return Err(Error::ZeroOrder);
    }
    if r > MAX_CORRECTION_ORDER {
        return Err(Error::OrderTooHigh {
            got: r as usize,
            max: MAX_CORRECTION_ORDER as usize,
        });
    }
    if cs.order() < r + 2 {
        return Err(Error::InsufficientOrder {
            needed: (r + 2) as usize,
            have: cs.order() as usize,
        });
    }
    let k = cs.k();
    // cumulant layer S_i = Σ_{|ν| = i+2} κ_ν/ν! · H_ν
    let layer = |i: u32| -> Result<HermiteCombination<T>> {
        let mut s = HermiteCombination::zero(k);
        for nu in enumerate_degree(k, i + 2) {
            let kappa = cs.value(&nu)?.clone();
            s.add_term(nu.clone(), kappa / factorial_scalar::<T>(&nu)?);
        }
        Ok(s)
    };
    let layers: Vec<HermiteCombination<T>> = (1..=r).map(layer).collect::<Result<_>>()?;
    let mut q = HermiteCombination::zero(k);
    let mut m_factorial = 1i64;
    for m in 1..=r {
        m_factorial *= i64::from(m);
        let weight = T::from_ratio(1, m_factorial);
        for comp in compositions(r, m) {
            let mut prod = layers[(comp[0] - 1) as usize].clone();
            for &i in &comp[1..] {
                prod = prod.mul(&layers[(i - 1) as usize])?;
            }
            q.add_scaled(&prod, &weight);
        }
    }
    debug_assert!(q.max_degree() <= MAX_HERMITE as u32);
    Ok(q)
}

/// Corrected normal density of a fixed order, with precomputed correction
/// polynomials. Construction validates that the supplied cumulants describe
/// a standardized law (mean ≈ 0, identity covariance).
#[derive(Debug, Clone)]
pub struct EdgeworthExpansion {
    k: usize,
    order: u32,
    sign: SignConvention,
    factors: Vec<HermiteCombination<f64>>,
}

/// Mean/covariance tolerance accepted by [`EdgeworthExpansion::new`].
pub const STANDARDIZATION_TOLERANCE: f64 = 1e-9;

impl EdgeworthExpansion {
    /// Builds the order-`order` expansion (0 = plain Gaussian) from the
    /// cumulants of the weighted sum.
    pub fn new(cumulants: &CumulantSet<f64>, order: u32, sign: SignConvention) -> Result<Self> {
        if order > MAX_CORRECTION_ORDER {
            return Err(Error::OrderTooHigh {
                got: order as usize,
                max: MAX_CORRECTION_ORDER as usize,
            });
        }
        let needed = (order + 2).max(2);
        if cumulants.order() < needed {
            return Err(Error::InsufficientOrder {
                needed: needed as usize,
                have: cumulants.order() as usize,
            });
        }
        let mut worst = 0.0f64;
        for (nu, v) in cumulants.iter() {
            let target = match nu.degree() {
                1 => 0.0,
                2 => {
                    if nu.exponents().contains(&2) { 1.0 } else { 0.0 }
                }
                _ => continue,
            };
            worst = worst.max((v - target).abs());
        }
        if worst > STANDARDIZATION_TOLERANCE {
            return Err(Error::NotStandardized(worst));
        }
        let factors = (1..=order)
            .map(|r| correction_polynomial(r, cumulants))
            .collect::<Result<Vec<_>>>()?;
        Ok(EdgeworthExpansion { k: cumulants.k(), order, sign, factors })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn sign(&self) -> SignConvention {
        self.sign
    }

    /// The correction polynomial Q_r, for 1 ≤ r ≤ order.
    pub fn factor(&self, r: u32) -> Option<&HermiteCombination<f64>> {
        if r == 0 {
            return None;
        }
        self.factors.get((r - 1) as usize)
    }

    /// The polynomial multiplier 1 ± ΣQ_r(x) in front of φ(x).
    pub fn correction_ratio(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, got: x.len() });
        }
        let mut sum = 0.0;
        for q in &self.factors {
            sum += q.eval(x)?;
        }
        Ok(1.0 + self.sign.factor() * sum)
    }

    /// The corrected density φ(x)·(1 ± ΣQ_r(x)). May be negative far in the
    /// tails; corrections are signed measures, not probability densities.
    pub fn density(&self, x: &[f64]) -> Result<f64> {
        Ok(standard_normal_density(x) * self.correction_ratio(x)?)
    }
}

/// The order-2 correction bracket assembled directly from fourth-moment
/// patterns instead of the generic cumulant pipeline: for a standardized law
/// with vanishing third moments,
///
/// ```text
/// B(x) = Σᵢ (μ₄⁽ⁱ⁾ − 3)/24 · He₄(xᵢ)
///      + Σ_{i≠j} μ(3eᵢ+eⱼ)/6 · He₃(xᵢ)He₁(xⱼ)
///      + Σ_{i<j} (μ(2eᵢ+2eⱼ) − 1)/4 · He₂(xᵢ)He₂(xⱼ)
///      + Σ_{i; j<l, j,l≠i} μ(2eᵢ+eⱼ+e_l)/2 · He₂(xᵢ)He₁(xⱼ)He₁(x_l)
///      + Σ_{i<j<l<m} μ(eᵢ+eⱼ+e_l+e_m) · He₁He₁He₁He₁,
/// ```
///
/// which the equivalence tests verify to agree exactly with Q₂ built by the
/// series machinery. Requires moments up to order 4.
pub fn fourth_moment_bracket<T: Scalar>(ms: &MomentSet<T>, x: &[T]) -> Result<T> {
    let k = ms.k();
    if x.len() != k {
        return Err(Error::DimensionMismatch { expected: k, got: x.len() });
    }
    if ms.order() < 4 {
        return Err(Error::InsufficientOrder { needed: 4, have: ms.order() as usize });
    }
    let three = T::from_int(3);
    let one = T::one();
    let mut acc = T::zero();
    for nu in enumerate_degree(k, 4) {
        let mu = ms.value(&nu)?.clone();
        let exps = nu.exponents();
        let kappa = if exps.contains(&4) {
            mu - three.clone()
        } else if exps.iter().filter(|&&e| e == 2).count() == 2 {
            mu - one.clone()
        } else {
            mu
        };
        let term = kappa / factorial_scalar::<T>(&nu)? * hermite_product(&nu, x)?;
        acc = acc + term;
    }
    Ok(acc)
}

/// Closed-form order-2 corrected density φ(x)·(1 ± c·B(x)) where B is the
/// fourth-moment bracket of the summand law and c is the fourth-order weight
/// scale (Σθ⁴ per weight vector, or 3/n averaged).
pub fn closed_form_corrected_density(
    ms: &MomentSet<f64>,
    coeff: f64,
    sign: SignConvention,
    x: &[f64],
) -> Result<f64> {
    let bracket = fourth_moment_bracket(ms, x)?;
    Ok(standard_normal_density(x) * (1.0 + sign.factor() * coeff * bracket))
}

/// One-dimensional corrected distribution function
/// Φ(x) − (β₄ − 3)/(8n) · (x³ − 3x) · φ(x)
/// for the equal-scale order-2 correction with fourth moment β₄ and n
/// summands.
pub fn corrected_normal_cdf(beta4: f64, n: usize, x: f64) -> f64 {
    let phi = crate::hermite::phi_1d(x);
    let cdf = crate::hermite::normal_cdf(x);
    cdf - (beta4 - 3.0) / (8.0 * n as f64) * (x * x * x - 3.0 * x) * phi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cumulants::{moments_to_cumulants, weighted_sum_cumulants};
    use crate::moments::DistributionSpec;
    use crate::weighted_sums::ThetaVector;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::from_slice(e)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    fn cumulants_1d(vals: &[(u32, BigRational)], m: u32) -> CumulantSet<BigRational> {
        CumulantSet::from_fn(1, m, |a| {
            if a.degree() == 2 {
                return rat(1, 1);
            }
            vals.iter()
                .find(|(d, _)| *d == a.degree())
                .map(|(_, v)| v.clone())
                .unwrap_or_else(|| rat(0, 1))
        })
        .unwrap()
    }

    #[test]
    fn compositions_enumerate_ordered_splits() {
        assert_eq!(compositions(4, 1), vec![vec![4]]);
        let two = compositions(4, 2);
        assert_eq!(two, vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
        assert_eq!(compositions(3, 3), vec![vec![1, 1, 1]]);
        assert!(compositions(2, 3).is_empty());
    }

    #[test]
    fn first_correction_is_the_skewness_layer() {
        // κ₃ = 3/2 → Q₁ = (3/2)/6 · He₃ = He₃/4
        let cs = cumulants_1d(&[(3, rat(3, 2))], 3);
        let q1 = correction_polynomial(1, &cs).unwrap();
        assert_eq!(q1.coeff(&mi(&[3])), rat(1, 4));
        assert_eq!(q1.len(), 1);
    }

    #[test]
    fn second_correction_combines_kurtosis_and_squared_skewness() {
        // κ₃ = 3/2, κ₄ = 13/4 → Q₂ = (13/4)/24·He₄ + (3/2)²/72·He₆
        let cs = cumulants_1d(&[(3, rat(3, 2)), (4, rat(13, 4))], 4);
        let q2 = correction_polynomial(2, &cs).unwrap();
        assert_eq!(q2.coeff(&mi(&[4])), rat(13, 96));
        assert_eq!(q2.coeff(&mi(&[6])), rat(1, 32));
    }

    #[test]
    fn third_correction_hand_derived_coefficients() {
        // κ₃ = κ₄ = κ₅ = 1:
        //   Q₃ = He₅/120 + He₇/144 + He₉/1296
        // (layers: 1/5!, pairs (1,2)+(2,1) → 2·(1/2)·(1/6)(1/24), triple
        // (1,1,1) → (1/6)(1/6)³)
        let cs = cumulants_1d(&[(3, rat(1, 1)), (4, rat(1, 1)), (5, rat(1, 1))], 5);
        let q3 = correction_polynomial(3, &cs).unwrap();
        assert_eq!(q3.coeff(&mi(&[5])), rat(1, 120));
        assert_eq!(q3.coeff(&mi(&[7])), rat(1, 144));
        assert_eq!(q3.coeff(&mi(&[9])), rat(1, 1296));
    }

    #[test]
    fn mixed_skewness_layers_in_two_dimensions() {
        let cs = CumulantSet::from_fn(2, 3, |a| {
            if a.degree() == 2 && a.exponents().contains(&2) {
                return rat(1, 1);
            }
            match a.exponents() {
                [3, 0] => rat(1, 2),
                [2, 1] => rat(1, 3),
                [1, 2] => rat(1, 5),
                [0, 3] => rat(1, 7),
                _ => rat(0, 1),
            }
        })
        .unwrap();
        let q1 = correction_polynomial(1, &cs).unwrap();
        assert_eq!(q1.coeff(&mi(&[3, 0])), rat(1, 12)); // (1/2)/3!
        assert_eq!(q1.coeff(&mi(&[2, 1])), rat(1, 6)); // (1/3)/2!
        assert_eq!(q1.coeff(&mi(&[1, 2])), rat(1, 10));
        assert_eq!(q1.coeff(&mi(&[0, 3])), rat(1, 42));
    }

    #[test]
    fn order_validation() {
        let cs = cumulants_1d(&[(3, rat(1, 1))], 3);
        assert!(matches!(correction_polynomial(0, &cs), Err(Error::ZeroOrder)));
        assert!(matches!(
            correction_polynomial(5, &cs),
            Err(Error::OrderTooHigh { got: 5, max: 4 })
        ));
        assert!(matches!(
            correction_polynomial(2, &cs),
            Err(Error::InsufficientOrder { needed: 4, have: 3 })
        ));
        assert!(matches!(
            EdgeworthExpansion::new(&cs.to_f64(), 2, SignConvention::Plus),
            Err(Error::InsufficientOrder { needed: 4, have: 3 })
        ));
        assert!(matches!(
            EdgeworthExpansion::new(&cs.to_f64(), 9, SignConvention::Plus),
            Err(Error::OrderTooHigh { got: 9, max: 4 })
        ));
    }

    #[test]
    fn rejects_non_standardized_cumulants() {
        let cs = CumulantSet::from_fn(1, 4, |a| match a.degree() {
            1 => 0.5,
            2 => 1.0,
            _ => 0.0,
        })
        .unwrap();
        assert!(matches!(
            EdgeworthExpansion::new(&cs, 2, SignConvention::Plus),
            Err(Error::NotStandardized(v)) if (v - 0.5).abs() < 1e-15
        ));
        let cs = CumulantSet::from_fn(2, 4, |a| match a.exponents() {
            [2, 0] => 1.0,
            [0, 2] => 2.0,
            _ => 0.0,
        })
        .unwrap();
        assert!(matches!(
            EdgeworthExpansion::new(&cs, 2, SignConvention::Plus),
            Err(Error::NotStandardized(v)) if (v - 1.0).abs() < 1e-15
        ));
    }

    #[test]
    fn gaussian_cumulants_leave_the_density_uncorrected() {
        let ms = DistributionSpec::gaussian(2).analytic_moments::<f64>(5).unwrap();
        let cs = moments_to_cumulants(&ms).unwrap();
        let exp = EdgeworthExpansion::new(&cs, 3, SignConvention::Plus).unwrap();
        for x in [[0.0, 0.0], [1.0, -0.5], [2.5, 3.0]] {
            assert!((exp.correction_ratio(&x).unwrap() - 1.0).abs() < 1e-14);
            let want = standard_normal_density(&x);
            assert!((exp.density(&x).unwrap() - want).abs() < 1e-15);
        }
    }

    #[test]
    fn equal_weight_symmetric_law_density_values() {
        // ±1-valued coordinates, k=1, ten equal weights: the weighted fourth
        // cumulant is −2·10·(1/√10)⁴ = −1/5, so
        // density(0) = φ(0)·(1 + (−1/5)/24·He₄(0)) = φ(0)·(1 − 1/40).
        let ms = DistributionSpec::rademacher(1).analytic_moments::<f64>(4).unwrap();
        let cs = moments_to_cumulants(&ms).unwrap();
        let weighted = weighted_sum_cumulants(&cs, &ThetaVector::equal_weights(10)).unwrap();
        let exp = EdgeworthExpansion::new(&weighted, 2, SignConvention::Plus).unwrap();
        let got = exp.density(&[0.0]).unwrap();
        assert!((got - 0.388_968_723_391_396_9).abs() < 1e-15, "got {got}");

        // same construction in two dimensions (product law)
        let ms = DistributionSpec::rademacher(2).analytic_moments::<f64>(4).unwrap();
        let cs = moments_to_cumulants(&ms).unwrap();
        let weighted = weighted_sum_cumulants(&cs, &ThetaVector::equal_weights(10)).unwrap();
        let exp = EdgeworthExpansion::new(&weighted, 2, SignConvention::Plus).unwrap();
        let got = exp.density(&[0.0, 0.0]).unwrap();
        assert!((got - 0.15119719593730057).abs() < 1e-15, "got {got}");
    }

    #[test]
    fn sign_conventions_mirror_around_the_gaussian() {
        let ms = DistributionSpec::shifted_bernoulli(1).analytic_moments::<f64>(5).unwrap();
        let cs = moments_to_cumulants(&ms).unwrap();
        let weighted = weighted_sum_cumulants(&cs, &ThetaVector::equal_weights(6)).unwrap();
        let plus = EdgeworthExpansion::new(&weighted, 3, SignConvention::Plus).unwrap();
        let minus = EdgeworthExpansion::new(&weighted, 3, SignConvention::Minus).unwrap();
        for x in [-2.0, -0.3, 0.0, 0.7, 1.9] {
            let a = plus.correction_ratio(&[x]).unwrap();
            let b = minus.correction_ratio(&[x]).unwrap();
            assert!((a + b - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn bracket_requires_enough_moments() {
        let ms = DistributionSpec::rademacher(2).analytic_moments::<f64>(3).unwrap();
        assert!(matches!(
            fourth_moment_bracket(&ms, &[0.0, 0.0]),
            Err(Error::InsufficientOrder { needed: 4, have: 3 })
        ));
    }

    #[test]
    fn bracket_matches_series_pipeline_on_one_set() {
        // quick spot check; the acceptance suite does this at scale
        let ms: MomentSet<BigRational> =
            DistributionSpec::uniform(2).analytic_moments(4).unwrap();
        let cs = moments_to_cumulants(&ms).unwrap();
        let q2 = correction_polynomial(2, &cs).unwrap();
        for pt in [
            [rat(0, 1), rat(0, 1)],
            [rat(1, 2), rat(-1, 3)],
            [rat(7, 4), rat(22, 7)],
        ] {
            assert_eq!(fourth_moment_bracket(&ms, &pt).unwrap(), q2.eval(&pt).unwrap());
        }
    }

    #[test]
    fn closed_form_density_matches_expansion() {
        let ms = DistributionSpec::uniform(1).analytic_moments::<f64>(4).unwrap();
        let cs = moments_to_cumulants(&ms).unwrap();
        let theta = ThetaVector::new(vec![0.8, -0.6]).unwrap();
        let weighted = weighted_sum_cumulants(&cs, &theta).unwrap();
        let exp = EdgeworthExpansion::new(&weighted, 2, SignConvention::Plus).unwrap();
        let l4 = theta.power_sum(4);
        for x in [-1.5, 0.0, 0.4, 2.2] {
            let a = exp.density(&[x]).unwrap();
            let b = closed_form_corrected_density(&ms, l4, SignConvention::Plus, &[x]).unwrap();
            assert!((a - b).abs() < 1e-15, "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn corrected_cdf_value() {
        // β₄ = 1 (±1 summands), n = 10:
        // G(1) = Φ(1) − (1−3)/80·(1−3)·φ(1)
        let got = corrected_normal_cdf(1.0, 10, 1.0);
        assert!((got - 0.829_246_209_842_585_8).abs() < 5e-16, "got {got}");
        // β₄ = 3 is the Gaussian fourth moment: no correction at all
        assert_eq!(corrected_normal_cdf(3.0, 5, 0.7), crate::hermite::normal_cdf(0.7));
    }

    #[test]
    fn one_dimensional_mass_is_preserved() {
        // ∫ density over [−12, 12] by Simpson's rule ≈ 1: corrections add
        // zero total mass.
        let ms = DistributionSpec::shifted_bernoulli(1).analytic_moments::<f64>(5).unwrap();
        let cs = moments_to_cumulants(&ms).unwrap();
        let theta = ThetaVector::new(vec![0.5, 0.5, 0.5, -0.5]).unwrap();
        let weighted = weighted_sum_cumulants(&cs, &theta).unwrap();
        let exp = EdgeworthExpansion::new(&weighted, 3, SignConvention::Plus).unwrap();
        let (a, b, steps) = (-12.0f64, 12.0f64, 24_000usize);
        let h = (b - a) / steps as f64;
        let mut total = exp.density(&[a]).unwrap() + exp.density(&[b]).unwrap();
        for i in 1..steps {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            total += w * exp.density(&[a + i as f64 * h]).unwrap();
        }
        total *= h / 3.0;
        assert!((total - 1.0).abs() < 1e-10, "mass {total}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn ratio_is_affine_in_the_sign(x in -3.0f64..3.0, y in -3.0f64..3.0) {
            let ms = DistributionSpec::shifted_bernoulli(2)
                .analytic_moments::<f64>(4).unwrap();
            let cs = moments_to_cumulants(&ms).unwrap();
            let weighted =
                weighted_sum_cumulants(&cs, &ThetaVector::equal_weights(5)).unwrap();
            let plus = EdgeworthExpansion::new(&weighted, 2, SignConvention::Plus).unwrap();
            let minus = EdgeworthExpansion::new(&weighted, 2, SignConvention::Minus).unwrap();
            let a = plus.correction_ratio(&[x, y]).unwrap();
            let b = minus.correction_ratio(&[x, y]).unwrap();
            prop_assert!((a + b - 2.0).abs() < 1e-13);
        }
    }
}
