//! Cumulants and the moment↔cumulant conversions.
//!
//! The two directions are implemented as one mechanism: compose the truncated
//! multivariate exponential series with log(1+u) or exp(u)−1. Writing M(t) =
//! Σ_{1≤|ν|≤m} μ_ν tᵛ/ν! and K(t) = Σ κ_ν tᵛ/ν!, the defining identity is
//!
//! ```text
//! K = Σ_{s≥1} (−1)^{s+1} (1/s) · Mˢ        (moments → cumulants)
//! M = Σ_{s≥1} (1/s!) · Kˢ                  (cumulants → moments)
//! ```
//!
//! truncated at total degree m; since M and K have no constant term, the sums
//! stop at s = m on the nose, so in exact-rational mode both directions are
//! *exact* and mutually inverse, which the round-trip tests pin down with zero
//! tolerance.
//!
//! Cumulants are the natural currency for weighted sums: for i.i.d. summands
//! with weights θ, κ_ν(Σⱼ θⱼXⱼ) = (Σⱼ θⱼ^|ν|) · κ_ν(X₁) — each order just
//! picks up a signed power sum of the weights. [`weighted_sum_cumulants`]
//! applies the actual power sums of one weight vector;
//! [`sphere_averaged_cumulants`] replaces them with their leading sphere
//! averages (0 for odd orders, (p−1)!!·n^{1−p/2} for even p — 3/n at p = 4),
//! which is the scaling the closed-form corrected distribution uses.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::moments::MomentSet;
use crate::multiindex::MultiIndex;
use crate::scalar::Scalar;
use crate::tensor::Tensor;
use crate::weighted_sums::ThetaVector;

/// Dense tensor of cumulants for 1 ≤ |ν| ≤ m.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulantSet<T>(pub(crate) Tensor<T>);

impl<T: Scalar> CumulantSet<T> {
    pub fn from_fn(k: usize, m: u32, f: impl FnMut(&MultiIndex) -> T) -> Result<Self> {
        Tensor::from_fn(k, m, f).map(CumulantSet)
    }

    pub fn k(&self) -> usize {
        self.0.k()
    }

    pub fn order(&self) -> u32 {
        self.0.m()
    }

    pub fn value(&self, nu: &MultiIndex) -> Result<&T> {
        self.0.get(nu)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &T)> {
        self.0.iter()
    }

    pub fn to_f64(&self) -> CumulantSet<f64> {
        CumulantSet(self.0.map(Scalar::to_f64))
    }

    pub fn to_text(&self) -> String {
        self.0.to_text()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Tensor::from_text(text).map(CumulantSet)
    }
}

/// Truncated multivariate power series with no constant term, keyed by
/// monomial. Only what the two compositions need.
struct Series<T> {
    k: usize,
    max: u32,
    c: BTreeMap<MultiIndex, T>,
}

impl<T: Scalar> Series<T> {
    fn mul(&self, other: &Series<T>) -> Result<Series<T>> {
        let mut c: BTreeMap<MultiIndex, T> = BTreeMap::new();
        for (a, ca) in &self.c {
            let da = a.degree();
            for (b, cb) in &other.c {
                if da + b.degree() > self.max {
                    continue;
                }
                let idx = a.sum(b)?;
                let term = ca.clone() * cb.clone();
                match c.get_mut(&idx) {
                    Some(v) => *v = v.clone() + term,
                    None => {
                        c.insert(idx, term);
                    }
                }
            }
        }
        Ok(Series { k: self.k, max: self.max, c })
    }

    fn add_scaled(&mut self, other: &Series<T>, factor: &T) {
        for (idx, v) in &other.c {
            let term = factor.clone() * v.clone();
            match self.c.get_mut(idx) {
                Some(w) => *w = w.clone() + term,
                None => {
                    self.c.insert(idx.clone(), term);
                }
            }
        }
    }
}

fn factorial_scalar<T: Scalar>(nu: &MultiIndex) -> Result<T> {
    let f = nu.factorial()?;
    let f = i64::try_from(f).map_err(|_| Error::FactorialOverflow)?;
    Ok(T::from_int(f))
}

/// Tensor → exponential series (coefficients value/ν!).
fn to_series<T: Scalar>(t: &Tensor<T>) -> Result<Series<T>> {
    let mut c = BTreeMap::new();
    for (nu, v) in t.iter() {
        c.insert(nu.clone(), v.clone() / factorial_scalar::<T>(nu)?);
    }
    Ok(Series { k: t.k(), max: t.m(), c })
}

/// Series → tensor (values coefficient·ν!), dense: absent monomials are zero.
fn from_series<T: Scalar>(s: &Series<T>) -> Result<Tensor<T>> {
    Tensor::try_from_fn(s.k, s.max, |nu| {
        let coeff = s.c.get(nu).cloned().unwrap_or_else(T::zero);
        Ok(coeff * factorial_scalar::<T>(nu)?)
    })
}

/// Composes the truncated series with Σ_{s} f(s)·uˢ, where `f(s)` supplies
/// the outer coefficients (log or exp). Shared by both conversion directions.
fn compose<T: Scalar>(t: &Tensor<T>, outer: impl Fn(u32) -> T) -> Result<Tensor<T>> {
    let base = to_series(t)?;
    let mut acc = Series { k: base.k, max: base.max, c: BTreeMap::new() };
    let mut power = Series { k: base.k, max: base.max, c: base.c.clone() };
    acc.add_scaled(&power, &outer(1));
    for s in 2..=t.m() {
        power = power.mul(&base)?;
        acc.add_scaled(&power, &outer(s));
    }
    from_series(&acc)
}

/// Cumulants of the law whose mixed moments are `ms`, to the same order,
/// exact in rational mode.
pub fn moments_to_cumulants<T: Scalar>(ms: &MomentSet<T>) -> Result<CumulantSet<T>> {
    // log(1 + u): outer coefficient (−1)^{s+1}/s
    compose(&ms.0, |s| {
        let sign = if s % 2 == 1 { 1 } else { -1 };
        T::from_ratio(sign, i64::from(s))
    })
    .map(CumulantSet)
}

/// Inverse direction: mixed moments from cumulants, to the same order.
pub fn cumulants_to_moments<T: Scalar>(cs: &CumulantSet<T>) -> Result<MomentSet<T>> {
    // exp(u) − 1: outer coefficient 1/s!
    compose(&cs.0, |s| {
        let mut f = 1i64;
        for i in 2..=i64::from(s) {
            f *= i;
        }
        T::from_ratio(1, f)
    })
    .map(MomentSet)
}

/// Cumulants of the weighted sum Σⱼ θⱼXⱼ of i.i.d. copies with per-copy
/// cumulants `cs`: each order-p entry is scaled by the signed power sum
/// Σⱼ θⱼᵖ.
pub fn weighted_sum_cumulants(cs: &CumulantSet<f64>, theta: &ThetaVector) -> Result<CumulantSet<f64>> {
    let scales: Vec<f64> = (0..=cs.order()).map(|p| theta.power_sum(p)).collect();
    Tensor::from_fn(cs.k(), cs.order(), |nu| {
        let v = cs.0.get(nu).expect("dense");
        v * scales[nu.degree() as usize]
    })
    .map(CumulantSet)
}

/// Weighted-sum cumulants with the power sums replaced by their leading
/// averages over the uniform sphere of weight vectors: odd orders vanish,
/// even order p scales by (p−1)!!·n^{1−p/2} — in particular 3/n at p = 4.
pub fn sphere_averaged_cumulants(cs: &CumulantSet<f64>, n: usize) -> Result<CumulantSet<f64>> {
    if n == 0 {
        return Err(Error::Config("number of summands must be positive".into()));
    }
    let nf = n as f64;
    let scale = |p: u32| -> f64 {
        if p % 2 == 1 {
            0.0
        } else {
            let mut df = 1.0; // (p−1)!!
            let mut f = p as i64 - 1;
            while f > 0 {
                df *= f as f64;
                f -= 2;
            }
            df * nf.powf(1.0 - p as f64 / 2.0)
        }
    };
    let scales: Vec<f64> = (0..=cs.order()).map(scale).collect();
    Tensor::from_fn(cs.k(), cs.order(), |nu| {
        let v = cs.0.get(nu).expect("dense");
        v * scales[nu.degree() as usize]
    })
    .map(CumulantSet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::DistributionSpec;
    use num_rational::BigRational;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::from_slice(e)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn gaussian_moments_give_gaussian_cumulants() {
        // k=1: μ = (0, 1, 0, 3) → κ = (0, 1, 0, 0)
        let ms = MomentSet::from_fn(1, 4, |a| match a.degree() {
            2 => rat(1, 1),
            4 => rat(3, 1),
            _ => rat(0, 1),
        })
        .unwrap();
        let cs = moments_to_cumulants(&ms).unwrap();
        assert_eq!(cs.value(&mi(&[2])).unwrap(), &rat(1, 1));
        assert_eq!(cs.value(&mi(&[4])).unwrap(), &rat(0, 1));

        // and in higher dimension to order 5, all high cumulants vanish exactly
        for k in 1..=3usize {
            let ms: MomentSet<BigRational> =
                DistributionSpec::gaussian(k).analytic_moments(5).unwrap();
            let cs = moments_to_cumulants(&ms).unwrap();
            for (nu, v) in cs.iter() {
                let want = match nu.degree() {
                    2 if nu.exponents().contains(&2) => rat(1, 1),
                    _ => rat(0, 1),
                };
                assert_eq!(v, &want, "κ_{nu} for k={k}");
            }
        }
    }

    #[test]
    fn rademacher_fourth_cumulant() {
        let ms: MomentSet<BigRational> =
            DistributionSpec::rademacher(1).analytic_moments(4).unwrap();
        let cs = moments_to_cumulants(&ms).unwrap();
        assert_eq!(cs.value(&mi(&[4])).unwrap(), &rat(-2, 1));
    }

    #[test]
    fn fourth_order_patterns_for_standardized_input() {
        // For any mean-zero, identity-covariance law the degree-4 cumulants
        // reduce to: pure κ₄ = μ₄ − 3, paired κ₂₂ = μ₂₂ − 1, and all mixed
        // patterns equal their moments. Random rational moments, exact check.
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for _ in 0..5 {
            let mut r = || rat(rng.random_range(-30i64..30), rng.random_range(1i64..8));
            let ms = MomentSet::from_fn(4, 4, |a| match a.degree() {
                1 => rat(0, 1),
                2 => {
                    if a.exponents().contains(&2) { rat(1, 1) } else { rat(0, 1) }
                }
                _ => r(),
            })
            .unwrap();
            let cs = moments_to_cumulants(&ms).unwrap();
            // third cumulants equal third moments outright (mean zero)
            for nu in crate::multiindex::enumerate_degree(4, 3) {
                assert_eq!(cs.value(&nu).unwrap(), ms.value(&nu).unwrap());
            }
            for nu in crate::multiindex::enumerate_degree(4, 4) {
                let mu = ms.value(&nu).unwrap().clone();
                let want = if nu.exponents().contains(&4) {
                    mu - rat(3, 1)
                } else if nu.exponents().iter().filter(|&&e| e == 2).count() == 2 {
                    mu - rat(1, 1)
                } else {
                    mu
                };
                assert_eq!(cs.value(&nu).unwrap(), &want, "pattern {nu}");
            }
        }
    }

    #[test]
    fn pure_variance_cumulants_give_gaussian_moments() {
        let cs = CumulantSet::from_fn(1, 4, |a| if a.degree() == 2 { rat(1, 1) } else { rat(0, 1) })
            .unwrap();
        let ms = cumulants_to_moments(&cs).unwrap();
        assert_eq!(ms.value(&mi(&[2])).unwrap(), &rat(1, 1));
        assert_eq!(ms.value(&mi(&[4])).unwrap(), &rat(3, 1));

        // adding κ₄ = −2 lands on the Rademacher μ₄ = 1
        let cs = CumulantSet::from_fn(1, 4, |a| match a.degree() {
            2 => rat(1, 1),
            4 => rat(-2, 1),
            _ => rat(0, 1),
        })
        .unwrap();
        let ms = cumulants_to_moments(&cs).unwrap();
        assert_eq!(ms.value(&mi(&[4])).unwrap(), &rat(1, 1));
    }

    #[test]
    fn convolution_adds_cumulants_exactly() {
        // Independent oracle: brute-force convolution of two discrete laws.
        // A: {0: 1/3, 1: 2/3}, B: {−1: 1/4, 2: 3/4}; moments by support sums.
        let a = [(rat(0, 1), rat(1, 3)), (rat(1, 1), rat(2, 3))];
        let b = [(rat(-1, 1), rat(1, 4)), (rat(2, 1), rat(3, 4))];
        let moments_of = |support: &[(BigRational, BigRational)]| {
            MomentSet::from_fn(1, 5, |alpha| {
                let m = alpha.degree();
                let mut acc = rat(0, 1);
                for (v, p) in support {
                    let mut pow = rat(1, 1);
                    for _ in 0..m {
                        pow *= v.clone();
                    }
                    acc += p.clone() * pow;
                }
                acc
            })
            .unwrap()
        };
        let conv: Vec<(BigRational, BigRational)> = a
            .iter()
            .flat_map(|(va, pa)| {
                b.iter().map(move |(vb, pb)| (va + vb, pa * pb))
            })
            .collect();
        let ka = moments_to_cumulants(&moments_of(&a)).unwrap();
        let kb = moments_to_cumulants(&moments_of(&b)).unwrap();
        let kc = moments_to_cumulants(&moments_of(&conv)).unwrap();
        for m in 1..=5u32 {
            let nu = mi(&[m]);
            assert_eq!(
                kc.value(&nu).unwrap(),
                &(ka.value(&nu).unwrap() + kb.value(&nu).unwrap()),
                "order {m}"
            );
        }
    }

    #[test]
    fn single_unit_weight_is_the_identity() {
        let cs: CumulantSet<f64> = moments_to_cumulants(
            &DistributionSpec::rademacher(2).analytic_moments(4).unwrap(),
        )
        .unwrap();
        let theta = ThetaVector::new(vec![1.0]).unwrap();
        let out = weighted_sum_cumulants(&cs, &theta).unwrap();
        assert_eq!(out, cs);
    }

    #[test]
    fn equal_weights_scale_by_root_n_powers() {
        let cs = CumulantSet::from_fn(1, 5, |a| match a.degree() {
            2 => 1.0,
            3 => 0.7,
            4 => -2.0,
            5 => 1.3,
            _ => 0.0,
        })
        .unwrap();
        let n = 4;
        let theta = ThetaVector::equal_weights(n);
        let out = weighted_sum_cumulants(&cs, &theta).unwrap();
        // order p picks up n^{1−p/2}
        assert!((out.value(&mi(&[2])).unwrap() - 1.0).abs() < 1e-15);
        assert!((out.value(&mi(&[3])).unwrap() - 0.7 * 0.5).abs() < 1e-15);
        assert!((out.value(&mi(&[4])).unwrap() - (-2.0 * 0.25)).abs() < 1e-15);
        assert!((out.value(&mi(&[5])).unwrap() - 1.3 * 0.125).abs() < 1e-15);
    }

    #[test]
    fn odd_orders_use_signed_power_sums() {
        let cs = CumulantSet::from_fn(1, 3, |a| match a.degree() {
            2 => 1.0,
            3 => 5.0,
            _ => 0.0,
        })
        .unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let theta = ThetaVector::new(vec![s, -s]).unwrap();
        let out = weighted_sum_cumulants(&cs, &theta).unwrap();
        // Σθ³ = (1/√2)³ − (1/√2)³ = 0: the skew cancels for this θ.
        assert!((out.value(&mi(&[3])).unwrap()).abs() < 1e-15);
        assert!((out.value(&mi(&[2])).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sphere_averaging_scales() {
        let cs = CumulantSet::from_fn(1, 6, |a| match a.degree() {
            2 => 1.0,
            3 => 0.9,
            4 => -2.0,
            5 => 0.4,
            6 => 16.0,
            _ => 0.0,
        })
        .unwrap();
        let out = sphere_averaged_cumulants(&cs, 10).unwrap();
        assert_eq!(*out.value(&mi(&[3])).unwrap(), 0.0);
        assert_eq!(*out.value(&mi(&[5])).unwrap(), 0.0);
        assert!((out.value(&mi(&[2])).unwrap() - 1.0).abs() < 1e-15);
        assert!((out.value(&mi(&[4])).unwrap() - (-2.0 * 0.3)).abs() < 1e-15);
        assert!((out.value(&mi(&[6])).unwrap() - 16.0 * 0.15).abs() < 1e-14);
        assert!(sphere_averaged_cumulants(&cs, 0).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let cs: CumulantSet<BigRational> = moments_to_cumulants(
            &DistributionSpec::rademacher(2).analytic_moments(4).unwrap(),
        )
        .unwrap();
        let back: CumulantSet<BigRational> = CumulantSet::from_text(&cs.to_text()).unwrap();
        assert_eq!(back, cs);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn roundtrip_is_exact_in_rational_mode(
            k in 1usize..=3,
            m in 1u32..=5,
            seed in 0u64..1000,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ms = MomentSet::from_fn(k, m, |_| {
                rat(rng.random_range(-40i64..40), rng.random_range(1i64..10))
            }).unwrap();
            let cs = moments_to_cumulants(&ms).unwrap();
            let back = cumulants_to_moments(&cs).unwrap();
            prop_assert_eq!(back, ms);
        }
    }
}
