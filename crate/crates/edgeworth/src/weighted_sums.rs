//! Weighted sums Σⱼ θⱼXⱼ of i.i.d. standardized vectors: weight vectors on
//! the unit sphere, samplers, empirical probabilities with confidence
//! intervals, and an exact probability evaluator for discrete summands.
//!
//! The exact evaluator is the reference the rate experiments lean on. For a
//! discrete coordinate law with q support points, each coordinate of the sum
//! takes at most qⁿ values; enumerating them outright is hopeless well
//! before n = 26, so the evaluator splits the weights into two halves,
//! enumerates each half's partial sums once, sorts one side, and answers
//! every box query with a sweep of the other side against prefix sums —
//! meet-in-the-middle, O(q^{n/2}) space instead of O(qⁿ). Probabilities
//! accumulate through compensated summation, so the result is exact up to a
//! few ulps even with a million atoms. Coordinates of the sum are
//! independent (the catalog laws are product laws), so one pair of
//! half-tables serves every axis of a box query.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::hermite::gaussian_partial_integral;
use crate::measures::ConvexSetSpec;
use crate::moments::{CoordinateLaw, DistributionSpec};

/// Largest number of summands the exact evaluator accepts.
pub const MAX_EXACT_SUMMANDS: usize = 26;

/// Two-sided 95% normal quantile used for the Wilson interval.
pub const WILSON_Z_95: f64 = 1.9599639845400542;

/// Tolerance for |Σθ² − 1| accepted by [`ThetaVector::new`].
pub const SPHERE_TOLERANCE: f64 = 1e-12;

/// A weight vector θ on the unit sphere of ℝⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaVector {
    w: Vec<f64>,
}

impl ThetaVector {
    /// Wraps a weight vector, requiring Σθⱼ² = 1 within [`SPHERE_TOLERANCE`].
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::Config("weight vector must be non-empty".into()));
        }
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("weight vector must be finite".into()));
        }
        let norm2: f64 = w.iter().map(|v| v * v).sum();
        let excess = (norm2 - 1.0).abs();
        if excess > SPHERE_TOLERANCE {
            return Err(Error::NotOnSphere { excess });
        }
        Ok(ThetaVector { w })
    }

    /// The typical baseline θ = (1/√n, …, 1/√n).
    pub fn equal_weights(n: usize) -> Self {
        assert!(n > 0, "need at least one weight");
        let v = 1.0 / (n as f64).sqrt();
        ThetaVector { w: vec![v; n] }
    }

    /// Uniform draw from the sphere: normalized standard Gaussian vector.
    pub fn sample_sphere<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        assert!(n > 0, "need at least one weight");
        loop {
            let w: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
            let norm2: f64 = w.iter().map(|v| v * v).sum();
            if norm2 > 1e-280 {
                let inv = norm2.sqrt().recip();
                return ThetaVector { w: w.into_iter().map(|v| v * inv).collect() };
            }
        }
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    /// Signed power sum Σⱼ θⱼᵖ (so odd p can cancel).
    pub fn power_sum(&self, p: u32) -> f64 {
        self.w.iter().map(|v| v.powi(p as i32)).sum()
    }

    /// Σⱼ θⱼ⁴, the scale of the leading fourth-order correction.
    pub fn l4(&self) -> f64 {
        self.power_sum(4)
    }
}

/// One draw of the weighted sum Σⱼ θⱼXⱼ, Xⱼ i.i.d. with the given
/// coordinate law.
pub fn sample_weighted_sum<R: Rng + ?Sized>(
    spec: &DistributionSpec,
    theta: &ThetaVector,
    rng: &mut R,
) -> Vec<f64> {
    let k = spec.k();
    let mut out = vec![0.0f64; k];
    let mut x = vec![0.0f64; k];
    for &t in theta.weights() {
        spec.sample_vector(rng, &mut x);
        for (o, v) in out.iter_mut().zip(&x) {
            *o += t * v;
        }
    }
    out
}

/// Two-sided Wilson score interval for a binomial proportion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilsonInterval {
    pub lo: f64,
    pub hi: f64,
}

impl WilsonInterval {
    /// 95% interval for `hits` successes out of `samples`.
    pub fn from_counts(hits: u64, samples: u64) -> Self {
        let n = samples as f64;
        let p = hits as f64 / n;
        let z2 = WILSON_Z_95 * WILSON_Z_95;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = WILSON_Z_95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
        WilsonInterval { lo: (center - half).max(0.0), hi: (center + half).min(1.0) }
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lo <= p && p <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Monte Carlo estimate of P(Σθⱼ Xⱼ ∈ set) with its 95% Wilson interval.
pub fn empirical_probability<R: Rng + ?Sized>(
    spec: &DistributionSpec,
    theta: &ThetaVector,
    set: &ConvexSetSpec,
    samples: u64,
    rng: &mut R,
) -> Result<(f64, WilsonInterval)> {
    set.validate()?;
    if set.k() != spec.k() {
        return Err(Error::DimensionMismatch { expected: spec.k(), got: set.k() });
    }
    if samples == 0 {
        return Err(Error::EmptySamples);
    }
    let k = spec.k();
    let mut s = vec![0.0f64; k];
    let mut x = vec![0.0f64; k];
    let mut hits = 0u64;
    for _ in 0..samples {
        s.iter_mut().for_each(|v| *v = 0.0);
        for &t in theta.weights() {
            spec.sample_vector(rng, &mut x);
            for (o, v) in s.iter_mut().zip(&x) {
                *o += t * v;
            }
        }
        if set.contains(&s) {
            hits += 1;
        }
    }
    Ok((hits as f64 / samples as f64, WilsonInterval::from_counts(hits, samples)))
}

/// Running compensated (Neumaier) sum.
#[derive(Debug, Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.c += (self.sum - t) + v;
        } else {
            self.c += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Exact box probabilities for the weighted sum, via meet-in-the-middle
/// enumeration (discrete laws) or in closed form (Gaussian summands, whose
/// weighted sum is exactly standard normal for any θ on the sphere).
#[derive(Debug, Clone)]
pub struct ExactBoxEvaluator {
    k: usize,
    kind: EvaluatorKind,
}

#[derive(Debug, Clone)]
enum EvaluatorKind {
    Gaussian,
    Discrete {
        /// (partial sum, probability) for the first half of the weights.
        a_side: Vec<(f64, f64)>,
        /// Sorted partial sums for the second half…
        b_vals: Vec<f64>,
        /// …with compensated prefix probabilities (len = b_vals.len() + 1).
        b_prefix: Vec<f64>,
    },
}

fn enumerate_half(weights: &[f64], support: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut acc = vec![(0.0f64, 1.0f64)];
    for &t in weights {
        let mut next = Vec::with_capacity(acc.len() * support.len());
        for &(s, p) in &acc {
            for &(v, pv) in support {
                next.push((s + t * v, p * pv));
            }
        }
        acc = next;
    }
    acc
}

impl ExactBoxEvaluator {
    pub fn new(spec: &DistributionSpec, theta: &ThetaVector) -> Result<Self> {
        let k = spec.k();
        if matches!(spec.law(), CoordinateLaw::Gaussian) {
            return Ok(ExactBoxEvaluator { k, kind: EvaluatorKind::Gaussian });
        }
        let support = spec.support_1d()?;
        let n = theta.n();
        if n > MAX_EXACT_SUMMANDS {
            return Err(Error::EnumerationTooLarge { n, max: MAX_EXACT_SUMMANDS });
        }
        let split = n.div_ceil(2);
        let a_side = enumerate_half(&theta.weights()[..split], &support);
        let mut b_side = enumerate_half(&theta.weights()[split..], &support);
        b_side.sort_unstable_by(|x, y| x.0.partial_cmp(&y.0).expect("finite sums"));
        let mut b_vals = Vec::with_capacity(b_side.len());
        let mut b_prefix = Vec::with_capacity(b_side.len() + 1);
        let mut run = Compensated::default();
        b_prefix.push(0.0);
        for (v, p) in b_side {
            b_vals.push(v);
            run.add(p);
            b_prefix.push(run.value());
        }
        Ok(ExactBoxEvaluator { k, kind: EvaluatorKind::Discrete { a_side, b_vals, b_prefix } })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// P(lo ≤ Sᵢ ≤ hi) for one coordinate of the sum (closed interval).
    fn axis_probability(&self, lo: f64, hi: f64) -> Result<f64> {
        match &self.kind {
            EvaluatorKind::Gaussian => gaussian_partial_integral(0, lo, hi),
            EvaluatorKind::Discrete { a_side, b_vals, b_prefix } => {
                let mut total = Compensated::default();
                for &(a, pa) in a_side {
                    // window of b with lo − a ≤ b ≤ hi − a, both ends closed
                    let start = b_vals.partition_point(|&b| b < lo - a);
                    let end = b_vals.partition_point(|&b| b <= hi - a);
                    if end > start {
                        total.add(pa * (b_prefix[end] - b_prefix[start]));
                    }
                }
                Ok(total.value().clamp(0.0, 1.0))
            }
        }
    }

    /// P(S ∈ box), the product of the per-axis probabilities (coordinates of
    /// the sum are independent).
    pub fn box_probability(&self, lo: &[f64], hi: &[f64]) -> Result<f64> {
        let set = ConvexSetSpec::Box { lo: lo.to_vec(), hi: hi.to_vec() };
        set.validate()?;
        if lo.len() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, got: lo.len() });
        }
        let mut p = 1.0;
        for (a, b) in lo.iter().zip(hi) {
            p *= self.axis_probability(*a, *b)?;
            if p == 0.0 {
                break;
            }
        }
        Ok(p)
    }
}

/// One-shot convenience around [`ExactBoxEvaluator`].
pub fn exact_box_probability(
    spec: &DistributionSpec,
    theta: &ThetaVector,
    lo: &[f64],
    hi: &[f64],
) -> Result<f64> {
    ExactBoxEvaluator::new(spec, theta)?.box_probability(lo, hi)
}
