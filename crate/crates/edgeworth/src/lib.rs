//! Edgeworth corrections to the central limit theorem for weighted sums.
//!
//! Take i.i.d. standardized random vectors X₁, …, Xₙ in ℝᵏ and a weight
//! vector θ on the unit sphere of ℝⁿ. The weighted sum S_θ = Σⱼ θⱼXⱼ is
//! approximately standard normal; this crate is about what the
//! approximation misses and how to correct it:
//!
//! - **exact mixed moments and cumulants** of catalog coordinate laws, in
//!   rational or floating-point arithmetic ([`moments`], [`cumulants`]);
//! - **corrected densities**: the normal density times a polynomial factor
//!   built from third- and higher-order cumulants ([`expansion`]);
//! - **region probabilities** under the Gaussian and under the corrections —
//!   boxes in closed form, balls and half-spaces too ([`measures`]);
//! - **exact reference probabilities** for discrete summands by
//!   meet-in-the-middle enumeration ([`weighted_sums`]);
//! - **convergence-rate experiments** measuring how fast each approximation
//!   closes in on the truth as n grows ([`harness`]): the plain Gaussian
//!   error decays like 1/n, while the fourth-order correction brings typical
//!   weight vectors to n^{−3/2} or faster — the phenomenon the experiment
//!   suite quantifies.
//!
//! # Where to start
//!
//! The `examples/` directory is the guided tour; each example is runnable on
//! its own and prints what it computes:
//!
//! - `cumulant_roundtrip` — exact moments ↔ cumulants, both directions;
//! - `hermite_gaussian` — Hermite polynomials, Gaussian derivatives and
//!   partial integrals;
//! - `density_profile` — corrected density curves for a weighted sum;
//! - `corrected_cdf_1d` — the one-dimensional corrected distribution
//!   function against the exact law;
//! - `box_measure` — closed-form box probabilities under an expansion;
//! - `exact_vs_empirical` — the exact enumerator against Monte Carlo;
//! - `sphere_moments` — moments of uniform weight vectors on the sphere;
//! - `rate_demo` — a small end-to-end convergence-rate experiment.
//!
//! The `edgeworth` binary exposes the same machinery as subcommands
//! (`cumulants`, `density`, `measure`, `exact`, `rate`).
//!
//! # Conventions
//!
//! Hermite polynomials are the probabilists' He_n. Multi-indices order
//! tensor entries by total degree, then reverse-lexicographically, and that
//! order is canonical in every serialized tensor. Expansions default to
//! [`SignConvention::Plus`], the sign under which the one-dimensional
//! distribution function picks up its classical −κ₄/(8n)·He₃·φ correction;
//! weight scaling is either per weight vector ([`ScaleConvention::PerTheta`])
//! or averaged over the sphere ([`ScaleConvention::Averaged`]).

pub mod cumulants;
pub mod error;
pub mod expansion;
pub mod harness;
pub mod hermite;
pub mod measures;
pub mod moments;
pub mod multiindex;
pub mod scalar;
mod tensor;
pub mod weighted_sums;

pub use cumulants::{
    cumulants_to_moments, moments_to_cumulants, sphere_averaged_cumulants, weighted_sum_cumulants,
    CumulantSet,
};
pub use error::{Error, Result};
pub use expansion::{
    closed_form_corrected_density, corrected_normal_cdf, correction_polynomial,
    fourth_moment_bracket, EdgeworthExpansion, HermiteCombination, ScaleConvention, SignConvention,
    MAX_CORRECTION_ORDER, STANDARDIZATION_TOLERANCE,
};
pub use harness::{
    delta_for_theta, fit_log_slope, format_significant, rate_experiment, ApproxMode, BoxBounds,
    Estimator, ExperimentConfig, FamilyConfig, ModeSlope, RateReport, RateRow, SetFamily,
};
pub use hermite::{
    gaussian_derivative, gaussian_partial_integral, hermite, hermite_product, normal_cdf, phi_1d,
    standard_normal_density, HermitePoly, MAX_HERMITE,
};
pub use measures::{
    expansion_measure_box, expansion_measure_mc, gaussian_measure, ConvexSetSpec,
};
pub use moments::{
    check_standardized, empirical_moments, CoordinateLaw, DistributionSpec, MomentSet, SpecConfig,
    StandardizedReport, MAX_ANALYTIC_ORDER,
};
pub use multiindex::{enumerate_degree, enumerate_up_to, MultiIndex};
pub use scalar::{ArithmeticMode, Scalar};
pub use weighted_sums::{
    empirical_probability, exact_box_probability, sample_weighted_sum, ExactBoxEvaluator,
    ThetaVector, WilsonInterval, MAX_EXACT_SUMMANDS, SPHERE_TOLERANCE, WILSON_Z_95,
};
