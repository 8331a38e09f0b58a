//! Convergence-rate experiments: how fast do Gaussian and corrected
//! approximations approach the true law of the weighted sum as n grows?
//!
//! One experiment fixes a coordinate law, a grid of n values, and a family
//! of boxes. For each n it draws `theta_draws` uniform weight vectors from
//! the sphere; for each draw it computes the worst absolute deviation over
//! the family between a reference probability (exact enumeration, or Monte
//! Carlo) and each approximation mode. The per-n mean deviations then fit a
//! log-log line whose slope is the observed convergence exponent — the
//! quantity the experiments exist to measure: plain Gaussian approximation
//! decays like 1/n, while the fourth-order correction removes the leading
//! term and typical weight vectors decay like n^{−3/2} or faster.
//!
//! Reproducibility: every (n, draw) cell derives its own random stream from
//! the master seed (streams 2·cell for the weight vector, 2·cell + 1 for
//! Monte Carlo references), so reports are byte-identical however many
//! threads the cells are spread across.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cumulants::{
    moments_to_cumulants, sphere_averaged_cumulants, weighted_sum_cumulants, CumulantSet,
};
use crate::error::{Error, Result};
use crate::expansion::{EdgeworthExpansion, ScaleConvention, SignConvention};
use crate::measures::{expansion_measure_box, gaussian_measure, ConvexSetSpec};
use crate::moments::{DistributionSpec, SpecConfig};
use crate::weighted_sums::{ExactBoxEvaluator, ThetaVector};

/// One approximation whose deviation from the reference is tracked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ApproxMode {
    /// The standard normal law itself.
    Plain,
    /// Corrected expansion of the given order, sign and weight scale.
    Edgeworth { order: u32, sign: SignConvention, scale: ScaleConvention },
}

impl ApproxMode {
    /// Stable identifier, e.g. `plain` or `edgeworth_s2_plus_theta`.
    pub fn id(&self) -> String {
        match self {
            ApproxMode::Plain => "plain".into(),
            ApproxMode::Edgeworth { order, sign, scale } => {
                format!("edgeworth_s{order}_{}_{}", sign.name(), scale.name())
            }
        }
    }
}

impl std::fmt::Display for ApproxMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.id())
    }
}

impl std::str::FromStr for ApproxMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "plain" {
            return Ok(ApproxMode::Plain);
        }
        let parts: Vec<&str> = s.split('_').collect();
        if parts.len() == 4 && parts[0] == "edgeworth" {
            if let Some(order_str) = parts[1].strip_prefix('s') {
                if let Ok(order) = order_str.parse::<u32>() {
                    let sign: SignConvention = parts[2].parse()?;
                    let scale: ScaleConvention = parts[3].parse()?;
                    return Ok(ApproxMode::Edgeworth { order, sign, scale });
                }
            }
        }
        Err(Error::Parse(format!(
            "unknown approximation mode {s:?} (expected \"plain\" or \
             \"edgeworth_s<order>_<plus|minus>_<theta|avg>\")"
        )))
    }
}

impl Serialize for ApproxMode {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.id())
    }
}

impl<'de> Deserialize<'de> for ApproxMode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An axis-aligned box given by its two corner lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxBounds {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

/// The family of boxes a deviation is maximized over.
#[derive(Debug, Clone, PartialEq)]
pub struct SetFamily {
    boxes: Vec<BoxBounds>,
}

impl SetFamily {
    /// One-dimensional distribution-function family {(−∞, x]} on an even
    /// grid of `points` thresholds.
    pub fn cdf_grid(min: f64, max: f64, points: usize) -> Result<Self> {
        if points < 2 || min.partial_cmp(&max) != Some(std::cmp::Ordering::Less) {
            return Err(Error::Config(format!(
                "cdf grid needs at least 2 points and min < max, got {points} on [{min}, {max}]"
            )));
        }
        let step = (max - min) / (points - 1) as f64;
        let boxes = (0..points)
            .map(|i| BoxBounds { lo: vec![f64::NEG_INFINITY], hi: vec![min + step * i as f64] })
            .collect();
        Ok(SetFamily { boxes })
    }

    /// Lower-orthant family {(−∞, x₁]×⋯×(−∞, x_k]} with each threshold on
    /// an even `per_axis`-point grid.
    pub fn lower_orthant_grid(k: usize, min: f64, max: f64, per_axis: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyIndex);
        }
        if per_axis < 2 || min.partial_cmp(&max) != Some(std::cmp::Ordering::Less) {
            return Err(Error::Config(format!(
                "orthant grid needs at least 2 points per axis and min < max, \
                 got {per_axis} on [{min}, {max}]"
            )));
        }
        let step = (max - min) / (per_axis - 1) as f64;
        let total = per_axis.pow(k as u32);
        let mut boxes = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rest = flat;
            let mut hi = vec![0.0; k];
            for h in hi.iter_mut() {
                *h = min + step * (rest % per_axis) as f64;
                rest /= per_axis;
            }
            boxes.push(BoxBounds { lo: vec![f64::NEG_INFINITY; k], hi });
        }
        Ok(SetFamily { boxes })
    }

    /// Explicit list of boxes, validated.
    pub fn explicit(boxes: Vec<BoxBounds>) -> Result<Self> {
        if boxes.is_empty() {
            return Err(Error::Config("set family must contain at least one box".into()));
        }
        let k = boxes[0].lo.len();
        for b in &boxes {
            let set = ConvexSetSpec::Box { lo: b.lo.clone(), hi: b.hi.clone() };
            set.validate()?;
            if b.lo.len() != k {
                return Err(Error::DimensionMismatch { expected: k, got: b.lo.len() });
            }
        }
        Ok(SetFamily { boxes })
    }

    /// The default family: a 41-point distribution-function grid on [−4, 4]
    /// for k = 1, a 9-per-axis lower-orthant grid on [−3, 3] otherwise.
    pub fn default_for(k: usize) -> Result<Self> {
        if k == 1 {
            SetFamily::cdf_grid(-4.0, 4.0, 41)
        } else {
            SetFamily::lower_orthant_grid(k, -3.0, 3.0, 9)
        }
    }

    pub fn boxes(&self) -> &[BoxBounds] {
        &self.boxes
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }
}

/// Serializable description of a box family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyConfig {
    CdfGrid { min: f64, max: f64, points: usize },
    OrthantGrid { min: f64, max: f64, per_axis: usize },
    Explicit { boxes: Vec<BoxBounds> },
}

impl FamilyConfig {
    pub fn build(&self, k: usize) -> Result<SetFamily> {
        match self {
            FamilyConfig::CdfGrid { min, max, points } => {
                if k != 1 {
                    return Err(Error::Config(format!(
                        "cdf grid family is one-dimensional, experiment has k = {k}"
                    )));
                }
                SetFamily::cdf_grid(*min, *max, *points)
            }
            FamilyConfig::OrthantGrid { min, max, per_axis } => {
                SetFamily::lower_orthant_grid(k, *min, *max, *per_axis)
            }
            FamilyConfig::Explicit { boxes } => {
                let fam = SetFamily::explicit(boxes.clone())?;
                if fam.boxes[0].lo.len() != k {
                    return Err(Error::DimensionMismatch {
                        expected: k,
                        got: fam.boxes[0].lo.len(),
                    });
                }
                Ok(fam)
            }
        }
    }
}

/// How reference probabilities are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Estimator {
    /// Meet-in-the-middle enumeration (discrete laws; Gaussian in closed
    /// form).
    Exact,
    /// Monte Carlo with the given sample count per weight draw.
    Mc { samples: u64 },
}

impl Estimator {
    pub fn id(&self) -> String {
        match self {
            Estimator::Exact => "exact".into(),
            Estimator::Mc { samples } => format!("mc:{samples}"),
        }
    }
}

impl std::str::FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "exact" {
            return Ok(Estimator::Exact);
        }
        if let Some(n) = s.strip_prefix("mc:") {
            let samples = n
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad sample count in estimator {s:?}")))?;
            return Ok(Estimator::Mc { samples });
        }
        Err(Error::Parse(format!(
            "unknown estimator {s:?} (expected \"exact\" or \"mc:<samples>\")"
        )))
    }
}

fn default_k() -> usize {
    1
}

fn default_theta_draws() -> usize {
    200
}

fn default_estimator() -> Estimator {
    Estimator::Exact
}

fn default_modes() -> Vec<ApproxMode> {
    vec![
        ApproxMode::Plain,
        ApproxMode::Edgeworth {
            order: 2,
            sign: SignConvention::Plus,
            scale: ScaleConvention::PerTheta,
        },
    ]
}

/// Full description of a rate experiment; serializable, so experiments can
/// be read from JSON config files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Coordinate law of the summands.
    pub spec: SpecConfig,
    /// Dimension of each summand.
    #[serde(default = "default_k")]
    pub k: usize,
    /// Numbers of summands, strictly increasing.
    pub n_grid: Vec<usize>,
    /// Weight vectors drawn per grid point.
    #[serde(default = "default_theta_draws")]
    pub theta_draws: usize,
    /// Box family; defaults per dimension when absent.
    #[serde(default)]
    pub family: Option<FamilyConfig>,
    /// Reference estimator.
    #[serde(default = "default_estimator")]
    pub estimator: Estimator,
    /// Approximations to score.
    #[serde(default = "default_modes")]
    pub modes: Vec<ApproxMode>,
    /// Master seed; all cell streams derive from it.
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::EmptyIndex);
        }
        if self.n_grid.len() < 2 {
            return Err(Error::Config("n grid needs at least two points for a slope".into()));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("n grid must be strictly increasing".into()));
        }
        if self.n_grid[0] == 0 {
            return Err(Error::Config("n grid entries must be positive".into()));
        }
        if self.theta_draws < 2 {
            return Err(Error::Config("need at least two weight draws per grid point".into()));
        }
        if self.modes.is_empty() {
            return Err(Error::Config("need at least one approximation mode".into()));
        }
        let mut ids: Vec<String> = self.modes.iter().map(ApproxMode::id).collect();
        ids.sort();
        ids.dedup();
        if ids.len() != self.modes.len() {
            return Err(Error::Config("approximation modes must be distinct".into()));
        }
        if let Estimator::Mc { samples } = self.estimator {
            if samples < 1000 {
                return Err(Error::Config(format!(
                    "Monte Carlo estimator needs at least 1000 samples, got {samples}"
                )));
            }
        }
        Ok(())
    }
}

/// Per-(n, mode) deviation statistics over the weight draws.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub n: usize,
    pub mode: String,
    pub mean_delta: f64,
    pub stderr_delta: f64,
    pub q50: f64,
    pub q90: f64,
}

/// Log-log slope of mean deviation against n for one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSlope {
    pub mode: String,
    pub slope: f64,
    pub intercept: f64,
}

/// The result of one rate experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub spec: String,
    pub k: usize,
    pub seed: u64,
    pub estimator: String,
    pub theta_draws: usize,
    pub n_grid: Vec<usize>,
    pub modes: Vec<String>,
    pub rows: Vec<RateRow>,
    pub slopes: Vec<ModeSlope>,
}

impl RateReport {
    pub fn slope_for(&self, mode: &str) -> Option<f64> {
        self.slopes.iter().find(|s| s.mode == mode).map(|s| s.slope)
    }

    pub fn rows_for(&self, mode: &str) -> Vec<&RateRow> {
        self.rows.iter().filter(|r| r.mode == mode).collect()
    }

    /// Deterministic JSON rendering: fixed field order, floats always in
    /// scientific notation with 17 significant digits, so identical
    /// experiments produce identical bytes.
    pub fn to_json(&self) -> String {
        let mut out = String::with_capacity(1024);
        out.push_str("{\n");
        out.push_str(&format!("  \"spec\": \"{}\",\n", self.spec));
        out.push_str(&format!("  \"k\": {},\n", self.k));
        out.push_str(&format!("  \"seed\": {},\n", self.seed));
        out.push_str(&format!("  \"estimator\": \"{}\",\n", self.estimator));
        out.push_str(&format!("  \"theta_draws\": {},\n", self.theta_draws));
        let grid: Vec<String> = self.n_grid.iter().map(|n| n.to_string()).collect();
        out.push_str(&format!("  \"n_grid\": [{}],\n", grid.join(", ")));
        let modes: Vec<String> = self.modes.iter().map(|m| format!("\"{m}\"")).collect();
        out.push_str(&format!("  \"modes\": [{}],\n", modes.join(", ")));
        out.push_str("  \"rows\": [\n");
        for (i, r) in self.rows.iter().enumerate() {
            out.push_str(&format!(
                "    {{\"n\": {}, \"mode\": \"{}\", \"mean_delta\": {:.16e}, \
                 \"stderr_delta\": {:.16e}, \"q50\": {:.16e}, \"q90\": {:.16e}}}{}\n",
                r.n,
                r.mode,
                r.mean_delta,
                r.stderr_delta,
                r.q50,
                r.q90,
                if i + 1 == self.rows.len() { "" } else { "," }
            ));
        }
        out.push_str("  ],\n");
        out.push_str("  \"slopes\": [\n");
        for (i, s) in self.slopes.iter().enumerate() {
            out.push_str(&format!(
                "    {{\"mode\": \"{}\", \"slope\": {:.16e}, \"intercept\": {:.16e}}}{}\n",
                s.mode,
                s.slope,
                s.intercept,
                if i + 1 == self.slopes.len() { "" } else { "," }
            ));
        }
        out.push_str("  ]\n}\n");
        out
    }

    /// CSV rendering of the rows, same float convention as the JSON.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,mode,mean_delta,stderr_delta,q50,q90\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                r.n, r.mode, r.mean_delta, r.stderr_delta, r.q50, r.q90
            ));
        }
        out
    }
}

/// Unweighted least-squares slope and intercept of ln(mean) against ln(n).
pub fn fit_log_slope(ns: &[usize], means: &[f64]) -> Result<(f64, f64)> {
    if ns.len() != means.len() || ns.len() < 2 {
        return Err(Error::Config("slope fit needs matching lists of at least two points".into()));
    }
    let mut xs = Vec::with_capacity(ns.len());
    let mut ys = Vec::with_capacity(ns.len());
    for (&n, &m) in ns.iter().zip(means) {
        if m <= 0.0 || !m.is_finite() {
            return Err(Error::Numeric(format!(
                "mean deviation {m} at n = {n} has no logarithm; cannot fit a rate"
            )));
        }
        xs.push((n as f64).ln());
        ys.push(m.ln());
    }
    let len = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / len;
    let ybar = ys.iter().sum::<f64>() / len;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    Ok((slope, ybar - slope * xbar))
}

/// Value at fraction `q` of the sorted sample, by linear interpolation.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    if sorted.len() == 1 {
        return sorted[0];
    }
    let pos = q * (sorted.len() - 1) as f64;
    let idx = pos.floor() as usize;
    let frac = pos - idx as f64;
    if idx + 1 >= sorted.len() {
        return sorted[sorted.len() - 1];
    }
    sorted[idx] * (1.0 - frac) + sorted[idx + 1] * frac
}

/// Worst deviation over the family between the reference probability and
/// each mode's approximation, for one weight vector. Modes are reported in
/// input order.
pub fn delta_for_theta(
    spec: &DistributionSpec,
    summand_cumulants: &CumulantSet<f64>,
    theta: &ThetaVector,
    family: &SetFamily,
    modes: &[ApproxMode],
    estimator: Estimator,
    mc_rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    let k = spec.k();
    // reference probability per box
    let references: Vec<f64> = match estimator {
        Estimator::Exact => {
            let ev = ExactBoxEvaluator::new(spec, theta)?;
            family
                .boxes()
                .iter()
                .map(|b| ev.box_probability(&b.lo, &b.hi))
                .collect::<Result<_>>()?
        }
        Estimator::Mc { samples } => {
            let mut hits = vec![0u64; family.len()];
            let mut s = vec![0.0f64; k];
            let mut x = vec![0.0f64; k];
            for _ in 0..samples {
                s.iter_mut().for_each(|v| *v = 0.0);
                for &t in theta.weights() {
                    spec.sample_vector(mc_rng, &mut x);
                    for (o, v) in s.iter_mut().zip(&x) {
                        *o += t * v;
                    }
                }
                for (b, h) in family.boxes().iter().zip(hits.iter_mut()) {
                    if b.lo.iter().zip(&s).all(|(a, v)| v >= a)
                        && b.hi.iter().zip(&s).all(|(a, v)| v <= a)
                    {
                        *h += 1;
                    }
                }
            }
            hits.iter().map(|&h| h as f64 / samples as f64).collect()
        }
    };
    let mut out = Vec::with_capacity(modes.len());
    for mode in modes {
        let worst = match mode {
            ApproxMode::Plain => {
                let mut worst = 0.0f64;
                for (b, r) in family.boxes().iter().zip(&references) {
                    let set = ConvexSetSpec::Box { lo: b.lo.clone(), hi: b.hi.clone() };
                    worst = worst.max((gaussian_measure(&set)? - r).abs());
                }
                worst
            }
            ApproxMode::Edgeworth { order, sign, scale } => {
                let scaled = match scale {
                    ScaleConvention::PerTheta => weighted_sum_cumulants(summand_cumulants, theta)?,
                    ScaleConvention::Averaged => {
                        sphere_averaged_cumulants(summand_cumulants, theta.n())?
                    }
                };
                let exp = EdgeworthExpansion::new(&scaled, *order, *sign)?;
                let mut worst = 0.0f64;
                for (b, r) in family.boxes().iter().zip(&references) {
                    worst = worst.max((expansion_measure_box(&exp, &b.lo, &b.hi)? - r).abs());
                }
                worst
            }
        };
        if !worst.is_finite() {
            return Err(Error::Numeric(format!(
                "non-finite deviation for mode {} at n = {}",
                mode.id(),
                theta.n()
            )));
        }
        out.push(worst);
    }
    Ok(out)
}

/// Runs the full experiment described by the config.
pub fn rate_experiment(config: &ExperimentConfig) -> Result<RateReport> {
    config.validate()?;
    let spec = config.spec.build(config.k)?;
    let family = match &config.family {
        Some(f) => f.build(config.k)?,
        None => SetFamily::default_for(config.k)?,
    };
    let needed_order = config
        .modes
        .iter()
        .map(|m| match m {
            ApproxMode::Plain => 2,
            ApproxMode::Edgeworth { order, .. } => order + 2,
        })
        .max()
        .expect("modes non-empty");
    let moments = spec.analytic_moments::<f64>(needed_order.max(4))?;
    let summand_cumulants = moments_to_cumulants(&moments)?;

    let r_draws = config.theta_draws;
    let mut rows = Vec::with_capacity(config.n_grid.len() * config.modes.len());
    let mut means_per_mode: Vec<Vec<f64>> = vec![Vec::new(); config.modes.len()];
    for (ni, &n) in config.n_grid.iter().enumerate() {
        let per_cell: Vec<Vec<f64>> = (0..r_draws)
            .into_par_iter()
            .map(|r| -> Result<Vec<f64>> {
                let cell = (ni * r_draws + r) as u64;
                let mut theta_rng = ChaCha8Rng::seed_from_u64(config.seed);
                theta_rng.set_stream(2 * cell);
                let theta = ThetaVector::sample_sphere(n, &mut theta_rng);
                let mut mc_rng = ChaCha8Rng::seed_from_u64(config.seed);
                mc_rng.set_stream(2 * cell + 1);
                delta_for_theta(
                    &spec,
                    &summand_cumulants,
                    &theta,
                    &family,
                    &config.modes,
                    config.estimator,
                    &mut mc_rng,
                )
            })
            .collect::<Result<_>>()?;
        for (j, mode) in config.modes.iter().enumerate() {
            let mut deltas: Vec<f64> = per_cell.iter().map(|c| c[j]).collect();
            deltas.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite deltas"));
            let len = deltas.len() as f64;
            let mean = deltas.iter().sum::<f64>() / len;
            let var = deltas.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (len - 1.0);
            let stderr = (var / len).sqrt();
            means_per_mode[j].push(mean);
            rows.push(RateRow {
                n,
                mode: mode.id(),
                mean_delta: mean,
                stderr_delta: stderr,
                q50: quantile(&deltas, 0.5),
                q90: quantile(&deltas, 0.9),
            });
        }
    }
    let mut slopes = Vec::with_capacity(config.modes.len());
    for (j, mode) in config.modes.iter().enumerate() {
        let (slope, intercept) = fit_log_slope(&config.n_grid, &means_per_mode[j])?;
        slopes.push(ModeSlope { mode: mode.id(), slope, intercept });
    }
    Ok(RateReport {
        spec: spec.name().to_string(),
        k: config.k,
        seed: config.seed,
        estimator: config.estimator.id(),
        theta_draws: r_draws,
        n_grid: config.n_grid.clone(),
        modes: config.modes.iter().map(ApproxMode::id).collect(),
        rows,
        slopes,
    })
}

/// Formats `v` with the given number of significant digits in plain
/// positional notation (no exponent), e.g. 15 digits of φ(0) →
/// `0.398942280401433`.
pub fn format_significant(v: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}
