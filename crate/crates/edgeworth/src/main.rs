//! Command-line front end: cumulant tables, corrected densities, region
//! measures, exact reference probabilities and rate experiments.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use edgeworth::{
    empirical_probability, expansion_measure_box, expansion_measure_mc,
    format_significant, moments_to_cumulants, rate_experiment, sphere_averaged_cumulants,
    weighted_sum_cumulants, ApproxMode, ConvexSetSpec, CumulantSet, EdgeworthExpansion, Error,
    Estimator, ExactBoxEvaluator, ExperimentConfig, MomentSet, Result, ScaleConvention,
    SignConvention, SpecConfig, ThetaVector,
};

#[derive(Parser)]
#[command(
    name = "edgeworth",
    version,
    about = "Edgeworth-corrected normal approximations for weighted sums of i.i.d. vectors"
)]
struct Cli {
    /// Thread pool size for parallel experiments (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the cumulant tensor of a coordinate law, optionally scaled for
    /// a weighted sum of n terms.
    Cumulants {
        /// Coordinate law: rademacher, uniform, gaussian, shifted_bernoulli,
        /// or three_point:<a_squared>.
        #[arg(long)]
        spec: String,
        /// Dimension of each summand.
        #[arg(short, long, default_value_t = 1)]
        k: usize,
        /// Highest tensor order.
        #[arg(long, default_value_t = 4)]
        order: u32,
        /// Arithmetic: "exact" rationals or "float".
        #[arg(long, default_value = "exact")]
        mode: String,
        /// Weights to scale by (comma-separated; switches to float output).
        #[arg(long)]
        theta: Option<String>,
        /// Scale by the sphere average for this many summands instead
        /// (switches to float output).
        #[arg(long)]
        navg: Option<usize>,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the corrected density of a weighted sum at given points.
    Density {
        #[arg(long)]
        spec: String,
        #[arg(short, long, default_value_t = 1)]
        k: usize,
        /// Correction order s (0 = plain Gaussian).
        #[arg(short = 's', long, default_value_t = 2)]
        order: u32,
        /// Sign convention: plus or minus.
        #[arg(long, default_value = "plus")]
        sign: String,
        /// Explicit weights (comma-separated).
        #[arg(long, conflicts_with = "n")]
        theta: Option<String>,
        /// Equal weights 1/√n over this many summands.
        #[arg(short, long)]
        n: Option<usize>,
        /// Weight scale: theta (power sums) or avg (sphere average).
        #[arg(long, default_value = "theta")]
        scale: String,
        /// Evaluation point x1,…,xk; repeatable.
        #[arg(long = "at", required = true)]
        at: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure of a region under the corrected expansion (closed form for
    /// boxes, Monte Carlo otherwise).
    Measure {
        #[arg(long)]
        spec: String,
        #[arg(short, long, default_value_t = 1)]
        k: usize,
        #[arg(short = 's', long, default_value_t = 2)]
        order: u32,
        #[arg(long, default_value = "plus")]
        sign: String,
        #[arg(long, conflicts_with = "n")]
        theta: Option<String>,
        #[arg(short, long)]
        n: Option<usize>,
        #[arg(long, default_value = "theta")]
        scale: String,
        /// Region: "box lo1,…,lok hi1,…,hik", "ball c1,…,ck r", or
        /// "halfspace u1,…,uk c".
        #[arg(long)]
        set: String,
        /// Monte Carlo samples for non-box regions.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact probability that the weighted sum lands in a box (discrete or
    /// Gaussian coordinate laws), with an optional Monte Carlo cross-check.
    Exact {
        #[arg(long)]
        spec: String,
        #[arg(short, long, default_value_t = 1)]
        k: usize,
        #[arg(long, conflicts_with = "n")]
        theta: Option<String>,
        #[arg(short, long)]
        n: Option<usize>,
        /// Box region, e.g. "box -inf,-inf 1,0.5".
        #[arg(long)]
        set: String,
        /// Also print an empirical estimate with this many samples.
        #[arg(long)]
        check_samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a convergence-rate experiment and write its report.
    Rate {
        /// JSON experiment config file; inline flags override nothing when
        /// this is given.
        #[arg(long, conflicts_with_all = ["spec", "n_grid"])]
        config: Option<PathBuf>,
        #[arg(long)]
        spec: Option<String>,
        #[arg(short, long, default_value_t = 1)]
        k: usize,
        /// Comma-separated n values, e.g. 8,12,16,20,24.
        #[arg(long = "n-grid")]
        n_grid: Option<String>,
        /// Weight draws per grid point.
        #[arg(long, default_value_t = 200)]
        draws: usize,
        /// Reference estimator: exact or mc:<samples>.
        #[arg(long, default_value = "exact")]
        estimator: String,
        /// Comma-separated mode ids, e.g. plain,edgeworth_s2_plus_theta.
        #[arg(long, default_value = "plain,edgeworth_s2_plus_theta")]
        modes: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the rows as CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn parse_weights(s: &str) -> Result<ThetaVector> {
    let w: Vec<f64> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad weight {t:?}")))
        })
        .collect::<Result<_>>()?;
    ThetaVector::new(w)
}

fn parse_point(s: &str, k: usize) -> Result<Vec<f64>> {
    let x: Vec<f64> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad coordinate {t:?}")))
        })
        .collect::<Result<_>>()?;
    if x.len() != k {
        return Err(Error::DimensionMismatch { expected: k, got: x.len() });
    }
    Ok(x)
}

/// Resolves the weight options shared by several subcommands into scaled
/// cumulants for the weighted sum.
fn scaled_cumulants(
    spec_name: &str,
    k: usize,
    order: u32,
    theta: &Option<String>,
    n: &Option<usize>,
    scale: &str,
) -> Result<CumulantSet<f64>> {
    let spec = spec_name.parse::<SpecConfig>()?.build(k)?;
    let moments: MomentSet<f64> = spec.analytic_moments(order + 2)?;
    let base = moments_to_cumulants(&moments)?;
    let scale: ScaleConvention = scale.parse()?;
    let theta = match (theta, n) {
        (Some(list), _) => parse_weights(list)?,
        (None, Some(n)) => ThetaVector::equal_weights(*n),
        (None, None) => {
            return Err(Error::Config(
                "need weights: pass --theta w1,…,wn or --n <count>".into(),
            ))
        }
    };
    match scale {
        ScaleConvention::PerTheta => weighted_sum_cumulants(&base, &theta),
        ScaleConvention::Averaged => sphere_averaged_cumulants(&base, theta.n()),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Cumulants { spec, k, order, mode, theta, navg, out } => {
            let parsed = spec.parse::<SpecConfig>()?.build(k)?;
            let text = if theta.is_some() || navg.is_some() {
                let moments: MomentSet<f64> = parsed.analytic_moments(order)?;
                let base = moments_to_cumulants(&moments)?;
                let scaled = match (&theta, navg) {
                    (Some(list), None) => weighted_sum_cumulants(&base, &parse_weights(list)?)?,
                    (None, Some(n)) => sphere_averaged_cumulants(&base, n)?,
                    _ => {
                        return Err(Error::Config(
                            "pass at most one of --theta and --navg".into(),
                        ))
                    }
                };
                scaled.to_text()
            } else if mode == "exact" {
                let moments = parsed.analytic_moments::<num_rational::BigRational>(order)?;
                moments_to_cumulants(&moments)?.to_text()
            } else if mode == "float" {
                let moments: MomentSet<f64> = parsed.analytic_moments(order)?;
                moments_to_cumulants(&moments)?.to_text()
            } else {
                return Err(Error::Config(format!(
                    "unknown arithmetic mode {mode:?} (expected \"exact\" or \"float\")"
                )));
            };
            emit(&out, &text)
        }
        Cmd::Density { spec, k, order, sign, theta, n, scale, at, out } => {
            let sign: SignConvention = sign.parse()?;
            let cs = scaled_cumulants(&spec, k, order, &theta, &n, &scale)?;
            let exp = EdgeworthExpansion::new(&cs, order, sign)?;
            let mut text = String::new();
            for point in &at {
                let x = parse_point(point, k)?;
                let v = exp.density(&x)?;
                text.push_str(&format_significant(v, 15));
                text.push('\n');
            }
            emit(&out, &text)
        }
        Cmd::Measure { spec, k, order, sign, theta, n, scale, set, samples, seed, out } => {
            let sign: SignConvention = sign.parse()?;
            let cs = scaled_cumulants(&spec, k, order, &theta, &n, &scale)?;
            let exp = EdgeworthExpansion::new(&cs, order, sign)?;
            let region: ConvexSetSpec = set.parse()?;
            let text = match &region {
                ConvexSetSpec::Box { lo, hi } => {
                    let v = expansion_measure_box(&exp, lo, hi)?;
                    format!("{}\n", format_significant(v, 15))
                }
                _ => {
                    let (est, se) = expansion_measure_mc(&exp, &region, samples, seed)?;
                    format!("{} {}\n", format_significant(est, 15), format_significant(se, 6))
                }
            };
            emit(&out, &text)
        }
        Cmd::Exact { spec, k, theta, n, set, check_samples, seed, out } => {
            let parsed = spec.parse::<SpecConfig>()?.build(k)?;
            let theta = match (&theta, n) {
                (Some(list), _) => parse_weights(list)?,
                (None, Some(n)) => ThetaVector::equal_weights(n),
                (None, None) => {
                    return Err(Error::Config(
                        "need weights: pass --theta w1,…,wn or --n <count>".into(),
                    ))
                }
            };
            let region: ConvexSetSpec = set.parse()?;
            let (lo, hi) = match &region {
                ConvexSetSpec::Box { lo, hi } => (lo.clone(), hi.clone()),
                _ => {
                    return Err(Error::InvalidSet(
                        "exact probabilities are available for boxes only".into(),
                    ))
                }
            };
            let ev = ExactBoxEvaluator::new(&parsed, &theta)?;
            let p = ev.box_probability(&lo, &hi)?;
            let mut text = format!("{}\n", format_significant(p, 15));
            if let Some(samples) = check_samples {
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let (est, interval) =
                    empirical_probability(&parsed, &theta, &region, samples, &mut rng)?;
                text.push_str(&format!(
                    "empirical {} wilson [{}, {}]\n",
                    format_significant(est, 6),
                    format_significant(interval.lo, 6),
                    format_significant(interval.hi, 6),
                ));
            }
            emit(&out, &text)
        }
        Cmd::Rate { config, spec, k, n_grid, draws, estimator, modes, seed, out, csv } => {
            let cfg: ExperimentConfig = match config {
                Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)
                    .map_err(|e| Error::Config(format!("bad experiment config: {e}")))?,
                None => {
                    let spec = spec.ok_or_else(|| {
                        Error::Config("pass --config FILE or --spec".into())
                    })?;
                    let grid = n_grid.ok_or_else(|| {
                        Error::Config("pass --n-grid n1,n2,… with --spec".into())
                    })?;
                    let n_grid: Vec<usize> = grid
                        .split(',')
                        .map(|t| {
                            t.trim()
                                .parse::<usize>()
                                .map_err(|_| Error::Parse(format!("bad grid entry {t:?}")))
                        })
                        .collect::<Result<_>>()?;
                    let modes: Vec<ApproxMode> = modes
                        .split(',')
                        .map(|t| t.trim().parse())
                        .collect::<Result<_>>()?;
                    ExperimentConfig {
                        spec: spec.parse()?,
                        k,
                        n_grid,
                        theta_draws: draws,
                        family: None,
                        estimator: estimator.parse::<Estimator>()?,
                        modes,
                        seed,
                    }
                }
            };
            let report = rate_experiment(&cfg)?;
            if let Some(path) = &csv {
                std::fs::write(path, report.to_csv())?;
            }
            match &out {
                Some(path) => {
                    std::fs::write(path, report.to_json())?;
                    // human summary on stdout when the report goes to a file
                    for s in &report.slopes {
                        println!("{}: slope {:.3}", s.mode, s.slope);
                    }
                }
                None => print!("{}", report.to_json()),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        // a second invocation in the same process would fail; that is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
