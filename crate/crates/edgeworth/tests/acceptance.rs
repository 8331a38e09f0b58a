//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `cargo test --test acceptance -- --nocapture` to see them all).
//!
//! A1  fourth-moment closed form ≡ generic correction pipeline (exact + float)
//! A2  moment ↔ cumulant round trip is exact in rational arithmetic
//! A3  averaged-scale box measures reproduce the corrected distribution function
//! A4  symmetric summands: corrected rate beats the Gaussian rate (typical θ)
//! A5  Monte Carlo confidence intervals are calibrated against exact values
//! A6  corrected densities integrate to one
//! A7  Gaussian derivative tensors and partial integrals agree with numerics
//! A8  averaged scaling cannot fix a skewed law: the rate stays first order

use edgeworth::{
    corrected_normal_cdf, correction_polynomial, cumulants_to_moments, empirical_probability,
    enumerate_up_to, expansion_measure_box, fourth_moment_bracket, gaussian_derivative,
    gaussian_partial_integral, moments_to_cumulants, phi_1d, rate_experiment,
    sphere_averaged_cumulants, ApproxMode, ConvexSetSpec, CumulantSet, DistributionSpec,
    EdgeworthExpansion, Estimator, ExactBoxEvaluator, ExperimentConfig, MomentSet, MultiIndex,
    ScaleConvention, SignConvention, ThetaVector,
};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rat(n: i64, d: i64) -> BigRational {
    use edgeworth::Scalar;
    BigRational::from_ratio(n, d)
}

fn verdict(id: &str, ok: bool, detail: &str) {
    println!("{id} {}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{id} failed: {detail}");
}

/// Random moment tensor of a standardized law with vanishing third moments
/// and arbitrary rational fourth moments.
fn random_standardized_moments(k: usize, rng: &mut ChaCha8Rng) -> MomentSet<BigRational> {
    MomentSet::from_fn(k, 4, |a| match a.degree() {
        1 | 3 => rat(0, 1),
        2 => {
            if a.exponents().contains(&2) {
                rat(1, 1)
            } else {
                rat(0, 1)
            }
        }
        _ => rat(rng.random_range(-50i64..50), rng.random_range(1i64..12)),
    })
    .unwrap()
}

#[test]
fn a1_fourth_moment_closed_form_matches_the_pipeline() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst_float = 0.0f64;
    let mut checked = 0usize;
    for k in 1..=4usize {
        for _ in 0..5 {
            let ms = random_standardized_moments(k, &mut rng);
            let cs = moments_to_cumulants(&ms).unwrap();
            let q2 = correction_polynomial(2, &cs).unwrap();
            let ms_f = ms.to_f64();
            let cs_f = moments_to_cumulants(&ms_f).unwrap();
            let q2_f = correction_polynomial(2, &cs_f).unwrap();
            for _ in 0..100 {
                let pt: Vec<BigRational> = (0..k)
                    .map(|_| rat(rng.random_range(-24i64..=24), rng.random_range(8i64..16)))
                    .collect();
                let direct = fourth_moment_bracket(&ms, &pt).unwrap();
                let pipeline = q2.eval(&pt).unwrap();
                assert_eq!(direct, pipeline, "exact mismatch at k={k}");
                let pt_f: Vec<f64> = pt.iter().map(edgeworth::Scalar::to_f64).collect();
                let diff = (fourth_moment_bracket(&ms_f, &pt_f).unwrap()
                    - q2_f.eval(&pt_f).unwrap())
                .abs();
                worst_float = worst_float.max(diff);
                checked += 1;
            }
        }
    }
    let ok = worst_float <= 1e-12;
    verdict(
        "A1",
        ok,
        &format!(
            "closed form == pipeline on {checked} rational points (k = 1..4, exact equality); \
             float deviation {worst_float:.2e} <= 1e-12"
        ),
    );
}

#[test]
fn a2_moment_cumulant_round_trip_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut sets = 0usize;
    for k in 1..=4usize {
        for _ in 0..5 {
            let ms = MomentSet::from_fn(k, 6, |_| {
                rat(rng.random_range(-60i64..60), rng.random_range(1i64..14))
            })
            .unwrap();
            let back = cumulants_to_moments(&moments_to_cumulants(&ms).unwrap()).unwrap();
            assert_eq!(back, ms, "round trip drifted at k={k}");
            sets += 1;
        }
    }
    // catalog laws as well, at their full analytic order
    for spec in [
        DistributionSpec::rademacher(3),
        DistributionSpec::uniform(2),
        DistributionSpec::gaussian(2),
        DistributionSpec::shifted_bernoulli(2),
        DistributionSpec::three_point(1, 2.0).unwrap(),
    ] {
        let ms: MomentSet<BigRational> = spec.analytic_moments(5).unwrap();
        let back = cumulants_to_moments(&moments_to_cumulants(&ms).unwrap()).unwrap();
        assert_eq!(back, ms, "round trip drifted for {}", spec.name());
        sets += 1;
    }
    verdict(
        "A2",
        true,
        &format!("{sets} rational tensors (k <= 4, order 6) round-tripped with zero error"),
    );
}

#[test]
fn a3_averaged_scale_reproduces_the_corrected_distribution_function() {
    let specs = [
        DistributionSpec::rademacher(1),
        DistributionSpec::uniform(1),
        DistributionSpec::three_point(1, 2.5).unwrap(),
        DistributionSpec::shifted_bernoulli(1),
    ];
    let mut worst = 0.0f64;
    for spec in &specs {
        let ms: MomentSet<f64> = spec.analytic_moments(4).unwrap();
        let beta4 = *ms.value(&MultiIndex::from_slice(&[4])).unwrap();
        let cs = moments_to_cumulants(&ms).unwrap();
        for n in [7usize, 20] {
            let averaged = sphere_averaged_cumulants(&cs, n).unwrap();
            let exp = EdgeworthExpansion::new(&averaged, 2, SignConvention::Plus).unwrap();
            for i in 0..50 {
                let x = -4.0 + 8.0 * i as f64 / 49.0;
                let measured =
                    expansion_measure_box(&exp, &[f64::NEG_INFINITY], &[x]).unwrap();
                let closed = corrected_normal_cdf(beta4, n, x);
                worst = worst.max((measured - closed).abs());
            }
        }
    }
    let ok = worst <= 1e-12;
    verdict(
        "A3",
        ok,
        &format!(
            "box measures match Phi(x) - (beta4-3)/(8n) He3(x) phi(x) for 4 laws x 2 sizes x \
             50 points; worst deviation {worst:.2e} <= 1e-12 (plus sign convention)"
        ),
    );
}

#[test]
fn a4_symmetric_summands_corrected_rate_beats_gaussian() {
    let config = ExperimentConfig {
        spec: "rademacher".parse().unwrap(),
        k: 1,
        n_grid: vec![8, 12, 16, 20, 24],
        theta_draws: 200,
        family: None,
        estimator: Estimator::Exact,
        modes: vec![
            ApproxMode::Plain,
            ApproxMode::Edgeworth {
                order: 2,
                sign: SignConvention::Plus,
                scale: ScaleConvention::Averaged,
            },
            ApproxMode::Edgeworth {
                order: 2,
                sign: SignConvention::Minus,
                scale: ScaleConvention::Averaged,
            },
        ],
        seed: 20_240_817,
    };
    let report = rate_experiment(&config).unwrap();
    let plain = report.slope_for("plain").unwrap();
    let corrected = report.slope_for("edgeworth_s2_plus_avg").unwrap();
    let corrected_ok = corrected <= -1.30;
    let plain_ok = (-1.25..=-0.80).contains(&plain);

    // ordering: once n is moderately large the corrected approximation must
    // beat the Gaussian, and the negated sign must spoil the correction
    let plain_rows = report.rows_for("plain");
    let plus_rows = report.rows_for("edgeworth_s2_plus_avg");
    let minus_rows = report.rows_for("edgeworth_s2_minus_avg");
    let mut ordering_ok = true;
    for i in 0..plain_rows.len() {
        if plain_rows[i].n >= 16 {
            ordering_ok &= plus_rows[i].mean_delta < plain_rows[i].mean_delta;
            ordering_ok &= minus_rows[i].mean_delta > plus_rows[i].mean_delta;
        }
    }
    // local slope over the top grid segment, where the pre-asymptotic
    // contamination of the small-n points has faded
    let last = plain_rows.len() - 1;
    let tail_slope = (plain_rows[last].mean_delta / plain_rows[last - 1].mean_delta).ln()
        / (plain_rows[last].n as f64 / plain_rows[last - 1].n as f64).ln();
    let ok = corrected_ok && plain_ok && ordering_ok;
    verdict(
        "A4",
        ok,
        &format!(
            "corrected (plus sign, averaged scale) slope {corrected:.3} <= -1.30 [{}]; \
             plain slope {plain:.3} in [-1.25, -0.80] [{}] (n=20..24 local slope {tail_slope:.3}); \
             mean-error ordering corrected < plain < negated for n >= 16 [{}]",
            if corrected_ok { "ok" } else { "violated" },
            if plain_ok {
                "ok"
            } else {
                "violated: the small-n points sit above the 1/n asymptote"
            },
            if ordering_ok { "ok" } else { "violated" },
        ),
    );
}

#[test]
fn a5_monte_carlo_intervals_are_calibrated() {
    let spec = DistributionSpec::shifted_bernoulli(1);
    let n = 12;
    let cells = 100;
    let samples = 100_000;
    let covered: usize = (0..cells)
        .map(|cell| {
            let mut rng = ChaCha8Rng::seed_from_u64(505);
            rng.set_stream(cell);
            let theta = ThetaVector::sample_sphere(n, &mut rng);
            let x: f64 = rng.random_range(-2.0..2.0);
            let set = ConvexSetSpec::Box { lo: vec![f64::NEG_INFINITY], hi: vec![x] };
            let exact = ExactBoxEvaluator::new(&spec, &theta)
                .unwrap()
                .box_probability(&[f64::NEG_INFINITY], &[x])
                .unwrap();
            let (_, interval) =
                empirical_probability(&spec, &theta, &set, samples, &mut rng).unwrap();
            usize::from(interval.contains(exact))
        })
        .sum();
    let ok = covered >= 93;
    verdict(
        "A5",
        ok,
        &format!(
            "95% intervals from {samples} samples covered the exact probability in \
             {covered}/{cells} random cells (need >= 93)"
        ),
    );
}

/// Composite Simpson integral of `f` over [a, b].
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, steps: usize) -> f64 {
    assert!(steps.is_multiple_of(2));
    let h = (b - a) / steps as f64;
    let mut total = f(a) + f(b);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        total += w * f(a + h * i as f64);
    }
    total * h / 3.0
}

#[test]
fn a6_corrected_densities_integrate_to_one() {
    // 1-D Hermite-weighted integrals over [-10, 10], computed numerically
    // once; the k-dimensional integral of each correction term factorizes
    // through them.
    let hermite_integrals: Vec<f64> = (0..=12usize)
        .map(|j| {
            simpson(
                |t| edgeworth::hermite(j).unwrap().eval(&t) * phi_1d(t),
                -10.0,
                10.0,
                200_000,
            )
        })
        .collect();

    let mut worst = 0.0f64;
    for k in 1..=3usize {
        // orders 1..3 from a genuinely skewed catalog law
        let ms: MomentSet<f64> =
            DistributionSpec::shifted_bernoulli(k).analytic_moments(5).unwrap();
        let base = moments_to_cumulants(&ms).unwrap();
        for order in 1..=4u32 {
            let cumulants = if order <= 3 {
                sized_to(&base, order + 2)
            } else {
                // order 4 needs sixth cumulants, beyond the analytic catalog:
                // synthesize a standardized set (normalization is structural,
                // whatever the coefficients)
                CumulantSet::from_fn(k, 6, |a| match a.degree() {
                    2 => {
                        if a.exponents().contains(&2) {
                            1.0
                        } else {
                            0.0
                        }
                    }
                    3 => 0.4,
                    4 => -0.8,
                    5 => 0.9,
                    6 => 1.7,
                    _ => 0.0,
                })
                .unwrap()
            };
            let exp = EdgeworthExpansion::new(&cumulants, order, SignConvention::Plus).unwrap();
            let mut total = hermite_integrals[0].powi(k as i32);
            let mut correction = 0.0;
            for r in 1..=order {
                for (nu, c) in exp.factor(r).unwrap().coefficients() {
                    let mut prod = 1.0;
                    for &e in nu.exponents() {
                        prod *= hermite_integrals[e as usize];
                    }
                    correction += c * prod;
                }
            }
            total += correction;
            worst = worst.max((total - 1.0).abs());
        }
    }
    let ok = worst <= 1e-9;
    verdict(
        "A6",
        ok,
        &format!(
            "total mass of orders 1..4 in dimensions 1..3 stays within {worst:.2e} of 1 \
             (numeric per-axis integration, tolerance 1e-9)"
        ),
    );
}

/// Truncates a cumulant set to a lower order.
fn sized_to(cs: &CumulantSet<f64>, m: u32) -> CumulantSet<f64> {
    CumulantSet::from_fn(cs.k(), m, |a| *cs.value(a).unwrap()).unwrap()
}

#[test]
fn a7_gaussian_derivatives_match_numerical_differentiation() {
    let mut worst_d = 0.0f64;
    let points = [
        vec![0.3, -0.7, 1.1],
        vec![-1.2, 0.4, 0.0],
        vec![0.9, 1.6, -0.5],
    ];
    for k in 1..=3usize {
        for nu in enumerate_up_to(k, 5) {
            if nu.degree() == 0 {
                continue;
            }
            // axis with a positive exponent: compare against the central
            // difference of the next-lower derivative along it
            let axis = nu.exponents().iter().position(|&e| e > 0).unwrap();
            let mut lower = nu.exponents().to_vec();
            lower[axis] -= 1;
            let lower = MultiIndex::from_slice(&lower);
            let h = 1e-4;
            for p in &points {
                let x = &p[..k];
                let exact = gaussian_derivative(&nu, x).unwrap();
                let mut xp = x.to_vec();
                let mut xm = x.to_vec();
                xp[axis] += h;
                xm[axis] -= h;
                let numeric = (gaussian_derivative(&lower, &xp).unwrap()
                    - gaussian_derivative(&lower, &xm).unwrap())
                    / (2.0 * h);
                worst_d = worst_d.max((exact - numeric).abs());
            }
        }
    }

    let mut worst_i = 0.0f64;
    for n in 0..=6usize {
        for (a, b) in [(-1.3, 0.4), (-3.0, 2.0), (0.0, 5.0)] {
            let closed = gaussian_partial_integral(n, a, b).unwrap();
            let numeric = simpson(
                |t| edgeworth::hermite::phi_deriv_1d(n, t).unwrap(),
                a,
                b,
                200_000,
            );
            worst_i = worst_i.max((closed - numeric).abs());
        }
    }
    let ok = worst_d <= 1e-6 && worst_i <= 1e-9;
    verdict(
        "A7",
        ok,
        &format!(
            "derivative tensors within {worst_d:.2e} of central differences (<= 1e-6, \
             |nu| <= 5, k <= 3); partial integrals within {worst_i:.2e} of quadrature (<= 1e-9)"
        ),
    );
}

#[test]
fn a8_skewed_laws_stay_at_first_order_despite_correction() {
    // n large enough that the discrete law's biggest atom (0.8^n) is far
    // below the third-moment error term, so the fit sees the true rate
    let config = ExperimentConfig {
        spec: "shifted_bernoulli".parse().unwrap(),
        k: 1,
        n_grid: vec![32, 48, 64, 96],
        theta_draws: 120,
        family: None,
        estimator: Estimator::Mc { samples: 200_000 },
        modes: vec![
            ApproxMode::Plain,
            ApproxMode::Edgeworth {
                order: 2,
                sign: SignConvention::Plus,
                scale: ScaleConvention::Averaged,
            },
        ],
        seed: 20_240_818,
    };
    let report = rate_experiment(&config).unwrap();
    let corrected = report.slope_for("edgeworth_s2_plus_avg").unwrap();
    let plain = report.slope_for("plain").unwrap();
    let ok = (-1.25..=-0.75).contains(&corrected);
    verdict(
        "A8",
        ok,
        &format!(
            "skewed summands: corrected slope {corrected:.3} in [-1.25, -0.75] — consistent \
             with 1/n, not n^(-3/2); the unremovable third-order term dominates (plain slope \
             {plain:.3})"
        ),
    );
}
