//! One-dimensional correction at work: exact CDF vs Gaussian vs corrected.
//!
//! The weighted Rademacher sum is enumerated exactly, so the true
//! distribution function is available to machine precision. Against it, the
//! plain normal approximation carries an O(1/n) error while the corrected
//! distribution function
//!     G(x) = Phi(x) - (beta4 - 3)/(8n) (x^3 - 3x) phi(x)
//! removes the leading term. A generic weight vector keeps the sum's atoms
//! tiny (2^-n each); with equal weights the few fat atoms of the binomial
//! lattice would swamp both approximations.

use edgeworth::{
    corrected_normal_cdf, exact_box_probability, normal_cdf, DistributionSpec, ThetaVector,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), edgeworth::Error> {
    let n = 16;
    let spec = DistributionSpec::rademacher(1);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let theta = ThetaVector::sample_sphere(n, &mut rng);
    let beta4 = 1.0; // fourth moment of a Rademacher coordinate

    println!("random weights on the sphere, n = {n}");
    println!();
    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "x", "exact", "Phi", "corrected", "|err Phi|", "|err corr|"
    );
    for i in 0..13 {
        let x = -3.0 + 0.5 * i as f64;
        let exact = exact_box_probability(&spec, &theta, &[f64::NEG_INFINITY], &[x])?;
        let plain = normal_cdf(x);
        let corrected = corrected_normal_cdf(beta4, n, x);
        println!(
            "{x:>6.2} {exact:>12.8} {plain:>12.8} {corrected:>12.8} {:>12.2e} {:>12.2e}",
            (plain - exact).abs(),
            (corrected - exact).abs()
        );
    }
    Ok(())
}
