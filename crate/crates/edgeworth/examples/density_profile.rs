//! Corrected density of a weighted sum, next to the plain Gaussian.
//!
//! For S = n^(-1/2) (X_1 + ... + X_n) with Rademacher summands the fourth
//! cumulant is -2/n, so the order-2 correction bends the density down at the
//! center and up at |x| near 1.6 — the sum is more peaked than the Gaussian
//! would suggest. The table shows the plain density, the corrected one, and
//! the correction ratio.

use edgeworth::{
    moments_to_cumulants, phi_1d, weighted_sum_cumulants, DistributionSpec, EdgeworthExpansion,
    MomentSet, SignConvention, ThetaVector,
};

fn main() -> Result<(), edgeworth::Error> {
    let n = 10;
    let spec = DistributionSpec::rademacher(1);
    let moments: MomentSet<f64> = spec.analytic_moments(4)?;
    let cumulants = moments_to_cumulants(&moments)?;
    let theta = ThetaVector::equal_weights(n);
    let scaled = weighted_sum_cumulants(&cumulants, &theta)?;
    let expansion = EdgeworthExpansion::new(&scaled, 2, SignConvention::Plus)?;

    println!("{} summands, equal weights, order-2 correction", n);
    println!();
    println!("{:>6} {:>12} {:>12} {:>10}", "x", "phi(x)", "corrected", "ratio");
    let mut x = -3.0;
    while x <= 3.0 + 1e-9 {
        let plain = phi_1d(x);
        let corrected = expansion.density(&[x])?;
        let ratio = expansion.correction_ratio(&[x])?;
        println!("{x:>6.2} {plain:>12.8} {corrected:>12.8} {ratio:>10.6}");
        x += 0.5;
    }
    Ok(())
}
