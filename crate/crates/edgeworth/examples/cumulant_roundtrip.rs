//! Moment/cumulant conversion in exact rational arithmetic.
//!
//! Takes the analytic moments of a skewed two-point law, converts them to
//! cumulants, converts back, and prints both directions — the round trip is
//! an exact identity, not an approximation. Also shows how the cumulants of
//! a weighted sum follow from the summand cumulants via power sums of the
//! weights.

use edgeworth::{
    cumulants_to_moments, moments_to_cumulants, weighted_sum_cumulants, DistributionSpec,
    MomentSet, ThetaVector,
};
use num_rational::BigRational;

fn main() -> Result<(), edgeworth::Error> {
    let spec = DistributionSpec::shifted_bernoulli(2);
    let moments: MomentSet<BigRational> = spec.analytic_moments(5)?;

    println!("summand law: {} (k = 2, moments through order 5)", spec.name());
    println!();
    println!("moments -> cumulants (exact rationals):");
    let cumulants = moments_to_cumulants(&moments)?;
    for (nu, kappa) in cumulants.iter() {
        println!("  kappa_{nu} = {kappa}");
    }

    let back = cumulants_to_moments(&cumulants)?;
    println!();
    println!(
        "cumulants -> moments round trip exact: {}",
        if back == moments { "yes" } else { "NO" }
    );

    // Weighted sum S = (3/5) X_1 + (4/5) X_2: the order-p cumulants of S are
    // the summand cumulants times the signed power sum of the weights.
    let theta = ThetaVector::new(vec![0.6, 0.8])?;
    let summed = weighted_sum_cumulants(&cumulants.to_f64(), &theta)?;
    println!();
    println!("cumulants of 0.6 X_1 + 0.8 X_2:");
    for (nu, kappa) in summed.iter() {
        if nu.degree() >= 3 {
            println!("  kappa_{nu} = {kappa:.6}");
        }
    }
    println!();
    println!(
        "power sums: sum theta^3 = {:.6}, sum theta^4 = {:.6}",
        theta.power_sum(3),
        theta.power_sum(4)
    );
    Ok(())
}
