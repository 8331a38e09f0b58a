//! Measures of boxes, balls, and half-spaces in two dimensions.
//!
//! The Gaussian measure of a box factorizes through Phi; balls go through a
//! radial integral; half-spaces reduce to a single Phi. The signed measure
//! of the order-2 corrected expansion is available in closed form on boxes,
//! and a Monte Carlo importance estimate cross-checks it.

use edgeworth::{
    expansion_measure_box, expansion_measure_mc, gaussian_measure, moments_to_cumulants,
    weighted_sum_cumulants, ConvexSetSpec, DistributionSpec, EdgeworthExpansion, MomentSet,
    SignConvention, ThetaVector,
};

fn main() -> Result<(), edgeworth::Error> {
    // plain Gaussian measures
    let sets = [
        "box -1,-1 1,1".parse::<ConvexSetSpec>()?,
        "box -inf,-inf 0.5,0.5".parse()?,
        "ball 1,0 1.5".parse()?,
        "halfspace 1,1 0".parse()?,
    ];
    println!("standard Gaussian measures (k = 2):");
    for set in &sets {
        println!("  gamma({set}) = {:.12}", gaussian_measure(set)?);
    }

    // order-2 corrected measure for a weighted Rademacher sum
    let spec = DistributionSpec::rademacher(2);
    let moments: MomentSet<f64> = spec.analytic_moments(4)?;
    let cumulants = moments_to_cumulants(&moments)?;
    let theta = ThetaVector::equal_weights(12);
    let scaled = weighted_sum_cumulants(&cumulants, &theta)?;
    let expansion = EdgeworthExpansion::new(&scaled, 2, SignConvention::Plus)?;

    let lo = [-1.0, -1.0];
    let hi = [1.0, 1.0];
    let closed = expansion_measure_box(&expansion, &lo, &hi)?;
    println!();
    println!("corrected measure of [-1,1]^2, 12 equal-weight Rademacher summands:");
    println!("  closed form   {closed:.10}");

    let set = ConvexSetSpec::Box { lo: lo.to_vec(), hi: hi.to_vec() };
    let (estimate, stderr) = expansion_measure_mc(&expansion, &set, 400_000, 11)?;
    println!("  monte carlo   {estimate:.10} (se {stderr:.1e})");
    println!("  gaussian      {:.10}", gaussian_measure(&set)?);
    Ok(())
}
