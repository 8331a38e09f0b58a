//! Moments of uniformly random weight vectors on the unit sphere.
//!
//! Closed forms: E[theta_1^2] = 1/n, E[theta_1^4] = 3/(n(n+2)),
//! E[theta_1^2 theta_2^2] = 1/(n(n+2)), and E[sum_j theta_j^4] = 3/(n+2).
//! The sample averages converge to them at the usual root-N rate; the last
//! column shows the deviation in units of the sample standard error.

use edgeworth::ThetaVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let n = 12;
    let draws = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(99);

    let mut stats = [
        ("E[theta_1^2]", 1.0 / n as f64, Vec::with_capacity(draws)),
        ("E[theta_1^4]", 3.0 / (n as f64 * (n + 2) as f64), Vec::with_capacity(draws)),
        ("E[theta_1^2 theta_2^2]", 1.0 / (n as f64 * (n + 2) as f64), Vec::with_capacity(draws)),
        ("E[sum theta^4]", 3.0 / (n + 2) as f64, Vec::with_capacity(draws)),
    ];

    for _ in 0..draws {
        let theta = ThetaVector::sample_sphere(n, &mut rng);
        let w = theta.weights();
        stats[0].2.push(w[0] * w[0]);
        stats[1].2.push(w[0].powi(4));
        stats[2].2.push(w[0] * w[0] * w[1] * w[1]);
        stats[3].2.push(theta.power_sum(4));
    }

    println!("n = {n}, {draws} draws");
    println!();
    println!("{:<24} {:>12} {:>12} {:>8}", "quantity", "closed form", "sample", "sigmas");
    for (name, exact, samples) in &stats {
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        let var = samples.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
            / (samples.len() - 1) as f64;
        let se = (var / samples.len() as f64).sqrt();
        println!("{name:<24} {exact:>12.8} {mean:>12.8} {:>8.2}", (mean - exact) / se);
    }
}
