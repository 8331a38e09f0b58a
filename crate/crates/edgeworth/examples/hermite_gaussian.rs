//! Probabilists' Hermite polynomials and Gaussian derivatives.
//!
//! Prints the coefficient tables of He_0..He_8, then demonstrates the
//! identity phi^(n)(x) = (-1)^n He_n(x) phi(x) by comparing the closed-form
//! derivative with a central finite difference.

use edgeworth::{gaussian_derivative, hermite, phi_1d, MultiIndex};

fn main() -> Result<(), edgeworth::Error> {
    println!("He_n coefficient tables (constant term first):");
    for n in 0..=8 {
        let p = hermite(n)?;
        println!("  He_{n}: {:?}", p.coeffs());
    }

    println!();
    println!("phi^(n)(x) against central differences of phi^(n-1), x = 0.7:");
    let x = 0.7;
    let h = 1e-5;
    for n in 1..=5u32 {
        let exact = gaussian_derivative(&MultiIndex::from_slice(&[n]), &[x])?;
        let lower = MultiIndex::from_slice(&[n - 1]);
        let numeric = (gaussian_derivative(&lower, &[x + h])?
            - gaussian_derivative(&lower, &[x - h])?)
            / (2.0 * h);
        println!("  n = {n}: closed form {exact:+.9}, numeric {numeric:+.9}");
    }

    println!();
    println!("He_3(0.7) * phi(0.7) = {:.9}", hermite(3)?.eval(&x) * phi_1d(x));
    Ok(())
}
