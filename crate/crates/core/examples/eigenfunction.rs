//! From matrix eigenvectors back to eigenfunctions of the Ruelle operator.
//!
//! The left eigenvector of the top odd eigenvalue (ρ = e at λ = ½, β = J = 1)
//! is turned into an entire function, and L_βF = ρF is checked on complex
//! sample points. Closed-form eigenfunctions are checked the same way.
//!
//!     cargo run --example eigenfunction

use std::f64::consts::E;

use kaczeta::ruelle::{ruelle_residual, sinh_eigenfunction, translation_invariant_eigenfunction, zero_eigenfunction};
use kaczeta::spectral::{eigen_block, reconstruct_eigenfunction};
use kaczeta::specialfns::Parity;
use kaczeta::{Complex64, ModelParams};

fn main() -> kaczeta::Result<()> {
    let p = ModelParams::new(vec![0.5], vec![1.0])?;
    let beta = Complex64::new(1.0, 0.0);
    for degree in [10, 20, 40] {
        let block = eigen_block(&p, 1.0, degree, Parity::Odd)?;
        let coeffs: Vec<f64> = block.coefficients.column(0).iter().copied().collect();
        let f = reconstruct_eigenfunction(&p, 1.0, &block.basis, &coeffs)?;
        let res = ruelle_residual(&p, beta, &f, Complex64::new(E, 0.0))?;
        println!("N = {degree:>2}: top odd eigenvalue {:.14}, residual of L F = e F: {res:.2e}", block.values[0]);
    }

    let sinh = sinh_eigenfunction(&p, beta);
    println!("\nsinh(2 beta J z): residual {:.2e}", ruelle_residual(&p, beta, &sinh, Complex64::new(E, 0.0))?);

    let two = ModelParams::new(vec![0.5, 0.5], vec![0.6, 0.4])?;
    let f = translation_invariant_eigenfunction(&two, beta, vec![1.0, -1.0])?;
    println!("(z1 - z2) sinh(...), m = 2: residual against e/2 {:.2e}", ruelle_residual(&two, beta, &f, Complex64::new(E / 2.0, 0.0))?);

    let q = ModelParams::new(vec![0.4], vec![1.0])?;
    let f0 = zero_eigenfunction(&q, beta, &[0], &[1])?;
    println!("kernel element, lambda = 0.4: residual against 0 {:.2e}", ruelle_residual(&q, beta, &f0, Complex64::new(0.0, 0.0))?);
    Ok(())
}
