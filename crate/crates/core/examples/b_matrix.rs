//! The Gaussian linearisation behind the integral operator: the periodic
//! precision matrix B, its determinant in closed form, the quadratic-form
//! identity, and the Gaussian integral e^{x·Ax/2} as a quadrature.
//!
//!     cargo run --example b_matrix

use kaczeta::kacgutz::{form_identity, gaussian_identity_check, kac_a_matrix, kac_b_matrix};
use nalgebra::DMatrix;

fn main() -> kaczeta::Result<()> {
    let (beta_j, gamma) = (0.8, 0.5f64.ln().abs());
    for n in 2..=8 {
        let r = kac_b_matrix(beta_j, gamma, n)?;
        println!(
            "n = {n}: det B = {:.12e}, closed form {:.12e}, min eigenvalue {:.4}",
            r.determinant, r.determinant_closed, r.min_eigenvalue
        );
    }
    let b = kac_b_matrix(beta_j, gamma, 5)?.matrix;
    let a = kac_a_matrix(beta_j, gamma, 5);
    println!("|A B - I| = {:.1e}", (&a * &b - DMatrix::identity(5, 5)).amax());

    let (lhs, rhs) = form_identity(gamma, &[0.3, -1.2, 0.7, 0.1]);
    println!("quadratic form: {lhs:.15} vs {rhs:.15}");

    let a2 = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
    let (closed, quad) = gaussian_identity_check(&a2, &[0.3, -0.2])?;
    println!("exp(x.Ax/2) = {closed:.12}, by quadrature {quad:.12}");
    Ok(())
}
