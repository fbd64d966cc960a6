//! Hermite functions normalised so that h_0 = 2^{1/4}e^{−πx²},
//! their orthonormality, Laguerre/Φ polynomials, and Mehler's kernel as the
//! limit of Σ λ^α h_α(x)h_α(y).
//!
//!     cargo run --example hermite_mehler

use std::f64::consts::PI;

use kaczeta::quadrature::gauss_hermite;
use kaczeta::specialfns::{confluent_phi, hermite_table, laguerre, mehler_kernel, mehler_partial_sum};
use kaczeta::ModelParams;

fn main() -> kaczeta::Result<()> {
    println!("h_n(0.25), n = 0..5: {:?}", hermite_table(5, 0.25).iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>());

    // h_j h_k = e^{−2πx²}·polynomial, so x = t/√(2π) turns ∫ h_j h_k dx into
    // a Gauss–Hermite sum (1/√(2π)) Σ w_i e^{t_i²} h_j(x_i) h_k(x_i).
    let (nodes, weights) = gauss_hermite(80);
    let n = 8;
    let tables: Vec<(f64, Vec<f64>)> = nodes
        .iter()
        .zip(&weights)
        .map(|(t, w)| (w * (t * t).exp(), hermite_table(n, t / (2.0 * PI).sqrt())))
        .collect();
    let mut worst = 0.0f64;
    for j in 0..=n {
        for k in 0..=n {
            let s: f64 = tables.iter().map(|(w, h)| w * h[j] * h[k]).sum::<f64>() / (2.0 * PI).sqrt();
            let want = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((s - want).abs());
        }
    }
    println!("max |<h_j, h_k> - delta_jk| for j, k <= {n}: {worst:.2e}");

    println!("L_3^(2)(0.7) = {:.12}", laguerre(3, 2, 0.7));
    println!("Phi(-3, 3; 0.7) = {:.12}", confluent_phi(3, 2, 0.7));

    for lambda in [0.3, 0.5] {
        let p = ModelParams::new(vec![lambda], vec![1.0])?;
        let (x, y) = ([0.2], [-0.35]);
        let closed = mehler_kernel(&p, &x, &y);
        print!("lambda = {lambda}: kernel {closed:.14}; partial sums error");
        for degree in [5, 10, 20, 40] {
            print!("  N={degree}: {:.1e}", (mehler_partial_sum(&p, &x, &y, degree) - closed).abs());
        }
        println!();
    }
    Ok(())
}
