//! The dynamical zeta function as a finite product of Fredholm
//! determinants, checked against 1/(1−2z) at β = 0 and against the series
//! exp(Σ zⁿZ_n/n) inside its disc of convergence.
//!
//!     cargo run --example zeta

use kaczeta::spectral::{zeta, zeta_series_partial};
use kaczeta::{Complex64, ModelParams};

fn main() -> kaczeta::Result<()> {
    let p = ModelParams::new(vec![0.3, 0.5], vec![1.0, 2.0])?;
    for z in [0.25, -0.25, 0.4] {
        let v = zeta(&p, 0.0, Complex64::new(z, 0.0), 28)?;
        println!("beta = 0, z = {z:+}: zeta = {:.12}, 1/(1-2z) = {:.12}", v.value.re, 1.0 / (1.0 - 2.0 * z));
    }

    let (beta, z) = (0.3, Complex64::new(0.03, 0.02));
    let v = zeta(&p, beta, z, 28)?;
    println!("\nbeta = {beta}, z = {z}: zeta = {:.12}", v.value);
    for f in &v.factors {
        println!("  det(1 - z lambda^{:?} L)^{:+} = {:.12}", f.alpha, f.exponent, f.determinant);
    }
    println!("  degree {} vs {}: drift {:.1e}, warning = {}", v.degree, v.degree - 4, (v.value - v.value_coarse).norm(), v.convergence_warning);
    let s = zeta_series_partial(&p, beta, z, 18)?;
    println!("  series with 18 terms: {s:.12} (rel diff {:.1e})", (s - v.value).norm() / v.value.norm());

    match zeta_series_partial(&p, 2.0, Complex64::new(0.4, 0.0), 18) {
        Err(e) => println!("\noutside the series domain: {e}"),
        Ok(s) => println!("\nunexpected series value {s}"),
    }
    match zeta(&p, 0.0, Complex64::new(0.5, 0.0), 28) {
        Err(e) => println!("at a pole: {e}"),
        Ok(v) => println!("unexpected value {}", v.value),
    }
    Ok(())
}
