//! Eigenvalues of the Hermite-basis matrix of the Kac–Gutzwiller operator.
//!
//! At β = 0 the spectrum is {2λ^α}; at λ = ½ it contains e^{βΣJ}. The tail
//! gap (movement of the top five eigenvalues between N−2 and N) signals
//! whether the truncation degree is adequate.
//!
//!     cargo run --example spectrum

use kaczeta::spectral::{eigenvalues, nonsymmetric_eigenvalues};
use kaczeta::kacgutz::{assemble_matrix, enumerate_basis, BasisParity};
use kaczeta::ModelParams;

fn main() -> kaczeta::Result<()> {
    let p = ModelParams::new(vec![0.5], vec![1.0])?;
    let s0 = eigenvalues(&p, 0.0, 8)?;
    println!("beta = 0: {:?}", &s0.eigenvalues[..5]);

    let s = eigenvalues(&p, 1.0, 60)?;
    println!("\nm = 1, lambda = 1/2, J = 1, beta = 1, N = 60 (tail gap {:.1e})", s.tail_gap);
    for (k, (v, par)) in s.eigenvalues.iter().zip(&s.parities).take(6).enumerate() {
        println!("  rho_{k} = {v:.12} ({})", par.as_str());
    }
    println!("  |rho_1 - e| = {:.1e}", (s.eigenvalues[1] - std::f64::consts::E).abs());

    println!("\ntail gap against truncation degree (beta = 2):");
    for degree in [10, 20, 30, 40] {
        println!("  N = {degree:>2}: {:.2e}", eigenvalues(&p, 2.0, degree)?.tail_gap);
    }

    // The raw matrix is not symmetric; a general Schur solve still gives a
    // real spectrum.
    let two = ModelParams::new(vec![0.3, 0.5], vec![1.0, 2.0])?;
    let g = assemble_matrix(&two, -1.0, &enumerate_basis(2, 10, BasisParity::Both))?;
    let eig = nonsymmetric_eigenvalues(&g)?;
    let im = eig.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    println!("\nm = 2, beta = -1: max |Im rho| from a nonsymmetric solve = {im:.1e}");
    Ok(())
}
