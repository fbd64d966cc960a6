//! Real zeros and poles of ζ in β at z = 1 for λ = ½.
//!
//! The eigenvalue e^β/2 (present when m ≥ 2) crosses 1 at β = ln 2, where
//! the α = 0 determinant vanishes; for m = 1 the same β is the zero
//! λe^β = 1 of the α = (1) factor. For m = 3 the crossing eigenvalue is
//! doubly degenerate, so d_0 touches zero without changing sign — the root
//! finder tracks eigenvalue branches and reports multiplicity 2.
//!
//!     cargo run --release --example trivial_zeros

use kaczeta::spectral::find_real_zeros_poles;
use kaczeta::ModelParams;

fn main() -> kaczeta::Result<()> {
    let models = [
        (ModelParams::new(vec![0.5], vec![1.0])?, 60),
        (ModelParams::new(vec![0.5, 0.5], vec![0.6, 0.4])?, 16),
        (ModelParams::new(vec![0.5; 3], vec![0.5, 0.3, 0.2])?, 12),
    ];
    for (p, degree) in &models {
        println!("m = {}, N = {degree}", p.m());
        for r in find_real_zeros_poles(p, 1.0, (0.6, 0.8), *degree, 0.05)? {
            println!(
                "  beta* = {:.12}  alpha = {:?}  {:<4}  multiplicity {}  |beta* - ln 2| = {:.1e}",
                r.beta,
                r.alpha,
                r.kind.as_str(),
                r.multiplicity,
                (r.beta - std::f64::consts::LN_2).abs()
            );
        }
    }
    Ok(())
}
