//! λ = (½, …, ½): the m-channel spectrum is generated by the single-channel
//! one with J = ΣJ_l, each ϱ_k reappearing as ϱ_k/2ⁿ with multiplicity
//! C(m+n−2, n). The generating-function identity behind this is exact in
//! integers.
//!
//!     cargo run --release --example model_reduction

use kaczeta::spectral::{binom_identity_check, eigenvalues, half_reduction_check, polydim, spectrum};
use kaczeta::ModelParams;

fn main() -> kaczeta::Result<()> {
    let (single, _) = spectrum(&ModelParams::new(vec![0.5], vec![1.0])?, 1.0, 60)?;
    let p = ModelParams::new(vec![0.5; 3], vec![0.5, 0.3, 0.2])?;
    let s = eigenvalues(&p, 1.0, 18)?;
    for (k, rho) in single.iter().take(3).enumerate() {
        for n in 0..=2 {
            let target = rho / 2f64.powi(n);
            let found = s.eigenvalues.iter().filter(|r| ((*r - target) / target).abs() < 1e-6).count();
            println!("rho_{k}/2^{n} = {target:.10}: found {found}, expected C(m+n-2, n) = {}", polydim(3, n as usize));
        }
    }

    let bad = (2..=10)
        .flat_map(|m| (0..=10).flat_map(move |r| (0..m).map(move |l| binom_identity_check(m, r, l))))
        .filter(|(a, b)| a != b)
        .count();
    println!("\nbinomial identity mismatches over m <= 10, r <= 10: {bad}");
    let (lhs, rhs) = half_reduction_check(&ModelParams::new(vec![0.5; 3], vec![0.5, 0.3, 0.2])?, 1.0, 80)?;
    println!("half-reduction product, m = 3: {lhs:.14} vs {rhs:.14}");
    Ok(())
}
