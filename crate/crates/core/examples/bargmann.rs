//! The Bargmann transform maps h_α to the Fock monomial √(π^|α|/α!) z^α.
//!
//!     cargo run --example bargmann

use kaczeta::spectral::{bargmann_quadrature, fock_monomial};
use kaczeta::specialfns::{hermite, MultiIndex};
use kaczeta::Complex64;

fn main() -> kaczeta::Result<()> {
    let zs = [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(0.3, 0.2)];
    for a in 0..=3u32 {
        let alpha = MultiIndex::new(vec![a]);
        for z in zs {
            let est = bargmann_quadrature(|x| hermite(&alpha, x), &[z])?;
            let want = fock_monomial(&alpha, &[z]);
            println!("alpha = {a}, z = {z:.2}: {:.12} (err {:.1e})", est.value, (est.value - want).norm());
        }
    }
    let alpha = MultiIndex::new(vec![1, 1]);
    let z = [Complex64::new(0.2, 0.1), Complex64::new(-0.3, 0.0)];
    let est = bargmann_quadrature(|x| hermite(&alpha, x), &z)?;
    println!("alpha = (1,1): {:.12} vs {:.12}", est.value, fock_monomial(&alpha, &z));
    Ok(())
}
