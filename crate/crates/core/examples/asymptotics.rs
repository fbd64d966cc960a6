//! Large-|β| behaviour of the leading eigenvalues of each parity block
//! (λ < ½): λ^α·exp(βΣJλ/(1−λ)) as β → +∞ and ±λ^α·exp(−βΣJλ/(1+λ)) as
//! β → −∞.
//!
//!     cargo run --release --example asymptotics

use kaczeta::spectral::{block_by_modulus, leading_predictions, Direction};
use kaczeta::specialfns::Parity;
use kaczeta::ModelParams;

fn main() -> kaczeta::Result<()> {
    let p = ModelParams::new(vec![0.4], vec![1.0])?;
    for (dir, betas) in [(Direction::PlusInfinity, [5.0, 10.0, 20.0]), (Direction::MinusInfinity, [-5.0, -10.0, -20.0])] {
        for parity in [Parity::Even, Parity::Odd] {
            print!("{dir:?} {:<4}:", parity.as_str());
            for beta in betas {
                let got = block_by_modulus(&p, beta, 80, parity)?[0];
                let want = leading_predictions(&p, beta, dir, parity, 1)?[0];
                print!("  beta={beta:>5}: rel dev {:.2e}", (got - want).abs() / want.abs());
            }
            println!();
        }
    }
    Ok(())
}
