//! Brute-force partition functions against the transfer-operator trace.
//!
//! Z_n(β) sums exp(−βU_n) over all 2^n periodic configurations; the Ruelle
//! operator reproduces it through ∏_l(1 − λ_l^n)·trace L_β^n.
//!
//!     cargo run --example partition_trace

use kaczeta::model::{partition_function_bruteforce, periodic_energy, SpinConfig};
use kaczeta::ruelle::{ruelle_trace_closed, ruelle_trace_power};
use kaczeta::{Complex64, ModelParams};

fn main() -> kaczeta::Result<()> {
    let single = ModelParams::new(vec![0.5], vec![1.0])?;
    for spins in [vec![1, 1], vec![1, -1]] {
        let c = SpinConfig::new(spins.clone())?;
        println!("U_2{spins:?} = {:+.6}", periodic_energy(&single, &c));
    }

    let params = ModelParams::new(vec![0.3, 0.5], vec![1.0, 2.0])?;
    let beta = 0.7;
    println!("\nm = 2, lambda = (0.3, 0.5), J = (1, 2), beta = {beta}");
    println!("{:>3} {:>22} {:>22} {:>10}", "n", "Z_n", "prod(1-l^n) tr L^n", "rel diff");
    for n in 1..=10 {
        let z = partition_function_bruteforce(&params, beta, n)?;
        let scale: f64 = params.lambda().iter().map(|x| 1.0 - x.powi(n as i32)).product();
        let tr = scale * ruelle_trace_power(&params, Complex64::new(beta, 0.0), n)?.re;
        println!("{n:>3} {z:>22.15e} {tr:>22.15e} {:>10.2e}", (tr - z).abs() / z);
    }

    let closed = ruelle_trace_closed(&params, Complex64::new(beta, 0.0));
    let fixed_point = ruelle_trace_power(&params, Complex64::new(beta, 0.0), 1)?;
    println!("\ntrace L_beta: closed form {:.15e}, fixed-point sum {:.15e}", closed.re, fixed_point.re);

    // Complex temperatures are supported by the trace formula as well.
    let bz = Complex64::new(0.4, 0.3);
    println!("trace L^3 at beta = {bz}: {:.12e}", ruelle_trace_power(&params, bz, 3)?);
    Ok(())
}
