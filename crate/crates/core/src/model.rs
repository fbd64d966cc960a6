//! Model parameters, periodic interaction energies and the exact
//! partition-function oracle obtained by enumerating all periodic spin
//! configurations.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Default cap on the period length for 2^n enumerations.
pub const DEFAULT_MAX_N: usize = 24;

/// Environment variable overriding [`DEFAULT_MAX_N`].
pub const MAX_N_ENV: &str = "KACZETA_MAX_N";

/// Enumerations are split into blocks of 2^CHUNK_BITS configurations; each
/// block is summed sequentially and the block sums are combined in index
/// order, so results do not depend on the number of worker threads.
const CHUNK_BITS: u32 = 12;

/// Effective enumeration cap: `KACZETA_MAX_N` if set to a valid integer,
/// otherwise [`DEFAULT_MAX_N`].
pub fn max_n() -> usize {
    std::env::var(MAX_N_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
}

pub(crate) fn check_cap(n: usize) -> Result<()> {
    let n_max = max_n().min(62);
    if n > n_max {
        return Err(Error::CapExceeded { n, n_max });
    }
    Ok(())
}

/// Interaction parameters: `m` channels with decay rates `lambda`, couplings
/// `coupling` (J) and `gamma = -ln(lambda)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ModelParams {
    lambda: Vec<f64>,
    coupling: Vec<f64>,
    gamma: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    lambda: Vec<f64>,
    #[serde(rename = "J")]
    coupling: Vec<f64>,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        ModelParams::new(raw.lambda, raw.coupling)
    }
}

impl From<ModelParams> for RawParams {
    fn from(p: ModelParams) -> Self {
        RawParams {
            lambda: p.lambda,
            coupling: p.coupling,
        }
    }
}

impl ModelParams {
    /// Validates `0 < λ_l < 1`, `J_l > 0` and equal, nonzero lengths.
    pub fn new(lambda: Vec<f64>, coupling: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(domain("at least one interaction channel is required (m >= 1)"));
        }
        if lambda.len() != coupling.len() {
            return Err(domain(format!(
                "lambda has {} entries but J has {}",
                lambda.len(),
                coupling.len()
            )));
        }
        for (l, &x) in lambda.iter().enumerate() {
            if !(x > 0.0 && x < 1.0) {
                return Err(domain(format!("lambda[{l}] = {x} must lie strictly inside (0, 1)")));
            }
        }
        for (l, &j) in coupling.iter().enumerate() {
            if !(j > 0.0 && j.is_finite()) {
                return Err(domain(format!("J[{l}] = {j} must be positive and finite")));
            }
        }
        let gamma = lambda.iter().map(|x| -x.ln()).collect();
        Ok(ModelParams {
            lambda,
            coupling,
            gamma,
        })
    }

    /// Same as [`ModelParams::new`] with an explicit channel count that must
    /// agree with the vector lengths.
    pub fn validate(m: usize, lambda: Vec<f64>, coupling: Vec<f64>) -> Result<Self> {
        if m == 0 {
            return Err(domain("m must be at least 1"));
        }
        if lambda.len() != m || coupling.len() != m {
            return Err(domain(format!(
                "m = {m} but lambda has {} entries and J has {}",
                lambda.len(),
                coupling.len()
            )));
        }
        Self::new(lambda, coupling)
    }

    /// Convenience constructor with all `m` channels sharing one λ.
    pub fn uniform(m: usize, lambda: f64, coupling: Vec<f64>) -> Result<Self> {
        Self::validate(m, vec![lambda; m], coupling)
    }

    pub fn m(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn coupling(&self) -> &[f64] {
        &self.coupling
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn total_coupling(&self) -> f64 {
        self.coupling.iter().sum()
    }

    /// `c = Σ J_l λ_l / (1 − λ_l)`, the bound constant for energies per site.
    pub fn energy_bound(&self) -> f64 {
        self.lambda
            .iter()
            .zip(&self.coupling)
            .map(|(&x, &j)| j * x / (1.0 - x))
            .sum()
    }

    /// Copy with every λ_l multiplied by `factor`; fails if a rate leaves (0,1).
    pub fn with_scaled_lambda(&self, factor: f64) -> Result<Self> {
        let lambda = self.lambda.iter().map(|x| x * factor).collect();
        Self::new(lambda, self.coupling.clone())
    }
}

/// A periodic configuration of ±1 spins.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinConfig {
    spins: Vec<i8>,
}

impl SpinConfig {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if spins.is_empty() {
            return Err(domain("a spin configuration needs period n >= 1"));
        }
        if let Some(s) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(domain(format!("spin value {s} is not +1 or -1")));
        }
        Ok(SpinConfig { spins })
    }

    /// Bit k set means spin k is −1.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        let spins = (0..n)
            .map(|k| if bits >> k & 1 == 1 { -1 } else { 1 })
            .collect();
        SpinConfig { spins }
    }

    pub fn n(&self) -> usize {
        self.spins.len()
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    /// Cyclic access: `spin(k + n) == spin(k)`.
    pub fn spin(&self, k: usize) -> i8 {
        self.spins[k % self.spins.len()]
    }

    pub fn rotated(&self, shift: usize) -> Self {
        let n = self.n();
        SpinConfig {
            spins: (0..n).map(|k| self.spin(k + shift)).collect(),
        }
    }

    pub fn flipped(&self) -> Self {
        SpinConfig {
            spins: self.spins.iter().map(|s| -s).collect(),
        }
    }
}

/// Periodic energy
/// `U_n = −Σ_l J_l/(1−λ_l^n) Σ_{k<n} Σ_{i=1..n} σ_k σ_{k+i} λ_l^i`,
/// evaluated literally as the double sum.
pub fn periodic_energy(params: &ModelParams, config: &SpinConfig) -> f64 {
    let n = config.n();
    let mut energy = 0.0;
    for (&x, &j) in params.lambda.iter().zip(&params.coupling) {
        let mut inner = 0.0;
        for k in 0..n {
            let mut p = 1.0;
            for i in 1..=n {
                p *= x;
                inner += f64::from(config.spin(k) * config.spin(k + i)) * p;
            }
        }
        energy -= j / (1.0 - x.powi(n as i32)) * inner;
    }
    energy
}

/// Per-shift weights `w_i = Σ_l J_l λ_l^i / (1 − λ_l^n)` so that
/// `U_n = −Σ_i w_i Σ_k σ_k σ_{k+i}`.
struct EnergyKernel {
    n: u32,
    mask: u64,
    weights: Vec<f64>,
}

impl EnergyKernel {
    fn new(params: &ModelParams, n: usize) -> Self {
        let weights = (1..=n)
            .map(|i| {
                params
                    .lambda
                    .iter()
                    .zip(&params.coupling)
                    .map(|(&x, &j)| j * x.powi(i as i32) / (1.0 - x.powi(n as i32)))
                    .sum()
            })
            .collect();
        EnergyKernel {
            n: n as u32,
            mask: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
            weights,
        }
    }

    fn energy(&self, bits: u64) -> f64 {
        let n = self.n;
        let mut u = 0.0;
        for (i, w) in self.weights.iter().enumerate() {
            let shift = (i as u32 + 1) % n;
            let rot = if shift == 0 {
                bits
            } else {
                ((bits >> shift) | (bits << (n - shift))) & self.mask
            };
            let agree = n as i64 - 2 * i64::from((bits ^ rot).count_ones());
            u -= w * agree as f64;
        }
        u
    }
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct ComplexKahan {
    re: Kahan,
    im: Kahan,
}

impl ComplexKahan {
    pub(crate) fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub(crate) fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Σ_{bits < 2^n} term(bits), compensated within fixed-size blocks and
/// across blocks in a fixed order.
pub(crate) fn sum_over_configs<F>(n: usize, term: F) -> Complex64
where
    F: Fn(u64) -> Complex64 + Sync,
{
    let total = 1u64 << n;
    let chunk = 1u64 << CHUNK_BITS.min(n as u32);
    let blocks: Vec<Complex64> = (0..total / chunk)
        .into_par_iter()
        .map(|b| {
            let mut acc = ComplexKahan::default();
            for bits in b * chunk..(b + 1) * chunk {
                acc.add(term(bits));
            }
            acc.value()
        })
        .collect();
    let mut acc = ComplexKahan::default();
    for v in blocks {
        acc.add(v);
    }
    acc.value()
}

/// Exact `Z_n(β) = Σ_{σ ∈ {±1}^n} exp(−β U_n(σ))` by enumeration.
///
/// At β = 0 every Boltzmann weight is exactly 1 and the sum is returned as
/// 2^n without enumerating.
pub fn partition_function_bruteforce(params: &ModelParams, beta: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(domain("period n must be at least 1"));
    }
    if beta == 0.0 {
        return Ok(2f64.powi(n as i32));
    }
    check_cap(n)?;
    let kernel = EnergyKernel::new(params, n);
    let z = sum_over_configs(n, |bits| Complex64::new((-beta * kernel.energy(bits)).exp(), 0.0));
    Ok(z.re)
}

/// `Z_n` at complex β (used by trace cross-checks).
pub fn partition_function_complex(params: &ModelParams, beta: Complex64, n: usize) -> Result<Complex64> {
    if n == 0 {
        return Err(domain("period n must be at least 1"));
    }
    check_cap(n)?;
    let kernel = EnergyKernel::new(params, n);
    Ok(sum_over_configs(n, |bits| (-beta * kernel.energy(bits)).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p1() -> ModelParams {
        ModelParams::new(vec![0.5], vec![1.0]).unwrap()
    }

    #[test]
    fn validation() {
        let p = ModelParams::validate(1, vec![0.5], vec![1.0]).unwrap();
        assert_relative_eq!(p.gamma()[0], 2f64.ln(), max_relative = 1e-15);
        assert!(ModelParams::validate(2, vec![0.3, 0.5], vec![1.0, 2.0]).is_ok());
        for (l, j) in [(1.0, 1.0), (0.0, 1.0), (1.5, 1.0), (0.5, 0.0), (0.5, -1.0)] {
            assert!(matches!(ModelParams::new(vec![l], vec![j]), Err(Error::Domain(_))));
        }
        assert!(ModelParams::validate(0, vec![], vec![]).is_err());
        assert!(ModelParams::new(vec![0.5, 0.2], vec![1.0]).is_err());
    }

    #[test]
    fn hand_enumerated_energies() {
        let up = SpinConfig::new(vec![1, 1]).unwrap();
        let alt = SpinConfig::new(vec![1, -1]).unwrap();
        assert_relative_eq!(periodic_energy(&p1(), &up), -2.0, max_relative = 1e-15);
        assert_relative_eq!(periodic_energy(&p1(), &alt), 2.0 / 3.0, max_relative = 1e-15);
        assert!(SpinConfig::new(vec![1, 0]).is_err());
    }

    #[test]
    fn bit_kernel_matches_double_sum() {
        let p = ModelParams::new(vec![0.3, 0.7], vec![1.2, 0.4]).unwrap();
        for n in 1..=9 {
            let k = EnergyKernel::new(&p, n);
            for bits in 0..1u64 << n {
                let c = SpinConfig::from_bits(n, bits);
                assert_relative_eq!(k.energy(bits), periodic_energy(&p, &c), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn small_partition_functions() {
        assert_eq!(partition_function_bruteforce(&p1(), 0.0, 3).unwrap(), 8.0);
        let z1 = partition_function_bruteforce(&p1(), 1.0, 1).unwrap();
        assert_relative_eq!(z1, 2.0 * std::f64::consts::E, max_relative = 1e-14);
        assert!(matches!(
            partition_function_bruteforce(&p1(), 1.0, 200),
            Err(Error::CapExceeded { .. })
        ));
    }
}
