//! Hermite functions in the normalization `h_0(x) = 2^{m/4} e^{−π x·x}`,
//! associated Laguerre polynomials, the polynomial confluent hypergeometric
//! function Φ(−n, μ+1; x), and Mehler's kernel.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::model::{Kahan, ModelParams};

const LOG_FACTORIAL_TABLE: usize = 1024;

fn log_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut acc = Kahan::default();
        let mut out = Vec::with_capacity(LOG_FACTORIAL_TABLE + 1);
        out.push(0.0);
        for k in 1..=LOG_FACTORIAL_TABLE {
            acc.add((k as f64).ln());
            out.push(acc.value());
        }
        out
    })
}

/// `ln(n!)`: compensated cumulative table up to 1024, Stirling series beyond.
pub fn log_factorial(n: u32) -> f64 {
    let n = n as usize;
    if n <= LOG_FACTORIAL_TABLE {
        return log_factorial_table()[n];
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

/// Parity of a multi-index, `|α| mod 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(degree: usize) -> Self {
        if degree % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// α ∈ N_0^m.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(m: usize) -> Self {
        MultiIndex(vec![0; m])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    /// `|α| = Σ α_i`.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.degree())
    }

    /// `ln α! = Σ ln α_i!`.
    pub fn log_factorial(&self) -> f64 {
        self.0.iter().map(|&a| log_factorial(a)).sum()
    }

    /// `λ^α = ∏ λ_i^{α_i}`.
    pub fn power(&self, base: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(base)
            .map(|(&a, &x)| x.powi(a as i32))
            .product()
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl std::fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// All α ∈ N_0^m with |α| ≤ `max_degree`, graded by degree and, within a
/// degree, lexicographically descending: (2,0), (1,1), (0,2).
pub fn graded_indices(m: usize, max_degree: usize) -> Vec<MultiIndex> {
    fn fill(rest: usize, slot: usize, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if slot + 1 == cur.len() {
            cur[slot] = rest as u32;
            out.push(MultiIndex(cur.clone()));
            return;
        }
        for a in (0..=rest).rev() {
            cur[slot] = a as u32;
            fill(rest - a, slot + 1, cur, out);
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    let mut cur = vec![0u32; m];
    for d in 0..=max_degree {
        fill(d, 0, &mut cur, &mut out);
    }
    out
}

/// `h_0, …, h_{n_max}` at one real point (one coordinate), from
/// `h_{n+1} = (2√π x/√(n+1)) h_n − √(n/(n+1)) h_{n−1}`.
pub fn hermite_table(n_max: usize, x: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(n_max + 1);
    h.push(2f64.powf(0.25) * (-PI * x * x).exp());
    if n_max >= 1 {
        h.push(2.0 * PI.sqrt() * x * h[0]);
    }
    for n in 1..n_max {
        let nf = n as f64;
        let next = 2.0 * PI.sqrt() * x / (nf + 1.0).sqrt() * h[n] - (nf / (nf + 1.0)).sqrt() * h[n - 1];
        h.push(next);
    }
    h
}

/// `h_α(x) = ∏_i h_{α_i}(x_i)`.
pub fn hermite(alpha: &MultiIndex, x: &[f64]) -> f64 {
    alpha
        .entries()
        .iter()
        .zip(x)
        .map(|(&a, &xi)| hermite_table(a as usize, xi)[a as usize])
        .product()
}

/// Associated Laguerre polynomial `L_n^{(μ)}(x)` by the three-term recurrence.
pub fn laguerre(n: u32, mu: u32, x: f64) -> f64 {
    let mu = f64::from(mu);
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = mu + 1.0 - x;
    for k in 1..n {
        let k = f64::from(k);
        let next = ((2.0 * k + mu + 1.0 - x) * cur - (k + mu) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `Φ(−n, μ+1; x) = n! μ!/(n+μ)! · L_n^{(μ)}(x)`.
pub fn confluent_phi(n: u32, mu: u32, x: f64) -> f64 {
    let scale = (log_factorial(n) + log_factorial(mu) - log_factorial(n + mu)).exp();
    scale * laguerre(n, mu, x)
}

/// Closed Mehler kernel
/// `∏_l (λ_l sinh γ_l)^{−1/2} exp(−¼ Σ_l ((ξ²+η²) tanh(γ_l/2) + (ξ−η)²/sinh γ_l))`
/// with `ξ = 2√π x`, `η = 2√π y`.
pub fn mehler_kernel(params: &ModelParams, x: &[f64], y: &[f64]) -> f64 {
    let mut prefactor = 1.0;
    let mut exponent = 0.0;
    for l in 0..params.m() {
        let g = params.gamma()[l];
        let s = g.sinh();
        let xi = 2.0 * PI.sqrt() * x[l];
        let eta = 2.0 * PI.sqrt() * y[l];
        prefactor /= (params.lambda()[l] * s).sqrt();
        exponent -= 0.25 * ((xi * xi + eta * eta) * (0.5 * g).tanh() + (xi - eta).powi(2) / s);
    }
    prefactor * exponent.exp()
}

/// `Σ_{|α| ≤ N} λ^α h_α(x) h_α(y)`.
pub fn mehler_partial_sum(params: &ModelParams, x: &[f64], y: &[f64], max_degree: usize) -> f64 {
    // acc[d] holds the sum over the channels processed so far with total degree d.
    let mut acc = vec![0.0; max_degree + 1];
    acc[0] = 1.0;
    for l in 0..params.m() {
        let hx = hermite_table(max_degree, x[l]);
        let hy = hermite_table(max_degree, y[l]);
        let lam = params.lambda()[l];
        let factors: Vec<f64> = (0..=max_degree)
            .map(|a| lam.powi(a as i32) * hx[a] * hy[a])
            .collect();
        let mut next = vec![0.0; max_degree + 1];
        for (d, slot) in next.iter_mut().enumerate() {
            *slot = (0..=d).map(|a| acc[d - a] * factors[a]).sum();
        }
        acc = next;
    }
    acc.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn log_factorials() {
        assert_eq!(log_factorial(0), 0.0);
        assert_eq!(log_factorial(1), 0.0);
        assert_relative_eq!(log_factorial(5), 120f64.ln(), max_relative = 1e-15);
        // Table/Stirling seam.
        let a = log_factorial(1024) + 1025f64.ln();
        assert_relative_eq!(log_factorial(1025), a, max_relative = 1e-14);
    }

    #[test]
    fn graded_order() {
        let idx = graded_indices(2, 2);
        let want: Vec<Vec<u32>> = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]];
        assert_eq!(idx.iter().map(|a| a.entries().to_vec()).collect::<Vec<_>>(), want);
    }

    #[test]
    fn hermite_values() {
        assert_relative_eq!(hermite(&MultiIndex::new(vec![0]), &[0.0]), 2f64.powf(0.25), max_relative = 1e-15);
        assert_eq!(hermite(&MultiIndex::new(vec![1]), &[0.0]), 0.0);
        let want = 2.0 * PI.sqrt() * 0.25 * hermite(&MultiIndex::new(vec![0]), &[0.25]);
        assert_relative_eq!(hermite(&MultiIndex::new(vec![1]), &[0.25]), want, max_relative = 1e-15);
        assert_relative_eq!(want, 0.866022, max_relative = 1e-6);
    }

    #[test]
    fn laguerre_values() {
        assert_eq!(laguerre(0, 3, 1.7), 1.0);
        assert_relative_eq!(laguerre(1, 2, 0.3), 2.7, max_relative = 1e-15);
        assert_relative_eq!(laguerre(2, 0, 1.0), -0.5, max_relative = 1e-15);
        assert_eq!(confluent_phi(0, 4, 2.0), 1.0);
        assert_relative_eq!(confluent_phi(1, 0, 0.3), 0.7, max_relative = 1e-15);
    }

    #[test]
    fn mehler_values() {
        let p = ModelParams::new(vec![0.5], vec![1.0]).unwrap();
        assert_relative_eq!(mehler_kernel(&p, &[0.0], &[0.0]), 1.0 / (0.5f64 * 0.75).sqrt(), max_relative = 1e-14);
        assert_relative_eq!(mehler_partial_sum(&p, &[0.0], &[0.0], 0), 2f64.sqrt(), max_relative = 1e-15);
    }
}
