//! The transfer operator in the Hermite basis, and the Gaussian kernel
//! identities that lead to it.
//!
//! For multi-indices α, δ let `μ_i = |α_i − δ_i|`, `M_i = max(α_i, δ_i)`,
//! `n_i = min(α_i, δ_i)`. The matrix elements are
//!
//! ```text
//! G̃_{α,δ} = (1 + (−1)^{|μ|}) λ^α ∏_i √(n_i!/M_i!) (βJ_i)^{μ_i/2} L_{n_i}^{(μ_i)}(−βJ_i)
//! ```
//!
//! so `G̃_{α,δ} = λ^α X_{α,δ}` with `X` symmetric. Conjugating by
//! `diag(λ^{α/2})` from the right, `S = diag(λ^{−α/2}) G̃ diag(λ^{α/2})`,
//! gives the symmetric matrix `S_{α,δ} = λ^{(α+δ)/2} X_{α,δ}`, which is what
//! the eigensolvers use.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::model::ModelParams;
use crate::quadrature::{integrate, integrate_2d};
use crate::specialfns::{graded_indices, laguerre, log_factorial, MultiIndex, Parity};

/// Which parity classes a truncated basis contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisParity {
    Even,
    Odd,
    Both,
}

impl BasisParity {
    fn admits(self, degree: usize) -> bool {
        match self {
            BasisParity::Both => true,
            BasisParity::Even => degree % 2 == 0,
            BasisParity::Odd => degree % 2 == 1,
        }
    }
}

impl From<Parity> for BasisParity {
    fn from(p: Parity) -> Self {
        match p {
            Parity::Even => BasisParity::Even,
            Parity::Odd => BasisParity::Odd,
        }
    }
}

/// Hermite multi-indices with `|α| ≤ degree`, graded-lexicographic order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedBasis {
    m: usize,
    degree: usize,
    parity: BasisParity,
    indices: Vec<MultiIndex>,
}

impl TruncatedBasis {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn parity(&self) -> BasisParity {
        self.parity
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

pub fn enumerate_basis(m: usize, degree: usize, parity: BasisParity) -> TruncatedBasis {
    let indices = graded_indices(m, degree)
        .into_iter()
        .filter(|a| parity.admits(a.degree()))
        .collect();
    TruncatedBasis {
        m,
        degree,
        parity,
        indices,
    }
}

/// `(sign, ln|X_{α,δ}/2|)` for the symmetric core; `None` when the entry is 0.
/// The factor 2 and the λ powers are applied outside the logarithm so that
/// the β = 0 diagonal comes out exactly as `2λ^α`.
fn core_element(params: &ModelParams, beta: f64, alpha: &[u32], delta: &[u32]) -> Option<(f64, f64)> {
    let total_mu: u32 = alpha.iter().zip(delta).map(|(a, d)| a.abs_diff(*d)).sum();
    if total_mu % 2 == 1 {
        return None;
    }
    let mut sign = if beta < 0.0 && (total_mu / 2) % 2 == 1 { -1.0 } else { 1.0 };
    let mut log_abs = 0.0;
    for l in 0..alpha.len() {
        let (a, d) = (alpha[l], delta[l]);
        let mu = a.abs_diff(d);
        let (lo, hi) = (a.min(d), a.max(d));
        let bj = beta * params.coupling()[l];
        if mu > 0 {
            if bj == 0.0 {
                return None;
            }
            log_abs += 0.5 * f64::from(mu) * bj.abs().ln() + 0.5 * (log_factorial(lo) - log_factorial(hi));
        }
        let lag = laguerre(lo, mu, -bj);
        if lag == 0.0 {
            return None;
        }
        sign *= lag.signum();
        if lag.abs() != 1.0 {
            log_abs += lag.abs().ln();
        }
    }
    Some((sign, log_abs))
}

fn lambda_power(params: &ModelParams, alpha: &[u32]) -> f64 {
    alpha
        .iter()
        .zip(params.lambda())
        .map(|(&a, x)| x.powi(a as i32))
        .product()
}

/// `G̃_{α,δ}`; the factorial/Laguerre part is combined in log space and
/// exponentiated once.
pub fn matrix_element(params: &ModelParams, beta: f64, alpha: &MultiIndex, delta: &MultiIndex) -> f64 {
    match core_element(params, beta, alpha.entries(), delta.entries()) {
        None => 0.0,
        Some((sign, log_abs)) => 2.0 * sign * lambda_power(params, alpha.entries()) * log_abs.exp(),
    }
}

/// `S_{α,δ} = λ^{(α+δ)/2} X_{α,δ}`, symmetric in (α, δ) by construction.
pub fn symmetric_element(params: &ModelParams, beta: f64, alpha: &MultiIndex, delta: &MultiIndex) -> f64 {
    match core_element(params, beta, alpha.entries(), delta.entries()) {
        None => 0.0,
        Some((sign, log_abs)) => {
            let pa = lambda_power(params, alpha.entries());
            let half = if alpha == delta {
                pa
            } else {
                pa.sqrt() * lambda_power(params, delta.entries()).sqrt()
            };
            2.0 * sign * half * log_abs.exp()
        }
    }
}

fn check_basis(params: &ModelParams, basis: &TruncatedBasis) -> Result<()> {
    if basis.m != params.m() {
        return Err(domain(format!(
            "basis has m = {} but the model has m = {}",
            basis.m,
            params.m()
        )));
    }
    Ok(())
}

fn assemble_with<F>(basis: &TruncatedBasis, element: F) -> DMatrix<f64>
where
    F: Fn(&MultiIndex, &MultiIndex) -> f64 + Sync,
{
    let n = basis.len();
    let rows: Vec<Vec<f64>> = basis
        .indices
        .par_iter()
        .map(|a| basis.indices.iter().map(|d| element(a, d)).collect())
        .collect();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

/// Dense `G̃` on a truncated basis; `entries[(row α, col δ)] = G̃_{α,δ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GMatrix {
    basis: TruncatedBasis,
    entries: DMatrix<f64>,
    beta: f64,
    params: ModelParams,
}

pub fn assemble_matrix(params: &ModelParams, beta: f64, basis: &TruncatedBasis) -> Result<GMatrix> {
    check_basis(params, basis)?;
    let entries = assemble_with(basis, |a, d| matrix_element(params, beta, a, d));
    Ok(GMatrix {
        basis: basis.clone(),
        entries,
        beta,
        params: params.clone(),
    })
}

/// The symmetric similarity transform `S` of `G̃` on the basis.
pub fn assemble_symmetric(params: &ModelParams, beta: f64, basis: &TruncatedBasis) -> Result<DMatrix<f64>> {
    check_basis(params, basis)?;
    Ok(assemble_with(basis, |a, d| symmetric_element(params, beta, a, d)))
}

#[derive(Serialize)]
struct GMatrixDump<'a> {
    beta: f64,
    params: &'a ModelParams,
    basis: &'a [MultiIndex],
    rows: Vec<Vec<f64>>,
}

impl GMatrix {
    pub fn basis(&self) -> &TruncatedBasis {
        &self.basis
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// `diag(λ^{−α/2}) G̃ diag(λ^{α/2})`, computed from the stored entries.
    pub fn similarity_transform(&self) -> DMatrix<f64> {
        let half: Vec<f64> = self
            .basis
            .indices
            .iter()
            .map(|a| a.power(self.params.lambda()).sqrt())
            .collect();
        DMatrix::from_fn(self.entries.nrows(), self.entries.ncols(), |i, j| {
            self.entries[(i, j)] / half[i] * half[j]
        })
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    /// Debug dump as a JSON object with an array of rows.
    pub fn to_json(&self) -> serde_json::Value {
        let rows = self
            .entries
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect();
        serde_json::to_value(GMatrixDump {
            beta: self.beta,
            params: &self.params,
            basis: &self.basis.indices,
            rows,
        })
        .expect("matrix dump is plain data")
    }
}

/// `trace G̃ = 2 exp(Σ_l βJ_lλ_l/(1−λ_l)) / ∏_l (1−λ_l)`.
pub fn gtrace_closed(params: &ModelParams, beta: f64) -> f64 {
    let det: f64 = params.lambda().iter().map(|x| 1.0 - x).product();
    2.0 * (beta * params.energy_bound()).exp() / det
}

/// `2 Σ_{|α| ≤ N} λ^α ∏_i Φ(−α_i, 1; −βJ_i)`, the diagonal of `G̃` summed
/// through degree N (note `Φ(−n, 1; x) = L_n(x)`).
pub fn gtrace_partial(params: &ModelParams, beta: f64, degree: usize) -> f64 {
    let tables: Vec<Vec<f64>> = (0..params.m())
        .map(|l| {
            let x = -beta * params.coupling()[l];
            (0..=degree as u32)
                .map(|a| params.lambda()[l].powi(a as i32) * laguerre(a, 0, x))
                .collect()
        })
        .collect();
    let mut acc = vec![0.0; degree + 1];
    acc[0] = 1.0;
    for t in &tables {
        let mut next = vec![0.0; degree + 1];
        for (d, slot) in next.iter_mut().enumerate() {
            *slot = (0..=d).map(|a| acc[d - a] * t[a]).sum();
        }
        acc = next;
    }
    2.0 * acc.iter().sum::<f64>()
}

fn gaussian_exponent(params: &ModelParams, xi: &[f64], eta: &[f64]) -> f64 {
    (0..params.m())
        .map(|l| {
            let g = params.gamma()[l];
            -0.25 * ((xi[l].powi(2) + eta[l].powi(2)) * (0.5 * g).tanh() + (xi[l] - eta[l]).powi(2) / g.sinh())
        })
        .sum()
}

/// `K̃(ξ, η) = 2 ∏_l (4π sinh γ_l)^{−1/2} exp(−¼ Σ_l (…))`.
pub fn kernel_k_tilde(params: &ModelParams, xi: &[f64], eta: &[f64]) -> f64 {
    let pre: f64 = params
        .gamma()
        .iter()
        .map(|g| (4.0 * PI * g.sinh()).sqrt().recip())
        .product();
    2.0 * pre * gaussian_exponent(params, xi, eta).exp()
}

/// `K_β(ξ, η) = (cosh(Σ√(βJ)ξ) cosh(Σ√(βJ)η))^{1/2} K̃(ξ, η)`, for β ≥ 0.
pub fn kernel_k(params: &ModelParams, beta: f64, xi: &[f64], eta: &[f64]) -> Result<f64> {
    if beta < 0.0 {
        return Err(domain("the kernel K_beta needs beta >= 0"));
    }
    let r: Vec<f64> = params.coupling().iter().map(|j| (beta * j).sqrt()).collect();
    let a: f64 = r.iter().zip(xi).map(|(r, x)| r * x).sum();
    let b: f64 = r.iter().zip(eta).map(|(r, x)| r * x).sum();
    Ok((a.cosh() * b.cosh()).sqrt() * kernel_k_tilde(params, xi, eta))
}

/// The n×n circulant Gaussian precision matrix of the periodic chain and
/// its determinant / definiteness diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct BMatrixReport {
    pub matrix: DMatrix<f64>,
    pub determinant: f64,
    pub determinant_closed: f64,
    pub min_eigenvalue: f64,
    pub positive_definite: bool,
}

/// `B = (βJ sinh γ)^{−1} (cosh γ·I − ½(P + Pᵀ))` with P the cyclic shift.
/// At n = 2, `P = Pᵀ` and the two neighbour terms add to −1.
pub fn kac_b_matrix(beta_j: f64, gamma: f64, n: usize) -> Result<BMatrixReport> {
    if n < 2 {
        return Err(domain("the B matrix needs n >= 2"));
    }
    if !(beta_j > 0.0 && gamma > 0.0) {
        return Err(domain("betaJ and gamma must be positive"));
    }
    let s = gamma.sinh();
    let mut b = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        b[(i, i)] += gamma.cosh();
        b[(i, (i + 1) % n)] -= 0.5;
        b[((i + 1) % n, i)] -= 0.5;
    }
    b /= beta_j * s;
    let determinant = b.clone().lu().determinant();
    let determinant_closed = 4.0 * (0.5 * n as f64 * gamma).sinh().powi(2) / (2.0 * beta_j * s).powi(n as i32);
    let min_eigenvalue = SymmetricEigen::new(b.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok(BMatrixReport {
        matrix: b,
        determinant,
        determinant_closed,
        min_eigenvalue,
        positive_definite: min_eigenvalue > 0.0,
    })
}

/// `A_{ij} = βJ Σ_{k∈Z} e^{−γ|i−j+nk|}`, the covariance whose inverse is B.
pub fn kac_a_matrix(beta_j: f64, gamma: f64, n: usize) -> DMatrix<f64> {
    let q = (-gamma * n as f64).exp();
    DMatrix::from_fn(n, n, |i, j| {
        let d = i.abs_diff(j) as f64;
        beta_j * ((-gamma * d).exp() + (-gamma * (n as f64 - d)).exp()) / (1.0 - q)
    })
}

/// Both sides of
/// `coth γ Σx_i² − Σ x_i x_{i−1}/sinh γ = ½(tanh(γ/2) Σ(x_i² + x_{i−1}²) + Σ(x_i − x_{i−1})²/sinh γ)`
/// with cyclic indexing `x_0 = x_n`.
pub fn form_identity(gamma: f64, x: &[f64]) -> (f64, f64) {
    let n = x.len();
    let prev = |i: usize| x[(i + n - 1) % n];
    let sq: f64 = x.iter().map(|v| v * v).sum();
    let cross: f64 = (0..n).map(|i| x[i] * prev(i)).sum();
    let lhs = sq / gamma.tanh() - cross / gamma.sinh();
    let sym: f64 = (0..n).map(|i| x[i].powi(2) + prev(i).powi(2)).sum();
    let diff: f64 = (0..n).map(|i| (x[i] - prev(i)).powi(2)).sum();
    let rhs = 0.5 * ((0.5 * gamma).tanh() * sym + diff / gamma.sinh());
    (lhs, rhs)
}

/// Both sides of
/// `e^{½x·Ax} = (2π)^{−n/2} (det B)^{1/2} ∫ e^{x·z − ½z·Bz} dz`, `B = A^{−1}`,
/// with the right side from adaptive quadrature on a box around the
/// integrand's peak `z* = Ax`. n ≤ 2.
pub fn gaussian_identity_check(a: &DMatrix<f64>, x: &[f64]) -> Result<(f64, f64)> {
    let n = a.nrows();
    if n == 0 || n > 2 || a.ncols() != n || x.len() != n {
        return Err(domain("gaussian_identity_check supports square A of size 1 or 2 with matching x"));
    }
    if (a - a.transpose()).amax() > 1e-12 * a.amax() {
        return Err(domain("A must be symmetric"));
    }
    let eig = SymmetricEigen::new(a.clone());
    let lmin = eig.eigenvalues.min();
    let lmax = eig.eigenvalues.max();
    if !(lmin > 0.0) {
        return Err(domain("A must be positive definite"));
    }
    let b = a.clone().try_inverse().ok_or_else(|| domain("A is singular"))?;
    let xv = nalgebra::DVector::from_column_slice(x);
    let quad = xv.dot(&(a * &xv));
    let lhs = (0.5 * quad).exp();
    let center = a * &xv;
    // Shift the exponent by its maximum ½x·Ax to keep the integrand O(1).
    let half_width = 12.0 * lmax.sqrt();
    let tol = 1e-10;
    let integral = match n {
        1 => {
            let (c, bb) = (center[0], b[(0, 0)]);
            integrate(
                |z| Complex64::new((x[0] * z - 0.5 * bb * z * z - 0.5 * quad).exp(), 0.0),
                c - half_width,
                c + half_width,
                tol,
                tol,
            )?
        }
        _ => integrate_2d(
            |z0, z1| {
                let e = x[0] * z0 + x[1] * z1
                    - 0.5 * (b[(0, 0)] * z0 * z0 + 2.0 * b[(0, 1)] * z0 * z1 + b[(1, 1)] * z1 * z1)
                    - 0.5 * quad;
                Complex64::new(e.exp(), 0.0)
            },
            (center[0] - half_width, center[0] + half_width),
            (center[1] - half_width, center[1] + half_width),
            tol,
            tol,
        )?,
    };
    if integral.error > 1e-8 * integral.value.norm() {
        return Err(Error::Quadrature {
            estimate: integral.error,
            tolerance: 1e-8 * integral.value.norm(),
        });
    }
    let det_b = b.clone().lu().determinant();
    let rhs = (2.0 * PI).powf(-(n as f64) / 2.0) * det_b.sqrt() * integral.value.re * (0.5 * quad).exp();
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p1() -> ModelParams {
        ModelParams::new(vec![0.5], vec![1.0]).unwrap()
    }

    #[test]
    fn basis_examples() {
        let b = enumerate_basis(1, 3, BasisParity::Both);
        assert_eq!(b.len(), 4);
        assert_eq!(enumerate_basis(2, 2, BasisParity::Both).len(), 6);
        let even = enumerate_basis(2, 2, BasisParity::Even);
        let got: Vec<Vec<u32>> = even.indices().iter().map(|a| a.entries().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 0], vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn element_examples() {
        let p = p1();
        let a = |v: u32| MultiIndex::new(vec![v]);
        assert_eq!(matrix_element(&p, 1.3, &a(0), &a(0)), 2.0);
        assert_eq!(matrix_element(&p, 1.0, &a(1), &a(0)), 0.0);
        assert_relative_eq!(matrix_element(&p, 1.0, &a(2), &a(0)), 0.5 / 2f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn beta_zero_is_diagonal() {
        let b = enumerate_basis(1, 3, BasisParity::Both);
        let g = assemble_matrix(&p1(), 0.0, &b).unwrap();
        assert_eq!(g.entries(), &DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 1.0, 0.5, 0.25])));
    }

    #[test]
    fn kernel_examples() {
        let p = p1();
        assert_relative_eq!(kernel_k(&p, 0.0, &[0.0], &[0.0]).unwrap(), 0.651470, max_relative = 1e-6);
        assert!(kernel_k(&p, -1.0, &[0.0], &[0.0]).is_err());
    }

    #[test]
    fn b_matrix_examples() {
        let g = 2f64.ln();
        let r = kac_b_matrix(1.0, g, 2).unwrap();
        assert_relative_eq!(r.determinant, 1.0, max_relative = 1e-14);
        assert_relative_eq!(r.matrix[(0, 1)], -1.0 / 0.75, max_relative = 1e-15);
        let r = kac_b_matrix(1.0, g, 4).unwrap();
        assert_relative_eq!(r.determinant, 4.0 * 1.875f64.powi(2) / 5.0625, max_relative = 1e-12);
        assert!(kac_b_matrix(1.0, g, 1).is_err());
    }

    #[test]
    fn cramer_examples() {
        let (l, r) = gaussian_identity_check(&DMatrix::from_element(1, 1, 1.0), &[0.0]).unwrap();
        assert_relative_eq!(l, 1.0);
        assert_relative_eq!(r, 1.0, max_relative = 1e-8);
        let (l, r) = gaussian_identity_check(&DMatrix::from_element(1, 1, 2.0), &[1.0]).unwrap();
        assert_relative_eq!(l, std::f64::consts::E);
        assert_relative_eq!(r, std::f64::consts::E, max_relative = 1e-8);
    }
}
