//! Spectra of the truncated operator and everything built on them:
//! Fredholm determinants, the Ruelle zeta function, real roots of the
//! determinant factors, large-|β| asymptotics, degeneracies at λ = ½, and
//! reconstruction of eigenfunctions as entire functions.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::kacgutz::{assemble_symmetric, enumerate_basis, GMatrix, TruncatedBasis};
use crate::model::{partition_function_bruteforce, ModelParams};
use crate::quadrature::{integrate, integrate_2d, Estimate};
use crate::ruelle::{default_radii, default_sample_points, EntireFunctionSample};
use crate::specialfns::{graded_indices, log_factorial, MultiIndex, Parity};

/// Default truncation degree per channel count. At λ = ½, ΣJ = 1, |β| ≤ 1
/// the top five eigenvalues then move by less than 1e-9 (relative) between
/// N and N+4; stronger coupling or smaller temperatures need more, which
/// `tail_gap` and the zeta convergence warning report.
pub fn default_degree(m: usize) -> usize {
    match m {
        1 => 60,
        2 => 20,
        3 => 16,
        _ => 10,
    }
}

/// Number of leading eigenvalues compared when computing `tail_gap`.
const TAIL_GAP_COUNT: usize = 5;

/// Eigenvalues of the truncated operator, descending, with the parity block
/// each came from. `tail_gap` is the largest absolute movement among the
/// leading five eigenvalues between truncation degrees N−2 and N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    pub parities: Vec<Parity>,
    pub degree: usize,
    pub tail_gap: f64,
}

/// Eigen-decomposition of one parity block. Column k of `coefficients` holds
/// the Hermite-basis coefficients of the eigenfunction for `values[k]`,
/// scaled so its largest-magnitude entry is +1.
#[derive(Debug, Clone)]
pub struct EigenBlock {
    pub basis: TruncatedBasis,
    pub values: Vec<f64>,
    pub coefficients: DMatrix<f64>,
}

fn symmetric_solve(s: DMatrix<f64>) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    if s.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigensolve("matrix has non-finite entries".into()));
    }
    if s.nrows() == 0 {
        return Ok(SymmetricEigen::new(s));
    }
    SymmetricEigen::try_new(s, f64::EPSILON, 100_000)
        .ok_or_else(|| Error::Eigensolve("symmetric QR iteration did not converge".into()))
}

/// Eigenpairs of the parity block of `G̃` truncated at degree N.
///
/// The coefficients are the left eigenvectors of `G̃` (equivalently
/// `diag(λ^{−α/2})` times the eigenvectors of the symmetric transform): with
/// the row convention `entries[α][δ] = G̃_{α,δ}` these are the vectors that
/// expand eigenfunctions in the Hermite basis.
pub fn eigen_block(params: &ModelParams, beta: f64, degree: usize, parity: Parity) -> Result<EigenBlock> {
    let basis = enumerate_basis(params.m(), degree, parity.into());
    let eig = symmetric_solve(assemble_symmetric(params, beta, &basis)?)?;
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let unscale: Vec<f64> = basis
        .indices()
        .iter()
        .map(|a| a.power(params.lambda()).sqrt().recip())
        .collect();
    let n = basis.len();
    let mut coefficients = DMatrix::<f64>::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let mut c: Vec<f64> = (0..n).map(|i| eig.eigenvectors[(i, k)] * unscale[i]).collect();
        let pivot = c.iter().copied().fold(0.0f64, |acc, v| if v.abs() > acc.abs() { v } else { acc });
        if pivot != 0.0 {
            c.iter_mut().for_each(|v| *v /= pivot);
        }
        for (i, v) in c.into_iter().enumerate() {
            coefficients[(i, col)] = v;
        }
    }
    Ok(EigenBlock {
        values: order.iter().map(|&k| eig.eigenvalues[k]).collect(),
        basis,
        coefficients,
    })
}

fn block_values(params: &ModelParams, beta: f64, degree: usize, parity: Parity) -> Result<Vec<f64>> {
    let basis = enumerate_basis(params.m(), degree, parity.into());
    let s = assemble_symmetric(params, beta, &basis)?;
    if s.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigensolve("matrix has non-finite entries".into()));
    }
    // Values only: skipping the eigenvector accumulation is several times faster.
    Ok(s.symmetric_eigenvalues().iter().copied().collect())
}

/// Merged even and odd block spectra, descending, without the tail diagnostic.
pub fn spectrum(params: &ModelParams, beta: f64, degree: usize) -> Result<(Vec<f64>, Vec<Parity>)> {
    let (even, odd) = rayon::join(
        || block_values(params, beta, degree, Parity::Even),
        || block_values(params, beta, degree, Parity::Odd),
    );
    let mut all: Vec<(f64, Parity)> = even?
        .into_iter()
        .map(|v| (v, Parity::Even))
        .chain(odd?.into_iter().map(|v| (v, Parity::Odd)))
        .collect();
    all.sort_by(|a, b| b.0.total_cmp(&a.0));
    Ok(all.into_iter().unzip())
}

pub fn eigenvalues(params: &ModelParams, beta: f64, degree: usize) -> Result<SpectralResult> {
    if degree < 2 {
        return Err(domain("truncation degree N must be at least 2"));
    }
    let (eigenvalues, parities) = spectrum(params, beta, degree)?;
    let (coarse, _) = spectrum(params, beta, degree - 2)?;
    let tail_gap = eigenvalues
        .iter()
        .zip(&coarse)
        .take(TAIL_GAP_COUNT)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(SpectralResult {
        eigenvalues,
        parities,
        degree,
        tail_gap,
    })
}

/// Eigenvalues of the raw (nonsymmetric) `G̃` from a real Schur decomposition.
pub fn nonsymmetric_eigenvalues(g: &GMatrix) -> Result<Vec<Complex64>> {
    let schur = Schur::try_new(g.entries().clone(), f64::EPSILON, 100_000)
        .ok_or_else(|| Error::Eigensolve("Schur iteration did not converge".into()))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// `∏_k (1 − z·scale·ϱ_k)`.
pub fn fredholm_product(eigenvalues: &[f64], z: Complex64, scale: f64) -> Complex64 {
    eigenvalues
        .iter()
        .fold(Complex64::new(1.0, 0.0), |acc, &r| acc * (1.0 - z * scale * r))
}

pub fn fredholm_det(spec: &SpectralResult, z: Complex64, scale: f64) -> Complex64 {
    fredholm_product(&spec.eigenvalues, z, scale)
}

/// Exponent `(−1)^{|α|+1}` of the factor `det(1 − zλ^α L_β)` in ζ.
fn factor_exponent(alpha: &[u8]) -> i32 {
    if alpha.iter().map(|&a| a as usize).sum::<usize>() % 2 == 0 {
        -1
    } else {
        1
    }
}

fn binary_indices(m: usize) -> Vec<Vec<u8>> {
    (0..1usize << m)
        .map(|mask| (0..m).map(|l| (mask >> l & 1) as u8).collect())
        .collect()
}

fn binary_scale(params: &ModelParams, alpha: &[u8]) -> f64 {
    alpha
        .iter()
        .zip(params.lambda())
        .map(|(&a, x)| if a == 1 { *x } else { 1.0 })
        .product()
}

/// Relative difference between the N and N−4 zeta values above which a
/// convergence warning is attached.
pub const ZETA_WARNING_THRESHOLD: f64 = 1e-6;

/// Denominator factors smaller than this in modulus are treated as poles.
pub const POLE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaFactor {
    pub alpha: Vec<u8>,
    pub exponent: i32,
    pub determinant: Complex64,
}

/// ζ_R(z, β) in factored form, with the same quantity at degree N−4 as a
/// stabilization diagnostic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaValue {
    pub z: Complex64,
    pub beta: f64,
    pub value: Complex64,
    pub factors: Vec<ZetaFactor>,
    pub degree: usize,
    pub value_coarse: Complex64,
    pub convergence_warning: bool,
}

fn zeta_from_spectrum(params: &ModelParams, beta: f64, z: Complex64, eigs: &[f64]) -> Result<(Complex64, Vec<ZetaFactor>)> {
    let mut value = Complex64::new(1.0, 0.0);
    let mut factors = Vec::new();
    for alpha in binary_indices(params.m()) {
        let det = fredholm_product(eigs, z, binary_scale(params, &alpha));
        let exponent = factor_exponent(&alpha);
        if exponent < 0 {
            if det.norm() < POLE_TOLERANCE {
                return Err(Error::PoleAt { beta, z, alpha });
            }
            value /= det;
        } else {
            value *= det;
        }
        factors.push(ZetaFactor {
            alpha,
            exponent,
            determinant: det,
        });
    }
    Ok((value, factors))
}

/// `ζ_R(z, β) = ∏_{α ∈ {0,1}^m} det(1 − zλ^α L_β)^{(−1)^{|α|+1}}` from the
/// degree-N spectrum.
pub fn zeta(params: &ModelParams, beta: f64, z: Complex64, degree: usize) -> Result<ZetaValue> {
    let (eigs, _) = spectrum(params, beta, degree)?;
    let (value, factors) = zeta_from_spectrum(params, beta, z, &eigs)?;
    let (coarse_eigs, _) = spectrum(params, beta, degree.saturating_sub(4))?;
    let value_coarse = zeta_from_spectrum(params, beta, z, &coarse_eigs)
        .map(|(v, _)| v)
        .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    let drift = (value - value_coarse).norm() / value.norm().max(f64::MIN_POSITIVE);
    Ok(ZetaValue {
        z,
        beta,
        value,
        factors,
        degree,
        value_coarse,
        convergence_warning: !(drift <= ZETA_WARNING_THRESHOLD),
    })
}

/// `exp(Σ_{n ≤ n_terms} z^n Z_n(β)/n)` with brute-force `Z_n`; requires
/// `|z|·2e^{|β|c} < 1`, `c = Σ J_lλ_l/(1−λ_l)`.
pub fn zeta_series_partial(params: &ModelParams, beta: f64, z: Complex64, n_terms: usize) -> Result<Complex64> {
    let rate = z.norm() * 2.0 * (beta.abs() * params.energy_bound()).exp();
    if !(rate < 1.0) {
        return Err(Error::ConvergenceDomain(rate));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut zn = Complex64::new(1.0, 0.0);
    for n in 1..=n_terms {
        zn *= z;
        sum += zn * partition_function_bruteforce(params, beta, n)? / n as f64;
    }
    Ok(sum.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootKind {
    Zero,
    Pole,
}

impl RootKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RootKind::Zero => "zero",
            RootKind::Pole => "pole",
        }
    }
}

/// A real root β* of one determinant factor `d_α(β) = det(1 − zλ^α L_β)`.
/// `multiplicity` counts the eigenvalue branches crossing `1/(zλ^α)` at β*;
/// an even multiplicity is a root at which `d_α` does not change sign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootRecord {
    pub beta: f64,
    pub alpha: Vec<u8>,
    pub kind: RootKind,
    pub multiplicity: usize,
    pub factor_value: f64,
}

/// Root refinement stops once the bracket is narrower than this.
pub const ROOT_TOLERANCE: f64 = 1e-10;

/// Shrinks a sign-change bracket below `ROOT_TOLERANCE` with the Illinois
/// variant of regula falsi, falling back to bisection whenever the secant
/// step stalls on one side.
fn refine_bracket(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok((a, a));
    }
    if fb == 0.0 {
        return Ok((b, b));
    }
    let mut side = 0i8;
    for _ in 0..200 {
        if b - a <= ROOT_TOLERANCE {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !(c > a && c < b) || side.abs() >= 3 {
            c = 0.5 * (a + b);
            side = 0;
        }
        // Force a strict shrink once the secant estimate has settled.
        let guard = 0.25 * ROOT_TOLERANCE;
        c = c.clamp(a + guard, b - guard);
        let fc = f(c)?;
        if fc == 0.0 {
            return Ok((c, c));
        }
        if (fc < 0.0) == (fa < 0.0) {
            a = c;
            fa = fc;
            if side < 0 {
                side -= 1;
                fb *= 0.5;
            } else {
                side = -1;
            }
        } else {
            b = c;
            fb = fc;
            if side > 0 {
                side += 1;
                fa *= 0.5;
            } else {
                side = 1;
            }
        }
    }
    Ok((a, b))
}

/// Real roots in β of every factor `d_α(β) = ∏_k (1 − zλ^α ϱ_k(β))`, α ∈ {0,1}^m.
///
/// `d_α` vanishes exactly when an ordered eigenvalue `ϱ_k(β)` passes through
/// `1/(zλ^α)`. Tracking each ordered branch (rather than the sign of `d_α`)
/// also finds roots of even multiplicity, which a sign scan of `d_α` misses —
/// the λ = ½ family produces such double roots for m ≥ 3. The grid with
/// spacing `grid_step` brackets the crossings; each is refined to
/// `ROOT_TOLERANCE`, and coincident crossings of one factor are merged.
/// Roots are returned in ascending β.
pub fn find_real_zeros_poles(
    params: &ModelParams,
    z: f64,
    (lo, hi): (f64, f64),
    degree: usize,
    grid_step: f64,
) -> Result<Vec<RootRecord>> {
    if !(grid_step > 0.0) {
        return Err(domain("grid_step must be positive"));
    }
    if !(lo < hi) || z == 0.0 {
        return Ok(Vec::new());
    }
    let steps = ((hi - lo) / grid_step).floor() as usize;
    let mut grid: Vec<f64> = (0..=steps).map(|k| lo + k as f64 * grid_step).collect();
    if hi - grid[steps] > 1e-12 * grid_step {
        grid.push(hi);
    }
    let spectra: Vec<Vec<f64>> = grid
        .par_iter()
        .map(|&b| spectrum(params, b, degree).map(|s| s.0))
        .collect::<Result<_>>()?;
    let mut brackets = Vec::new();
    for alpha in binary_indices(params.m()) {
        let threshold = 1.0 / (z * binary_scale(params, &alpha));
        for k in 0..spectra[0].len() {
            for i in 0..grid.len() - 1 {
                let (ga, gb) = (spectra[i][k] - threshold, spectra[i + 1][k] - threshold);
                // A branch sitting exactly on the threshold at a grid point is
                // attributed to the bracket on its left (or the last point).
                if ga == 0.0 || ga * gb < 0.0 || (gb == 0.0 && i + 2 == grid.len()) {
                    brackets.push((alpha.clone(), k, threshold, grid[i], grid[i + 1]));
                }
            }
        }
    }
    let mut crossings: Vec<(Vec<u8>, f64)> = brackets
        .into_par_iter()
        .map(|(alpha, k, threshold, a, b)| {
            let f = |x: f64| spectrum(params, x, degree).map(|s| s.0[k] - threshold);
            let (a, b) = refine_bracket(f, a, b)?;
            Ok((alpha, 0.5 * (a + b)))
        })
        .collect::<Result<_>>()?;
    crossings.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let mut merged: Vec<(Vec<u8>, f64, usize)> = Vec::new();
    for (alpha, beta) in crossings {
        match merged.last_mut() {
            Some((a, b, mult)) if *a == alpha && (beta - *b).abs() <= 10.0 * ROOT_TOLERANCE => *mult += 1,
            _ => merged.push((alpha, beta, 1)),
        }
    }
    merged.sort_by(|x, y| x.1.total_cmp(&y.1).then_with(|| x.0.cmp(&y.0)));
    merged
        .into_par_iter()
        .map(|(alpha, beta, multiplicity)| {
            let (eigs, _) = spectrum(params, beta, degree)?;
            let factor_value = fredholm_product(&eigs, Complex64::new(z, 0.0), binary_scale(params, &alpha)).re;
            let kind = if factor_exponent(&alpha) < 0 {
                RootKind::Pole
            } else {
                RootKind::Zero
            };
            Ok(RootRecord {
                beta,
                alpha,
                kind,
                multiplicity,
                factor_value,
            })
        })
        .collect()
}

/// Direction of the large-|β| limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "+inf")]
    PlusInfinity,
    #[serde(rename = "-inf")]
    MinusInfinity,
}

/// Leading-order eigenvalue branch for large |β| (all λ_l < ½):
///
/// * β → +∞: `λ^α exp(β Σ_l J_lλ_l/(1−λ_l))` for both parities;
/// * β → −∞: `(−1)^{|α|} λ^α exp(−β Σ_l J_lλ_l/(1+λ_l))` (even) and the
///   negative of that (odd).
pub fn asymptotic_prediction(params: &ModelParams, alpha: &MultiIndex, beta: f64, direction: Direction, parity: Parity) -> Result<f64> {
    if let Some(x) = params.lambda().iter().find(|&&x| x >= 0.5) {
        return Err(domain(format!("asymptotic branches need every lambda < 1/2, got {x}")));
    }
    if alpha.m() != params.m() {
        return Err(domain("alpha must have one entry per channel"));
    }
    let lam_alpha = alpha.power(params.lambda());
    let pairs = params.lambda().iter().zip(params.coupling());
    Ok(match direction {
        Direction::PlusInfinity => {
            let c: f64 = pairs.map(|(x, j)| j * x / (1.0 - x)).sum();
            lam_alpha * (beta * c).exp()
        }
        Direction::MinusInfinity => {
            let c: f64 = pairs.map(|(x, j)| j * x / (1.0 + x)).sum();
            let sign = if alpha.degree() % 2 == 0 { 1.0 } else { -1.0 } * parity.sign();
            sign * lam_alpha * (-beta * c).exp()
        }
    })
}

/// The `count` predicted branches of largest modulus for one parity.
pub fn leading_predictions(params: &ModelParams, beta: f64, direction: Direction, parity: Parity, count: usize) -> Result<Vec<f64>> {
    let mut preds = graded_indices(params.m(), count.max(1) * 4)
        .iter()
        .map(|a| asymptotic_prediction(params, a, beta, direction, parity))
        .collect::<Result<Vec<_>>>()?;
    preds.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    preds.truncate(count);
    Ok(preds)
}

/// Eigenvalues of one parity block ordered by decreasing modulus.
pub fn block_by_modulus(params: &ModelParams, beta: f64, degree: usize, parity: Parity) -> Result<Vec<f64>> {
    let mut v = block_values(params, beta, degree, parity)?;
    v.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    Ok(v)
}

/// Number of eigenvalues within `rel_tol·|target|` of `target`.
pub fn degeneracy_count(spec: &SpectralResult, target: f64, rel_tol: f64) -> usize {
    spec.eigenvalues
        .iter()
        .filter(|&&r| (r - target).abs() <= rel_tol * target.abs())
        .count()
}

/// `C(n, k)` for nonnegative arguments (0 when k > n).
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc as u64
}

/// Multiplicity of `e^{βΣJ}·2^{−n}` in the λ = ½ spectrum:
/// `C(m+n−2, n)` for m ≥ 2; for m = 1 only n = 0 occurs.
pub fn polydim(m: usize, n: usize) -> u64 {
    if m == 0 {
        return 0;
    }
    if m == 1 {
        return u64::from(n == 0);
    }
    binomial((m + n - 2) as u64, n as u64)
}

/// Both sides of `Σ_k C(m,2k) C(m−2k+r, l) = Σ_k C(m,2k+1) C(m−2k+r−1, l)`.
pub fn binom_identity_check(m: usize, r: usize, l: usize) -> (u64, u64) {
    let (m, r, l) = (m as u64, r as u64, l as u64);
    let lhs = (0..=m / 2).map(|k| binomial(m, 2 * k) * binomial(m - 2 * k + r, l)).sum();
    let rhs = (0..=m.saturating_sub(1) / 2)
        .filter(|k| 2 * k + 1 <= m)
        .map(|k| binomial(m, 2 * k + 1) * binomial(m - 2 * k + r - 1, l))
        .sum();
    (lhs, rhs)
}

/// For λ_l = ½ and `ϱ₁ = rho1`: the truncated product
/// `∏_{k=0}^{m} ∏_{r=0}^{R} (1 − 2^{−(k+r)} ϱ₁)^{(−1)^{k+1} C(m,k) C(m+r−2,r)}`
/// and its closed form `(1 − ϱ₁/2)/(1 − ϱ₁)`.
pub fn half_reduction_product(m: usize, rho1: f64, r_max: usize) -> Result<(f64, f64)> {
    if (1.0 - rho1).abs() < 1e-15 {
        return Err(Error::PoleAt {
            beta: f64::NAN,
            z: Complex64::new(1.0, 0.0),
            alpha: vec![0; m],
        });
    }
    let mut log_abs = 0.0;
    let mut negative = false;
    for k in 0..=m {
        for r in 0..=r_max {
            let mult = binomial(m as u64, k as u64) * polydim(m, r);
            if mult == 0 {
                continue;
            }
            let base = 1.0 - 0.5f64.powi((k + r) as i32) * rho1;
            let e = mult as f64 * if k % 2 == 1 { 1.0 } else { -1.0 };
            log_abs += e * base.abs().ln();
            if base < 0.0 && mult % 2 == 1 {
                negative = !negative;
            }
        }
    }
    let product = if negative { -log_abs.exp() } else { log_abs.exp() };
    Ok((product, (1.0 - 0.5 * rho1) / (1.0 - rho1)))
}

/// [`half_reduction_product`] at `ϱ₁ = e^{βΣJ}`; every λ_l must equal ½.
pub fn half_reduction_check(params: &ModelParams, beta: f64, r_max: usize) -> Result<(f64, f64)> {
    if params.lambda().iter().any(|&x| x != 0.5) {
        return Err(domain("half_reduction_check needs every lambda equal to 1/2"));
    }
    half_reduction_product(params.m(), (beta * params.total_coupling()).exp(), r_max)
}

/// Entire function `F(z) = Σ_α c_α ∏_l (√(βJ_l) z_l)^{α_l} / √(α_l!)`
/// represented by Hermite-basis coefficients `c` (β > 0).
pub fn reconstruct_eigenfunction(params: &ModelParams, beta: f64, basis: &TruncatedBasis, coefficients: &[f64]) -> Result<EntireFunctionSample> {
    if !(beta > 0.0) {
        return Err(domain("eigenfunction reconstruction needs beta > 0"));
    }
    if coefficients.len() != basis.len() || basis.m() != params.m() {
        return Err(domain("coefficient vector does not match the basis"));
    }
    let scale: Vec<f64> = params.coupling().iter().map(|j| (beta * j).sqrt()).collect();
    let degree = basis.degree();
    let norm: Vec<f64> = (0..=degree as u32).map(|a| (-0.5 * log_factorial(a)).exp()).collect();
    let terms: Vec<(Vec<usize>, f64)> = basis
        .indices()
        .iter()
        .zip(coefficients)
        .filter(|(_, &c)| c != 0.0)
        .map(|(a, &c)| (a.entries().iter().map(|&x| x as usize).collect(), c))
        .collect();
    let f = move |z: &[Complex64]| {
        let tables: Vec<Vec<Complex64>> = z
            .iter()
            .zip(&scale)
            .map(|(z, s)| {
                let w = z * s;
                let mut p = Complex64::new(1.0, 0.0);
                (0..=degree)
                    .map(|a| {
                        let v = p * norm[a];
                        p *= w;
                        v
                    })
                    .collect()
            })
            .collect();
        terms
            .iter()
            .map(|(a, c)| a.iter().enumerate().fold(Complex64::new(*c, 0.0), |acc, (l, &k)| acc * tables[l][k]))
            .sum()
    };
    EntireFunctionSample::with_points(f, default_sample_points(params), default_radii(params))
}

/// `(Bf)(z) = 2^{m/4} ∫ f(x) exp(2πx·z − πx·x − (π/2) z·z) dx` for m ≤ 2 by
/// adaptive quadrature; `f` must decay at least like `e^{−π|x|²}`.
pub fn bargmann_quadrature<F>(f: F, z: &[Complex64]) -> Result<Estimate>
where
    F: Fn(&[f64]) -> f64,
{
    let m = z.len();
    let zz: Complex64 = z.iter().map(|z| z * z).sum();
    let pre = 2f64.powf(m as f64 / 4.0);
    let tol = 1e-12;
    let window = |zl: Complex64| {
        let w = zl.re.abs() + 6.0;
        (-w, w)
    };
    let est = match m {
        1 => integrate(
            |x| pre * f(&[x]) * (2.0 * PI * x * z[0] - PI * x * x - 0.5 * PI * zz).exp(),
            window(z[0]).0,
            window(z[0]).1,
            tol,
            tol,
        )?,
        2 => integrate_2d(
            |x, y| pre * f(&[x, y]) * (2.0 * PI * (x * z[0] + y * z[1]) - PI * (x * x + y * y) - 0.5 * PI * zz).exp(),
            window(z[0]),
            window(z[1]),
            tol,
            tol,
        )?,
        _ => return Err(domain("bargmann_quadrature supports m = 1 or 2")),
    };
    if est.error > 1e-8 {
        return Err(Error::Quadrature {
            estimate: est.error,
            tolerance: 1e-8,
        });
    }
    Ok(est)
}

/// `ζ_α(z) = √(π^{|α|}/α!) z^α`, the Bargmann image of `h_α`.
pub fn fock_monomial(alpha: &MultiIndex, z: &[Complex64]) -> Complex64 {
    let norm = (0.5 * (alpha.degree() as f64 * PI.ln() - alpha.log_factorial())).exp();
    alpha
        .entries()
        .iter()
        .zip(z)
        .fold(Complex64::new(norm, 0.0), |acc, (&a, z)| acc * z.powu(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn beta0_eigenvalues() {
        let p = ModelParams::new(vec![0.5], vec![1.0]).unwrap();
        let s = eigenvalues(&p, 0.0, 6).unwrap();
        assert_eq!(s.eigenvalues, vec![2.0, 1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125]);
        assert!(eigenvalues(&p, 0.0, 1).is_err());
    }

    #[test]
    fn zeta_beta0() {
        let p = ModelParams::new(vec![0.5], vec![1.0]).unwrap();
        for (z, want) in [(0.25, 2.0), (0.0, 1.0), (-0.5, 0.5)] {
            let v = zeta(&p, 0.0, Complex64::new(z, 0.0), 60).unwrap();
            assert_relative_eq!(v.value.re, want, max_relative = 1e-12);
        }
        let v = zeta_series_partial(&p, 0.0, Complex64::new(0.25, 0.0), 30).unwrap();
        assert_relative_eq!(v.re, 2.0, max_relative = 1e-8);
        assert!(matches!(
            zeta_series_partial(&p, 0.0, Complex64::new(0.6, 0.0), 3),
            Err(Error::ConvergenceDomain(_))
        ));
    }

    #[test]
    fn pole_is_reported() {
        let p = ModelParams::new(vec![0.5], vec![1.0]).unwrap();
        assert!(matches!(zeta(&p, 0.0, Complex64::new(0.5, 0.0), 20), Err(Error::PoleAt { .. })));
    }

    #[test]
    fn asymptotic_examples() {
        let p = ModelParams::new(vec![0.4], vec![1.0]).unwrap();
        let a = MultiIndex::zero(1);
        let v = asymptotic_prediction(&p, &a, 10.0, Direction::PlusInfinity, Parity::Even).unwrap();
        assert_relative_eq!(v, (20.0f64 / 3.0).exp(), max_relative = 1e-14);
        let v = asymptotic_prediction(&p, &a, -10.0, Direction::MinusInfinity, Parity::Even).unwrap();
        assert_relative_eq!(v, (20.0f64 / 7.0).exp(), max_relative = 1e-14);
        let bad = ModelParams::new(vec![0.5], vec![1.0]).unwrap();
        assert!(asymptotic_prediction(&bad, &a, 1.0, Direction::PlusInfinity, Parity::Even).is_err());
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binom_identity_check(2, 0, 1), (2, 2));
        assert_eq!(binom_identity_check(2, 3, 1), (8, 8));
        let (l, r) = binom_identity_check(5, 4, 3);
        assert_eq!(l, r);
        assert_eq!(polydim(2, 2), 1);
        assert_eq!(polydim(3, 2), 3);
    }

    #[test]
    fn half_reduction_examples() {
        let (p, c) = half_reduction_product(2, 0.5, 40).unwrap();
        assert_relative_eq!(c, 1.5);
        assert_relative_eq!(p, c, max_relative = 1e-10);
        let (p, c) = half_reduction_product(3, 0.3, 60).unwrap();
        assert_relative_eq!(p, c, max_relative = 1e-10);
        let (p, _) = half_reduction_product(2, 1e-8, 40).unwrap();
        assert_relative_eq!(p, 1.0, max_relative = 1e-7);
        assert!(half_reduction_product(2, 1.0, 10).is_err());
    }
}
