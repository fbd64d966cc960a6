//! The Ruelle transfer operator
//! `(L_β F)(z) = e^{βJ·z} F(Λz + λ) + e^{−βJ·z} F(Λz − λ)`
//! on entire functions of `z ∈ C^m`: fixed-point trace formulas,
//! functional-equation residuals and explicit eigenfunctions.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};
use crate::model::{check_cap, sum_over_configs, ModelParams};
use crate::specialfns::{graded_indices, Parity};

/// A point of C^m.
pub type Point = Vec<Complex64>;

/// Number of default residual sample points.
pub const DEFAULT_SAMPLES: usize = 32;
/// Seed for the default residual sample points.
pub const DEFAULT_SEED: u64 = 42;

/// `ψ(z) = scale·z + shift` with a diagonal contraction.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineContraction {
    scale: Vec<f64>,
    shift: Vec<f64>,
}

impl AffineContraction {
    pub fn new(scale: Vec<f64>, shift: Vec<f64>) -> Result<Self> {
        if scale.len() != shift.len() {
            return Err(domain("scale and shift must have the same dimension"));
        }
        if let Some(s) = scale.iter().find(|s| !(s.abs() < 1.0)) {
            return Err(domain(format!("scale entry {s} is not a contraction (|s| < 1 required)")));
        }
        Ok(AffineContraction { scale, shift })
    }

    pub fn scale(&self) -> &[f64] {
        &self.scale
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn apply(&self, z: &[Complex64]) -> Point {
        z.iter()
            .zip(self.scale.iter().zip(&self.shift))
            .map(|(z, (s, t))| z * s + t)
            .collect()
    }

    /// The unique fixed point `shift / (1 − scale)`.
    pub fn fixed_point(&self) -> Vec<f64> {
        self.scale
            .iter()
            .zip(&self.shift)
            .map(|(s, t)| t / (1.0 - s))
            .collect()
    }
}

/// Trace of `g ↦ φ·(g∘ψ)`: `φ(z_fix) / ∏_l (1 − scale_l)`.
pub fn atiyah_bott_trace(phi_at_fix: Complex64, scale: &[f64]) -> Result<Complex64> {
    if let Some(s) = scale.iter().find(|s| !(s.abs() < 1.0)) {
        return Err(domain(format!("scale entry {s} is not a contraction (|s| < 1 required)")));
    }
    let det: f64 = scale.iter().map(|s| 1.0 - s).product();
    Ok(phi_at_fix / det)
}

/// `trace L_β^n` as the sum over σ ∈ {±1}^n of fixed-point contributions.
///
/// The n-fold composition branch labelled by σ is
/// `ψ_σ(z) = Λ^n z + Σ_i σ_i λ^i` with weight
/// `φ_σ(z) = exp(β Σ_l J_l (Σ_k σ_k λ_l^{n−k} z_l + Σ_{k<j} σ_k σ_j λ_l^{j−k}))`;
/// every branch has the same derivative Λ^n, so the weights are summed first
/// and divided by `det(1 − Λ^n)` once.
pub fn ruelle_trace_power(params: &ModelParams, beta: Complex64, n: usize) -> Result<Complex64> {
    if n == 0 {
        return Err(domain("power n must be at least 1"));
    }
    check_cap(n)?;
    let m = params.m();
    let lam = params.lambda();
    let cpl = params.coupling();
    let lam_n: Vec<f64> = lam.iter().map(|x| x.powi(n as i32)).collect();
    let phi_sum = sum_over_configs(n, |bits| {
        // σ_k for k = 1..n is bit k−1.
        let sigma = |k: usize| if bits >> (k - 1) & 1 == 1 { -1.0 } else { 1.0 };
        let mut exponent = 0.0;
        for l in 0..m {
            let x = lam[l];
            let mut shift = 0.0; // Σ_i σ_i λ^i
            let mut pw = 1.0;
            for i in 1..=n {
                pw *= x;
                shift += sigma(i) * pw;
            }
            let z_fix = shift / (1.0 - lam_n[l]);
            // Walk k = n..1 keeping t_k = Σ_{j>k} σ_j λ^{j−k} and
            // a_k = Σ_{j≥k} σ_j λ^{n−j}.
            let mut t = 0.0;
            let mut open = 0.0;
            let mut linear = 0.0;
            let mut lp = 1.0;
            for k in (1..=n).rev() {
                let s = sigma(k);
                open += s * t;
                t = x * (s + t);
                linear += s * lp;
                lp *= x;
            }
            exponent += cpl[l] * (linear * z_fix + open);
        }
        (beta * exponent).exp()
    });
    atiyah_bott_trace(phi_sum, &lam_n)
}

/// `trace L_β = 2 exp(Σ_l βJ_lλ_l/(1−λ_l)) / ∏_l (1−λ_l)`.
pub fn ruelle_trace_closed(params: &ModelParams, beta: Complex64) -> Complex64 {
    let det: f64 = params.lambda().iter().map(|x| 1.0 - x).product();
    2.0 * (beta * params.energy_bound()).exp() / det
}

type Evaluator = dyn Fn(&[Complex64]) -> Complex64 + Send + Sync;

/// A black-box entire function together with the polydisc `|z_l| < R_l` it
/// is declared on and the points at which residuals are sampled.
///
/// The evaluator is required to be `Send + Sync`, so samples can always be
/// evaluated concurrently.
#[derive(Clone)]
pub struct EntireFunctionSample {
    evaluator: Arc<Evaluator>,
    sample_points: Vec<Point>,
    radii: Vec<f64>,
}

impl fmt::Debug for EntireFunctionSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EntireFunctionSample")
            .field("sample_points", &self.sample_points.len())
            .field("radii", &self.radii)
            .finish()
    }
}

/// Polydisc radii `R_l = 1.5·λ_l/(1−λ_l)`; any `R_l > λ_l/(1−λ_l)` is mapped
/// into itself by both branches of the operator.
pub fn default_radii(params: &ModelParams) -> Vec<f64> {
    params.lambda().iter().map(|x| 1.5 * x / (1.0 - x)).collect()
}

/// 32 reproducible points (ChaCha8, seed 42) with every coordinate of
/// modulus at most `0.9·min_l λ_l/(1−λ_l)`.
pub fn default_sample_points(params: &ModelParams) -> Vec<Point> {
    sample_points(params, DEFAULT_SAMPLES, DEFAULT_SEED)
}

pub fn sample_points(params: &ModelParams, count: usize, seed: u64) -> Vec<Point> {
    let rho = 0.9
        * params
            .lambda()
            .iter()
            .map(|x| x / (1.0 - x))
            .fold(f64::INFINITY, f64::min);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..params.m())
                .map(|_| {
                    let r = rho * rng.random::<f64>().sqrt();
                    let theta = 2.0 * PI * rng.random::<f64>();
                    Complex64::from_polar(r, theta)
                })
                .collect()
        })
        .collect()
}

impl EntireFunctionSample {
    /// Function on the default polydisc with the default sample points.
    pub fn new<F>(params: &ModelParams, f: F) -> Self
    where
        F: Fn(&[Complex64]) -> Complex64 + Send + Sync + 'static,
    {
        EntireFunctionSample {
            evaluator: Arc::new(f),
            sample_points: default_sample_points(params),
            radii: default_radii(params),
        }
    }

    pub fn with_points<F>(f: F, sample_points: Vec<Point>, radii: Vec<f64>) -> Result<Self>
    where
        F: Fn(&[Complex64]) -> Complex64 + Send + Sync + 'static,
    {
        for p in &sample_points {
            if p.len() != radii.len() || p.iter().zip(&radii).any(|(z, r)| z.norm() >= *r) {
                return Err(domain("sample point outside the declared polydisc"));
            }
        }
        Ok(EntireFunctionSample {
            evaluator: Arc::new(f),
            sample_points,
            radii,
        })
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        (self.evaluator)(z)
    }

    pub fn sample_points(&self) -> &[Point] {
        &self.sample_points
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    fn check_inside(&self, w: &[Complex64]) -> Result<()> {
        if w.len() != self.radii.len() {
            return Err(domain(format!(
                "point has dimension {} but the function lives on C^{}",
                w.len(),
                self.radii.len()
            )));
        }
        for (l, (z, r)) in w.iter().zip(&self.radii).enumerate() {
            if z.norm() >= *r {
                return Err(domain(format!(
                    "shifted point coordinate {l} has modulus {} outside the polydisc radius {r}",
                    z.norm()
                )));
            }
        }
        Ok(())
    }
}

fn branches(params: &ModelParams, z: &[Complex64]) -> (Point, Point, Complex64) {
    let lam = params.lambda();
    let plus: Point = z.iter().zip(lam).map(|(z, x)| z * x + x).collect();
    let minus: Point = z.iter().zip(lam).map(|(z, x)| z * x - x).collect();
    let jz: Complex64 = z.iter().zip(params.coupling()).map(|(z, j)| z * j).sum();
    (plus, minus, jz)
}

/// One evaluation of `(L_β F)(z)`.
pub fn apply_ruelle(params: &ModelParams, beta: Complex64, f: &EntireFunctionSample, z: &[Complex64]) -> Result<Complex64> {
    let (plus, minus, jz) = branches(params, z);
    f.check_inside(&plus)?;
    f.check_inside(&minus)?;
    Ok((beta * jz).exp() * f.eval(&plus) + (-beta * jz).exp() * f.eval(&minus))
}

/// The parity-split operators
/// `(L^± g)(z) = e^{βJ·z} g(λ + Λz) ± e^{−βJ·z} g(λ − Λz)`,
/// which agree with `L_β` on even (+) and odd (−) functions respectively.
pub fn apply_ruelle_parity(
    params: &ModelParams,
    beta: Complex64,
    f: &EntireFunctionSample,
    z: &[Complex64],
    parity: Parity,
) -> Result<Complex64> {
    let (plus, minus, jz) = branches(params, z);
    let reflected: Point = minus.iter().map(|w| -w).collect();
    f.check_inside(&plus)?;
    f.check_inside(&reflected)?;
    Ok((beta * jz).exp() * f.eval(&plus) + parity.sign() * (-beta * jz).exp() * f.eval(&reflected))
}

/// `max_z |ρF(z) − (L_βF)(z)| / (1 + |ρF(z)|)` over the sample points.
pub fn ruelle_residual(params: &ModelParams, beta: Complex64, f: &EntireFunctionSample, rho: Complex64) -> Result<f64> {
    if f.sample_points.is_empty() {
        return Err(domain("residual needs at least one sample point"));
    }
    let mut worst = 0.0f64;
    for z in &f.sample_points {
        let rf = rho * f.eval(z);
        let lf = apply_ruelle(params, beta, f, z)?;
        worst = worst.max((rf - lf).norm() / (1.0 + rf.norm()));
    }
    Ok(worst)
}

/// Spectrum of `L_0`: `{2λ^α : |α| ≤ N}` sorted descending.
pub fn spectrum_beta0(params: &ModelParams, max_total_degree: usize) -> Vec<f64> {
    let mut out: Vec<f64> = graded_indices(params.m(), max_total_degree)
        .iter()
        .map(|a| 2.0 * a.power(params.lambda()))
        .collect();
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// `F(z) = sinh(2βJ·z)`, an eigenfunction with eigenvalue `e^{βΣJ}` when all
/// λ_l = ½.
pub fn sinh_eigenfunction(params: &ModelParams, beta: Complex64) -> EntireFunctionSample {
    let j = params.coupling().to_vec();
    EntireFunctionSample::new(params, move |z| {
        let jz: Complex64 = z.iter().zip(&j).map(|(z, j)| z * j).sum();
        (2.0 * beta * jz).sinh()
    })
}

/// `F(z) = P(z)·sinh(2βJ·z)` for a linear form `P(z) = Σ c_l z_l` with
/// `Σ c_l = 0` (translation invariant); eigenvalue `e^{βΣJ}/2` at λ = ½.
pub fn translation_invariant_eigenfunction(params: &ModelParams, beta: Complex64, coeffs: Vec<f64>) -> Result<EntireFunctionSample> {
    if coeffs.len() != params.m() {
        return Err(domain("one coefficient per channel is required"));
    }
    let total: f64 = coeffs.iter().sum();
    if total.abs() > 1e-12 * coeffs.iter().map(|c| c.abs()).sum::<f64>().max(1.0) {
        return Err(domain("coefficients must sum to zero for translation invariance"));
    }
    let j = params.coupling().to_vec();
    Ok(EntireFunctionSample::new(params, move |z| {
        let jz: Complex64 = z.iter().zip(&j).map(|(z, j)| z * j).sum();
        let p: Complex64 = z.iter().zip(&coeffs).map(|(z, c)| z * c).sum();
        p * (2.0 * beta * jz).sinh()
    }))
}

/// Explicit eigenfunction with eigenvalue 0:
/// `f(z) = exp(−β Σ_l J_l z_l²/(2λ_l²)) · ∏_l exp(i(2n_l+1)π α_l z_l/(2λ_l))`
/// for integer `n` and a multi-index α with |α| odd.
pub fn zero_eigenfunction(params: &ModelParams, beta: Complex64, n: &[i64], alpha: &[u32]) -> Result<EntireFunctionSample> {
    let m = params.m();
    if n.len() != m || alpha.len() != m {
        return Err(domain("n and alpha need one entry per channel"));
    }
    if alpha.iter().map(|&a| a as usize).sum::<usize>() % 2 == 0 {
        return Err(domain("|alpha| must be odd"));
    }
    let lam = params.lambda().to_vec();
    let j = params.coupling().to_vec();
    let freq: Vec<f64> = (0..m)
        .map(|l| (2 * n[l] + 1) as f64 * PI * f64::from(alpha[l]) / (2.0 * lam[l]))
        .collect();
    Ok(EntireFunctionSample::new(params, move |z| {
        let mut e = Complex64::new(0.0, 0.0);
        for l in 0..z.len() {
            e += -beta * j[l] * z[l] * z[l] / (2.0 * lam[l] * lam[l]) + Complex64::i() * freq[l] * z[l];
        }
        e.exp()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn atiyah_bott_examples() {
        assert_relative_eq!(atiyah_bott_trace(c(1.0), &[0.5]).unwrap().re, 2.0);
        assert_relative_eq!(atiyah_bott_trace(c(1.0), &[0.5, 0.25]).unwrap().re, 1.0 / (0.5 * 0.75));
        assert_relative_eq!(atiyah_bott_trace(c(E), &[0.5]).unwrap().re, 2.0 * E);
        assert!(atiyah_bott_trace(c(1.0), &[1.0]).is_err());
    }

    #[test]
    fn trace_examples() {
        let p = ModelParams::new(vec![0.5], vec![1.0]).unwrap();
        assert_relative_eq!(ruelle_trace_power(&p, c(0.0), 1).unwrap().re, 4.0, max_relative = 1e-15);
        assert_relative_eq!(ruelle_trace_power(&p, c(1.0), 1).unwrap().re, 4.0 * E, max_relative = 1e-14);
        assert_relative_eq!(ruelle_trace_closed(&p, c(1.0)).re, 4.0 * E, max_relative = 1e-15);
        let p2 = ModelParams::new(vec![0.5, 0.5], vec![1.0, 1.0]).unwrap();
        assert_relative_eq!(ruelle_trace_closed(&p2, c(0.0)).re, 8.0);
    }

    #[test]
    fn constant_function() {
        let p = ModelParams::new(vec![0.4, 0.3], vec![1.0, 0.5]).unwrap();
        let one = EntireFunctionSample::new(&p, |_| c(1.0));
        let z = vec![Complex64::new(0.2, 0.1), c(-0.1)];
        let got = apply_ruelle(&p, c(0.7), &one, &z).unwrap();
        let jz = z[0] * 1.0 + z[1] * 0.5;
        assert_relative_eq!((got - 2.0 * (0.7 * jz).cosh()).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn domain_is_enforced() {
        let p = ModelParams::new(vec![0.5], vec![1.0]).unwrap();
        let one = EntireFunctionSample::new(&p, |_| c(1.0));
        assert!(apply_ruelle(&p, c(1.0), &one, &[c(100.0)]).is_err());
    }

    #[test]
    fn beta0_spectrum() {
        let p = ModelParams::new(vec![0.5], vec![1.0]).unwrap();
        assert_eq!(spectrum_beta0(&p, 3), vec![2.0, 1.0, 0.5, 0.25]);
        let p = ModelParams::new(vec![0.5, 0.5], vec![1.0, 1.0]).unwrap();
        assert_eq!(spectrum_beta0(&p, 1), vec![2.0, 1.0, 1.0]);
        let p = ModelParams::new(vec![0.3], vec![1.0]).unwrap();
        let s = spectrum_beta0(&p, 2);
        assert_relative_eq!(s[1], 0.6, max_relative = 1e-15);
        assert_relative_eq!(s[2], 0.18, max_relative = 1e-15);
    }
}
