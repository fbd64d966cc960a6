//! The identity suite: fourteen numerical checks tying the partition
//! functions, the transfer operator, its Hermite-basis matrix and the zeta
//! function together. `kaczeta verify` replays it; so does the acceptance
//! test target.

use std::f64::consts::{E, LN_2};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::kacgutz::{
    assemble_matrix, assemble_symmetric, enumerate_basis, form_identity, gaussian_identity_check, gtrace_closed,
    kac_b_matrix, BasisParity,
};
use crate::model::{partition_function_bruteforce, ModelParams};
use crate::ruelle::{ruelle_residual, ruelle_trace_closed, ruelle_trace_power, spectrum_beta0};
use crate::spectral::{
    bargmann_quadrature, binom_identity_check, block_by_modulus, degeneracy_count, eigen_block, eigenvalues,
    find_real_zeros_poles, fock_monomial, half_reduction_check, leading_predictions, nonsymmetric_eigenvalues,
    polydim, reconstruct_eigenfunction, spectrum, zeta, zeta_series_partial, Direction, SpectralResult,
};
use crate::specialfns::{hermite, mehler_kernel, mehler_partial_sum, MultiIndex, Parity};

/// Outcome of one check. `metric` is the worst error observed, compared
/// against `tolerance`; `passed` also folds in any qualitative conditions
/// (monotonicity, exact counts) described in `detail`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub metric: f64,
    pub tolerance: f64,
    pub detail: String,
}

/// Suite configuration. `lambda_perturbation` multiplies the decay rates on
/// one side of the partition-function identities (checks 1–3) by
/// `1 + perturbation`, as a negative control.
#[derive(Debug, Clone, Default)]
pub struct SuiteOptions {
    pub lambda_perturbation: Option<f64>,
    pub only: Option<Vec<u32>>,
}

/// Perturbation applied by `kaczeta verify --break-me`.
pub const BREAK_ME_PERTURBATION: f64 = 1e-3;

pub const CHECKS: [(u32, &str); 14] = [
    (1, "trace-partition identity"),
    (2, "closed trace coincidence"),
    (3, "truncated-matrix traces"),
    (4, "zeta at beta = 0 and series cross-check"),
    (5, "beta = 0 spectrum"),
    (6, "reality and positivity"),
    (7, "Mehler formula"),
    (8, "B-matrix identities"),
    (9, "lambda = 1/2 eigenfamily and trivial zero"),
    (10, "model-reduction equivalence"),
    (11, "binomial identity and half reduction"),
    (12, "large-|beta| asymptotics"),
    (13, "eigenfunction reconstruction and Bargmann transform"),
    (14, "Gaussian (Cramer) identity"),
];

const TRACE_BETAS: [f64; 6] = [-2.0, -1.0, 0.0, 0.5, 1.0, 2.0];

fn params(lambda: &[f64], coupling: &[f64]) -> ModelParams {
    ModelParams::new(lambda.to_vec(), coupling.to_vec()).expect("suite parameters are valid")
}

/// One parameter set per channel count m = 1, 2, 3.
fn trace_grid() -> [ModelParams; 3] {
    [
        params(&[0.5], &[1.0]),
        params(&[0.3, 0.5], &[1.0, 2.0]),
        params(&[0.3, 0.5, 0.2], &[1.0, 0.5, 0.8]),
    ]
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn crel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

struct Ctx {
    perturb: f64,
}

impl Ctx {
    fn shifted(&self, p: &ModelParams) -> Result<ModelParams> {
        if self.perturb == 0.0 {
            Ok(p.clone())
        } else {
            p.with_scaled_lambda(1.0 + self.perturb)
        }
    }
}

fn outcome(id: u32, metric: f64, tolerance: f64, extra_ok: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        id,
        name: CHECKS[id as usize - 1].1,
        passed: metric <= tolerance && extra_ok,
        metric,
        tolerance,
        detail,
    }
}

fn check_1(ctx: &Ctx) -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for p in trace_grid() {
        let q = ctx.shifted(&p)?;
        for beta in TRACE_BETAS {
            for n in 1..=10 {
                let z = partition_function_bruteforce(&p, beta, n)?;
                let det: f64 = p.lambda().iter().map(|x| 1.0 - x.powi(n as i32)).product();
                let t = ruelle_trace_power(&q, Complex64::new(beta, 0.0), n)?;
                worst = worst.max(rel(det * t.re, z));
            }
        }
    }
    Ok(outcome(1, worst, 1e-10, true, "m in {1,2,3}, 6 betas, n = 1..10".into()))
}

fn check_2(ctx: &Ctx) -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for p in trace_grid() {
        let q = ctx.shifted(&p)?;
        for beta in TRACE_BETAS {
            let b = Complex64::new(beta, 0.0);
            let g = gtrace_closed(&p, beta);
            let r = ruelle_trace_closed(&p, b);
            let t = ruelle_trace_power(&q, b, 1)?;
            worst = worst.max(rel(g, r.re)).max(crel(t, r));
        }
    }
    Ok(outcome(2, worst, 1e-12, true, "gtrace_closed = ruelle_trace_closed = ruelle_trace_power(1)".into()))
}

fn matrix_power_trace(g: &DMatrix<f64>, n: usize) -> f64 {
    let mut acc = g.clone();
    for _ in 1..n {
        acc = &acc * g;
    }
    acc.trace()
}

fn check_3(ctx: &Ctx) -> Result<CheckOutcome> {
    let p = params(&[0.5], &[1.0]);
    let q = ctx.shifted(&p)?;
    let mut worst = 0.0f64;
    for beta in [0.5, 1.0] {
        let g = assemble_matrix(&q, beta, &enumerate_basis(1, 60, BasisParity::Both))?;
        for n in 1..=4 {
            let z = partition_function_bruteforce(&p, beta, n)?;
            let t = (1.0 - 0.5f64.powi(n as i32)) * matrix_power_trace(g.entries(), n);
            worst = worst.max(rel(t, z));
        }
    }
    let mut gaps = Vec::new();
    for degree in [10, 20, 40, 60] {
        let g = assemble_matrix(&q, 1.0, &enumerate_basis(1, degree, BasisParity::Both))?;
        gaps.push((g.trace() - gtrace_closed(&p, 1.0)).abs());
    }
    let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
    Ok(outcome(
        3,
        worst,
        1e-6,
        monotone,
        format!("N = 60, n <= 4; diagonal-trace gaps at N = 10,20,40,60 (beta = 1): {gaps:?}, strictly decreasing: {monotone}"),
    ))
}

fn check_4() -> Result<CheckOutcome> {
    let zs = [
        Complex64::new(0.25, 0.0),
        Complex64::new(-0.25, 0.0),
        Complex64::new(0.4, 0.0),
        Complex64::new(0.1, 0.1),
    ];
    // The truncated product telescopes to 1/(1-2z) up to the first omitted
    // degree, roughly max(λ)^{N+1}; the degrees are chosen so that tail sits
    // below 1e-8.
    let cases = [
        (params(&[0.5], &[1.0]), 60),
        (params(&[0.3, 0.5], &[1.0, 2.0]), 28),
        (params(&[0.3, 0.2, 0.25], &[1.0, 0.5, 0.8]), 18),
    ];
    let mut closed_worst = 0.0f64;
    for (p, degree) in &cases {
        for z in zs {
            let v = zeta(p, 0.0, z, *degree)?;
            closed_worst = closed_worst.max(crel(v.value, 1.0 / (1.0 - 2.0 * z)));
        }
    }
    let series_cases = [
        (params(&[0.5], &[1.0]), 60, [(0.3, Complex64::new(0.1, 0.0)), (-0.5, Complex64::new(0.1, 0.0)), (1.0, Complex64::new(0.05, 0.0))]),
        (
            params(&[0.3, 0.5], &[1.0, 2.0]),
            28,
            [(0.1, Complex64::new(0.1, 0.0)), (-0.2, Complex64::new(0.05, 0.0)), (0.3, Complex64::new(0.03, 0.02))],
        ),
    ];
    let mut series_worst = 0.0f64;
    for (p, degree, pairs) in &series_cases {
        for (beta, z) in pairs {
            let v = zeta(p, *beta, *z, *degree)?;
            let s = zeta_series_partial(p, *beta, *z, 18)?;
            series_worst = series_worst.max(crel(v.value, s));
        }
    }
    Ok(outcome(
        4,
        (closed_worst / 1e-8).max(series_worst / 1e-6),
        1.0,
        true,
        format!("zeta(beta=0) vs 1/(1-2z): {closed_worst:.3e} (tol 1e-8); zeta vs series: {series_worst:.3e} (tol 1e-6); metric is the larger error/tolerance ratio"),
    ))
}

fn check_5() -> Result<CheckOutcome> {
    let mut mismatches = 0usize;
    let mut worst = 0.0f64;
    for (p, degree) in [(params(&[0.5], &[1.0]), 60), (params(&[0.3, 0.5], &[1.0, 2.0]), 16)] {
        let got = eigenvalues(&p, 0.0, degree)?.eigenvalues;
        let want = spectrum_beta0(&p, degree);
        for (a, b) in got.iter().zip(&want) {
            if a != b {
                mismatches += 1;
                worst = worst.max(rel(*a, *b));
            }
        }
        if got.len() != want.len() {
            mismatches += 1;
            worst = f64::INFINITY;
        }
    }
    Ok(outcome(5, worst, 0.0, mismatches == 0, format!("exact equality; {mismatches} mismatching entries")))
}

fn check_6() -> Result<CheckOutcome> {
    let cases = [(params(&[0.5], &[1.0]), 60), (params(&[0.3, 0.5], &[1.0, 2.0]), 16)];
    let mut imag_ratio = 0.0f64;
    for (p, degree) in &cases {
        for beta in [-2.0, -1.0, 1.0, 2.0] {
            let g = assemble_matrix(p, beta, &enumerate_basis(p.m(), *degree, BasisParity::Both))?;
            let norm = g.entries().norm();
            let im = nonsymmetric_eigenvalues(&g)?.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
            imag_ratio = imag_ratio.max(im / norm);
        }
    }
    let mut neg_ratio = 0.0f64;
    for (p, degree) in &cases {
        for beta in [0.0, 0.5, 1.0, 2.0] {
            let s = assemble_symmetric(p, beta, &enumerate_basis(p.m(), *degree, BasisParity::Both))?;
            let norm = s.norm();
            let (eigs, _) = spectrum(p, beta, *degree)?;
            let min = eigs.iter().copied().fold(f64::INFINITY, f64::min);
            neg_ratio = neg_ratio.max(-min / norm);
        }
    }
    Ok(outcome(
        6,
        (imag_ratio / 1e-8).max(neg_ratio / 1e-10),
        1.0,
        true,
        format!("max|Im|/||G|| = {imag_ratio:.3e} (tol 1e-8); max(-min eig)/||S|| = {neg_ratio:.3e} (tol 1e-10)"),
    ))
}

fn check_7() -> Result<CheckOutcome> {
    let grid = [-0.5, -0.25, 0.0, 0.25, 0.5];
    let mut worst = 0.0f64;
    for lam in [0.3, 0.5] {
        let p = params(&[lam], &[1.0]);
        for x in grid {
            for y in grid {
                worst = worst.max((mehler_partial_sum(&p, &[x], &[y], 40) - mehler_kernel(&p, &[x], &[y])).abs());
            }
        }
    }
    Ok(outcome(7, worst, 1e-10, true, "sup over 5x5 grid, N = 40, lambda in {0.3, 0.5}".into()))
}

fn check_8() -> Result<CheckOutcome> {
    let mut det_worst = 0.0f64;
    let mut min_eig = f64::INFINITY;
    for beta_j in [0.5, 1.0, 2.0] {
        for gamma in [LN_2, 0.3, 1.5] {
            for n in 2..=8 {
                let r = kac_b_matrix(beta_j, gamma, n)?;
                det_worst = det_worst.max(rel(r.determinant, r.determinant_closed));
                min_eig = min_eig.min(r.min_eigenvalue);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut form_worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.random_range(2..=8);
        let gamma = rng.random_range(0.1..3.0);
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let (l, r) = form_identity(gamma, &x);
        form_worst = form_worst.max((l - r).abs() / l.abs().max(1.0));
    }
    Ok(outcome(
        8,
        (det_worst / 1e-10).max(form_worst / 1e-12),
        1.0,
        min_eig > 0.0,
        format!("det rel err {det_worst:.3e} (tol 1e-10); FORM err {form_worst:.3e} (tol 1e-12); min eigenvalue {min_eig:.3e} > 0"),
    ))
}

fn half_models() -> [(ModelParams, usize); 3] {
    [
        (params(&[0.5], &[1.0]), 60),
        (params(&[0.5, 0.5], &[0.6, 0.4]), 16),
        (params(&[0.5, 0.5, 0.5], &[0.5, 0.3, 0.2]), 16),
    ]
}

fn check_9() -> Result<CheckOutcome> {
    let mut contains = 0.0f64;
    let mut counts_ok = true;
    let mut root_err = 0.0f64;
    let mut notes = Vec::new();
    for (p, degree) in half_models() {
        let m = p.m();
        let spec: SpectralResult = eigenvalues(&p, 1.0, degree)?;
        let dist = spec.eigenvalues.iter().map(|r| (r - E).abs()).fold(f64::INFINITY, f64::min);
        contains = contains.max(dist);
        for n in 0..=2 {
            let got = degeneracy_count(&spec, E * 0.5f64.powi(n), 1e-6);
            let want = polydim(m, n as usize);
            if got as u64 != want {
                counts_ok = false;
                notes.push(format!("m={m} n={n}: count {got} != {want}"));
            }
        }
        // The ln 2 crossing is e^β/2 = 1, i.e. the branch ϱ_0/2. For m ≥ 2 that
        // value is an eigenvalue and the root sits in d_0. For m = 1 there is
        // no ϱ/2 branch; the same β is the zero λe^β = 1 of the α = (1) factor.
        let roots = find_real_zeros_poles(&p, 1.0, (0.5, 0.9), degree, 0.05)?;
        let target: Vec<u8> = if m == 1 { vec![1] } else { vec![0; m] };
        let near = roots
            .iter()
            .filter(|r| r.alpha == target)
            .map(|r| (r.beta - LN_2).abs())
            .fold(f64::INFINITY, f64::min);
        root_err = root_err.max(near);
    }
    let metric = (contains / 1e-8).max(root_err / 1e-8);
    Ok(outcome(
        9,
        metric,
        1.0,
        counts_ok,
        format!(
            "max dist(e, spectrum) {contains:.3e}; max |beta* - ln 2| {root_err:.3e} (both tol 1e-8; factor alpha=0 for m>=2, alpha=(1) for m=1); degeneracies {}",
            if counts_ok { "match C(m+n-2,n)".to_string() } else { notes.join("; ") }
        ),
    ))
}

fn check_10() -> Result<CheckOutcome> {
    let (reference, _) = spectrum(&params(&[0.5], &[1.0]), 1.0, 60)?;
    let mut ok = true;
    let mut notes = Vec::new();
    // ϱ_5/2 and ϱ_5/4 are only resolved to 1e-6 from degree 20 (m = 2) and
    // 18 (m = 3).
    for (p, degree) in [(params(&[0.5, 0.5], &[0.6, 0.4]), 20), (params(&[0.5, 0.5, 0.5], &[0.5, 0.3, 0.2]), 18)] {
        let (eigs, _) = spectrum(&p, 1.0, degree)?;
        let spec = SpectralResult { eigenvalues: eigs, parities: Vec::new(), degree, tail_gap: 0.0 };
        for (k, rho) in reference.iter().take(5).enumerate() {
            for n in 0..=2 {
                let got = degeneracy_count(&spec, rho * 0.5f64.powi(n), 1e-6) as u64;
                let want = polydim(p.m(), n as usize);
                if got != want {
                    ok = false;
                    notes.push(format!("m={} k={k} n={n}: {got} != {want}", p.m()));
                }
            }
        }
    }
    Ok(outcome(
        10,
        if ok { 0.0 } else { 1.0 },
        0.0,
        ok,
        if ok {
            "top 5 single-channel branches reproduced with multiplicities C(m+n-2,n), m in {2,3}, n <= 2".into()
        } else {
            notes.join("; ")
        },
    ))
}

fn check_11() -> Result<CheckOutcome> {
    let mut bad = 0usize;
    for m in 2..=10 {
        for r in 0..=10 {
            for l in 0..m {
                let (a, b) = binom_identity_check(m, r, l);
                if a != b {
                    bad += 1;
                }
            }
        }
    }
    // ϱ₁ = e^{βΣJ}; the truncated product converges like R^{m−2} 2^{−R}, so
    // R = 80 leaves no visible tail.
    let mut worst = 0.0f64;
    for p in [params(&[0.5, 0.5], &[0.6, 0.4]), params(&[0.5, 0.5, 0.5], &[0.5, 0.3, 0.2])] {
        for beta in [-1.0, 0.5, 1.0] {
            let (prod, closed) = half_reduction_check(&p, beta, 80)?;
            worst = worst.max(rel(prod, closed));
        }
    }
    Ok(outcome(
        11,
        worst,
        1e-10,
        bad == 0,
        format!("{bad} binomial mismatches over m = 2..10, r = 0..10, l < m; half-reduction rel err {worst:.3e} (m in {{2,3}}, beta in {{-1, 0.5, 1}})"),
    ))
}

fn check_12() -> Result<CheckOutcome> {
    let p = params(&[0.4], &[1.0]);
    let mut ok = true;
    let mut parts = Vec::new();
    let mut last = 0.0f64;
    for (direction, betas) in [
        (Direction::PlusInfinity, [5.0, 10.0, 20.0]),
        (Direction::MinusInfinity, [-5.0, -10.0, -20.0]),
    ] {
        for parity in [Parity::Even, Parity::Odd] {
            let mut devs = Vec::new();
            for beta in betas {
                let top = block_by_modulus(&p, beta, 80, parity)?[0];
                let pred = leading_predictions(&p, beta, direction, parity, 1)?[0];
                devs.push(rel(top, pred));
            }
            let decreasing = devs.windows(2).all(|w| w[1] < w[0]);
            ok &= decreasing;
            last = last.max(devs[2]);
            parts.push(format!("{direction:?}/{}: {devs:?}", parity.as_str()));
        }
    }
    Ok(outcome(
        12,
        if ok { 0.0 } else { 1.0 },
        0.0,
        ok,
        format!("relative deviations must decrease strictly: {}; deviation at |beta| = 20 up to {last:.2e}", parts.join(", ")),
    ))
}

fn check_13() -> Result<CheckOutcome> {
    let p = params(&[0.5], &[1.0]);
    let mut residuals = Vec::new();
    for degree in [20, 40] {
        let block = eigen_block(&p, 1.0, degree, Parity::Odd)?;
        let coeffs: Vec<f64> = block.coefficients.column(0).iter().copied().collect();
        let f = reconstruct_eigenfunction(&p, 1.0, &block.basis, &coeffs)?;
        residuals.push(ruelle_residual(&p, Complex64::new(1.0, 0.0), &f, Complex64::new(E, 0.0))?);
    }
    let decreasing = residuals[1] < residuals[0];
    let mut bargmann = 0.0f64;
    for a in 0..=2u32 {
        let alpha = MultiIndex::new(vec![a]);
        for z in [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(0.3, 0.2)] {
            let est = bargmann_quadrature(|x| hermite(&alpha, x), &[z])?;
            bargmann = bargmann.max((est.value - fock_monomial(&alpha, &[z])).norm());
        }
    }
    Ok(outcome(
        13,
        (residuals[1] / 1e-6).max(bargmann / 1e-8),
        1.0,
        decreasing,
        format!(
            "residuals N=20: {:.3e}, N=40: {:.3e} (tol 1e-6, must decrease: {decreasing}); Bargmann err {bargmann:.3e} (tol 1e-8)",
            residuals[0], residuals[1]
        ),
    ))
}

fn check_14() -> Result<CheckOutcome> {
    let cases: Vec<(DMatrix<f64>, Vec<f64>)> = vec![
        (DMatrix::from_element(1, 1, 1.0), vec![0.0]),
        (DMatrix::from_element(1, 1, 2.0), vec![1.0]),
        (DMatrix::from_element(1, 1, 0.5), vec![-1.5]),
        (DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]), vec![0.3, -0.2]),
        (DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 0.5]), vec![1.0, 0.5]),
        (DMatrix::from_row_slice(2, 2, &[3.0, -1.0, -1.0, 1.0]), vec![-0.4, 0.8]),
    ];
    let mut worst = 0.0f64;
    for (a, x) in &cases {
        let (l, r) = gaussian_identity_check(a, x)?;
        worst = worst.max(rel(r, l));
    }
    Ok(outcome(14, worst, 1e-6, true, "three positive-definite matrices each at n = 1, 2".into()))
}

/// Runs a single check; numerical errors become failed outcomes.
pub fn run_check(id: u32, options: &SuiteOptions) -> CheckOutcome {
    let ctx = Ctx {
        perturb: options.lambda_perturbation.unwrap_or(0.0),
    };
    let result = match id {
        1 => check_1(&ctx),
        2 => check_2(&ctx),
        3 => check_3(&ctx),
        4 => check_4(),
        5 => check_5(),
        6 => check_6(),
        7 => check_7(),
        8 => check_8(),
        9 => check_9(),
        10 => check_10(),
        11 => check_11(),
        12 => check_12(),
        13 => check_13(),
        14 => check_14(),
        _ => {
            return CheckOutcome {
                id,
                name: "unknown",
                passed: false,
                metric: f64::NAN,
                tolerance: f64::NAN,
                detail: format!("no check with id {id}"),
            }
        }
    };
    result.unwrap_or_else(|e| CheckOutcome {
        id,
        name: CHECKS.get(id as usize - 1).map_or("unknown", |c| c.1),
        passed: false,
        metric: f64::NAN,
        tolerance: f64::NAN,
        detail: format!("error: {e}"),
    })
}

pub fn run_suite(options: &SuiteOptions) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|&(id, _)| id)
        .filter(|id| options.only.as_ref().is_none_or(|o| o.contains(id)))
        .map(|id| run_check(id, options))
        .collect()
}
