//! Structural invariants, checked on random inputs (proptest) or
//! exhaustively where the space is small.

use std::f64::consts::PI;

use kaczeta::kacgutz::{assemble_matrix, assemble_symmetric, enumerate_basis, kernel_k, matrix_element, symmetric_element, BasisParity};
use kaczeta::model::{partition_function_bruteforce, periodic_energy, SpinConfig};
use kaczeta::quadrature::gauss_hermite;
use kaczeta::ruelle::{
    apply_ruelle, apply_ruelle_parity, ruelle_residual, translation_invariant_eigenfunction, zero_eigenfunction, EntireFunctionSample,
};
use kaczeta::spectral::{default_degree, eigenvalues, spectrum};
use kaczeta::specialfns::{confluent_phi, graded_indices, hermite, hermite_table, laguerre, mehler_kernel, mehler_partial_sum, MultiIndex, Parity};
use kaczeta::{Complex64, ModelParams};
use nalgebra::SymmetricEigen;
use proptest::prelude::*;

fn model(max_m: usize, lambda: std::ops::Range<f64>) -> impl Strategy<Value = ModelParams> {
    (1..=max_m).prop_flat_map(move |m| {
        (prop::collection::vec(lambda.clone(), m), prop::collection::vec(0.1f64..2.0, m))
            .prop_map(|(l, j)| ModelParams::new(l, j).unwrap())
    })
}

fn spins(n: usize) -> impl Strategy<Value = SpinConfig> {
    prop::collection::vec(prop::bool::ANY, n).prop_map(|b| SpinConfig::new(b.into_iter().map(|s| if s { 1 } else { -1 }).collect()).unwrap())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

#[test]
fn energy_rotation_and_flip_invariance_exhaustive() {
    let p = ModelParams::new(vec![0.3, 0.7], vec![1.0, 0.4]).unwrap();
    for n in 1..=10 {
        for bits in 0..1u64 << n {
            let c = SpinConfig::from_bits(n, bits);
            let u = periodic_energy(&p, &c);
            for shift in 1..n {
                let v = periodic_energy(&p, &c.rotated(shift));
                assert!((u - v).abs() <= 1e-12 * (1.0 + u.abs()), "n = {n}, bits = {bits:b}, shift = {shift}");
            }
            assert!((u - periodic_energy(&p, &c.flipped())).abs() <= 1e-12 * (1.0 + u.abs()));
        }
    }
}

#[test]
fn infinite_temperature_partition_function_is_exact() {
    let p = ModelParams::new(vec![0.4, 0.2, 0.6], vec![1.0, 2.0, 0.5]).unwrap();
    for n in 1..=16 {
        assert_eq!(partition_function_bruteforce(&p, 0.0, n).unwrap(), 2f64.powi(n as i32));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn energy_respects_bound((p, c) in (model(3, 0.05..0.95), 1usize..12).prop_flat_map(|(p, n)| (Just(p), spins(n)))) {
        let u = periodic_energy(&p, &c);
        let bound = c.n() as f64 * p.energy_bound();
        prop_assert!(u.abs() <= bound * (1.0 + 1e-12), "|U| = {} > {}", u.abs(), bound);
    }

    #[test]
    fn partition_function_positive_and_channel_symmetric(p in model(3, 0.05..0.95), beta in -3.0f64..3.0, n in 1usize..10, shift in 0usize..3) {
        let z = partition_function_bruteforce(&p, beta, n).unwrap();
        prop_assert!(z > 0.0);
        let m = p.m();
        let order: Vec<usize> = (0..m).map(|l| (l + shift) % m).rev().collect();
        let q = ModelParams::new(
            order.iter().map(|&l| p.lambda()[l]).collect(),
            order.iter().map(|&l| p.coupling()[l]).collect(),
        ).unwrap();
        prop_assert!(rel(partition_function_bruteforce(&q, beta, n).unwrap(), z) < 1e-12);
    }

    #[test]
    fn hermite_parity(alpha in prop::collection::vec(0u32..25, 1..4), x in prop::collection::vec(-2.0f64..2.0, 3)) {
        let a = MultiIndex::new(alpha);
        let x = &x[..a.m()];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let sign = if a.degree() % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert_eq!(hermite(&a, &neg), sign * hermite(&a, x));
    }

    #[test]
    fn confluent_phi_matches_series(n in 0u32..25, mu in 0u32..10, x in -4.0f64..4.0) {
        // Φ(−n, μ+1; x) = Σ_k (−n)_k / ((μ+1)_k k!) x^k, terms built by ratio.
        let mut term = 1.0f64;
        let mut sum = 1.0f64;
        let mut scale = 1.0f64;
        for k in 0..n {
            let k = f64::from(k);
            term *= (k - f64::from(n)) / ((f64::from(mu) + 1.0 + k) * (k + 1.0)) * x;
            sum += term;
            scale += term.abs();
        }
        prop_assert!((confluent_phi(n, mu, x) - sum).abs() <= 1e-12 * scale);
        prop_assert_eq!(confluent_phi(n, 0, x), laguerre(n, 0, x));
    }

    #[test]
    fn mehler_tail_is_geometric(lambda in 0.1f64..0.6, x in -0.5f64..0.5, y in -0.5f64..0.5) {
        let p = ModelParams::new(vec![lambda], vec![1.0]).unwrap();
        let closed = mehler_kernel(&p, &[x], &[y]);
        for degree in [5usize, 10, 15, 20, 25, 30] {
            let err = (mehler_partial_sum(&p, &[x], &[y], degree) - closed).abs();
            if err < 1e-13 {
                break;
            }
            let c = err / lambda.powi(degree as i32 + 1);
            prop_assert!(c < 1e3, "N = {degree}: error {err:.2e}, C = {c:.2e}");
        }
    }

    #[test]
    fn kernel_is_symmetric(p in model(3, 0.1..0.9), beta in 0.0f64..2.0, xi in prop::collection::vec(-1.5f64..1.5, 3), eta in prop::collection::vec(-1.5f64..1.5, 3)) {
        let m = p.m();
        let a = kernel_k(&p, beta, &xi[..m], &eta[..m]).unwrap();
        let b = kernel_k(&p, beta, &eta[..m], &xi[..m]).unwrap();
        prop_assert!(rel(a, b) < 1e-14 || a == b);
        prop_assert!(a > 0.0);
    }

    #[test]
    fn similarity_transform_is_symmetric(p in model(2, 0.1..0.8), beta in -2.0f64..2.0, degree in 2usize..9) {
        let basis = enumerate_basis(p.m(), degree, BasisParity::Both);
        let s = assemble_matrix(&p, beta, &basis).unwrap().similarity_transform();
        let scale = s.amax();
        for i in 0..s.nrows() {
            for j in 0..i {
                prop_assert!((s[(i, j)] - s[(j, i)]).abs() <= 1e-12 * scale);
            }
        }
        let direct = assemble_symmetric(&p, beta, &basis).unwrap();
        prop_assert!((&s - &direct).amax() <= 1e-12 * scale);
    }

    #[test]
    fn parity_blocks_reproduce_full_spectrum(p in model(2, 0.1..0.7), beta in -1.5f64..1.5, degree in 2usize..10) {
        let full = assemble_symmetric(&p, beta, &enumerate_basis(p.m(), degree, BasisParity::Both)).unwrap();
        let mut want: Vec<f64> = SymmetricEigen::new(full).eigenvalues.iter().copied().collect();
        want.sort_by(|a, b| b.total_cmp(a));
        let (got, _) = spectrum(&p, beta, degree).unwrap();
        prop_assert_eq!(got.len(), want.len());
        for (a, b) in got.iter().zip(&want) {
            prop_assert!((a - b).abs() <= 1e-10 * want[0].abs().max(1.0));
        }
    }

    #[test]
    fn parity_split_operators_agree_on_even_and_odd_functions(
        p in model(2, 0.2..0.6),
        beta in -1.5f64..1.5,
        a in prop::collection::vec(-1.0f64..1.0, 2),
        z in prop::collection::vec((-0.1f64..0.1, -0.1f64..0.1), 2),
    ) {
        let m = p.m();
        let coeff = a[..m].to_vec();
        let c2 = coeff.clone();
        let even = EntireFunctionSample::new(&p, move |w| w.iter().zip(&coeff).map(|(w, c)| w * c).sum::<Complex64>().cosh());
        let odd = EntireFunctionSample::new(&p, move |w| w.iter().zip(&c2).map(|(w, c)| w * c).sum::<Complex64>().sinh());
        let z: Vec<Complex64> = z[..m].iter().map(|&(r, i)| Complex64::new(r, i)).collect();
        let b = Complex64::new(beta, 0.0);
        let e1 = apply_ruelle(&p, b, &even, &z).unwrap();
        let e2 = apply_ruelle_parity(&p, b, &even, &z, Parity::Even).unwrap();
        let o1 = apply_ruelle(&p, b, &odd, &z).unwrap();
        let o2 = apply_ruelle_parity(&p, b, &odd, &z, Parity::Odd).unwrap();
        prop_assert!((e1 - e2).norm() <= 1e-13 * (1.0 + e1.norm()));
        prop_assert!((o1 - o2).norm() <= 1e-13 * (1.0 + o1.norm()));
    }

    #[test]
    fn real_inputs_give_real_outputs(p in model(3, 0.2..0.8), beta in -2.0f64..2.0, c in prop::collection::vec(-1.0f64..1.0, 4), x in prop::collection::vec(-0.1f64..0.1, 3)) {
        let m = p.m();
        let f = EntireFunctionSample::new(&p, move |w| {
            let s: Complex64 = w.iter().map(|w| w * c[0] + w * w * c[1]).sum();
            (s * c[2]).exp() + s * c[3]
        });
        let z: Vec<Complex64> = x[..m].iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let v = apply_ruelle(&p, Complex64::new(beta, 0.0), &f, &z).unwrap();
        prop_assert_eq!(v.im, 0.0);
    }

    #[test]
    fn translation_invariant_eigenfunctions(m in 2usize..4, j in prop::collection::vec(0.2f64..1.5, 3), c in prop::collection::vec(-1.0f64..1.0, 3), beta in 0.2f64..1.5) {
        let p = ModelParams::new(vec![0.5; m], j[..m].to_vec()).unwrap();
        let mut coeffs = c[..m].to_vec();
        let mean = coeffs.iter().sum::<f64>() / m as f64;
        coeffs.iter_mut().for_each(|x| *x -= mean);
        let f = translation_invariant_eigenfunction(&p, Complex64::new(beta, 0.0), coeffs).unwrap();
        let rho = (beta * p.total_coupling()).exp() / 2.0;
        let res = ruelle_residual(&p, Complex64::new(beta, 0.0), &f, Complex64::new(rho, 0.0)).unwrap();
        prop_assert!(res <= 1e-12, "residual {res:.2e}");
    }

    #[test]
    fn explicit_kernel_elements(lambda in 0.3f64..0.6, j in 0.3f64..1.5, beta in 0.2f64..1.5, n in -1i64..1) {
        let p = ModelParams::new(vec![lambda], vec![j]).unwrap();
        let f = zero_eigenfunction(&p, Complex64::new(beta, 0.0), &[n], &[1]).unwrap();
        let res = ruelle_residual(&p, Complex64::new(beta, 0.0), &f, Complex64::new(0.0, 0.0)).unwrap();
        prop_assert!(res <= 1e-10, "residual {res:.2e}");
    }
}

#[test]
fn hermite_orthonormality() {
    // The trapezoid rule is spectrally accurate for smooth, Gaussian-decaying
    // integrands, so a uniform grid on [−7, 7] is an independent oracle.
    let n = 20;
    let step = 1e-2;
    let tables: Vec<Vec<f64>> = (-700..=700).map(|k| hermite_table(n, k as f64 * step)).collect();
    let mut worst = 0.0f64;
    for a in 0..=n {
        for b in 0..=n {
            let s: f64 = tables.iter().map(|h| h[a] * h[b]).sum::<f64>() * step;
            worst = worst.max((s - if a == b { 1.0 } else { 0.0 }).abs());
        }
    }
    assert!(worst < 1e-10, "{worst:.2e}");
}

#[test]
fn gauss_hermite_integrates_polynomials() {
    // ∫ t^{2k} e^{−t²} dt = Γ(k + 1/2). Higher moments are dominated by the
    // outermost weights, which the eigenvector construction only resolves to
    // about 1e-12 relative.
    let (nodes, weights) = gauss_hermite(40);
    let mut gamma = PI.sqrt();
    for k in 0..15 {
        let q: f64 = nodes.iter().zip(&weights).map(|(t, w)| w * t.powi(2 * k)).sum();
        assert!(rel(q, gamma) < 1e-12, "k = {k}: {q} vs {gamma}");
        gamma *= k as f64 + 0.5;
    }
}

#[test]
fn matrix_zero_pattern_exhaustive() {
    for (lambda, j) in [(vec![0.5], vec![1.0]), (vec![0.3, 0.6], vec![1.0, 0.5])] {
        let p = ModelParams::new(lambda, j).unwrap();
        let idx = graded_indices(p.m(), 8);
        for beta in [-1.3, 0.7] {
            for a in &idx {
                for d in &idx {
                    let odd = (a.degree() + d.degree()) % 2 == 1;
                    let e = matrix_element(&p, beta, a, d);
                    assert_eq!(e == 0.0, odd, "alpha = {a}, delta = {d}, beta = {beta}: {e}");
                    assert_eq!(symmetric_element(&p, beta, a, d) == 0.0, odd);
                }
            }
        }
    }
}

#[test]
fn beta_zero_matrix_is_diagonal() {
    let p = ModelParams::new(vec![0.3, 0.6], vec![1.0, 0.5]).unwrap();
    let basis = enumerate_basis(2, 8, BasisParity::Both);
    let g = assemble_matrix(&p, 0.0, &basis).unwrap();
    for (i, a) in basis.indices().iter().enumerate() {
        for j in 0..basis.len() {
            let want = if i == j { 2.0 * a.power(p.lambda()) } else { 0.0 };
            assert_eq!(g.entries()[(i, j)], want);
        }
    }
}

#[test]
fn truncation_stability_at_default_degree() {
    let models = [
        ModelParams::new(vec![0.5], vec![1.0]).unwrap(),
        ModelParams::new(vec![0.5, 0.5], vec![0.6, 0.4]).unwrap(),
        ModelParams::new(vec![0.5; 3], vec![0.5, 0.3, 0.2]).unwrap(),
    ];
    for p in &models {
        let n = default_degree(p.m());
        for beta in [-1.0, 1.0] {
            let a = spectrum(p, beta, n).unwrap().0;
            let b = spectrum(p, beta, n + 4).unwrap().0;
            for k in 0..5 {
                assert!(rel(a[k], b[k]) < 1e-9, "m = {}, beta = {beta}, k = {k}: {} vs {}", p.m(), a[k], b[k]);
            }
        }
    }
}

#[test]
fn nonnegative_spectrum_for_nonnegative_beta() {
    for p in [ModelParams::new(vec![0.5], vec![1.0]).unwrap(), ModelParams::new(vec![0.3, 0.5], vec![1.0, 2.0]).unwrap()] {
        for beta in [0.0, 0.5, 1.0, 2.0] {
            let n = if p.m() == 1 { 40 } else { 12 };
            let s = eigenvalues(&p, beta, n).unwrap();
            let min = s.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
            assert!(min >= -1e-10 * s.eigenvalues[0], "m = {}, beta = {beta}: {min}", p.m());
        }
    }
}
