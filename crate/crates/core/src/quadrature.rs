//! Adaptive Gauss–Kronrod quadrature on finite intervals and boxes, plus
//! Gauss–Hermite rules. Used only by validation routines.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;

/// Quadrature value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Estimate {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    Estimate {
        value: kronrod * h,
        error: ((kronrod - gauss) * h).norm(),
    }
}

/// Globally adaptive G7/K15 integration of a complex integrand over [a, b].
/// Subdivides the interval with the largest error until the summed error
/// estimate is below `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<Estimate> {
    let mut parts = vec![(a, b, gk15(&f, a, b))];
    loop {
        let value: Complex64 = parts.iter().map(|p| p.2.value).sum();
        let error: f64 = parts.iter().map(|p| p.2.error).sum();
        let target = abs_tol.max(rel_tol * value.norm());
        if error <= target {
            return Ok(Estimate { value, error });
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature {
                estimate: error,
                tolerance: target,
            });
        }
        let (worst, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2.error.total_cmp(&y.1 .2.error))
            .expect("nonempty");
        let (lo, hi, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        parts.push((lo, mid, gk15(&f, lo, mid)));
        parts.push((mid, hi, gk15(&f, mid, hi)));
    }
}

/// Iterated integration over `[a0,b0] × [a1,b1]`. The reported error is the
/// outer estimate plus the width times the worst inner estimate.
pub fn integrate_2d<F: Fn(f64, f64) -> Complex64>(
    f: F,
    (a0, b0): (f64, f64),
    (a1, b1): (f64, f64),
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Estimate> {
    let inner_tol = abs_tol / (b0 - a0);
    let worst_inner = std::cell::Cell::new(0.0f64);
    let failure = std::cell::Cell::new(None);
    let outer = integrate(
        |x| match integrate(|y| f(x, y), a1, b1, inner_tol, rel_tol) {
            Ok(e) => {
                worst_inner.set(worst_inner.get().max(e.error));
                e.value
            }
            Err(err) => {
                failure.set(Some(err));
                Complex64::new(0.0, 0.0)
            }
        },
        a0,
        b0,
        abs_tol,
        rel_tol,
    )?;
    if let Some(err) = failure.take() {
        return Err(err);
    }
    Ok(Estimate {
        value: outer.value,
        error: outer.error + (b0 - a0) * worst_inner.get(),
    })
}

/// Nodes and weights of the n-point Gauss–Hermite rule for weight e^{−t²}
/// (Golub–Welsch: eigen-decomposition of the Jacobi matrix).
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        let b = (i as f64 / 2.0).sqrt();
        jacobi[(i, i - 1)] = b;
        jacobi[(i - 1, i)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut rule: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let v0 = eig.eigenvectors[(0, k)];
            (eig.eigenvalues[k], std::f64::consts::PI.sqrt() * v0 * v0)
        })
        .collect();
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule.into_iter().unzip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_integral() {
        let e = integrate(|x| Complex64::new((-x * x).exp(), 0.0), -10.0, 10.0, 1e-14, 1e-13).unwrap();
        assert_relative_eq!(e.value.re, std::f64::consts::PI.sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn hermite_rule_moments() {
        let (x, w) = gauss_hermite(20);
        let m0: f64 = w.iter().sum();
        let m2: f64 = x.iter().zip(&w).map(|(x, w)| x * x * w).sum();
        assert_relative_eq!(m0, std::f64::consts::PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(m2, std::f64::consts::PI.sqrt() / 2.0, max_relative = 1e-13);
    }
}
