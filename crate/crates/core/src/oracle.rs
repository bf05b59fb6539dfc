//! Independent reference computations used to adjudicate the main solvers.
//!
//! Nothing in here shares code with the Householder/QL path in
//! [`crate::eigen`]: eigenvalues come from cyclic Jacobi rotations or from
//! roots of the characteristic polynomial.

use num_complex::Complex64;

use crate::quaternion::{CMatrix, SelfDualMatrix};

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// ascending. Sweeps until the off-diagonal mass is below `tol · ‖A‖_F`.
pub fn jacobi_eigenvalues(m: &CMatrix, tol: f64) -> Vec<f64> {
    let n = m.dim();
    let mut a = m.clone();
    let norm = m.frobenius_norm().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| a[(r, c)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= tol * norm {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                // Rotate the phase of index q so that a[p,q] becomes real.
                let phase = apq / r;
                for k in 0..n {
                    a[(k, q)] *= phase.conj();
                }
                for k in 0..n {
                    a[(q, k)] *= phase;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let zeta = (aqq - app) / (2.0 * r);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = akp * c - akq * s;
                    a[(k, q)] = akp * s + akq * c;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = apk * c - aqk * s;
                    a[(q, k)] = apk * s + aqk * c;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    let mut vals: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    vals.sort_by(|x, y| x.total_cmp(y));
    vals
}

/// Unit eigenvector estimate for eigenvalue `lambda` by shifted inverse
/// iteration.
pub fn inverse_iteration(m: &CMatrix, lambda: f64, iterations: usize) -> Vec<Complex64> {
    let n = m.dim();
    let shift = lambda + 1e-10 * m.frobenius_norm().max(1.0);
    let inv = m
        .shift(Complex64::new(shift, 0.0))
        .inverse()
        .expect("shifted matrix is nonsingular");
    let mut x: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + (i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
        .collect();
    for _ in 0..iterations {
        x = inv.mul_vec(&x);
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        x.iter_mut().for_each(|z| *z /= norm);
    }
    x
}

/// Characteristic polynomial coefficients (ascending powers, monic) of a
/// square matrix by the Faddeev–LeVerrier recursion. Real parts only, which
/// is exact for Hermitian input.
pub fn characteristic_polynomial(m: &CMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let mut mk = CMatrix::zeros(n);
    for k in 1..=n {
        let mut next = m.matmul(&mk).expect("square");
        let c_prev = coeffs[n + 1 - k];
        for i in 0..n {
            next[(i, i)] += Complex64::new(c_prev, 0.0);
        }
        let amk = m.matmul(&next).expect("square");
        coeffs[n - k] = -amk.trace().re / k as f64;
        mk = next;
    }
    coeffs
}

/// Quaternion eigenvalues of a self-dual matrix with `n <= 3` from the roots
/// of `q(λ)`, where the embedding's characteristic polynomial is `q(λ)²`.
pub fn quaternion_eigenvalues_charpoly(m: &SelfDualMatrix) -> Vec<f64> {
    let n = m.n();
    assert!(n <= 3, "closed-form roots only up to degree 3");
    let p = characteristic_polynomial(m.embed().matrix());
    let q = polynomial_sqrt(&p);
    let mut roots = real_roots_up_to_cubic(&q);
    for r in roots.iter_mut() {
        *r = newton_polish(&q, *r);
    }
    roots.sort_by(|x, y| x.total_cmp(y));
    roots
}

/// Monic `q` with `q² = p` for monic `p` of even degree, matched from the
/// leading coefficients down.
fn polynomial_sqrt(p: &[f64]) -> Vec<f64> {
    let deg = (p.len() - 1) / 2;
    let mut q = vec![0.0; deg + 1];
    q[deg] = 1.0;
    for j in 1..=deg {
        let mut acc = p[2 * deg - j];
        for i in 1..j {
            acc -= q[deg - i] * q[deg - j + i];
        }
        q[deg - j] = acc / 2.0;
    }
    q
}

fn real_roots_up_to_cubic(q: &[f64]) -> Vec<f64> {
    match q.len() - 1 {
        1 => vec![-q[0]],
        2 => {
            let (b, c) = (q[1], q[0]);
            let disc = (b * b - 4.0 * c).max(0.0).sqrt();
            let t = -0.5 * (b + disc.copysign(b));
            if t == 0.0 {
                vec![0.0, 0.0]
            } else {
                vec![t, c / t]
            }
        }
        3 => {
            // Depressed cubic x = y - a/3, y³ + py + r = 0 with three real roots.
            let (a, b, c) = (q[2], q[1], q[0]);
            let p = b - a * a / 3.0;
            let r = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
            let shift = -a / 3.0;
            if p.abs() < 1e-300 {
                return vec![shift - r.cbrt(); 3];
            }
            let m = 2.0 * (-p / 3.0).max(0.0).sqrt();
            let arg = (3.0 * r / (p * m)).clamp(-1.0, 1.0);
            let theta = arg.acos() / 3.0;
            (0..3)
                .map(|k| shift + m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos())
                .collect()
        }
        d => panic!("degree {d} not supported"),
    }
}

fn newton_polish(q: &[f64], mut x: f64) -> f64 {
    for _ in 0..4 {
        let (mut val, mut der) = (0.0, 0.0);
        for &c in q.iter().rev() {
            der = der * x + val;
            val = val * x + c;
        }
        if der == 0.0 {
            break;
        }
        let step = val / der;
        if !step.is_finite() {
            break;
        }
        x -= step;
    }
    x
}
