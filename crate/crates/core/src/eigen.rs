//! Eigenvalues of complex Hermitian matrices.
//!
//! Householder reduction to a real symmetric tridiagonal matrix followed by
//! implicit-shift QL with Wilkinson shifts. Only eigenvalues are computed.
//! Quaternion self-dual matrices are solved through their complex embedding;
//! their spectra come in coincident (Kramers) pairs, which
//! [`quaternion_eigenvalues`] checks and collapses.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::{CMatrix, ComplexHermitian, SelfDualMatrix};

/// Maximum QL sweeps spent on a single eigenvalue.
pub const MAX_QL_SWEEPS: usize = 50;

/// Relative tolerance on Hermitian symmetry accepted by [`tridiagonalize`].
const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    /// Nonnegative couplings; `offdiag[j]` links `j` and `j + 1`.
    pub offdiag: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::Dimension(format!(
                "tridiagonal needs m diagonal and m-1 off-diagonal entries, got {} and {}",
                diag.len(),
                offdiag.len()
            )));
        }
        Ok(Tridiagonal { diag, offdiag })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        let d: f64 = self.diag.iter().map(|x| x * x).sum();
        let e: f64 = self.offdiag.iter().map(|x| x * x).sum();
        (d + 2.0 * e).sqrt()
    }

    /// Gershgorin interval containing every eigenvalue.
    pub fn gershgorin(&self) -> (f64, f64) {
        let m = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..m {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < m { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Bound on `|Σ values - trace|` implied by rounding in the QL sweeps.
    pub residual_bound: f64,
}

/// Quaternion eigenvalues: one representative per Kramers pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuaternionSpectrum {
    pub values: Vec<f64>,
    /// `max_j |λ_{2j+1} - λ_{2j}|` over the sorted complex spectrum.
    pub pairing_gap: f64,
    pub tolerance: f64,
}

/// Unitary reduction of a Hermitian matrix to real symmetric tridiagonal
/// form with nonnegative off-diagonal.
pub fn tridiagonalize(m: &CMatrix) -> Result<Tridiagonal> {
    let (dev, row, col) = m.hermitian_deviation();
    if dev > HERMITIAN_TOL * m.frobenius_norm().max(1.0) {
        return Err(Error::NonHermitian {
            row,
            col,
            deviation: dev,
        });
    }
    let dim = m.dim();
    if dim == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    // Only the lower triangle (c <= r) of `a` is referenced and updated.
    let mut a = m.as_slice().to_vec();
    let mut diag = Vec::with_capacity(dim);
    let mut offdiag = Vec::with_capacity(dim.saturating_sub(1));
    let zero = Complex64::new(0.0, 0.0);
    let mut v = vec![zero; dim];
    let mut p = vec![zero; dim];

    for k in 0..dim.saturating_sub(1) {
        diag.push(a[k * dim + k].re);
        let len = dim - k - 1;
        let base = k + 1;
        let v = &mut v[..len];
        for (i, vi) in v.iter_mut().enumerate() {
            *vi = a[(base + i) * dim + k];
        }
        let sigma = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let x0 = v[0];
        let x0_abs = x0.norm();
        if sigma == 0.0 || (len == 1 && x0.im == 0.0 && x0.re >= 0.0) {
            offdiag.push(x0_abs);
            continue;
        }
        // H x = -phase·σ·e₁ with H = I - τ v v*, v = x + phase·σ·e₁.
        let phase = if x0_abs == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0_abs
        };
        v[0] += phase * sigma;
        let tau = 1.0 / (sigma * (sigma + x0_abs));
        offdiag.push(sigma);

        // p = τ B v using the lower triangle of the trailing block B.
        let p = &mut p[..len];
        p.iter_mut().for_each(|z| *z = zero);
        for r in 0..len {
            let row = &a[(base + r) * dim + base..(base + r) * dim + base + r];
            let vr = v[r];
            let mut acc = zero;
            for ((&brc, &vc), pc) in row.iter().zip(&v[..r]).zip(p[..r].iter_mut()) {
                acc += brc * vc;
                *pc += brc.conj() * vr;
            }
            let brr = a[(base + r) * dim + base + r].re;
            p[r] += acc + vr * brr;
        }
        p.iter_mut().for_each(|z| *z *= tau);
        // w = p - (τ/2)(v* p) v
        let vp: Complex64 = v.iter().zip(p.iter()).map(|(vi, pi)| vi.conj() * pi).sum();
        let kfac = 0.5 * tau * vp.re;
        for (pi, vi) in p.iter_mut().zip(v.iter()) {
            *pi -= *vi * kfac;
        }
        // B -= v w* + w v*
        for r in 0..len {
            let (vr, wr) = (v[r], p[r]);
            let row = &mut a[(base + r) * dim + base..(base + r) * dim + base + r + 1];
            for ((brc, &vc), &wc) in row.iter_mut().zip(&v[..=r]).zip(&p[..=r]) {
                *brc -= vr * wc.conj() + wr * vc.conj();
            }
        }
    }
    diag.push(a[dim * dim - 1].re);
    Tridiagonal::new(diag, offdiag)
}

/// All eigenvalues of a symmetric tridiagonal matrix, ascending.
pub fn eigenvalues_ql(t: &Tridiagonal) -> Result<Spectrum> {
    let n = t.len();
    let mut d = t.diag.clone();
    let mut e = t.offdiag.clone();
    e.push(0.0);
    let eps = f64::EPSILON;

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(Error::NonConvergence { index: l });
            }
            // Wilkinson shift from the leading 2×2 block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|x, y| x.total_cmp(y));
    let residual_bound = 16.0 * n as f64 * eps * t.frobenius_norm();
    Ok(Spectrum {
        values: d,
        residual_bound,
    })
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &ComplexHermitian) -> Result<Spectrum> {
    eigenvalues_ql(&tridiagonalize(m.matrix())?)
}

/// Kramers tolerance `1e-9 · max(1, ‖A‖_F)`.
pub fn pairing_tolerance(frobenius: f64) -> f64 {
    1e-9 * frobenius.max(1.0)
}

/// The `n` quaternion eigenvalues of a self-dual matrix.
pub fn quaternion_eigenvalues(m: &SelfDualMatrix) -> Result<QuaternionSpectrum> {
    let embedded = m.embed();
    let spectrum = hermitian_eigenvalues(&embedded)?;
    pair_kramers(&spectrum.values, pairing_tolerance(embedded.frobenius_norm()))
}

/// Collapses a sorted spectrum of even length into pair midpoints.
pub fn pair_kramers(sorted: &[f64], tolerance: f64) -> Result<QuaternionSpectrum> {
    if !sorted.len().is_multiple_of(2) {
        return Err(Error::Dimension(format!(
            "Kramers pairing needs an even spectrum, got {} values",
            sorted.len()
        )));
    }
    let mut gap = 0.0f64;
    let values = sorted
        .chunks_exact(2)
        .map(|pair| {
            gap = gap.max(pair[1] - pair[0]);
            0.5 * (pair[0] + pair[1])
        })
        .collect();
    if gap > tolerance {
        return Err(Error::PairingViolation { gap, tolerance });
    }
    Ok(QuaternionSpectrum {
        values,
        pairing_gap: gap,
        tolerance,
    })
}
