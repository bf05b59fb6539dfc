//! The standard semicircle law on `[-2, 2]` and its Stieltjes transform.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chebyshev::{TestFunction, DEFAULT_L};
use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;

/// Points closer than this to `[-2, 2]` are rejected by [`stieltjes_m`].
pub const CUT_DISTANCE: f64 = 1e-12;

/// `(1/2π)√(4 - x²)` on `[-2, 2]`, zero outside.
pub fn density(x: f64) -> f64 {
    if x.abs() <= 2.0 {
        (4.0 - x * x).max(0.0).sqrt() / (2.0 * PI)
    } else {
        0.0
    }
}

/// `k`-th moment: zero for odd `k`, `Catalan(k/2)` for even `k`.
pub fn moment(k: u32) -> f64 {
    assert!(k <= 30, "moment order {k} > 30");
    if k % 2 == 1 {
        return 0.0;
    }
    catalan(k / 2) as f64
}

/// `C_m = binom(2m, m)/(m + 1)` in exact integer arithmetic.
pub fn catalan(m: u32) -> u128 {
    let mut c: u128 = 1;
    for i in 0..m as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

/// `∫ f dF = ψ₀(f) - ψ₂(f)`.
pub fn integral_f(f: &TestFunction) -> Result<f64> {
    let psi = f.psi(DEFAULT_L.max(f.degree().unwrap_or(0)))?;
    Ok(psi.get(0) - psi.get(2))
}

/// `∫ f dF` by adaptive Simpson on `x = 2cos θ`, where the density becomes
/// `(2/π) sin² θ dθ` on `[0, π]`.
pub fn integral_f_quadrature(f: &TestFunction, tol: f64) -> f64 {
    let g = |theta: f64| {
        let s = theta.sin();
        f.eval(2.0 * theta.cos()) * s * s
    };
    2.0 / PI * adaptive_simpson(&g, 0.0, PI, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StieltjesValue {
    pub z: Complex64,
    pub m: Complex64,
    pub m_prime: Complex64,
}

/// Distance from `z` to the segment `[-2, 2]`.
pub fn distance_to_cut(z: Complex64) -> f64 {
    let dx = (z.re.abs() - 2.0).max(0.0);
    dx.hypot(z.im)
}

/// `m(z) = (-z + √(z-2)·√(z+2))/2`, the root of `m² + zm + 1 = 0` that
/// vanishes at infinity, with `m'(z) = m²/(1 - m²)`.
pub fn stieltjes_m(z: Complex64) -> Result<StieltjesValue> {
    if !(z.re.is_finite() && z.im.is_finite()) || distance_to_cut(z) < CUT_DISTANCE {
        return Err(Error::Domain { re: z.re, im: z.im });
    }
    let root = (z - 2.0).sqrt() * (z + 2.0).sqrt();
    // (root - z)/2 written as its reciprocal partner; root ≈ z everywhere,
    // so the direct difference cancels.
    let m = -2.0 / (z + root);
    let m2 = m * m;
    Ok(StieltjesValue {
        z,
        m,
        m_prime: m2 / (1.0 - m2),
    })
}
