//! Quaternion scalars, quaternion self-dual Hermitian matrices and their
//! 2×2 complex-block embedding.
//!
//! A quaternion `q = a·e + b·i + c·j + d·k` is represented by the block
//!
//! ```text
//! [  a+bi   c+di ]
//! [ -c+di   a-bi ]
//! ```
//!
//! so an `n × n` quaternion matrix becomes a `2n × 2n` complex matrix. The
//! structure predicates ([`is_type_t`], [`is_type_i`]) test whether a complex
//! matrix has the block pattern such embeddings (and their resolvents) carry.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance used by the structure predicates.
pub const TAU_STRUCT: f64 = 1e-10;

/// A 2×2 complex block, row-major.
pub type Block = [[Complex64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const E: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Quaternion { a, b, c, d }
    }

    /// Real scalar `t·e`.
    pub const fn scalar(t: f64) -> Self {
        Quaternion::new(t, 0.0, 0.0, 0.0)
    }

    /// Builds `q` from the complex pair `(α, β)` of its block `[[α, β], [-β̄, ᾱ]]`.
    pub fn from_complex_pair(alpha: Complex64, beta: Complex64) -> Self {
        Quaternion::new(alpha.re, alpha.im, beta.re, beta.im)
    }

    pub fn alpha(&self) -> Complex64 {
        Complex64::new(self.a, self.b)
    }

    pub fn beta(&self) -> Complex64 {
        Complex64::new(self.c, self.d)
    }

    pub fn conjugate(&self) -> Self {
        Quaternion::new(self.a, -self.b, -self.c, -self.d)
    }

    /// `‖q‖²_Q = a² + b² + c² + d²`.
    pub fn norm_sq(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn embed(&self) -> Block {
        embed(*self)
    }

    pub fn scale(&self, s: f64) -> Self {
        Quaternion::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.a + r.a, self.b + r.b, self.c + r.c, self.d + r.d)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.a - r.a, self.b - r.b, self.c - r.c, self.d - r.d)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

/// Hamilton product (`ij = k`, `jk = i`, `ki = j`).
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, r: Quaternion) -> Quaternion {
        let (a1, b1, c1, d1) = (self.a, self.b, self.c, self.d);
        let (a2, b2, c2, d2) = (r.a, r.b, r.c, r.d);
        Quaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i{:+}j{:+}k", self.a, self.b, self.c, self.d)
    }
}

/// The 2×2 complex block of `q`: `[[a+bi, c+di], [-c+di, a-bi]]`.
pub fn embed(q: Quaternion) -> Block {
    [
        [Complex64::new(q.a, q.b), Complex64::new(q.c, q.d)],
        [Complex64::new(-q.c, q.d), Complex64::new(q.a, -q.b)],
    ]
}

pub fn quat_norm(q: Quaternion) -> f64 {
    q.norm()
}

pub fn block_mul(x: &Block, y: &Block) -> Block {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = x[r][0] * y[0][c] + x[r][1] * y[1][c];
        }
    }
    out
}

pub fn block_adjoint(x: &Block) -> Block {
    [
        [x[0][0].conj(), x[1][0].conj()],
        [x[0][1].conj(), x[1][1].conj()],
    ]
}

/// Type-T: the block equals `t·I₂` for some scalar `t`.
pub fn is_type_t(block: &Block, tol: f64) -> bool {
    block[0][1].norm() <= tol
        && block[1][0].norm() <= tol
        && (block[0][0] - block[1][1]).norm() <= tol
}

/// Type-I: every diagonal 2×2 block is Type-T and each off-diagonal pair
/// satisfies `block(k, j) = [[d, -b], [-c, a]]` whenever
/// `block(j, k) = [[a, b], [c, d]]`. Odd dimensions are never Type-I.
pub fn is_type_i(m: &CMatrix, tol: f64) -> bool {
    if !m.dim().is_multiple_of(2) {
        return false;
    }
    let n = m.dim() / 2;
    for j in 0..n {
        if !is_type_t(&m.block(j, j), tol) {
            return false;
        }
        for k in (j + 1)..n {
            let upper = m.block(j, k);
            let lower = m.block(k, j);
            let [[a, b], [c, d]] = upper;
            let expected = [[d, -b], [-c, a]];
            for r in 0..2 {
                for s in 0..2 {
                    if (lower[r][s] - expected[r][s]).norm() > tol {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        CMatrix { dim, data }
    }

    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {dim}×{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(CMatrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    /// The 2×2 block at block coordinates `(j, k)`.
    pub fn block(&self, j: usize, k: usize) -> Block {
        let (r, c) = (2 * j, 2 * k);
        [
            [self[(r, c)], self[(r, c + 1)]],
            [self[(r + 1, c)], self[(r + 1, c + 1)]],
        ]
    }

    pub fn set_block(&mut self, j: usize, k: usize, b: &Block) {
        let (r, c) = (2 * j, 2 * k);
        self[(r, c)] = b[0][0];
        self[(r, c + 1)] = b[0][1];
        self[(r + 1, c)] = b[1][0];
        self[(r + 1, c + 1)] = b[1][1];
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.dim != other.dim {
            return Err(Error::Dimension(format!(
                "cannot multiply {0}×{0} by {1}×{1}",
                self.dim, other.dim
            )));
        }
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let orow = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[r * n..(r + 1) * n];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|r| self.row(r).iter().zip(v).map(|(&a, &x)| a * x).sum())
            .collect()
    }

    /// `self - z·I`.
    pub fn shift(&self, z: Complex64) -> CMatrix {
        let mut out = self.clone();
        for i in 0..self.dim {
            out[(i, i)] -= z;
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// Largest `|a[r,c] - conj(a[c,r])|` together with its position.
    pub fn hermitian_deviation(&self) -> (f64, usize, usize) {
        let mut worst = (0.0, 0, 0);
        for r in 0..self.dim {
            for c in r..self.dim {
                let dev = (self[(r, c)] - self[(c, r)].conj()).norm();
                if dev > worst.0 {
                    worst = (dev, r, c);
                }
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation().0 <= tol
    }

    /// Inverse by LU factorisation with partial pivoting.
    pub fn inverse(&self) -> Result<CMatrix> {
        let n = self.dim;
        let mut lu = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = self.frobenius_norm().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let (pivot, pmag) = (col..n)
                .map(|r| (r, lu[r * n + col].norm()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmag <= f64::EPSILON * scale * 1e-3 {
                return Err(Error::Singular);
            }
            if pivot != col {
                for c in 0..n {
                    lu.swap(col * n + c, pivot * n + c);
                }
                perm.swap(col, pivot);
            }
            let p = lu[col * n + col];
            for r in (col + 1)..n {
                let factor = lu[r * n + col] / p;
                lu[r * n + col] = factor;
                for c in (col + 1)..n {
                    let u = lu[col * n + c];
                    lu[r * n + c] -= factor * u;
                }
            }
        }
        let mut inv = CMatrix::zeros(n);
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for e in 0..n {
            // Solve L y = P e, then U x = y.
            for r in 0..n {
                let mut acc = if perm[r] == e {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                for c in 0..r {
                    acc -= lu[r * n + c] * x[c];
                }
                x[r] = acc;
            }
            for r in (0..n).rev() {
                let mut acc = x[r];
                for c in (r + 1)..n {
                    acc -= lu[r * n + c] * x[c];
                }
                x[r] = acc / lu[r * n + r];
            }
            for r in 0..n {
                inv[(r, e)] = x[r];
            }
        }
        Ok(inv)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

/// A complex Hermitian matrix. Construction enforces
/// `a[j,k] = conj(a[k,j])` and exactly real diagonal entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexHermitian(CMatrix);

impl ComplexHermitian {
    /// Accepts `m` if it is Hermitian to within `tol · max(1, ‖m‖_F)`, then
    /// symmetrises it exactly.
    pub fn new(m: CMatrix, tol: f64) -> Result<Self> {
        let (dev, row, col) = m.hermitian_deviation();
        if dev > tol * m.frobenius_norm().max(1.0) {
            return Err(Error::NonHermitian {
                row,
                col,
                deviation: dev,
            });
        }
        Ok(Self::symmetrised(m))
    }

    fn symmetrised(mut m: CMatrix) -> Self {
        let n = m.dim();
        for r in 0..n {
            m[(r, r)] = Complex64::new(m[(r, r)].re, 0.0);
            for c in (r + 1)..n {
                let avg = (m[(r, c)] + m[(c, r)].conj()) * 0.5;
                m[(r, c)] = avg;
                m[(c, r)] = avg.conj();
            }
        }
        ComplexHermitian(m)
    }

    /// Builds the matrix from its upper triangle (`r <= c`); the diagonal's
    /// imaginary part is dropped.
    pub fn from_upper(dim: usize, mut upper: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(dim);
        for r in 0..dim {
            m[(r, r)] = Complex64::new(upper(r, r).re, 0.0);
            for c in (r + 1)..dim {
                let v = upper(r, c);
                m[(r, c)] = v;
                m[(c, r)] = v.conj();
            }
        }
        ComplexHermitian(m)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.0[(i, i)].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        ComplexHermitian(self.0.scale(Complex64::new(s, 0.0)))
    }
}

impl Index<(usize, usize)> for ComplexHermitian {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

/// `n × n` quaternion self-dual Hermitian matrix: real diagonal `t_j` and
/// quaternion entries `q_jk` above it (packed row by row).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfDualMatrix {
    n: usize,
    diagonal: Vec<f64>,
    upper: Vec<Quaternion>,
}

impl SelfDualMatrix {
    pub fn new(diagonal: Vec<f64>, upper: Vec<Quaternion>) -> Result<Self> {
        let n = diagonal.len();
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if upper.len() != n * (n - 1) / 2 {
            return Err(Error::Dimension(format!(
                "a {n}×{n} self-dual matrix needs {} upper entries, got {}",
                n * (n - 1) / 2,
                upper.len()
            )));
        }
        Ok(SelfDualMatrix { n, diagonal, upper })
    }

    /// Fills the matrix from `diag(j)` and `entry(j, k)` for `j < k`.
    pub fn from_fn(
        n: usize,
        mut diag: impl FnMut(usize) -> f64,
        mut entry: impl FnMut(usize, usize) -> Quaternion,
    ) -> Result<Self> {
        let diagonal = (0..n).map(&mut diag).collect();
        let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for j in 0..n {
            for k in (j + 1)..n {
                upper.push(entry(j, k));
            }
        }
        Self::new(diagonal, upper)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn upper(&self) -> &[Quaternion] {
        &self.upper
    }

    fn packed_index(&self, j: usize, k: usize) -> usize {
        debug_assert!(j < k && k < self.n);
        j * (2 * self.n - j - 1) / 2 + (k - j - 1)
    }

    /// Entry `(j, k)` as a quaternion; below the diagonal this is the
    /// conjugate of the mirrored entry.
    pub fn get(&self, j: usize, k: usize) -> Quaternion {
        use std::cmp::Ordering;
        match j.cmp(&k) {
            Ordering::Equal => Quaternion::scalar(self.diagonal[j]),
            Ordering::Less => self.upper[self.packed_index(j, k)],
            Ordering::Greater => self.upper[self.packed_index(k, j)].conjugate(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        SelfDualMatrix {
            n: self.n,
            diagonal: self.diagonal.iter().map(|t| t * s).collect(),
            upper: self.upper.iter().map(|q| q.scale(s)).collect(),
        }
    }

    pub fn embed(&self) -> ComplexHermitian {
        embed_matrix(self)
    }
}

/// The `2n × 2n` complex embedding of a self-dual matrix.
pub fn embed_matrix(m: &SelfDualMatrix) -> ComplexHermitian {
    let n = m.n();
    let mut out = CMatrix::zeros(2 * n);
    for j in 0..n {
        out.set_block(j, j, &embed(Quaternion::scalar(m.diagonal[j])));
        for k in (j + 1)..n {
            let q = m.get(j, k);
            out.set_block(j, k, &embed(q));
            out.set_block(k, j, &embed(q.conjugate()));
        }
    }
    ComplexHermitian(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_self_dual(n: usize, seed: u64) -> SelfDualMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut r = move || rng.random_range(-1.0..1.0);
        let diag: Vec<f64> = (0..n).map(|_| r()).collect();
        SelfDualMatrix::from_fn(n, |i| diag[i], |_, _| Quaternion::new(r(), r(), r(), r())).unwrap()
    }

    #[test]
    fn embed_identity_and_basis() {
        let e = embed(Quaternion::E);
        assert_eq!(e, [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(1., 0.)]]);
        let k = embed(Quaternion::K);
        assert_eq!(k, [[c(0., 0.), c(0., 1.)], [c(0., 1.), c(0., 0.)]]);
        let i = embed(Quaternion::I);
        assert_eq!(i, [[c(0., 1.), c(0., 0.)], [c(0., 0.), c(0., -1.)]]);
        let j = embed(Quaternion::J);
        assert_eq!(j, [[c(0., 0.), c(1., 0.)], [c(-1., 0.), c(0., 0.)]]);
    }

    #[test]
    fn embed_gram_is_norm_squared() {
        let q = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        let b = embed(q);
        let g = block_mul(&b, &block_adjoint(&b));
        assert!((g[0][0] - c(30.0, 0.0)).norm() < 1e-14);
        assert!((g[1][1] - c(30.0, 0.0)).norm() < 1e-14);
        assert!(g[0][1].norm() < 1e-14 && g[1][0].norm() < 1e-14);
        assert_eq!(embed(q.conjugate()), block_adjoint(&b));
    }

    #[test]
    fn quat_norm_values() {
        assert_eq!(quat_norm(Quaternion::ZERO), 0.0);
        assert_eq!(quat_norm(Quaternion::E), 1.0);
        assert!((quat_norm(Quaternion::new(1.0, 2.0, 3.0, 4.0)) - 30f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn embed_matrix_small_cases() {
        let m = SelfDualMatrix::new(vec![5.0], vec![]).unwrap();
        let e = embed_matrix(&m);
        assert_eq!(e.dim(), 2);
        assert_eq!(e.matrix(), &CMatrix::identity(2).scale(c(5.0, 0.0)));

        let m = SelfDualMatrix::new(vec![0.0, 0.0], vec![Quaternion::E]).unwrap();
        let e = embed_matrix(&m);
        let expected = CMatrix::from_fn(4, |r, col| {
            if (r < 2) != (col < 2) && r % 2 == col % 2 {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        assert_eq!(e.matrix(), &expected);
    }

    #[test]
    fn embed_matrix_is_hermitian_and_type_i() {
        for seed in 0..10 {
            let m = random_self_dual(3, seed);
            let e = embed_matrix(&m);
            assert!(e.matrix().is_hermitian(0.0));
            assert!(is_type_i(e.matrix(), TAU_STRUCT));
        }
    }

    #[test]
    fn type_t_cases() {
        let b = embed(Quaternion::scalar(3.7));
        assert!(is_type_t(&b, TAU_STRUCT));
        assert!(!is_type_t(&embed(Quaternion::I), TAU_STRUCT));
        assert!(is_type_t(&embed(Quaternion::ZERO), TAU_STRUCT));
    }

    #[test]
    fn type_i_cases() {
        assert!(is_type_i(&CMatrix::identity(6), TAU_STRUCT));
        assert!(!is_type_i(&CMatrix::identity(3), TAU_STRUCT));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let generic = ComplexHermitian::from_upper(4, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        assert!(!is_type_i(generic.matrix(), TAU_STRUCT));
    }

    #[test]
    fn resolvent_keeps_type_i_structure() {
        let z = c(0.0, 2.0);
        for seed in 0..5 {
            let w = random_self_dual(5, 100 + seed).scale(1.0 / 5f64.sqrt());
            let resolvent = embed_matrix(&w).matrix().shift(z).inverse().unwrap();
            assert!(is_type_i(&resolvent, TAU_STRUCT));
            assert!(!resolvent.is_hermitian(1e-6));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = embed_matrix(&random_self_dual(4, 3)).into_matrix().shift(c(0.3, 1.0));
        let inv = m.inverse().unwrap();
        let prod = m.matmul(&inv).unwrap();
        let id = CMatrix::identity(8);
        for r in 0..8 {
            for col in 0..8 {
                assert!((prod[(r, col)] - id[(r, col)]).norm() < 1e-12);
            }
        }
        assert!(matches!(CMatrix::zeros(3).inverse(), Err(Error::Singular)));
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMatrix::identity(3);
        m[(0, 2)] = c(1.0, 0.0);
        assert!(matches!(
            ComplexHermitian::new(m, 1e-12),
            Err(Error::NonHermitian { row: 0, col: 2, .. })
        ));
    }

    fn quaternion() -> impl Strategy<Value = Quaternion> {
        (-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64)
            .prop_map(|(a, b, c, d)| Quaternion::new(a, b, c, d))
    }

    proptest! {
        #[test]
        fn embedding_is_multiplicative(q in quaternion(), r in quaternion()) {
            let lhs = embed(q * r);
            let rhs = block_mul(&embed(q), &embed(r));
            let scale = q.norm() * r.norm() + 1.0;
            for i in 0..2 {
                for j in 0..2 {
                    prop_assert!((lhs[i][j] - rhs[i][j]).norm() <= 1e-14 * scale);
                }
            }
        }

        #[test]
        fn norm_matches_gram_entry(q in quaternion()) {
            let b = embed(q);
            let g = block_mul(&b, &block_adjoint(&b));
            let n2 = q.norm_sq();
            prop_assert!((quat_norm(q).powi(2) - g[0][0].re).abs() <= 1e-14 * n2.max(1.0));
            prop_assert!(g[0][0].im.abs() <= 1e-14 * n2.max(1.0));
        }

        #[test]
        fn embeddings_are_type_i(seed in any::<u64>(), n in 1usize..6) {
            let e = embed_matrix(&random_self_dual(n, seed));
            prop_assert!(is_type_i(e.matrix(), TAU_STRUCT));
        }
    }
}
