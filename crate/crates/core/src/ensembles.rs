//! Wigner β ensembles: entry distributions, counter-based sampling, moment
//! checks and the covariance of quaternion quadratic forms.
//!
//! Every random number is drawn from a ChaCha8 stream selected by the entry
//! index, with the key derived from the matrix seed. A matrix is therefore a
//! pure function of `(seed, j, k)` and does not depend on generation order.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::eigen::{hermitian_eigenvalues, quaternion_eigenvalues};
use crate::error::{Error, Result};
use crate::predict::Beta;
use crate::quaternion::{
    embed, is_type_i, CMatrix, ComplexHermitian, Quaternion, SelfDualMatrix, TAU_STRUCT,
};

/// SplitMix64 finaliser.
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent 64-bit seed from `(seed, index)`, e.g. the seed of
/// replicate `index` under a master seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix(splitmix(seed) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

/// Counter-based generator: one ChaCha8 key per seed, one stream per index.
#[derive(Clone)]
pub struct CounterRng {
    base: ChaCha8Rng,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        let mut key = [0u8; 32];
        let mut state = seed;
        for chunk in key.chunks_mut(8) {
            state = splitmix(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        CounterRng {
            base: ChaCha8Rng::from_seed(key),
        }
    }

    /// Generator for the stream `index`, always starting at word 0.
    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_stream(index);
        rng.set_word_pos(0);
        rng
    }

    /// Stream for matrix entry `(j, k)`.
    pub fn entry(&self, j: usize, k: usize) -> ChaCha8Rng {
        self.stream(((j as u64) << 32) | k as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntryKind {
    Gaussian,
    /// Quaternion components uniform on `{±½ ± ½i}` per complex coordinate.
    DiscretePhase,
    Rademacher,
    /// `x = r·u` with `u` a uniform direction and `r` two-point with
    /// `E r² = 1`, `E r⁴ = m4`.
    TwoPointRadial { m4: f64 },
}

/// Off-diagonal entry law for a given β.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntryDistribution {
    pub kind: EntryKind,
    pub beta: Beta,
}

impl EntryDistribution {
    pub fn new(kind: EntryKind, beta: Beta) -> Result<Self> {
        match kind {
            EntryKind::DiscretePhase if beta != Beta::Quaternion => {
                return Err(Error::InvalidParameter("discrete-phase entries need beta = 4".into()))
            }
            EntryKind::Rademacher if beta != Beta::Real => {
                return Err(Error::InvalidParameter("rademacher entries need beta = 1".into()))
            }
            EntryKind::TwoPointRadial { m4 } if !(m4 >= 1.0 && m4.is_finite()) => {
                return Err(Error::InvalidParameter(format!("radial M must be at least 1, got {m4}")))
            }
            _ => {}
        }
        Ok(EntryDistribution { kind, beta })
    }

    pub fn gaussian(beta: Beta) -> Self {
        EntryDistribution {
            kind: EntryKind::Gaussian,
            beta,
        }
    }

    /// Parses `gaussian`, `discrete-phase`, `rademacher` or `radial:M=<v>`.
    pub fn parse(spec: &str, beta: Beta) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            what: "entry distribution",
            input: spec.to_string(),
            reason: reason.to_string(),
        };
        let s = spec.trim();
        let kind = match s {
            "gaussian" => EntryKind::Gaussian,
            "discrete-phase" | "discrete_phase" => EntryKind::DiscretePhase,
            "rademacher" => EntryKind::Rademacher,
            _ => {
                let rest = s
                    .strip_prefix("radial:")
                    .ok_or_else(|| err("expected gaussian, discrete-phase, rademacher or radial:M=<v>"))?;
                let value = rest
                    .trim()
                    .strip_prefix("M=")
                    .ok_or_else(|| err("expected radial:M=<v>"))?;
                let m4: f64 = value.trim().parse().map_err(|_| err("M is not a number"))?;
                EntryKind::TwoPointRadial { m4 }
            }
        };
        Self::new(kind, beta)
    }

    /// `M = E‖x‖⁴` of the law.
    pub fn m4(&self) -> f64 {
        match (self.kind, self.beta) {
            (EntryKind::Gaussian, Beta::Real) => 3.0,
            (EntryKind::Gaussian, Beta::Complex) => 2.0,
            (EntryKind::Gaussian, Beta::Quaternion) => 1.5,
            (EntryKind::DiscretePhase | EntryKind::Rademacher, _) => 1.0,
            (EntryKind::TwoPointRadial { m4 }, _) => m4,
        }
    }

    /// True when `‖x‖` is almost surely bounded.
    pub fn bounded(&self) -> bool {
        !matches!(self.kind, EntryKind::Gaussian)
    }

    /// One entry. Real entries use only `a`, complex entries `a + bi`.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Quaternion {
        match self.kind {
            EntryKind::Gaussian => {
                let sd = match self.beta {
                    Beta::Real => 1.0,
                    Beta::Complex => std::f64::consts::FRAC_1_SQRT_2,
                    Beta::Quaternion => 0.5,
                };
                let mut g = || sd * rng.sample::<f64, _>(StandardNormal);
                match self.beta {
                    Beta::Real => Quaternion::scalar(g()),
                    Beta::Complex => Quaternion::new(g(), g(), 0.0, 0.0),
                    Beta::Quaternion => Quaternion::new(g(), g(), g(), g()),
                }
            }
            EntryKind::DiscretePhase => {
                let bits: u32 = rng.random();
                let c = |i: u32| if bits >> i & 1 == 1 { 0.5 } else { -0.5 };
                Quaternion::new(c(0), c(1), c(2), c(3))
            }
            EntryKind::Rademacher => Quaternion::scalar(if rng.random::<bool>() { 1.0 } else { -1.0 }),
            EntryKind::TwoPointRadial { m4 } => {
                let r = two_point_radius(m4, rng.random::<f64>());
                let u = self.direction(rng);
                u.scale(r)
            }
        }
    }

    fn direction<R: Rng>(&self, rng: &mut R) -> Quaternion {
        match self.beta {
            Beta::Real => Quaternion::scalar(if rng.random::<bool>() { 1.0 } else { -1.0 }),
            Beta::Complex => {
                let phi = rng.random::<f64>() * std::f64::consts::TAU;
                Quaternion::new(phi.cos(), phi.sin(), 0.0, 0.0)
            }
            Beta::Quaternion => loop {
                let mut g = || rng.sample::<f64, _>(StandardNormal);
                let q = Quaternion::new(g(), g(), g(), g());
                let norm = q.norm();
                if norm > 1e-300 {
                    break q.scale(1.0 / norm);
                }
            },
        }
    }
}

/// `r² ∈ {1 - 1/√2, 1 + √2·v}` with `P(high) = 1/(1 + 2v)`, `v = M - 1`,
/// so that `E r² = 1` and `Var r² = v`.
fn two_point_radius(m4: f64, u: f64) -> f64 {
    let v = m4 - 1.0;
    if v <= 0.0 {
        return 1.0;
    }
    let p_high = 1.0 / (1.0 + 2.0 * v);
    let r2 = if u < p_high {
        1.0 + std::f64::consts::SQRT_2 * v
    } else {
        1.0 - std::f64::consts::FRAC_1_SQRT_2
    };
    r2.sqrt()
}

impl fmt::Display for EntryDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            EntryKind::Gaussian => write!(f, "gaussian"),
            EntryKind::DiscretePhase => write!(f, "discrete-phase"),
            EntryKind::Rademacher => write!(f, "rademacher"),
            EntryKind::TwoPointRadial { m4 } => write!(f, "radial:M={m4}"),
        }
    }
}

/// Law of the real diagonal entries, both with variance `σ²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagonalKind {
    Gaussian,
    /// `±σ` with equal probability.
    Sign,
}

impl FromStr for DiagonalKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "gaussian" => Ok(DiagonalKind::Gaussian),
            "sign" => Ok(DiagonalKind::Sign),
            _ => Err(Error::Parse {
                what: "diagonal distribution",
                input: s.to_string(),
                reason: "expected gaussian or sign".into(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub beta: Beta,
    pub n: usize,
    pub sigma2: f64,
    pub diagonal: DiagonalKind,
    pub offdiag: EntryDistribution,
    pub seed: u64,
}

/// Default diagonal variance: 2 for β = 1, 1 otherwise.
pub fn default_sigma2(beta: Beta) -> f64 {
    if beta == Beta::Real {
        2.0
    } else {
        1.0
    }
}

impl EnsembleSpec {
    pub fn new(n: usize, sigma2: f64, offdiag: EntryDistribution, seed: u64) -> Result<Self> {
        let spec = EnsembleSpec {
            beta: offdiag.beta,
            n,
            sigma2,
            diagonal: DiagonalKind::Gaussian,
            offdiag,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Classical Gaussian ensemble with the default diagonal variance.
    pub fn gaussian(beta: Beta, n: usize, seed: u64) -> Self {
        EnsembleSpec {
            beta,
            n,
            sigma2: default_sigma2(beta),
            diagonal: DiagonalKind::Gaussian,
            offdiag: EntryDistribution::gaussian(beta),
            seed,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma2 must be positive, got {}",
                self.sigma2
            )));
        }
        if self.offdiag.beta != self.beta {
            return Err(Error::InvalidParameter(format!(
                "entry distribution is for beta = {}, ensemble has beta = {}",
                self.offdiag.beta, self.beta
            )));
        }
        EntryDistribution::new(self.offdiag.kind, self.beta).map(|_| ())
    }
}

/// A sampled matrix, already scaled by `n^{-1/2}`.
#[derive(Debug, Clone, PartialEq)]
pub enum SampledMatrix {
    /// β = 1 (real entries) or β = 2.
    Hermitian(ComplexHermitian),
    /// β = 4.
    SelfDual(SelfDualMatrix),
}

/// The `n` eigenvalues of a sample; for β = 4 each Kramers pair counted once.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpectrum {
    pub values: Vec<f64>,
    /// Largest gap within a Kramers pair (zero for β = 1, 2).
    pub pairing_gap: f64,
}

impl SampledMatrix {
    pub fn n(&self) -> usize {
        match self {
            SampledMatrix::Hermitian(h) => h.dim(),
            SampledMatrix::SelfDual(q) => q.n(),
        }
    }

    /// Complex Hermitian form: the matrix itself or its `2n × 2n` embedding.
    pub fn to_hermitian(&self) -> ComplexHermitian {
        match self {
            SampledMatrix::Hermitian(h) => h.clone(),
            SampledMatrix::SelfDual(q) => q.embed(),
        }
    }

    pub fn spectrum(&self) -> Result<SampleSpectrum> {
        match self {
            SampledMatrix::Hermitian(h) => Ok(SampleSpectrum {
                values: hermitian_eigenvalues(h)?.values,
                pairing_gap: 0.0,
            }),
            SampledMatrix::SelfDual(q) => {
                let s = quaternion_eigenvalues(q)?;
                Ok(SampleSpectrum {
                    values: s.values,
                    pairing_gap: s.pairing_gap,
                })
            }
        }
    }
}

fn sample_diagonal<R: Rng>(kind: DiagonalKind, sigma2: f64, rng: &mut R) -> f64 {
    let sd = sigma2.sqrt();
    match kind {
        DiagonalKind::Gaussian => sd * rng.sample::<f64, _>(StandardNormal),
        DiagonalKind::Sign => {
            if rng.random::<bool>() {
                sd
            } else {
                -sd
            }
        }
    }
}

/// Draws `n^{-1/2} X` for the given spec.
pub fn sample(spec: &EnsembleSpec) -> Result<SampledMatrix> {
    spec.validate()?;
    let n = spec.n;
    let scale = 1.0 / (n as f64).sqrt();
    let rng = CounterRng::new(spec.seed);
    let diag = |j: usize| scale * sample_diagonal(spec.diagonal, spec.sigma2, &mut rng.entry(j, j));
    let entry = |j: usize, k: usize| spec.offdiag.sample(&mut rng.entry(j, k)).scale(scale);
    Ok(match spec.beta {
        Beta::Quaternion => SampledMatrix::SelfDual(SelfDualMatrix::from_fn(n, diag, entry)?),
        Beta::Real | Beta::Complex => SampledMatrix::Hermitian(ComplexHermitian::from_upper(n, |j, k| {
            if j == k {
                Complex64::new(diag(j), 0.0)
            } else {
                let q = entry(j, k);
                Complex64::new(q.a, q.b)
            }
        })),
    })
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub se: f64,
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = if xs.len() > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Estimate {
            value: mean,
            se: (var / n).sqrt(),
        }
    }

    /// Within `k` standard errors of `target`; exact agreement (to 1e-12) is
    /// required when the standard error vanishes.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.se + 1e-12 * (1.0 + target.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LindebergTail {
    pub n: u64,
    pub eta: f64,
    pub value: f64,
}

/// Empirical entry moments with standard errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub distribution: EntryDistribution,
    pub draws: usize,
    /// `E` of each real coordinate `(a, b, c, d)`.
    pub mean: [Estimate; 4],
    pub second: Estimate,
    pub fourth: Estimate,
    /// β = 4 only: `E|α|², E|β|², Re/Im Eα², Re/Im Eβ², Re/Im E(αβ),
    /// Re/Im E(αβ̄)` against targets `½, ½, 0, …, 0`.
    pub quaternion_identities: Option<Vec<(String, Estimate, f64)>>,
    pub lindeberg: Vec<LindebergTail>,
}

impl MomentReport {
    /// All estimates within `k` standard errors of their targets.
    pub fn consistent(&self, k: f64) -> bool {
        let target_m4 = self.distribution.m4();
        self.mean.iter().all(|e| e.within(0.0, k))
            && self.second.within(1.0, k)
            && self.fourth.within(target_m4, k)
            && self
                .quaternion_identities
                .as_ref()
                .is_none_or(|ids| ids.iter().all(|(_, e, t)| e.within(*t, k)))
    }
}

/// Checks the entry moment conditions from `draws` samples.
pub fn validate_moments(dist: &EntryDistribution, draws: usize, seed: u64) -> Result<MomentReport> {
    if draws < 10_000 {
        return Err(Error::InvalidParameter(format!("need at least 10^4 draws, got {draws}")));
    }
    let rng = CounterRng::new(seed);
    let xs: Vec<Quaternion> = (0..draws)
        .map(|i| dist.sample(&mut rng.stream(i as u64)))
        .collect();
    let column = |f: &dyn Fn(&Quaternion) -> f64| -> Estimate {
        Estimate::from_samples(&xs.iter().map(f).collect::<Vec<_>>())
    };
    let mean = [
        column(&|q| q.a),
        column(&|q| q.b),
        column(&|q| q.c),
        column(&|q| q.d),
    ];
    let second = column(&|q| q.norm_sq());
    let fourth = column(&|q| q.norm_sq().powi(2));
    let quaternion_identities = (dist.beta == Beta::Quaternion).then(|| {
        type Stat = (&'static str, fn(&Quaternion) -> f64, f64);
        let stats: [Stat; 10] = [
            ("E|alpha|^2", |q| q.alpha().norm_sqr(), 0.5),
            ("E|beta|^2", |q| q.beta().norm_sqr(), 0.5),
            ("Re E alpha^2", |q| (q.alpha() * q.alpha()).re, 0.0),
            ("Im E alpha^2", |q| (q.alpha() * q.alpha()).im, 0.0),
            ("Re E beta^2", |q| (q.beta() * q.beta()).re, 0.0),
            ("Im E beta^2", |q| (q.beta() * q.beta()).im, 0.0),
            ("Re E alpha beta", |q| (q.alpha() * q.beta()).re, 0.0),
            ("Im E alpha beta", |q| (q.alpha() * q.beta()).im, 0.0),
            ("Re E alpha conj(beta)", |q| (q.alpha() * q.beta().conj()).re, 0.0),
            ("Im E alpha conj(beta)", |q| (q.alpha() * q.beta().conj()).im, 0.0),
        ];
        stats
            .iter()
            .map(|(name, f, target)| (name.to_string(), column(f), *target))
            .collect()
    });
    let eta = 1.0;
    let lindeberg = [100u64, 10_000]
        .iter()
        .map(|&n| {
            let threshold = eta * (n as f64).sqrt();
            let total: f64 = xs
                .iter()
                .map(|q| {
                    let r = q.norm();
                    if r >= threshold {
                        r.powi(4)
                    } else {
                        0.0
                    }
                })
                .sum();
            LindebergTail {
                n,
                eta,
                value: total / draws as f64 / eta.powi(4),
            }
        })
        .collect();
    Ok(MomentReport {
        distribution: *dist,
        draws,
        mean,
        second,
        fourth,
        quaternion_identities,
        lindeberg,
    })
}

fn check_type_i(m: &ComplexHermitian) -> Result<()> {
    if !is_type_i(m.matrix(), TAU_STRUCT * m.frobenius_norm().max(1.0)) {
        return Err(Error::Structure);
    }
    Ok(())
}

fn check_pair(a: &ComplexHermitian, b: &ComplexHermitian) -> Result<()> {
    if a.dim() != b.dim() || !a.dim().is_multiple_of(2) {
        return Err(Error::Dimension(format!(
            "quadratic forms need equal even dimensions, got {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    check_type_i(a)?;
    check_type_i(b)
}

/// `(M - 3/2) Σ_j tr a_jj tr b_jj + tr AB` for Type-I `A`, `B`, where
/// `a_jj` are the diagonal 2×2 blocks.
pub fn qf_cov_formula(a: &ComplexHermitian, b: &ComplexHermitian, m4: f64) -> Result<f64> {
    check_pair(a, b)?;
    let n = a.dim() / 2;
    let block_traces: f64 = (0..n)
        .map(|j| {
            let (x, y) = (a.matrix().block(j, j), b.matrix().block(j, j));
            (x[0][0] + x[1][1]).re * (y[0][0] + y[1][1]).re
        })
        .sum();
    let dim = a.dim();
    let mut tr_ab = 0.0;
    for r in 0..dim {
        for c in 0..dim {
            tr_ab += (a[(r, c)] * b[(c, r)]).re;
        }
    }
    Ok((m4 - 1.5) * block_traces + tr_ab)
}

/// `tr X*AX` for the `2n × 2` embedding `X` of the quaternion vector `x`.
pub fn quadratic_form(a: &CMatrix, x: &[Quaternion]) -> f64 {
    let dim = a.dim();
    debug_assert_eq!(dim, 2 * x.len());
    let blocks: Vec<_> = x.iter().map(|&q| embed(q)).collect();
    let mut total = 0.0;
    for col in 0..2 {
        let v: Vec<Complex64> = blocks.iter().flat_map(|b| [b[0][col], b[1][col]]).collect();
        let av = a.mul_vec(&v);
        total += v.iter().zip(&av).map(|(vi, avi)| (vi.conj() * avi).re).sum::<f64>();
    }
    total
}

fn centred_product(a: &ComplexHermitian, b: &ComplexHermitian, x: &[Quaternion]) -> f64 {
    (quadratic_form(a.matrix(), x) - a.trace()) * (quadratic_form(b.matrix(), x) - b.trace())
}

/// Monte Carlo estimate of `E(tr X*AX - tr A)(tr X*BX - tr B)` over `reps`
/// vectors with independent entries from `dist`.
pub fn qf_cov_empirical(
    a: &ComplexHermitian,
    b: &ComplexHermitian,
    dist: &EntryDistribution,
    reps: usize,
    seed: u64,
) -> Result<Estimate> {
    if dist.beta != Beta::Quaternion {
        return Err(Error::UnsupportedBeta {
            required: 4,
            got: dist.beta.into(),
        });
    }
    check_pair(a, b)?;
    if reps < 2 {
        return Err(Error::InvalidParameter("need at least two repetitions".into()));
    }
    let n = a.dim() / 2;
    let products: Vec<f64> = (0..reps)
        .map(|r| {
            let rng = CounterRng::new(derive_seed(seed, r as u64));
            let x: Vec<Quaternion> = (0..n).map(|j| dist.sample(&mut rng.stream(j as u64))).collect();
            centred_product(a, b, &x)
        })
        .collect();
    Ok(Estimate::from_samples(&products))
}

/// Exact expectation under discrete-phase entries by enumerating all `16^n`
/// outcomes, `n <= 2`.
pub fn qf_cov_enumerate(a: &ComplexHermitian, b: &ComplexHermitian) -> Result<f64> {
    check_pair(a, b)?;
    let n = a.dim() / 2;
    if n > 2 {
        return Err(Error::InvalidParameter(format!("enumeration limited to n <= 2, got {n}")));
    }
    let outcome = |bits: usize| {
        let c = |i: usize| if bits >> i & 1 == 1 { 0.5 } else { -0.5 };
        Quaternion::new(c(0), c(1), c(2), c(3))
    };
    let count = 16usize.pow(n as u32);
    let mut total = 0.0;
    for code in 0..count {
        let x: Vec<Quaternion> = (0..n).map(|j| outcome(code >> (4 * j) & 15)).collect();
        total += centred_product(a, b, &x);
    }
    Ok(total / count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::embed_matrix;
    use proptest::prelude::*;
    use rand::Rng;

    fn random_type_i(n: usize, seed: u64) -> ComplexHermitian {
        let rng = CounterRng::new(seed);
        let mut r = rng.stream(0);
        let diag: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        let m = SelfDualMatrix::from_fn(
            n,
            |j| diag[j],
            |_, _| {
                Quaternion::new(
                    r.random_range(-1.0..1.0),
                    r.random_range(-1.0..1.0),
                    r.random_range(-1.0..1.0),
                    r.random_range(-1.0..1.0),
                )
            },
        )
        .unwrap();
        embed_matrix(&m)
    }

    #[test]
    fn sampling_is_a_pure_function_of_seed() {
        for beta in [Beta::Real, Beta::Complex, Beta::Quaternion] {
            let spec = EnsembleSpec::gaussian(beta, 12, 42);
            assert_eq!(sample(&spec).unwrap(), sample(&spec).unwrap());
            assert_ne!(sample(&spec).unwrap(), sample(&spec.with_seed(43)).unwrap());
        }
    }

    #[test]
    fn entries_depend_only_on_their_index() {
        // The (0, 1) entry of an n = 3 and an n = 5 matrix share the stream,
        // differing only by the n^{-1/2} scale.
        let small = sample(&EnsembleSpec::gaussian(Beta::Quaternion, 3, 9)).unwrap();
        let large = sample(&EnsembleSpec::gaussian(Beta::Quaternion, 5, 9)).unwrap();
        let (SampledMatrix::SelfDual(s), SampledMatrix::SelfDual(l)) = (small, large) else {
            panic!("β = 4 yields self-dual matrices");
        };
        let a = s.get(0, 1).scale(3f64.sqrt());
        let b = l.get(0, 1).scale(5f64.sqrt());
        assert!((a - b).norm() < 1e-15);
    }

    #[test]
    fn one_by_one_quaternion_diagonal_has_unit_variance() {
        let draws: Vec<f64> = (0..100_000u64)
            .map(|s| match sample(&EnsembleSpec::gaussian(Beta::Quaternion, 1, s)).unwrap() {
                SampledMatrix::SelfDual(m) => m.diagonal()[0],
                _ => unreachable!(),
            })
            .collect();
        let mean = Estimate::from_samples(&draws);
        assert!(mean.within(0.0, 3.0));
        let sq: Vec<f64> = draws.iter().map(|t| t * t).collect();
        assert!(Estimate::from_samples(&sq).within(1.0, 3.0));
    }

    #[test]
    fn discrete_phase_entries_have_unit_norm() {
        let dist = EntryDistribution::new(EntryKind::DiscretePhase, Beta::Quaternion).unwrap();
        let spec = EnsembleSpec::new(10, 1.0, dist, 3).unwrap();
        let SampledMatrix::SelfDual(m) = sample(&spec).unwrap() else {
            unreachable!()
        };
        for q in m.upper() {
            assert!((q.norm_sq() * 10.0 - 1.0).abs() < 1e-15);
        }
        let rng = CounterRng::new(8);
        for i in 0..1000 {
            assert_eq!(dist.sample(&mut rng.stream(i)).norm_sq(), 1.0);
        }
    }

    #[test]
    fn complex_samples_are_hermitian_and_quaternion_samples_type_i() {
        let h = sample(&EnsembleSpec::gaussian(Beta::Complex, 64, 1)).unwrap().to_hermitian();
        assert!(h.matrix().is_hermitian(0.0));
        assert!((0..64).all(|j| h[(j, j)].im == 0.0));
        let r = sample(&EnsembleSpec::gaussian(Beta::Real, 16, 1)).unwrap().to_hermitian();
        assert!(r.matrix().as_slice().iter().all(|z| z.im == 0.0));
        let q = sample(&EnsembleSpec::gaussian(Beta::Quaternion, 16, 1)).unwrap().to_hermitian();
        assert!(q.matrix().is_hermitian(0.0));
        assert!(is_type_i(q.matrix(), TAU_STRUCT));
    }

    #[test]
    fn spec_validation() {
        assert!(EntryDistribution::new(EntryKind::DiscretePhase, Beta::Complex).is_err());
        assert!(EntryDistribution::new(EntryKind::Rademacher, Beta::Quaternion).is_err());
        assert!(EntryDistribution::new(EntryKind::TwoPointRadial { m4: 0.5 }, Beta::Real).is_err());
        let g = EntryDistribution::gaussian(Beta::Real);
        assert!(EnsembleSpec::new(0, 1.0, g, 0).is_err());
        assert!(EnsembleSpec::new(4, -1.0, g, 0).is_err());
    }

    #[test]
    fn distribution_strings() {
        let d = EntryDistribution::parse("radial:M=2.5", Beta::Quaternion).unwrap();
        assert_eq!(d.kind, EntryKind::TwoPointRadial { m4: 2.5 });
        assert_eq!(d.to_string(), "radial:M=2.5");
        assert_eq!(
            EntryDistribution::parse("discrete-phase", Beta::Quaternion).unwrap().m4(),
            1.0
        );
        assert!(EntryDistribution::parse("discrete-phase", Beta::Real).is_err());
        assert!(EntryDistribution::parse("cauchy", Beta::Real).is_err());
        assert!(EntryDistribution::parse("radial:M=x", Beta::Real).is_err());
        assert_eq!(EntryDistribution::parse("gaussian", Beta::Real).unwrap().m4(), 3.0);
    }

    #[test]
    fn gaussian_quaternion_moments() {
        let r = validate_moments(&EntryDistribution::gaussian(Beta::Quaternion), 100_000, 5).unwrap();
        assert!(r.fourth.within(1.5, 3.0), "{:?}", r.fourth);
        assert!(r.consistent(4.0), "{r:?}");
        assert!(r.lindeberg[1].value <= r.lindeberg[0].value);
    }

    #[test]
    fn discrete_phase_moments_are_exact() {
        let d = EntryDistribution::new(EntryKind::DiscretePhase, Beta::Quaternion).unwrap();
        let r = validate_moments(&d, 10_000, 5).unwrap();
        assert_eq!(r.fourth.value, 1.0);
        assert_eq!(r.fourth.se, 0.0);
        assert!(r.lindeberg.iter().all(|t| t.value == 0.0));
        assert!(r.consistent(4.0));
    }

    #[test]
    fn radial_moments_hit_target() {
        for beta in [Beta::Real, Beta::Complex, Beta::Quaternion] {
            let d = EntryDistribution::new(EntryKind::TwoPointRadial { m4: 2.5 }, beta).unwrap();
            let r = validate_moments(&d, 100_000, 11).unwrap();
            assert!(r.fourth.within(2.5, 3.0), "{beta}: {:?}", r.fourth);
            assert!(r.consistent(4.0), "{r:?}");
            assert!(r.lindeberg.iter().all(|t| t.value == 0.0));
        }
        assert_eq!(two_point_radius(1.0, 0.3), 1.0);
    }

    #[test]
    fn too_few_draws_rejected() {
        assert!(validate_moments(&EntryDistribution::gaussian(Beta::Real), 100, 0).is_err());
    }

    #[test]
    fn formula_examples() {
        for n in 1..=4 {
            let id = ComplexHermitian::new(CMatrix::identity(2 * n), 0.0).unwrap();
            assert!(qf_cov_formula(&id, &id, 1.0).unwrap().abs() < 1e-15);
            assert!((qf_cov_formula(&id, &id, 1.5).unwrap() - 2.0 * n as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn formula_rejects_non_type_i() {
        let mut m = CMatrix::identity(4);
        m[(0, 0)] = Complex64::new(2.0, 0.0);
        let a = ComplexHermitian::new(m, 0.0).unwrap();
        let id = ComplexHermitian::new(CMatrix::identity(4), 0.0).unwrap();
        assert!(matches!(qf_cov_formula(&a, &id, 1.0), Err(Error::Structure)));
        assert!(matches!(qf_cov_enumerate(&id, &a), Err(Error::Structure)));
    }

    #[test]
    fn enumeration_examples() {
        let id = ComplexHermitian::new(CMatrix::identity(2), 0.0).unwrap();
        assert_eq!(qf_cov_enumerate(&id, &id).unwrap(), 0.0);
        let a = random_type_i(1, 1);
        let base = qf_cov_enumerate(&a, &a).unwrap();
        let scaled = qf_cov_enumerate(&a.scale(3.0), &a.scale(3.0)).unwrap();
        assert!((scaled - 9.0 * base).abs() < 1e-12);
        let big = random_type_i(3, 1);
        assert!(qf_cov_enumerate(&big, &big).is_err());
    }

    #[test]
    fn empirical_examples() {
        let d = EntryDistribution::new(EntryKind::DiscretePhase, Beta::Quaternion).unwrap();
        let id = ComplexHermitian::new(CMatrix::identity(8), 0.0).unwrap();
        let e = qf_cov_empirical(&id, &id, &d, 1000, 1).unwrap();
        assert!(e.value.abs() < 1e-12 && e.se < 1e-12);
        let (a, b) = (random_type_i(3, 4), random_type_i(3, 5));
        let g = EntryDistribution::gaussian(Beta::Quaternion);
        let ab = qf_cov_empirical(&a, &b, &g, 2000, 7).unwrap();
        let ba = qf_cov_empirical(&b, &a, &g, 2000, 7).unwrap();
        assert_eq!(ab.value, ba.value);
        assert!(qf_cov_empirical(&a, &b, &EntryDistribution::gaussian(Beta::Real), 10, 0).is_err());
    }

    #[test]
    fn empirical_matches_formula_for_gaussian_entries() {
        let (a, b) = (random_type_i(2, 8), random_type_i(2, 9));
        let g = EntryDistribution::gaussian(Beta::Quaternion);
        let e = qf_cov_empirical(&a, &b, &g, 50_000, 3).unwrap();
        let f = qf_cov_formula(&a, &b, 1.5).unwrap();
        assert!(e.within(f, 3.0), "{e:?} vs {f}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn enumeration_equals_formula(n in 1usize..=2, sa in any::<u64>(), sb in any::<u64>()) {
            let (a, b) = (random_type_i(n, sa), random_type_i(n, sb));
            let exact = qf_cov_enumerate(&a, &b).unwrap();
            let formula = qf_cov_formula(&a, &b, 1.0).unwrap();
            prop_assert!((exact - formula).abs() <= 1e-12 * (1.0 + formula.abs()));
        }
    }
}
