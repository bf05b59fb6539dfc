//! The acceptance suite. Each criterion returns an [`Outcome`]; the four
//! Monte Carlo experiments are run once and shared through [`StatisticalRuns`].

use std::fmt;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::chebyshev::{psi, psi_chebyshev_gauss, psi_exact_poly, TestFunction, DEFAULT_L};
use crate::eigen::{pairing_tolerance, quaternion_eigenvalues};
use crate::ensembles::{
    qf_cov_empirical, qf_cov_enumerate, qf_cov_formula, CounterRng, EntryDistribution, EntryKind,
};
use crate::error::Result;
use crate::experiment::{ks_test, run_with_threads, ExperimentConfig, ExperimentReport};
use crate::oracle::quaternion_eigenvalues_charpoly;
use crate::predict::{
    contour_mean, cov_kernel_quadrature, cov_series, cov_series_from_psi, cov_series_quaternion,
    errata_report, mean_g, mean_g_quaternion, Beta, ModelParams,
};
use crate::quaternion::{embed_matrix, ComplexHermitian, Quaternion, SelfDualMatrix};
use crate::semicircle::{catalan, distance_to_cut, integral_f, moment, stieltjes_m};

/// Desk-scale Monte Carlo sizes.
pub const MC_N: usize = 128;
pub const MC_REPLICATES: usize = 2000;
pub const MC_SEED: u64 = 1;
/// Second seed for the Gaussianity check, used only if the first fails.
pub const MC_SEED_ALT: u64 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

/// Collects individual checks; the criterion passes when all of them do.
struct Checks {
    failures: Vec<String>,
    count: usize,
}

impl Checks {
    fn new() -> Self {
        Checks {
            failures: Vec::new(),
            count: 0,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn error(&mut self, what: &str, e: crate::Error) {
        self.count += 1;
        self.failures.push(format!("{what}: {e}"));
    }

    fn finish(self, id: u8, title: &'static str, start: Instant, budget: Option<Duration>, summary: String) -> Outcome {
        let elapsed = start.elapsed();
        let mut failures = self.failures;
        if let Some(limit) = budget {
            if elapsed > limit {
                failures.push(format!("runtime {:.1} s exceeds {:.0} s", elapsed.as_secs_f64(), limit.as_secs_f64()));
            }
        }
        let passed = failures.is_empty();
        let detail = if passed {
            format!("{} checks; {summary}", self.count)
        } else {
            let shown: Vec<_> = failures.iter().take(6).cloned().collect();
            let more = failures.len().saturating_sub(shown.len());
            let tail = if more > 0 { format!("; … {more} more") } else { String::new() };
            format!("{}/{} checks failed: {}{tail}", failures.len(), self.count, shown.join("; "))
        };
        Outcome {
            id,
            title,
            passed,
            detail,
            elapsed,
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    CounterRng::new(seed).stream(0)
}

fn random_poly(r: &mut ChaCha8Rng, max_degree: usize) -> TestFunction {
    let d = r.random_range(0..=max_degree);
    let coeffs: Vec<f64> = (0..=d).map(|_| r.random_range(-1.0..1.0)).collect();
    TestFunction::polynomial(coeffs).expect("finite coefficients")
}

fn random_self_dual(r: &mut ChaCha8Rng, n: usize) -> SelfDualMatrix {
    let diag: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
    SelfDualMatrix::from_fn(
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
    .expect("valid dimensions")
}

fn random_type_i(r: &mut ChaCha8Rng, n: usize) -> ComplexHermitian {
    embed_matrix(&random_self_dual(r, n))
}

/// ψ quadrature against exact conversion, and the two integral forms.
pub fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut c = Checks::new();
    let mut worst = 0.0f64;
    for d in 0..=16 {
        let f = TestFunction::monomial(d);
        match (psi_exact_poly(&f), psi(&f, DEFAULT_L)) {
            (Ok(exact), Ok(quad)) => {
                let err = (0..=DEFAULT_L)
                    .map(|l| (exact.get(l) - quad.get(l)).abs())
                    .fold(0.0, f64::max);
                worst = worst.max(err);
                c.check(err <= 1e-12, || format!("x^{d}: |Δψ| = {err:.2e}"));
            }
            (Err(e), _) | (_, Err(e)) => c.error(&format!("x^{d}"), e),
        }
    }
    let f = TestFunction::exp(0.5).expect("finite");
    match psi(&f, DEFAULT_L) {
        Ok(theta) => {
            let s_form = psi_chebyshev_gauss(&f, DEFAULT_L, 2048);
            let err = (0..=DEFAULT_L)
                .map(|l| (theta.get(l) - s_form[l]).abs())
                .fold(0.0, f64::max);
            c.check(err <= 1e-10, || format!("exp(x/2): θ vs s form differ by {err:.2e}"));
        }
        Err(e) => c.error("exp(x/2)", e),
    }
    c.finish(1, "psi exactness", start, Some(Duration::from_secs(1)), format!("max monomial error {worst:.1e}"))
}

/// Semicircle moments and `∫ f dF = ψ₀ - ψ₂`.
pub fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut c = Checks::new();
    for k in 0..=6u32 {
        match integral_f(&TestFunction::monomial(2 * k as usize)) {
            Ok(v) => {
                let target = catalan(k) as f64;
                c.check((v - target).abs() <= 1e-12, || format!("x^{}: {v} vs {target}", 2 * k));
            }
            Err(e) => c.error("moment", e),
        }
    }
    let mut r = rng(2);
    for i in 0..10 {
        let f = random_poly(&mut r, 8);
        let TestFunction::Polynomial(coeffs) = &f else { unreachable!() };
        let exact: f64 = coeffs.iter().enumerate().map(|(k, c)| c * moment(k as u32)).sum();
        match psi(&f, DEFAULT_L) {
            Ok(p) => {
                let v = p.get(0) - p.get(2);
                c.check((v - exact).abs() <= 1e-10, || format!("poly {i}: {v} vs {exact}"));
            }
            Err(e) => c.error("psi", e),
        }
    }
    c.finish(2, "semicircle moments", start, Some(Duration::from_secs(1)), "Catalan moments and ψ₀ - ψ₂ identity".into())
}

/// Stieltjes branch: closed form, quadratic relation, symmetry, derivative.
pub fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut c = Checks::new();
    match stieltjes_m(Complex64::new(3.0, 0.0)) {
        Ok(v) => {
            let target = (-3.0 + 5f64.sqrt()) / 2.0;
            let err = (v.m - target).norm();
            c.check(err <= 1e-14, || format!("m(3) off by {err:.2e}"));
        }
        Err(e) => c.error("m(3)", e),
    }
    let mut r = rng(3);
    let mut tested = 0;
    while tested < 1000 {
        let z = Complex64::new(r.random_range(-5.0..5.0), r.random_range(-5.0..5.0));
        let dist = distance_to_cut(z);
        if dist < 1e-3 {
            continue;
        }
        tested += 1;
        let (v, conj) = match (stieltjes_m(z), stieltjes_m(z.conj())) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                c.error("m(z)", e);
                continue;
            }
        };
        let rel = (v.m * v.m + z * v.m + 1.0).norm();
        c.check(rel <= 1e-12, || format!("quadratic residual {rel:.2e} at {z}"));
        let sym = (conj.m - v.m.conj()).norm();
        c.check(sym <= 1e-15, || format!("conjugate symmetry {sym:.2e} at {z}"));
        // Five-point stencil with a step scaled to the distance from the cut.
        let h = 0.01 * dist.min(1.0);
        let m = |w: Complex64| stieltjes_m(w).map(|s| s.m);
        match (m(z + 2.0 * h), m(z + h), m(z - h), m(z - 2.0 * h)) {
            (Ok(p2), Ok(p1), Ok(m1), Ok(m2)) => {
                let fd = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
                let err = (fd - v.m_prime).norm() / v.m_prime.norm();
                c.check(err <= 1e-7, || format!("m' relative error {err:.2e} at {z}"));
            }
            _ => c.check(false, || format!("stencil left the domain at {z}")),
        }
    }
    c.finish(3, "Stieltjes branch", start, Some(Duration::from_secs(1)), format!("{tested} random points"))
}

/// β = 4: general-β and quaternion-specific forms coincide.
pub fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut c = Checks::new();
    let mut r = rng(4);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let sigma2 = r.random_range(0.1..3.0);
        let m4 = r.random_range(1.0..4.0);
        let p = ModelParams::new(Beta::Quaternion, sigma2, m4).expect("valid parameters");
        let (f, g) = (random_poly(&mut r, 6), random_poly(&mut r, 6));
        let (pf, pg) = match (f.psi(DEFAULT_L), g.psi(DEFAULT_L)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                c.error("psi", e);
                continue;
            }
        };
        let general = cov_series_from_psi(&pf, &pg, &p);
        let special = cov_series_quaternion(&pf, &pg, &p);
        let err = (general - special).abs();
        worst = worst.max(err);
        c.check(err <= 1e-12, || format!("case {i}: covariance forms differ by {err:.2e}"));
        // mean_g performs its own cross-check and errors on disagreement.
        match mean_g(&f, &p) {
            Ok(general) => {
                let err = (general - mean_g_quaternion(&f, &pf, &p)).abs();
                worst = worst.max(err);
                c.check(err <= 1e-12, || format!("case {i}: mean forms differ by {err:.2e}"));
            }
            Err(e) => c.error("mean", e),
        }
    }
    c.finish(4, "quaternion forms agree", start, None, format!("max difference {worst:.1e}"))
}

/// Printed covariance series against the kernel double integral.
pub fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut c = Checks::new();
    let fs: Vec<TestFunction> = (1..=4).map(TestFunction::monomial).collect();
    for beta in [Beta::Real, Beta::Complex, Beta::Quaternion] {
        for (sigma2, m4) in [(1.0, 2.0), (2.0, 3.0)] {
            let p = ModelParams::new(beta, sigma2, m4).expect("valid parameters");
            for (i, f) in fs.iter().enumerate() {
                for g in &fs[i..] {
                    match (cov_series(f, g, &p, DEFAULT_L), cov_kernel_quadrature(f, g, &p)) {
                        (Ok(s), Ok(k)) => {
                            let d = (s - k.value).abs();
                            c.check(d <= 1e-6, || {
                                format!("β={beta} (σ²,M)=({sigma2},{m4}) {f},{g}: series {s:.6} kernel {:.6}", k.value)
                            });
                        }
                        (Err(e), _) | (_, Err(e)) => c.error("covariance", e),
                    }
                }
            }
        }
    }
    c.finish(5, "series/kernel duality", start, Some(Duration::from_secs(30)), "series equals kernel".into())
}

/// β = 4: contour integral of the z-domain mean against the ψ formula.
pub fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut c = Checks::new();
    let mut worst = 0.0f64;
    let mut r = rng(6);
    let mut fs: Vec<TestFunction> = (0..=6).map(TestFunction::monomial).collect();
    fs.extend((0..4).map(|_| random_poly(&mut r, 6)));
    for (sigma2, m4) in [(1.0, 1.5), (2.0, 3.0)] {
        let p = ModelParams::new(Beta::Quaternion, sigma2, m4).expect("valid parameters");
        for f in &fs {
            let results = (mean_g(f, &p), contour_mean(f, &p, 2.5, 1.0), contour_mean(f, &p, 3.0, 0.5));
            match results {
                (Ok(direct), Ok(a), Ok(b)) => {
                    let err = (a - direct).abs().max((b - direct).abs());
                    worst = worst.max(err);
                    c.check(err <= 1e-8, || format!("{f} at ({sigma2},{m4}): contour {a} vs {direct}"));
                    c.check((a - b).abs() <= 1e-8, || format!("{f}: contours differ by {:.2e}", (a - b).abs()));
                }
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => c.error("contour", e),
            }
        }
    }
    c.finish(6, "contour bridge", start, None, format!("max difference {worst:.1e}"))
}

/// Eigensolver: trace identity, Kramers pairing, characteristic polynomial.
pub fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut c = Checks::new();
    let mut r = rng(7);
    for i in 0..100 {
        let n = if i < 30 { 1 + i % 3 } else { r.random_range(4..=64) };
        let m = random_self_dual(&mut r, n);
        let frob = m.embed().frobenius_norm();
        let spec = match quaternion_eigenvalues(&m) {
            Ok(s) => s,
            Err(e) => {
                c.error(&format!("matrix {i} (n = {n})"), e);
                continue;
            }
        };
        let trace: f64 = m.diagonal().iter().sum();
        let sum: f64 = spec.values.iter().sum();
        let rel = (sum - trace).abs() / frob.max(1.0);
        c.check(rel <= 1e-9, || format!("matrix {i}: trace drift {rel:.2e}"));
        c.check(spec.pairing_gap <= pairing_tolerance(frob), || {
            format!("matrix {i}: pairing gap {:.2e}", spec.pairing_gap)
        });
        if n <= 3 {
            let roots = quaternion_eigenvalues_charpoly(&m);
            let err = roots
                .iter()
                .zip(&spec.values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            c.check(err <= 1e-9, || format!("matrix {i}: charpoly roots differ by {err:.2e}"));
        }
    }
    c.finish(7, "eigensolver", start, Some(Duration::from_secs(30)), "100 self-dual matrices up to n = 64".into())
}

/// Quadratic-form covariance: enumeration, formula and Monte Carlo.
pub fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut c = Checks::new();
    let mut r = rng(8);
    for i in 0..100 {
        let n = 1 + i % 2;
        let (a, b) = (random_type_i(&mut r, n), random_type_i(&mut r, n));
        match (qf_cov_enumerate(&a, &b), qf_cov_formula(&a, &b, 1.0)) {
            (Ok(e), Ok(f)) => c.check((e - f).abs() <= 1e-12, || format!("pair {i}: {e} vs {f}")),
            (Err(e), _) | (_, Err(e)) => c.error("enumeration", e),
        }
    }
    let (a, b) = (random_type_i(&mut r, 4), random_type_i(&mut r, 4));
    let g = EntryDistribution::gaussian(Beta::Quaternion);
    let mut summary = String::new();
    match (qf_cov_empirical(&a, &b, &g, 100_000, 8), qf_cov_formula(&a, &b, g.m4())) {
        (Ok(e), Ok(f)) => {
            let z = (e.value - f) / e.se;
            summary = format!("Monte Carlo z = {z:+.2}");
            c.check(z.abs() <= 3.0, || format!("Monte Carlo {:.4} ± {:.4} vs {f:.4}", e.value, e.se));
        }
        (Err(e), _) | (_, Err(e)) => c.error("Monte Carlo", e),
    }
    c.finish(8, "quadratic-form covariance", start, Some(Duration::from_secs(60)), summary)
}

/// The Monte Carlo runs shared by criteria 9 through 13.
#[derive(Debug, Clone)]
pub struct StatisticalRuns {
    /// Gaussian entries for β = 1, 2, 4, in that order, on one thread.
    pub gaussian: Vec<ExperimentReport>,
    /// β = 4 with discrete-phase entries.
    pub discrete_phase: ExperimentReport,
    /// Wall time of the three Gaussian runs.
    pub gaussian_elapsed: Duration,
}

fn functions() -> Vec<TestFunction> {
    vec![TestFunction::monomial(1), TestFunction::monomial(2)]
}

/// Configuration of the Gaussian run for `beta`.
pub fn gaussian_config(beta: Beta, seed: u64) -> ExperimentConfig {
    ExperimentConfig::gaussian(beta, MC_N, MC_REPLICATES, seed, functions())
}

impl StatisticalRuns {
    pub fn compute() -> Result<Self> {
        let start = Instant::now();
        let gaussian = [Beta::Real, Beta::Complex, Beta::Quaternion]
            .iter()
            .map(|&b| run_with_threads(&gaussian_config(b, MC_SEED), 1).map(|(r, _)| r))
            .collect::<Result<Vec<_>>>()?;
        let gaussian_elapsed = start.elapsed();
        let mut cfg = gaussian_config(Beta::Quaternion, MC_SEED);
        cfg.offdiag = EntryDistribution::new(EntryKind::DiscretePhase, Beta::Quaternion)?;
        let (discrete_phase, _) = run_with_threads(&cfg, 1)?;
        Ok(StatisticalRuns {
            gaussian,
            discrete_phase,
            gaussian_elapsed,
        })
    }
}

fn failed(id: u8, title: &'static str, start: Instant, e: &crate::Error) -> Outcome {
    Outcome {
        id,
        title,
        passed: false,
        detail: format!("Monte Carlo runs failed: {e}"),
        elapsed: start.elapsed(),
    }
}

/// Empirical mean of `G(x²)` against the exact value `σ² - 1`.
pub fn criterion_9(runs: &Result<StatisticalRuns>) -> Outcome {
    let start = Instant::now();
    let runs = match runs {
        Ok(r) => r,
        Err(e) => return failed(9, "mean reproduction", start, e),
    };
    let mut c = Checks::new();
    let mut zs = Vec::new();
    for rep in &runs.gaussian {
        let s = &rep.functions[1];
        let target = rep.config.sigma2 - 1.0;
        let z = (s.emp_mean - target) / s.se_mean;
        zs.push(format!("β={} z={z:+.2}", rep.config.beta));
        c.check(z.abs() <= 3.0, || {
            format!("β={}: mean {:.4} ± {:.4} vs {target}", rep.config.beta, s.emp_mean, s.se_mean)
        });
    }
    let mut out = c.finish(9, "mean reproduction", start, None, zs.join(", "));
    out.elapsed = runs.gaussian_elapsed;
    if out.elapsed > Duration::from_secs(300) {
        out.passed = false;
        out.detail.push_str("; runtime exceeds 300 s");
    }
    out
}

/// Empirical variances against the oracle, and the errata flags.
pub fn criterion_10(runs: &Result<StatisticalRuns>) -> Outcome {
    let start = Instant::now();
    let runs = match runs {
        Ok(r) => r,
        Err(e) => return failed(10, "variance adjudication", start, e),
    };
    let mut c = Checks::new();
    let mut zs = Vec::new();
    for rep in &runs.gaussian {
        let beta = rep.config.beta;
        let (sx, sx2) = (&rep.functions[0], &rep.functions[1]);
        let oracle = 2.0 * (rep.model.m4 - 1.0);
        let z2 = (sx2.emp_var - oracle) / sx2.se_var;
        let z1 = (sx.emp_var - rep.config.sigma2) / sx.se_var;
        zs.push(format!("β={beta} z(x²)={z2:+.2} z(x)={z1:+.2}"));
        c.check(z2.abs() <= 3.0, || format!("β={beta}: Var G(x²) {:.4} ± {:.4} vs {oracle}", sx2.emp_var, sx2.se_var));
        c.check(z1.abs() <= 3.0, || format!("β={beta}: Var G(x) {:.4} ± {:.4} vs {}", sx.emp_var, sx.se_var, rep.config.sigma2));
        match errata_report(&rep.model) {
            Ok(e) => {
                let expect_flag = beta != Beta::Complex;
                c.check(e.flagged == expect_flag, || {
                    format!("β={beta}: errata flag {} (printed {}, oracle {})", e.flagged, e.printed, e.oracle)
                });
            }
            Err(e) => c.error("errata", e),
        }
        if beta == Beta::Complex {
            match sx2.pred_var_series {
                Some(printed) => {
                    let z = (sx2.emp_var - printed) / sx2.se_var;
                    c.check(z.abs() <= 3.0 && (printed - 2.0).abs() <= 1e-12, || {
                        format!("β=2: printed value {printed} vs empirical {:.4} (z={z:+.2})", sx2.emp_var)
                    });
                }
                None => c.check(false, || "β=2: printed prediction missing".into()),
            }
        }
    }
    c.finish(10, "variance adjudication", start, None, zs.join(", "))
}

fn gue_ks(report: &ExperimentReport) -> Result<f64> {
    let mean = report.config.sigma2 - 1.0;
    let var = 2.0 * (report.model.m4 - 1.0);
    Ok(ks_test(&report.samples[1], mean, var)?.p_value)
}

/// KS test of standardised GUE `G(x²)` samples.
pub fn criterion_11(runs: &Result<StatisticalRuns>) -> Outcome {
    let start = Instant::now();
    let runs = match runs {
        Ok(r) => r,
        Err(e) => return failed(11, "Gaussianity", start, e),
    };
    let mut c = Checks::new();
    let summary = match gue_ks(&runs.gaussian[1]) {
        Ok(p) if p > 0.01 => {
            c.check(true, String::new);
            format!("p = {p:.3}")
        }
        Ok(p) => {
            let second = run_with_threads(&gaussian_config(Beta::Complex, MC_SEED_ALT), 1)
                .and_then(|(r, _)| gue_ks(&r));
            match second {
                Ok(q) => {
                    c.check(q > 0.01, || format!("p = {p:.2e} and {q:.2e} on the second seed"));
                    format!("p = {p:.3} then {q:.3} on the second seed")
                }
                Err(e) => {
                    c.error("second seed", e);
                    String::new()
                }
            }
        }
        Err(e) => {
            c.error("KS", e);
            String::new()
        }
    };
    c.finish(11, "Gaussianity", start, None, summary)
}

/// Discrete-phase against Gaussian quaternion entries.
pub fn criterion_12(runs: &Result<StatisticalRuns>) -> Outcome {
    let start = Instant::now();
    let runs = match runs {
        Ok(r) => r,
        Err(e) => return failed(12, "fourth-moment sensitivity", start, e),
    };
    let mut c = Checks::new();
    let (dp, g) = (&runs.discrete_phase.functions[1], &runs.gaussian[2].functions[1]);
    let oracle = 2.0 * (runs.discrete_phase.model.m4 - 1.0) - 2.0 * (runs.gaussian[2].model.m4 - 1.0);
    let diff = dp.emp_var - g.emp_var;
    let se = dp.se_var.hypot(g.se_var);
    let z = (diff - oracle) / se;
    c.check(z.abs() <= 3.0, || format!("difference {diff:.4} ± {se:.4} vs {oracle}"));
    c.finish(12, "fourth-moment sensitivity", start, None, format!("difference {diff:.4} vs {oracle} (z={z:+.2})"))
}

/// Reruns the Gaussian experiments on eight threads and compares the JSON.
pub fn criterion_13(runs: &Result<StatisticalRuns>) -> Outcome {
    let start = Instant::now();
    let runs = match runs {
        Ok(r) => r,
        Err(e) => return failed(13, "determinism", start, e),
    };
    let mut c = Checks::new();
    for single in &runs.gaussian {
        let beta = single.config.beta;
        match run_with_threads(&single.config, 8) {
            Ok((multi, _)) => match (single.to_json(), multi.to_json()) {
                (Ok(a), Ok(b)) => c.check(a == b, || format!("β={beta}: reports differ")),
                (Err(e), _) | (_, Err(e)) => c.error("serialization", e),
            },
            Err(e) => c.error(&format!("β={beta}"), e),
        }
    }
    c.finish(13, "determinism", start, None, "1 vs 8 threads, byte-identical JSON".into())
}

/// Runs every criterion; `quick` skips the Monte Carlo ones (9 to 13).
pub fn run_all(quick: bool, mut report: impl FnMut(&Outcome)) -> Vec<Outcome> {
    let fast: [fn() -> Outcome; 8] = [
        criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8,
    ];
    let mut out = Vec::new();
    for f in fast {
        let o = f();
        report(&o);
        out.push(o);
    }
    if !quick {
        let runs = StatisticalRuns::compute();
        let slow: [fn(&Result<StatisticalRuns>) -> Outcome; 5] =
            [criterion_9, criterion_10, criterion_11, criterion_12, criterion_13];
        for f in slow {
            let o = f(&runs);
            report(&o);
            out.push(o);
        }
    }
    out
}
