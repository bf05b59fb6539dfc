//! Monte Carlo harness: linear spectral statistics over independent
//! replicates, compared with the limiting predictions and the moment oracle.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::chebyshev::TestFunction;
use crate::ensembles::{derive_seed, sample, DiagonalKind, EnsembleSpec, EntryDistribution};
use crate::error::{Error, Result};
use crate::predict::{
    cov_kernel_quadrature, cov_series, errata_report, mean_g, oracle_cov_quadratic, Beta,
    ErrataReport, ModelParams, QuadraticOracle,
};
use crate::semicircle::integral_f;
use crate::chebyshev::DEFAULT_L;

pub const SCHEMA: &str = "wigner-clt-report/1";
/// Minimum sample size for the Kolmogorov–Smirnov test.
pub const KS_MIN_SAMPLES: usize = 50;

/// Kahan-compensated sum in iteration order.
pub fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// `G_n(f) = Σ_j f(λ_j) - n ∫ f dF`.
pub fn lss(eigenvalues: &[f64], f: &TestFunction) -> Result<f64> {
    Ok(lss_with_integral(eigenvalues, f, integral_f(f)?))
}

fn lss_with_integral(eigenvalues: &[f64], f: &TestFunction, integral: f64) -> f64 {
    let n = eigenvalues.len() as f64;
    kahan_sum(eigenvalues.iter().map(|&x| f.eval(x)).chain(std::iter::once(-n * integral)))
}

/// Which limiting values to attach to a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attach {
    pub series: bool,
    pub kernel: bool,
    pub oracle: bool,
}

impl Default for Attach {
    fn default() -> Self {
        Attach {
            series: true,
            kernel: true,
            oracle: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub beta: Beta,
    pub n: usize,
    pub sigma2: f64,
    pub diagonal: DiagonalKind,
    pub offdiag: EntryDistribution,
    pub functions: Vec<TestFunction>,
    pub replicates: usize,
    pub master_seed: u64,
    pub attach: Attach,
}

impl ExperimentConfig {
    /// Gaussian entries with the classical diagonal variance.
    pub fn gaussian(beta: Beta, n: usize, replicates: usize, master_seed: u64, functions: Vec<TestFunction>) -> Self {
        let base = EnsembleSpec::gaussian(beta, n, 0);
        ExperimentConfig {
            beta,
            n,
            sigma2: base.sigma2,
            diagonal: base.diagonal,
            offdiag: base.offdiag,
            functions,
            replicates,
            master_seed,
            attach: Attach::default(),
        }
    }

    /// Ensemble of replicate `r`, seeded by `(master_seed, r)`.
    pub fn replicate_spec(&self, r: usize) -> EnsembleSpec {
        EnsembleSpec {
            beta: self.beta,
            n: self.n,
            sigma2: self.sigma2,
            diagonal: self.diagonal,
            offdiag: self.offdiag,
            seed: derive_seed(self.master_seed, r as u64),
        }
    }

    pub fn model(&self) -> Result<ModelParams> {
        ModelParams::new(self.beta, self.sigma2, self.offdiag.m4())
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates < 2 {
            return Err(Error::InvalidParameter("need at least 2 replicates".into()));
        }
        if self.functions.is_empty() {
            return Err(Error::InvalidParameter("no test functions given".into()));
        }
        self.replicate_spec(0).validate()?;
        self.model().map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// One-sample Kolmogorov–Smirnov test against `Normal(mu, var)`.
pub fn ks_test(samples: &[f64], mu: f64, var: f64) -> Result<KsResult> {
    if !(var > 0.0 && var.is_finite()) {
        return Err(Error::InvalidParameter(format!("variance must be positive, got {var}")));
    }
    if samples.len() < KS_MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "KS test needs at least {KS_MIN_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    let normal = Normal::new(mu, var.sqrt())
        .map_err(|e| Error::InvalidParameter(format!("normal reference: {e}")))?;
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len() as f64;
    let statistic = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = normal.cdf(x);
            ((i + 1) as f64 / n - cdf).max(cdf - i as f64 / n)
        })
        .fold(0.0f64, f64::max);
    Ok(KsResult {
        statistic,
        p_value: kolmogorov_sf(n.sqrt() * statistic),
    })
}

/// `P(K > x)` for the Kolmogorov distribution. The alternating series
/// `Σ (-1)^{k-1} 2 exp(-2k²x²)` is used for `x >= 1`; below that it
/// converges slowly, so the complementary theta series is used instead.
/// Both are truncated once a term drops below `1e-10`.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let p = if x >= 1.0 {
        let mut sum = 0.0;
        for k in 1..=100 {
            let term = 2.0 * (-2.0 * (k * k) as f64 * x * x).exp();
            sum += if k % 2 == 1 { term } else { -term };
            if term < 1e-10 {
                break;
            }
        }
        sum
    } else {
        let c = (2.0 * std::f64::consts::PI).sqrt() / x;
        let mut cdf = 0.0;
        for k in 1..=100 {
            let j = (2 * k - 1) as f64;
            let term = c * (-j * j * std::f64::consts::PI.powi(2) / (8.0 * x * x)).exp();
            cdf += term;
            if term < 1e-10 {
                break;
            }
        }
        1.0 - cdf
    };
    p.clamp(0.0, 1.0)
}

/// Where the KS reference variance came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarianceSource {
    Oracle,
    Kernel,
    Series,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSummary {
    pub label: String,
    pub emp_mean: f64,
    pub se_mean: f64,
    pub emp_var: f64,
    /// `s²·√(2/(R-1))`, approximate under normality.
    pub se_var: f64,
    pub pred_mean: f64,
    pub pred_var_series: Option<f64>,
    pub pred_var_kernel: Option<f64>,
    pub oracle_var: Option<f64>,
    pub z_mean: Option<f64>,
    /// Against the printed series.
    pub z_var: Option<f64>,
    pub z_var_kernel: Option<f64>,
    pub z_var_oracle: Option<f64>,
    pub ks: Option<KsResult>,
    pub ks_reference: Option<VarianceSource>,
}

/// Deterministic run facts (no timings, so reports compare bit for bit).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub crate_version: String,
    pub solves: usize,
    pub max_pairing_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: String,
    pub config: ExperimentConfig,
    pub model: ModelParams,
    pub functions: Vec<FunctionSummary>,
    pub empirical_covariance: Vec<Vec<f64>>,
    pub predicted_covariance_series: Option<Vec<Vec<f64>>>,
    pub predicted_covariance_kernel: Option<Vec<Vec<f64>>>,
    pub oracle: Option<QuadraticOracle>,
    pub errata: Option<ErrataReport>,
    /// `samples[i][r]` is `G_n(f_i)` on replicate `r`.
    pub samples: Vec<Vec<f64>>,
    pub metadata: RunMetadata,
}

/// Wall-clock facts kept out of the report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunStats {
    pub threads: usize,
    pub elapsed: Duration,
}

/// Runs on the global rayon pool.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let (samples, gap) = simulate(config)?;
    summarise(config, samples, gap)
}

/// Runs on a dedicated pool of `threads` workers.
pub fn run_with_threads(config: &ExperimentConfig, threads: usize) -> Result<(ExperimentReport, RunStats)> {
    config.validate()?;
    if threads == 0 {
        return Err(Error::InvalidParameter("thread count must be positive".into()));
    }
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let (samples, gap) = pool.install(|| simulate(config))?;
    let report = summarise(config, samples, gap)?;
    Ok((
        report,
        RunStats {
            threads,
            elapsed: start.elapsed(),
        },
    ))
}

type Replicate = (Vec<f64>, f64);

fn simulate(config: &ExperimentConfig) -> Result<(Vec<Vec<f64>>, f64)> {
    let integrals = config
        .functions
        .iter()
        .map(integral_f)
        .collect::<Result<Vec<_>>>()?;
    let one = |r: usize| -> Result<Replicate> {
        let matrix = sample(&config.replicate_spec(r))?;
        let spectrum = matrix.spectrum()?;
        let values = config
            .functions
            .iter()
            .zip(&integrals)
            .map(|(f, &i)| lss_with_integral(&spectrum.values, f, i))
            .collect();
        Ok((values, spectrum.pairing_gap))
    };
    let results: Vec<Result<Replicate>> = (0..config.replicates).into_par_iter().map(one).collect();
    let k = config.functions.len();
    let mut samples = vec![Vec::with_capacity(config.replicates); k];
    let mut gap = 0.0f64;
    for (r, res) in results.into_iter().enumerate() {
        let (values, g) = res.map_err(|e| Error::Replicate {
            index: r,
            source: Box::new(e),
        })?;
        for (column, v) in samples.iter_mut().zip(values) {
            column.push(v);
        }
        gap = gap.max(g);
    }
    Ok((samples, gap))
}

fn mean(xs: &[f64]) -> f64 {
    kahan_sum(xs.iter().copied()) / xs.len() as f64
}

fn covariance(xs: &[f64], ys: &[f64]) -> f64 {
    let (mx, my) = (mean(xs), mean(ys));
    kahan_sum(xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my))) / (xs.len() as f64 - 1.0)
}

fn z_score(empirical: f64, predicted: f64, se: f64) -> Option<f64> {
    let z = (empirical - predicted) / se;
    z.is_finite().then_some(z)
}

fn summarise(config: &ExperimentConfig, samples: Vec<Vec<f64>>, max_gap: f64) -> Result<ExperimentReport> {
    let model = config.model()?;
    let k = config.functions.len();
    let r = config.replicates as f64;
    let empirical_covariance: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| covariance(&samples[i], &samples[j])).collect())
        .collect();

    let pair_matrix = |f: &dyn Fn(&TestFunction, &TestFunction) -> Result<f64>| -> Result<Vec<Vec<f64>>> {
        let mut m = vec![vec![0.0; k]; k];
        for (i, fi) in config.functions.iter().enumerate() {
            for (j, fj) in config.functions.iter().enumerate().skip(i) {
                let v = f(fi, fj)?;
                m[i][j] = v;
                m[j][i] = v;
            }
        }
        Ok(m)
    };
    let series = if config.attach.series {
        Some(pair_matrix(&|f, g| cov_series(f, g, &model, DEFAULT_L))?)
    } else {
        None
    };
    let kernel = if config.attach.kernel {
        Some(pair_matrix(&|f, g| Ok(cov_kernel_quadrature(f, g, &model)?.value))?)
    } else {
        None
    };
    let oracle = config.attach.oracle.then(|| oracle_cov_quadratic(&model));
    let errata = if config.attach.oracle && config.attach.series {
        Some(errata_report(&model)?)
    } else {
        None
    };

    let mut functions = Vec::with_capacity(k);
    for (i, f) in config.functions.iter().enumerate() {
        let xs = &samples[i];
        let emp_mean = mean(xs);
        let emp_var = empirical_covariance[i][i];
        let se_mean = (emp_var / r).sqrt();
        let se_var = emp_var * (2.0 / (r - 1.0)).sqrt();
        let pred_mean = mean_g(f, &model)?;
        let pred_var_series = series.as_ref().map(|m| m[i][i]);
        let pred_var_kernel = kernel.as_ref().map(|m| m[i][i]);
        let oracle_var = oracle.and_then(|o| o.variance_for(f));
        let reference = [
            (oracle_var, VarianceSource::Oracle),
            (pred_var_kernel, VarianceSource::Kernel),
            (pred_var_series, VarianceSource::Series),
        ]
        .into_iter()
        .find_map(|(v, src)| v.map(|v| (v, src)));
        let (ks, ks_reference) = match reference {
            Some((v, src)) if v > 0.0 && xs.len() >= KS_MIN_SAMPLES => {
                (Some(ks_test(xs, pred_mean, v)?), Some(src))
            }
            _ => (None, None),
        };
        functions.push(FunctionSummary {
            label: f.label(),
            emp_mean,
            se_mean,
            emp_var,
            se_var,
            pred_mean,
            pred_var_series,
            pred_var_kernel,
            oracle_var,
            z_mean: z_score(emp_mean, pred_mean, se_mean),
            z_var: pred_var_series.and_then(|p| z_score(emp_var, p, se_var)),
            z_var_kernel: pred_var_kernel.and_then(|p| z_score(emp_var, p, se_var)),
            z_var_oracle: oracle_var.and_then(|p| z_score(emp_var, p, se_var)),
            ks,
            ks_reference,
        });
    }

    Ok(ExperimentReport {
        schema: SCHEMA.to_string(),
        config: config.clone(),
        model,
        functions,
        empirical_covariance,
        predicted_covariance_series: series,
        predicted_covariance_kernel: kernel,
        oracle,
        errata,
        samples,
        metadata: RunMetadata {
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            solves: config.replicates,
            max_pairing_gap: max_gap,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Parse {
                what: "format",
                input: s.to_string(),
                reason: "expected json or csv".into(),
            }),
        }
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    label: &'a str,
    emp_mean: f64,
    se_mean: f64,
    emp_var: f64,
    se_var: f64,
    pred_mean: f64,
    pred_var_series: Option<f64>,
    pred_var_kernel: Option<f64>,
    oracle_var: Option<f64>,
    z_mean: Option<f64>,
    z_var: Option<f64>,
    ks_stat: Option<f64>,
    ks_p: Option<f64>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self).map_err(|e| Error::Serialization(e.to_string()))
    }

    /// One row per function.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for s in &self.functions {
            out.serialize(CsvRow {
                label: &s.label,
                emp_mean: s.emp_mean,
                se_mean: s.se_mean,
                emp_var: s.emp_var,
                se_var: s.se_var,
                pred_mean: s.pred_mean,
                pred_var_series: s.pred_var_series,
                pred_var_kernel: s.pred_var_kernel,
                oracle_var: s.oracle_var,
                z_mean: s.z_mean,
                z_var: s.z_var,
                ks_stat: s.ks.map(|k| k.statistic),
                ks_p: s.ks.map(|k| k.p_value),
            })
            .map_err(|e| Error::Serialization(e.to_string()))?;
        }
        out.flush().map_err(|e| Error::Serialization(e.to_string()))
    }
}

/// Writes the report to `path` in the given format.
pub fn emit(report: &ExperimentReport, format: Format, path: &Path) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io)?;
    let mut w = BufWriter::new(file);
    match format {
        Format::Json => {
            report.write_json(&mut w)?;
            writeln!(w).map_err(io)?;
        }
        Format::Csv => report.write_csv(&mut w)?,
    }
    w.flush().map_err(io)
}
