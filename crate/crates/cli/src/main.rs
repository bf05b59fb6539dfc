use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use wigner_clt::acceptance;
use wigner_clt::ensembles::default_sigma2;
use wigner_clt::experiment::{self, Attach};
use wigner_clt::predict::{errata_report, kernel_v, predict};
use wigner_clt::{
    parse_function_list, Beta, DiagonalKind, EntryDistribution, Error, ExperimentConfig, Format, ModelParams,
    PredictionForm, TestFunction,
};

#[derive(Parser)]
#[command(name = "wigner-clt", version, about = "Fluctuations of linear spectral statistics of Wigner matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Chebyshev coefficients ψ₀..ψ_L of a test function.
    Psi {
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = 16)]
        lmax: usize,
        #[arg(long)]
        json: bool,
    },
    /// Limiting means and covariances of G(f) for a list of functions.
    Predict {
        #[arg(long)]
        beta: Beta,
        #[arg(long)]
        sigma2: f64,
        #[arg(long)]
        m4: f64,
        #[arg(long)]
        functions: String,
        #[arg(long, value_enum, default_value_t = FormArg::Both)]
        form: FormArg,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo experiment; writes a JSON or CSV report.
    Simulate {
        #[arg(long)]
        beta: Beta,
        #[arg(long, default_value_t = 128)]
        n: usize,
        #[arg(long, default_value_t = 2000)]
        reps: usize,
        /// gaussian, discrete-phase, rademacher or radial:M=<v>
        #[arg(long, default_value = "gaussian")]
        dist: String,
        /// gaussian or sign
        #[arg(long, default_value = "gaussian")]
        diagonal: DiagonalKind,
        /// Diagonal variance; defaults to 2 for β = 1 and 1 otherwise.
        #[arg(long)]
        sigma2: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "x,x^2")]
        functions: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        format: Option<Format>,
        #[arg(long)]
        threads: Option<usize>,
        /// Skip the kernel quadrature prediction.
        #[arg(long)]
        no_kernel: bool,
    },
    /// Tabulate the covariance kernel V(t, s) on a g × g grid of cell midpoints.
    Kernel {
        #[arg(long)]
        beta: Beta,
        #[arg(long)]
        sigma2: f64,
        #[arg(long)]
        m4: f64,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the acceptance suite.
    Verify {
        /// Skip the Monte Carlo criteria.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormArg {
    Series,
    Kernel,
    Both,
}

enum Failure {
    Usage(String),
    Runtime(String),
    Acceptance,
}

impl Failure {
    fn usage(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }

    fn runtime(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::InvalidParameter(_) | Error::UnsupportedBeta { .. } => {
                Failure::Usage(e.to_string())
            }
            e => Failure::Runtime(e.to_string()),
        }
    }
}

fn io_error(path: &Path, source: io::Error) -> Failure {
    Failure::Runtime(
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
        .to_string(),
    )
}

fn stdout_error(e: io::Error) -> Failure {
    Failure::Runtime(format!("writing to stdout: {e}"))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Psi { function, lmax, json } => psi(&function, lmax, json),
        Command::Predict {
            beta,
            sigma2,
            m4,
            functions,
            form,
            json,
        } => predict_cmd(beta, sigma2, m4, &functions, form, json),
        Command::Simulate {
            beta,
            n,
            reps,
            dist,
            diagonal,
            sigma2,
            seed,
            functions,
            out,
            format,
            threads,
            no_kernel,
        } => {
            let config = simulate_config(beta, n, reps, &dist, diagonal, sigma2, seed, &functions, no_kernel);
            config.and_then(|c| simulate(&c, &out, format, threads))
        }
        Command::Kernel {
            beta,
            sigma2,
            m4,
            grid,
            out,
        } => kernel(beta, sigma2, m4, grid, &out),
        Command::Verify { quick } => verify(quick),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Acceptance) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn psi(spec: &str, lmax: usize, json: bool) -> Result<(), Failure> {
    let f: TestFunction = spec.parse().map_err(Failure::usage)?;
    let coeffs = f.psi(lmax).map_err(Failure::runtime)?;
    let mut out = io::stdout().lock();
    if json {
        let doc = json!({
            "function": f.label(),
            "lmax": lmax,
            "psi": coeffs.values,
            "tail_estimate": coeffs.tail_estimate,
        });
        writeln!(out, "{doc:#}").map_err(stdout_error)
    } else {
        for (l, v) in coeffs.values.iter().enumerate() {
            writeln!(out, "{l}\t{v:.17e}").map_err(stdout_error)?;
        }
        Ok(())
    }
}

fn model(beta: Beta, sigma2: f64, m4: f64) -> Result<ModelParams, Failure> {
    ModelParams::new(beta, sigma2, m4).map_err(Failure::usage)
}

fn write_matrix(out: &mut impl Write, labels: &[String], m: &[Vec<f64>]) -> io::Result<()> {
    for (label, row) in labels.iter().zip(m) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>14.8}")).collect();
        writeln!(out, "  {label:<12}{}", cells.join(""))?;
    }
    Ok(())
}

fn predict_cmd(beta: Beta, sigma2: f64, m4: f64, functions: &str, form: FormArg, json: bool) -> Result<(), Failure> {
    let p = model(beta, sigma2, m4)?;
    let fs = parse_function_list(functions).map_err(Failure::usage)?;
    let want = |f: FormArg| form == f || form == FormArg::Both;
    let series = want(FormArg::Series)
        .then(|| predict(&fs, &p, PredictionForm::Series))
        .transpose()
        .map_err(Failure::runtime)?;
    let kernel = want(FormArg::Kernel)
        .then(|| predict(&fs, &p, PredictionForm::Kernel))
        .transpose()
        .map_err(Failure::runtime)?;
    let errata = errata_report(&p).map_err(Failure::runtime)?;
    let mut out = io::stdout().lock();
    if json {
        let doc = json!({ "model": p, "series": series, "kernel": kernel, "errata": errata });
        return writeln!(out, "{doc:#}").map_err(stdout_error);
    }
    let print = |out: &mut io::StdoutLock| -> io::Result<()> {
        writeln!(out, "beta = {beta}, sigma2 = {sigma2}, M = {m4}")?;
        let first = series.as_ref().or(kernel.as_ref()).expect("at least one form");
        writeln!(out, "means:")?;
        for (label, m) in first.function_labels.iter().zip(&first.means) {
            writeln!(out, "  {label:<12}{m:>14.8}")?;
        }
        for pred in [&series, &kernel].into_iter().flatten() {
            let name = match pred.form {
                PredictionForm::Series => "series",
                PredictionForm::Kernel => "kernel",
            };
            writeln!(out, "covariance ({name}):")?;
            write_matrix(out, &pred.function_labels, &pred.covariance)?;
        }
        writeln!(
            out,
            "Var G(x^2): printed {:.8}, oracle {:.8}, kernel {:.8}{}",
            errata.printed,
            errata.oracle,
            errata.kernel,
            if errata.flagged { "  [printed coefficient disagrees]" } else { "" }
        )
    };
    print(&mut out).map_err(stdout_error)
}

#[allow(clippy::too_many_arguments)]
fn simulate_config(
    beta: Beta,
    n: usize,
    reps: usize,
    dist: &str,
    diagonal: DiagonalKind,
    sigma2: Option<f64>,
    seed: u64,
    functions: &str,
    no_kernel: bool,
) -> Result<ExperimentConfig, Failure> {
    let config = ExperimentConfig {
        beta,
        n,
        sigma2: sigma2.unwrap_or_else(|| default_sigma2(beta)),
        diagonal,
        offdiag: EntryDistribution::parse(dist, beta).map_err(Failure::usage)?,
        functions: parse_function_list(functions).map_err(Failure::usage)?,
        replicates: reps,
        master_seed: seed,
        attach: Attach {
            kernel: !no_kernel,
            ..Attach::default()
        },
    };
    config.validate().map_err(Failure::usage)?;
    Ok(config)
}

fn infer_format(path: &Path) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
        _ => Format::Json,
    }
}

fn simulate(config: &ExperimentConfig, out: &Path, format: Option<Format>, threads: Option<usize>) -> Result<(), Failure> {
    let (report, elapsed) = match threads {
        Some(0) => return Err(Failure::Usage("--threads must be positive".into())),
        Some(k) => experiment::run_with_threads(config, k)
            .map(|(r, s)| (r, Some(s.elapsed)))
            .map_err(Failure::runtime)?,
        None => (experiment::run(config).map_err(Failure::runtime)?, None),
    };
    if let Some(t) = elapsed {
        log::info!("{} replicates in {:.2} s", config.replicates, t.as_secs_f64());
    }
    experiment::emit(&report, format.unwrap_or_else(|| infer_format(out)), out).map_err(Failure::runtime)?;
    let mut stdout = io::stdout().lock();
    let print = |w: &mut io::StdoutLock| -> io::Result<()> {
        writeln!(w, "{:<12}{:>12}{:>12}{:>12}{:>12}{:>12}", "function", "mean", "se", "var", "se", "oracle")?;
        for s in &report.functions {
            let oracle = s.oracle_var.map_or_else(|| "-".to_string(), |v| format!("{v:.5}"));
            writeln!(
                w,
                "{:<12}{:>12.5}{:>12.5}{:>12.5}{:>12.5}{:>12}",
                s.label, s.emp_mean, s.se_mean, s.emp_var, s.se_var, oracle
            )?;
        }
        writeln!(w, "report written to {}", out.display())
    };
    print(&mut stdout).map_err(stdout_error)
}

fn kernel(beta: Beta, sigma2: f64, m4: f64, grid: usize, out: &Path) -> Result<(), Failure> {
    let p = model(beta, sigma2, m4)?;
    if grid < 2 {
        return Err(Failure::Usage("--grid must be at least 2".into()));
    }
    let file = File::create(out).map_err(|e| io_error(out, e))?;
    let mut w = BufWriter::new(file);
    let node = |i: usize| -2.0 + 4.0 * (i as f64 + 0.5) / grid as f64;
    let write = |w: &mut BufWriter<File>| -> Result<(), Failure> {
        writeln!(w, "t,s,v").map_err(|e| io_error(out, e))?;
        for i in 0..grid {
            for j in 0..grid {
                let (t, s) = (node(i), node(j));
                if i == j {
                    writeln!(w, "{t},{s},").map_err(|e| io_error(out, e))?;
                } else {
                    let v = kernel_v(t, s, &p).map_err(Failure::runtime)?;
                    writeln!(w, "{t},{s},{v}").map_err(|e| io_error(out, e))?;
                }
            }
        }
        w.flush().map_err(|e| io_error(out, e))
    };
    write(&mut w)
}

fn verify(quick: bool) -> Result<(), Failure> {
    let outcomes = acceptance::run_all(quick, |o| println!("{o}"));
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} passed, {failed} failed", outcomes.len() - failed);
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Acceptance)
    }
}
