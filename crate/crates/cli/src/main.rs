use std::path::{Path, PathBuf};
use std::process::ExitCode;

use acycle::acycle::{kalai_sum, min_spanning_acycle, DEFAULT_ENUMERATION_CAP};
use acycle::asymptotics::limit_constant;
use acycle::experiment::{estimate_rho, run_trials, scaling_study, thread_pool, verify_identity, ExperimentConfig};
use acycle::filtration::Filtration;
use acycle::linalg::Backend;
use acycle::persistence::{compute_persistence, diagrams_to_csv, diagrams_to_json};
use acycle::process::{BirthLaw, ProcessKind, ProcessSpec, SeedSpec};
use acycle::{Error, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "acycle", version, about = "Spanning acycles and persistent lifetime sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Lm,
    Clique,
}

impl From<Kind> for ProcessKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Lm => ProcessKind::LinialMeshulam,
            Kind::Clique => ProcessKind::Clique,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Law {
    Uniform,
    Exponential,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Rational,
    Modular,
    ModularAlt,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Rational => Backend::Rational,
            BackendArg::Modular => Backend::Modular,
            BackendArg::ModularAlt => Backend::ModularAlt,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Verify {
    /// Deterministic 5% subsample.
    Sample,
    All,
    None,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one filtration from a random process and print it in the text format.
    Sample {
        #[arg(long, value_enum, default_value = "lm")]
        process: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Truncation dimension of the clique process (defaults to d).
        #[arg(long)]
        max_dim: Option<usize>,
        #[arg(long, value_enum, default_value = "uniform")]
        birth_law: Law,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        trial: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Persistence diagrams of a filtration file.
    Ph {
        file: PathBuf,
        /// Homology degree (all degrees up to the dimension when omitted).
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, value_enum, default_value = "rational")]
        backend: BackendArg,
    },
    /// Minimum spanning d-acycle of a filtration file.
    Msa {
        file: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value = "rational")]
        backend: BackendArg,
    },
    /// Check that persistence, spanning acycles and the Betti integral give the same L_{d-1}.
    Verify {
        file: PathBuf,
        #[arg(long)]
        d: usize,
    },
    /// Run Monte Carlo trials from a JSON configuration.
    Experiment {
        config: PathBuf,
        #[arg(long, value_enum)]
        verify: Option<Verify>,
    },
    /// Mean lifetime sums across several n, as CSV.
    Scaling {
        #[arg(long, value_enum, default_value = "lm")]
        process: Kind,
        #[arg(long)]
        d: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "sample")]
        verify: Verify,
        #[arg(long)]
        json: bool,
    },
    /// Estimate the probability that a fixed d-simplex lowers beta_{d-1} of Y(n, m).
    Rho {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<u64>,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Limiting constant of E[L_{d-1}] / n^{d-1}.
    Limit {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Sum of squared torsion orders over all spanning acycles of the full d-skeleton.
    Kalai {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u128,
    },
}

fn read_filtration(path: &Path) -> Result<Filtration> {
    Filtration::parse(&std::fs::read_to_string(path)?)
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    emit(&(serde_json::to_string_pretty(v)? + "\n"))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sample { process, n, d, max_dim, birth_law, seed, trial, output } => {
            let spec = ProcessSpec {
                kind: process.into(),
                n,
                d,
                birth_law: match birth_law {
                    Law::Uniform => BirthLaw::Uniform,
                    Law::Exponential => BirthLaw::Exponential,
                },
                max_dim,
                m: None,
            };
            let text = spec.sample(SeedSpec::new(seed, trial))?.to_text();
            match output {
                Some(p) => std::fs::write(p, text)?,
                None => emit(&text)?,
            }
        }
        Command::Ph { file, degree, format, backend } => {
            let f = read_filtration(&file)?;
            let degrees: Vec<usize> = match degree {
                Some(k) => vec![k],
                None => (0..=f.dim()).collect(),
            };
            let diagrams: Vec<_> = degrees.iter().map(|&k| compute_persistence(&f, k, backend.into())).collect();
            match format {
                Format::Json => print_json(&diagrams_to_json(&diagrams))?,
                Format::Csv => emit(&diagrams_to_csv(&diagrams))?,
            }
        }
        Command::Msa { file, d, backend } => {
            let f = read_filtration(&file)?;
            print_json(&min_spanning_acycle(&f, d, backend.into())?.to_json())?;
        }
        Command::Verify { file, d } => {
            let f = read_filtration(&file)?;
            print_json(&verify_identity(&f, d)?.to_json())?;
        }
        Command::Experiment { config, verify } => {
            let mut cfg = ExperimentConfig::from_json(&std::fs::read_to_string(config)?)?;
            match verify {
                Some(Verify::All) => {
                    cfg.identity_check = true;
                    cfg.verify_all = true;
                }
                Some(Verify::Sample) => cfg.identity_check = true,
                Some(Verify::None) => cfg.identity_check = false,
                None => {}
            }
            let result = run_trials(&cfg)?;
            result.write_outputs()?;
            print_json(&result.summary_json())?;
        }
        Command::Scaling { process, d, ns, trials, seed, verify, json } => {
            let spec = ProcessSpec { kind: process.into(), n: ns[0], d, birth_law: BirthLaw::Uniform, max_dim: None, m: None };
            if verify == Verify::All {
                return Err(Error::Config("scaling supports --verify sample or none".into()));
            }
            let table = scaling_study(&spec, &ns, trials, seed, verify == Verify::Sample)?;
            if json {
                print_json(&serde_json::to_value(&table)?)?;
            } else {
                emit(&table.to_csv())?;
            }
        }
        Command::Rho { n, d, m, trials, seed } => {
            let rows = m
                .iter()
                .map(|&m| Ok(serde_json::to_value(estimate_rho(n, d, m, trials, seed)?)?))
                .collect::<Result<Vec<_>>>()?;
            print_json(&serde_json::Value::Array(rows))?;
        }
        Command::Limit { d, tol } => {
            print_json(&serde_json::to_value(limit_constant(d, tol)?)?)?;
        }
        Command::Kalai { n, d, cap } => {
            let s = thread_pool()?.install(|| kalai_sum(n, d, cap))?;
            let torsion: serde_json::Map<String, serde_json::Value> =
                s.torsion_counts.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            print_json(&json!({
                "n": s.n,
                "d": s.d,
                "sum": s.sum.to_string(),
                "expected": s.expected.to_string(),
                "matches": s.sum == s.expected,
                "candidates": s.candidates.to_string(),
                "acycles": s.acycles,
                "torsion_counts": torsion,
            }))?;
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Precondition { .. } => 2,
        Error::IdentityViolation(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
