use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use lueratio::hankel::{default_precision, MAX_PRECISION};
use lueratio::montecarlo::Backend;
use lueratio::painleve::Mode;
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Painleve,
    LimitQ,
    HardEdge,
    FiniteN,
    Mc,
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Shoot,
    Collocate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Tridiagonal,
    Dense,
}

/// Raw command line.
#[derive(Debug, Parser)]
#[command(name = "lueratio", version, about = "Ratio of the two smallest LUE eigenvalues")]
pub struct Args {
    pub command: Command,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, value_delimiter = ',')]
    pub r: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub s: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub x: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Working precision in bits for Hankel determinants.
    #[arg(long)]
    pub precision: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Collocate)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = BackendArg::Tridiagonal)]
    pub backend: BackendArg,
    /// Index blocks for Monte Carlo; results do not depend on it.
    #[arg(long, default_value_t = 16)]
    pub workers: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Directory for cached trajectories.
    #[arg(long, default_value = ".lueratio-cache")]
    pub cache_dir: PathBuf,
    #[arg(long)]
    pub no_cache: bool,
    /// Subset of acceptance criteria to run.
    #[arg(long, value_delimiter = ',')]
    pub criteria: Vec<usize>,
}

/// Validated run description. Everything that can change an artifact is
/// recorded here and echoed into JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub alpha: f64,
    pub r: Vec<f64>,
    pub s: Vec<f64>,
    pub x: Vec<f64>,
    pub n: Vec<usize>,
    pub tol: f64,
    pub precision_bits: Option<usize>,
    pub samples: usize,
    pub seed: u64,
    pub mode: Mode,
    pub backend: Backend,
    pub format: Format,
    pub criteria: Vec<usize>,
    #[serde(skip)]
    pub workers: usize,
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
}

fn config(field: &'static str, message: impl Into<String>) -> CliError {
    CliError::Config { field, message: message.into() }
}

fn require<T>(field: &'static str, v: &[T]) -> Result<(), CliError> {
    if v.is_empty() {
        return Err(config(field, "this command needs a non-empty grid"));
    }
    Ok(())
}

fn forbid<T>(field: &'static str, v: &[T]) -> Result<(), CliError> {
    if !v.is_empty() {
        return Err(config(field, "not used by this command"));
    }
    Ok(())
}

fn ascending<T: PartialOrd + Copy>(field: &'static str, v: &[T]) -> Result<(), CliError> {
    if v.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(config(field, "grid must be strictly ascending"));
    }
    Ok(())
}

fn all(field: &'static str, v: &[f64], ok: impl Fn(f64) -> bool, message: &str) -> Result<(), CliError> {
    if v.iter().any(|&a| !a.is_finite() || !ok(a)) {
        return Err(config(field, message));
    }
    Ok(())
}

fn tol_in(tol: f64, lo: f64, hi: f64) -> Result<f64, CliError> {
    if !(lo..=hi).contains(&tol) {
        return Err(config("tol", format!("must lie in [{lo:e}, {hi:e}] for this command")));
    }
    Ok(tol)
}

impl RunConfig {
    pub fn from_args(a: Args) -> Result<Self, CliError> {
        if !(a.alpha > -1.0) || !a.alpha.is_finite() {
            return Err(config("alpha", "must be finite and exceed -1"));
        }
        ascending("r", &a.r)?;
        ascending("s", &a.s)?;
        ascending("x", &a.x)?;
        ascending("n", &a.n)?;
        let tol = match a.command {
            Command::Painleve => {
                if a.r.len() != 1 {
                    return Err(config("r", "painleve takes exactly one r"));
                }
                all("r", &a.r, |r| r > 1.0, "r must exceed 1")?;
                all("s", &a.s, |s| s > 0.0, "s must be positive")?;
                forbid("x", &a.x)?;
                forbid("n", &a.n)?;
                tol_in(a.tol.unwrap_or(1e-10), 1e-12, 1e-4)?
            }
            Command::LimitQ => {
                require("r", &a.r)?;
                all("r", &a.r, |r| r > 1.0, "r must exceed 1")?;
                forbid("x", &a.x)?;
                forbid("n", &a.n)?;
                tol_in(a.tol.unwrap_or(1e-6), 1e-8, 1e-2)?
            }
            Command::HardEdge => {
                require("x", &a.x)?;
                all("x", &a.x, |x| x >= 0.0, "x must be non-negative")?;
                forbid("r", &a.r)?;
                forbid("n", &a.n)?;
                tol_in(a.tol.unwrap_or(1e-6), 1e-8, 1e-2)?
            }
            Command::FiniteN => {
                require("n", &a.n)?;
                require("r", &a.r)?;
                all("r", &a.r, |r| r > 1.0, "r must exceed 1")?;
                if a.n[0] < 2 {
                    return Err(config("n", "finite-n needs n >= 2"));
                }
                if let Some(p) = a.precision {
                    let need = default_precision(*a.n.last().unwrap() - 1);
                    if p < need || p > MAX_PRECISION {
                        return Err(config("precision", format!("must lie in [{need}, {MAX_PRECISION}] for this n grid")));
                    }
                }
                tol_in(a.tol.unwrap_or(1e-8), 1e-12, 1e-2)?
            }
            Command::Mc => {
                require("n", &a.n)?;
                if a.n[0] < 1 {
                    return Err(config("n", "n must be at least 1"));
                }
                match (a.r.is_empty(), a.x.is_empty()) {
                    (false, false) => return Err(config("x", "give either --r or --x, not both")),
                    (true, true) => return Err(config("r", "mc needs a --r or --x grid")),
                    (false, true) => {
                        all("r", &a.r, |r| r >= 1.0, "r must be at least 1")?;
                        if a.n[0] < 2 {
                            return Err(config("n", "the ratio needs n >= 2"));
                        }
                        if a.samples < 1000 {
                            return Err(config("samples", "at least 1000 samples are required"));
                        }
                    }
                    (true, false) => all("x", &a.x, |x| x >= 0.0, "x must be non-negative")?,
                }
                if a.samples == 0 {
                    return Err(config("samples", "must be positive"));
                }
                if a.backend == BackendArg::Dense && (a.alpha < 0.0 || a.alpha.fract() != 0.0) {
                    return Err(config("backend", "the dense backend needs integer alpha >= 0"));
                }
                0.0
            }
            Command::Validate => {
                if let Some(&k) = a.criteria.iter().find(|&&k| !(1..=crate::validate::COUNT).contains(&k)) {
                    return Err(config("criteria", format!("no criterion {k}")));
                }
                0.0
            }
        };
        if a.workers == 0 {
            return Err(config("workers", "must be positive"));
        }
        let format = a.format.unwrap_or(if a.command == Command::Painleve { Format::Json } else { Format::Csv });
        Ok(Self {
            command: a.command,
            alpha: a.alpha,
            r: a.r,
            s: a.s,
            x: a.x,
            n: a.n,
            tol,
            precision_bits: a.precision,
            samples: a.samples,
            seed: a.seed,
            mode: match a.mode {
                ModeArg::Shoot => Mode::Shoot,
                ModeArg::Collocate => Mode::Collocate,
            },
            backend: match a.backend {
                BackendArg::Tridiagonal => Backend::Tridiagonal,
                BackendArg::Dense => Backend::Dense,
            },
            format,
            criteria: a.criteria,
            workers: a.workers,
            output_path: a.out,
            cache_dir: (!a.no_cache).then_some(a.cache_dir),
        })
    }
}
