//! Settings resolution: command-line flags, then `PLENGTH_*` environment
//! variables (both handled by clap), then the TOML config file, then
//! built-in defaults.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::Deserialize;

use plength::harness::RunConfig;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// A `lo:hi` pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Span<T>(pub T, pub T);

impl<T: FromStr + PartialOrd> FromStr for Span<T> {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
        let parse = |v: &str| v.trim().parse::<T>().map_err(|_| format!("bad bound {v:?}"));
        let (lo, hi) = (parse(lo)?, parse(hi)?);
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(Span(lo, hi))
    }
}

#[derive(Args, Clone, Debug, Default)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, env = "PLENGTH_FORMAT", value_enum)]
    pub format: Option<Format>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true, env = "PLENGTH_OUT")]
    pub out: Option<PathBuf>,
    /// Cap on enumerated factorizations.
    #[arg(long, global = true, env = "PLENGTH_BUDGET")]
    pub budget: Option<u64>,
    /// Cap on dynamic-programming cells.
    #[arg(long, global = true, env = "PLENGTH_CELL_BUDGET")]
    pub cell_budget: Option<u64>,
    /// Window for verification checks, as lo:hi.
    #[arg(long, global = true, env = "PLENGTH_WINDOW")]
    pub window: Option<Span<u64>>,
    /// Seed for randomized sampling in checks.
    #[arg(long, global = true, env = "PLENGTH_SEED")]
    pub seed: Option<u64>,
    /// TOML configuration file.
    #[arg(long, global = true, env = "PLENGTH_CONFIG")]
    pub config: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, env = "PLENGTH_JOBS")]
    pub jobs: Option<usize>,
    /// Largest degree tried by quasipolynomial detection.
    #[arg(long, global = true, env = "PLENGTH_D_MAX")]
    pub d_max: Option<usize>,
    /// Largest period tried by quasipolynomial detection.
    #[arg(long, global = true, env = "PLENGTH_PI_MAX")]
    pub pi_max: Option<u64>,
    /// Accepted interval for fitted growth exponents, as lo:hi.
    #[arg(long, global = true, env = "PLENGTH_FIT_INTERVAL")]
    pub fit_interval: Option<Span<f64>>,
    /// Number of sampled points in randomized checks.
    #[arg(long, global = true, env = "PLENGTH_SAMPLES")]
    pub samples: Option<usize>,
    /// Report elapsed time on stderr.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub window: Option<(u64, u64)>,
    pub budget: Option<u64>,
    pub cell_budget: Option<u64>,
    pub d_max: Option<usize>,
    pub pi_max: Option<u64>,
    pub fit_interval: Option<(f64, f64)>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub timing: bool,
    pub run: RunConfig,
}

impl Settings {
    pub fn resolve(args: &GlobalArgs) -> Result<Self, String> {
        let file = match &args.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let d = RunConfig::default();
        let run = RunConfig {
            window: args.window.map(|s| (s.0, s.1)).or(file.window).or(d.window),
            budget: args.budget.or(file.budget).unwrap_or(d.budget),
            cell_budget: args.cell_budget.or(file.cell_budget).unwrap_or(d.cell_budget),
            d_max: args.d_max.or(file.d_max).unwrap_or(d.d_max),
            pi_max: args.pi_max.or(file.pi_max).unwrap_or(d.pi_max),
            fit_interval: args.fit_interval.map(|s| (s.0, s.1)).or(file.fit_interval).unwrap_or(d.fit_interval),
            seed: args.seed.or(file.seed).unwrap_or(d.seed),
            samples: args.samples.or(file.samples).unwrap_or(d.samples),
        };
        run.validate().map_err(|e| e.to_string())?;
        Ok(Self {
            format: args.format.or(file.format).unwrap_or_default(),
            out: args.out.clone().or(file.out),
            jobs: args.jobs.or(file.jobs),
            timing: args.timing,
            run,
        })
    }
}
