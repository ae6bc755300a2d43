//! `hk`: runs the eigen / solve / verify / sweep / convergence pipelines from a
//! `key = value` config and writes `report.json` plus plot-ready CSV.

pub mod args;
mod commands;
pub mod output;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::Parser;
use hilfer_kirchhoff::problem::{parse_config, validate_spec, ConfigError, RunSettings};
use hilfer_kirchhoff::{Error, ProblemSpec64};

pub use args::{Cli, Command, SideArg};

/// The classical catalog problem, used when no `--config` is given.
pub const DEFAULT_CONFIG: &str = "\
alpha = 1.0
beta = 0.5
psi = identity
nu = 0.5
lambda = 50
T = 1
grid_n = 257
h = sqrt
m = constant
zeta0 = 1
zeta_inf = 1
r = 0.8
tol = 1e-10
max_iter = 2000
";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Numerical(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Validation(m) => write!(f, "invalid configuration: {m}"),
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_)
            | Error::ExponentOutsideWindow { .. }
            | Error::InvalidOrder(_)
            | Error::GridTooSmall(_)
            | Error::InvalidInterval(_) => Failure::Validation(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Validation(format!("i/o: {e}"))
    }
}

/// Everything one invocation needs, after parsing and validation.
#[derive(Debug)]
pub struct RunConfig {
    pub spec: ProblemSpec64,
    pub settings: RunSettings<f64>,
    /// Merged config keys, echoed into the report.
    pub echo: BTreeMap<String, String>,
    pub command: Command,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub majorant_a: f64,
    pub majorant_s_max: f64,
    pub eigen_max_iter: usize,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, Failure> {
        let output_dir = cli.output_dir.ok_or_else(|| Failure::Validation("--output-dir is required".into()))?;
        let text = match &cli.config {
            Some(path) => std::fs::read_to_string(path)
                .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?,
            None => DEFAULT_CONFIG.to_string(),
        };
        let (spec, settings, echo) = parse_config::<f64>(&text, &cli.overrides.pairs())?;
        let violations = validate_spec(&spec);
        if !violations.is_empty() {
            let msg: Vec<String> = violations.iter().map(ToString::to_string).collect();
            return Err(Failure::Validation(msg.join("; ")));
        }
        let lower = 1.0 / (1.0 + spec.nu);
        if !(settings.r > lower && settings.r < 1.0) {
            return Err(Error::ExponentOutsideWindow { r: settings.r, lower }.into());
        }
        if !(cli.majorant_a > 0.0) {
            return Err(Failure::Validation(format!("--majorant-a must be positive, got {}", cli.majorant_a)));
        }
        Ok(Self {
            spec,
            settings,
            echo,
            command: cli.command,
            output_dir,
            seed: cli.seed,
            majorant_a: cli.majorant_a,
            majorant_s_max: cli.majorant_s_max,
            eigen_max_iter: cli.eigen_max_iter,
        })
    }
}

/// Executes the pipeline described by `config`.
pub fn execute(config: &RunConfig) -> Result<(), Failure> {
    std::fs::create_dir_all(&config.output_dir)?;
    commands::dispatch(config)
}

/// Parses `args` (program name first), runs, and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_VALIDATION,
            };
        }
    };
    match RunConfig::from_cli(cli).and_then(|c| execute(&c)) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {f}");
            f.code()
        }
    }
}
