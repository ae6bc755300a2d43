use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "hk", version, about = "psi-Hilfer Kirchhoff experiments: eigenpair, sub/supersolutions, sandwiched solves")]
pub struct Cli {
    /// `key = value` configuration file; the built-in classical problem when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Directory for report.json and the CSV output (required).
    #[arg(long = "output-dir", global = true)]
    pub output_dir: Option<PathBuf>,

    /// Seed for the random majorant sample.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Initial slope of the linear majorant; doubled until the intercept is positive.
    #[arg(long = "majorant-a", global = true, default_value_t = 1.0)]
    pub majorant_a: f64,

    /// Upper end of the majorant scan.
    #[arg(long = "majorant-s-max", global = true, default_value_t = 1e6)]
    pub majorant_s_max: f64,

    /// Iteration cap for the inverse power iteration.
    #[arg(long = "eigen-max-iter", global = true, default_value_t = 50_000)]
    pub eigen_max_iter: usize,

    #[command(flatten)]
    pub overrides: Overrides,

    #[command(subcommand)]
    pub command: Command,
}

/// One flag per config key.
#[derive(Debug, Args, Default)]
pub struct Overrides {
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    #[arg(long, global = true)]
    pub beta: Option<String>,
    #[arg(long, global = true)]
    pub psi: Option<String>,
    #[arg(long = "psi_k", global = true)]
    pub psi_k: Option<String>,
    #[arg(long, global = true)]
    pub nu: Option<String>,
    #[arg(long, global = true)]
    pub lambda: Option<String>,
    #[arg(long = "T", global = true)]
    pub t: Option<String>,
    #[arg(long = "grid_n", global = true)]
    pub grid_n: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub h: Option<String>,
    #[arg(long, global = true)]
    pub m: Option<String>,
    #[arg(long, global = true)]
    pub zeta0: Option<String>,
    #[arg(long = "zeta_inf", global = true)]
    pub zeta_inf: Option<String>,
    #[arg(long, global = true)]
    pub r: Option<String>,
    #[arg(long, global = true)]
    pub tol: Option<String>,
    #[arg(long = "max_iter", global = true)]
    pub max_iter: Option<String>,
}

impl Overrides {
    pub fn pairs(&self) -> Vec<(String, String)> {
        let all = [
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("psi", &self.psi),
            ("psi_k", &self.psi_k),
            ("nu", &self.nu),
            ("lambda", &self.lambda),
            ("T", &self.t),
            ("grid_n", &self.grid_n),
            ("h", &self.h),
            ("m", &self.m),
            ("zeta0", &self.zeta0),
            ("zeta_inf", &self.zeta_inf),
            ("r", &self.r),
            ("tol", &self.tol),
            ("max_iter", &self.max_iter),
        ];
        all.iter().filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone()))).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Sub,
    Super,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Principal eigenpair and the e-function.
    Eigen,
    /// Sandwiched Picard solve at the configured lambda.
    Solve {
        /// Start from the supersolution instead of the sub-solution.
        #[arg(long = "from-super")]
        from_super: bool,
        /// Refuse to solve unless both weak-form checks pass.
        #[arg(long = "require-verified")]
        require_verified: bool,
    },
    /// Weak-form check of the constructed sub- or supersolution.
    Verify {
        #[arg(long, value_enum, default_value_t = SideArg::Sub)]
        side: SideArg,
    },
    /// Solve over a lambda range and search for the empirical mu2.
    Sweep {
        #[arg(long = "lambda-min", default_value_t = 0.5)]
        lambda_min: f64,
        #[arg(long = "lambda-max", default_value_t = 60.0)]
        lambda_max: f64,
        #[arg(long = "lambda-step", default_value_t = 0.5)]
        lambda_step: f64,
        /// Step of the mu2 grid search, which starts at 1.
        #[arg(long = "mu2-step", default_value_t = 0.25)]
        mu2_step: f64,
        /// Largest lambda tried by the mu2 search.
        #[arg(long = "mu2-cap", default_value_t = 200.0)]
        mu2_cap: f64,
    },
    /// Left Hilfer derivative and integral against their power-function oracles.
    Convergence,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eigen => "eigen",
            Command::Solve { .. } => "solve",
            Command::Verify { .. } => "verify",
            Command::Sweep { .. } => "sweep",
            Command::Convergence => "convergence",
        }
    }
}
