//! `gao` - price bounds and Monte Carlo benchmarks for guaranteed annuity
//! options under correlated affine rate/mortality models.

mod commands;
mod config;
mod row;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{EstimatorChoice, MeasureChoice, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "gao",
    about = "Guaranteed annuity option pricing: model-independent bounds and Monte Carlo benchmarks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Price one configuration (or a sweep) from a JSON config file.
    Price {
        /// Path to the JSON run configuration.
        #[arg(long)]
        config: PathBuf,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Reproduce a built-in reference table (2, 3, 4 or 5).
    Table {
        /// Table id.
        #[arg(long)]
        id: u8,
        /// Simulation count (0 disables the Monte Carlo columns).
        #[arg(long)]
        sims: Option<usize>,
        /// Monte Carlo seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run the numerical invariant suite for a configuration.
    Validate {
        /// Path to the JSON run configuration.
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Args, Clone, Copy, Debug, Default)]
pub struct Overrides {
    /// Damping exponent of the Fourier leg.
    #[arg(long)]
    delta: Option<f64>,
    /// Upper integration limit of the Fourier leg.
    #[arg(long)]
    eta_max: Option<f64>,
    /// Quadrature panel width.
    #[arg(long)]
    panel_width: Option<f64>,
    /// Gauss-Legendre points per panel.
    #[arg(long)]
    quad_points: Option<usize>,
    /// Euler steps per year for the path estimator.
    #[arg(long)]
    steps_per_year: Option<usize>,
    /// Monte Carlo estimator.
    #[arg(long, value_enum)]
    estimator: Option<EstimatorArg>,
    /// Measure convention.
    #[arg(long, value_enum)]
    measure: Option<MeasureArg>,
    /// Worker threads (falls back to the GAO_THREADS variable).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum EstimatorArg {
    Direct,
    Rnpath,
}

impl From<EstimatorArg> for EstimatorChoice {
    fn from(e: EstimatorArg) -> Self {
        match e {
            EstimatorArg::Direct => EstimatorChoice::DirectTerminal,
            EstimatorArg::Rnpath => EstimatorChoice::RnPath,
        }
    }
}

impl From<EstimatorArg> for gao_core::montecarlo::Estimator {
    fn from(e: EstimatorArg) -> Self {
        match e {
            EstimatorArg::Direct => gao_core::montecarlo::Estimator::DirectTerminal,
            EstimatorArg::Rnpath => gao_core::montecarlo::Estimator::RnPath,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MeasureArg {
    Reference,
    Forward,
}

impl From<MeasureArg> for MeasureChoice {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Reference => MeasureChoice::Reference,
            MeasureArg::Forward => MeasureChoice::Forward,
        }
    }
}

impl From<MeasureArg> for gao_core::measure::MeasureConvention {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Reference => gao_core::measure::MeasureConvention::Reference,
            MeasureArg::Forward => gao_core::measure::MeasureConvention::Forward,
        }
    }
}

impl Overrides {
    /// Applies command-line overrides onto a parsed config.
    fn apply(&self, config: &mut RunConfig) {
        if let Some(d) = self.delta {
            config.bounds.delta = d;
        }
        if let Some(m) = self.eta_max {
            config.bounds.eta_max = m;
        }
        if let Some(w) = self.panel_width {
            config.bounds.panel_width = w;
        }
        if let Some(p) = self.quad_points {
            config.bounds.quad_points = p;
        }
        if let Some(m) = self.measure {
            config.measure = m.into();
        }
        if let Some(mc) = config.mc.as_mut() {
            if let Some(s) = self.steps_per_year {
                mc.n_steps_per_year = s;
            }
            if let Some(e) = self.estimator {
                mc.estimator = e.into();
            }
        }
    }

    fn threads(&self) -> Option<usize> {
        self.threads.or_else(|| {
            std::env::var("GAO_THREADS").ok().and_then(|v| v.parse().ok())
        })
    }
}

fn install_thread_pool(overrides: &Overrides) -> Result<(), CliError> {
    if let Some(n) = overrides.threads() {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Price { config, out, overrides } => install_thread_pool(overrides)
            .and_then(|()| commands::price::run(config, out.as_ref(), overrides))
            .map(|()| 0u8),
        Command::Table { id, sims, seed, out, overrides } => install_thread_pool(overrides)
            .and_then(|()| commands::table::run(*id, *sims, *seed, out.as_ref(), overrides))
            .map(|()| 0u8),
        Command::Validate { config, overrides } => install_thread_pool(overrides)
            .and_then(|()| commands::validate::run(config, overrides))
            .map(|ok| if ok { 0u8 } else { 4u8 }),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
