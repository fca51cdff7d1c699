use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use isingnet::analysis::FitOptions;

mod commands;
mod config;
mod error;
mod output;

use config::{RawConfig, RunConfig};
use error::CliError;

/// Lindblad dynamics of Ising spin networks in a thermal bath.
#[derive(Parser)]
#[command(name = "isingnet", version)]
struct Cli {
    /// Worker threads for trajectory sampling (default: all cores).
    #[arg(long, global = true, env = "ISINGNET_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Config file of `key = value` lines.
    #[arg(short, long)]
    config: Option<PathBuf>,

    /// Overrides a config key, e.g. `--set graph=paw --set beta=2`.
    #[arg(short = 's', long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    /// Output directory (overrides the `output` key).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::resolve(RawConfig::load(self.config.as_deref(), &self.overrides)?)?;
        if let Some(o) = &self.output {
            cfg.output = o.clone();
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Integrates the master equation; writes populations, correlations,
    /// coherence and a summary.
    Simulate(RunArgs),
    /// Averages quantum-jump trajectories.
    Trajectories(RunArgs),
    /// Integrates the mean-field birth–death equation over N_up.
    Meanfield(RunArgs),
    /// Fits 0.5·exp(−t/τ) to the `abs` column of a coherence CSV.
    FitDecoherence {
        file: PathBuf,
        /// The fit window ends where |ρ| first drops below 0.5 × this level.
        #[arg(long, default_value_t = FitOptions::default().window_level)]
        window_level: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Prints N, L, mean degree, disparity and degrees of a graph.
    GraphStats {
        /// Built-in name (e.g. `paw`, `cycle:7`) or edge-list file.
        graph: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Tabulates spectral densities and flip rates of both cutoff kinds.
    SpectralDensity {
        #[arg(long, default_value_t = 0.4)]
        eta: f64,
        #[arg(long, default_value_t = 1.2)]
        omega_c: f64,
        #[arg(long, default_value_t = 1.2)]
        beta: f64,
        #[arg(long, default_value_t = 6.0)]
        omega_max: f64,
        #[arg(long, default_value_t = 241)]
        points: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(w) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| CliError::Config(format!("workers: {e}")))?;
    }
    match cli.command {
        Command::Simulate(a) => commands::simulate(&a.resolve()?),
        Command::Trajectories(a) => commands::trajectories(&a.resolve()?),
        Command::Meanfield(a) => commands::meanfield(&a.resolve()?),
        Command::FitDecoherence { file, window_level, output } => {
            let opts = FitOptions { window_level, ..FitOptions::default() };
            commands::fit(&file, &opts, output.as_deref())
        }
        Command::GraphStats { graph, output } => commands::graph_stats(&graph, output.as_deref()),
        Command::SpectralDensity { eta, omega_c, beta, omega_max, points, output } => {
            commands::spectral(eta, omega_c, beta, omega_max, points, output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
