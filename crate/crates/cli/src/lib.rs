//! Command-line frontend: configuration loading, the four subcommands and
//! their plot-ready outputs.

pub mod commands;
pub mod config;
pub mod error;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use trendskew::stats::SkewEstimator;

pub use error::{CliError, ConfigError};

#[derive(Debug, Parser)]
#[command(name = "trendskew", version, about = "Trend-following and short-volatility backtests with Sharpe/skewness statistics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the volatility-targeted trend strategy on every configured series.
    Trend(CommonArgs),
    /// Sweep short hedged strangles over maturities and markets, then fit SR = a - b * skew.
    Strangle(CommonArgs),
    /// Fit SR = a - b * skew to a CSV of externally computed statistics.
    Regress(CommonArgs),
    /// Write a synthetic price series as CSV.
    Synth(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Overrides the config's global seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// pearson | l-moment | third-moment
    #[arg(long)]
    pub skew_estimator: Option<SkewEstimator>,
}

/// Runs a parsed command and returns what it prints on standard output.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Trend(a) => commands::cmd_trend(a),
        Command::Strangle(a) => commands::cmd_strangle(a),
        Command::Regress(a) => commands::cmd_regress(a),
        Command::Synth(a) => commands::cmd_synth(a),
    }
}
