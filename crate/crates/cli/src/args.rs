//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "exceedance", version, about = "Exceedance clusters of extremes: estimate, simulate, compare with limits")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Seed for every random draw (bootstrap multipliers, simulation, Monte Carlo).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; `simulate` defaults to csv, the others to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Leave the generation time out of JSON reports.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cluster statistics with bootstrap intervals for a CSV series.
    Analyze(AnalyzeArgs),
    /// Simulate a model path and write it as CSV.
    Simulate(SimulateArgs),
    /// Limit distributions and diagnostics from the tail process.
    Limits(LimitsArgs),
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "value")]
    pub value_col: String,
    /// Consecutive rows with equal values here form one segment.
    #[arg(long, conflicts_with = "djfm_date_col")]
    pub segment_col: Option<String>,
    /// Keep December-March rows and split them into winter seasons by this YYYY-MM-DD column.
    #[arg(long)]
    pub djfm_date_col: Option<String>,
    /// Threshold as an empirical quantile level; repeatable.
    #[arg(long)]
    pub quantile: Vec<f64>,
    /// Absolute threshold; repeatable.
    #[arg(long)]
    pub threshold: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    pub l_max: usize,
    /// Ordinal-pattern length; repeatable.
    #[arg(long)]
    pub pattern_len: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub extremogram_max: usize,
    /// Multiplier bootstrap replicates; 0 disables intervals.
    #[arg(long, default_value_t = 1000)]
    pub bootstrap_reps: usize,
    /// `segments` or a fixed block length N. Defaults to segments when the
    /// input has several, else to 50 fixed blocks.
    #[arg(long)]
    pub block: Option<String>,
    #[arg(long, default_value_t = 0.95)]
    pub ci_level: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Mar,
    MovingMax,
    BrownResnick,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    /// MAR coefficient in [0, 1).
    #[arg(long)]
    pub a: Option<f64>,
    /// Brown-Resnick variogram scale C in γ(h) = C|h|^β.
    #[arg(long, default_value_t = 0.1)]
    pub scale: f64,
    /// Brown-Resnick variogram exponent β.
    #[arg(long, default_value_t = 1.75)]
    pub exponent: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub n: usize,
    /// Brown-Resnick block length; each block is an independent segment.
    #[arg(long, default_value_t = 500)]
    pub block: usize,
}

#[derive(Debug, Clone, Args)]
pub struct LimitsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 100_000)]
    pub n_mc: usize,
    #[arg(long, default_value_t = 5)]
    pub l_max: usize,
    /// Ordinal-pattern length; repeatable.
    #[arg(long)]
    pub pattern_len: Vec<usize>,
    /// Asymptotic covariance of the cluster-size estimators.
    #[arg(long)]
    pub covariance: bool,
    /// Lag truncation for the covariance series; chosen adaptively when absent.
    #[arg(long)]
    pub h_trunc: Option<usize>,
    /// Mixing and anticlustering diagnostics (Brown-Resnick only).
    #[arg(long)]
    pub mixing_diagnostics: bool,
    /// Inclusive lag range such as `0..10`.
    #[arg(long, value_parser = parse_range)]
    pub extremal_coefficients: Option<(i64, i64)>,
}

/// Parses `a..b`, `a..=b` (both inclusive) or a single lag.
pub fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let parse = |v: &str| v.trim().parse::<i64>().map_err(|e| format!("bad lag {v:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if hi < lo {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}
