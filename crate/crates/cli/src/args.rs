use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const CATALOG_ENV: &str = "XBUDGET_CATALOG";
pub const DEFAULT_EPSILON: f64 = 1e-5;
/// Default exchange strength `J/ħ` for Monte Carlo runs: 2π × 1 GHz.
pub const DEFAULT_J_RAD_S: f64 = 2.0 * std::f64::consts::PI * 1e9;
/// Upper band edge assumed for ad-hoc technologies given only by flags.
pub const DEFAULT_BW_HIGH_HZ: f64 = 1e12;

#[derive(Debug, Parser)]
#[command(
    name = "xbudget",
    version,
    about = "Exchange-gate error budgets and feasibility analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Feasible gate-time window for a platform, technology and threshold.
    Feasibility(FeasibilityArgs),
    /// Closed-form error of a single SWAP^alpha gate.
    Gate(GateArgs),
    /// Monte Carlo infidelity estimate.
    Mc(McArgs),
    /// Monte Carlo estimates along one parameter axis.
    Sweep(SweepArgs),
    /// List built-in and user technologies.
    Catalog(CatalogArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args, Clone)]
pub struct CatalogSource {
    /// Extra catalog file (TOML spec document) merged into the built-ins.
    #[arg(long = "catalog", value_name = "FILE", env = CATALOG_ENV)]
    pub catalog: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FeasibilityArgs {
    /// Built-in platform name [default: si-spin, or the spec file's platform].
    #[arg(long)]
    pub platform: Option<String>,
    /// Override platform T2 (seconds).
    #[arg(long, value_name = "SECONDS")]
    pub t2: Option<f64>,
    /// Override platform logarithmic sensitivity (dJ/dE)(E/J).
    #[arg(long)]
    pub sensitivity: Option<f64>,
    /// Technology name from the catalog.
    #[arg(long)]
    pub tech: Option<String>,
    /// Relative amplitude noise (overrides the technology's value).
    #[arg(long)]
    pub sigma_a: Option<f64>,
    /// Timing jitter in seconds (overrides the technology's value).
    #[arg(long, value_name = "SECONDS")]
    pub sigma_t: Option<f64>,
    #[arg(long, value_name = "HZ")]
    pub bw_low: Option<f64>,
    #[arg(long, value_name = "HZ")]
    pub bw_high: Option<f64>,
    /// Fault-tolerance threshold [default: 1e-5].
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Spec document supplying platform, technology and/or threshold.
    #[arg(long, value_name = "FILE")]
    pub spec: Option<PathBuf>,
    #[command(flatten)]
    pub catalog: CatalogSource,
    /// Require the technology bandwidth to cover 1/T.
    #[arg(long)]
    pub strict_bandwidth: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write feasibility.txt, feasibility.json and a manifest here.
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GateArgs {
    /// SWAP exponent of the target gate.
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Absolute phase error Δθ (radians).
    #[arg(long, conflicts_with_all = ["dj", "dt"], allow_hyphen_values = true)]
    pub phase_error: Option<f64>,
    /// Relative exchange error δJ/J.
    #[arg(long, allow_hyphen_values = true)]
    pub dj: Option<f64>,
    /// Relative duration error δT/T.
    #[arg(long, allow_hyphen_values = true)]
    pub dt: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args, Clone)]
pub struct McParams {
    /// SWAP exponent of the target gate.
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Nominal exchange J/ħ in rad/s.
    #[arg(long, value_name = "RAD_PER_S", default_value_t = DEFAULT_J_RAD_S)]
    pub j_rad_s: f64,
    /// Nominal duration; defaults to the value realizing SWAP^alpha.
    #[arg(long, value_name = "SECONDS")]
    pub duration: Option<f64>,
    /// Take sigma_a/sigma_t from a catalog technology.
    #[arg(long)]
    pub tech: Option<String>,
    /// Relative control-field amplitude noise.
    #[arg(long)]
    pub sigma_a: Option<f64>,
    /// Timing jitter, seconds.
    #[arg(long, value_name = "SECONDS")]
    pub sigma_t: Option<f64>,
    #[arg(long, default_value = "gaussian")]
    pub distribution: String,
    /// Dephasing time applied to both qubits (omit for none).
    #[arg(long, value_name = "SECONDS")]
    pub t2: Option<f64>,
    /// Logarithmic sensitivity mapping field noise to exchange noise.
    #[arg(long, default_value_t = 1.0)]
    pub sensitivity: f64,
    /// Number of samples.
    #[arg(long, default_value_t = 100_000)]
    pub n: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// resample (redraw up to 100 times) or discard.
    #[arg(long, default_value = "resample")]
    pub reject_policy: String,
    #[command(flatten)]
    pub catalog: CatalogSource,
    /// CSV output path; a manifest is written next to it.
    #[arg(long, short, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub params: McParams,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// sigma_a | sigma_t | t2 | target_alpha | epsilon
    #[arg(long)]
    pub axis: String,
    /// Comma-separated values, e.g. 1e-4,1e-3,1e-2.
    #[arg(long)]
    pub values: String,
    #[command(flatten)]
    pub params: McParams,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// Extra technologies to merge (TOML spec document).
    #[arg(long, value_name = "FILE")]
    pub file: Option<PathBuf>,
    /// Default user catalog.
    #[arg(long = "catalog", value_name = "FILE", env = CATALOG_ENV, hide = true)]
    pub env_catalog: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}
