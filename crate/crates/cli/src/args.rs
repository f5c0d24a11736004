//! Flag definitions. Every command struct doubles as the body of a JSON
//! config file; values given on the command line win over the file.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::CliError;

pub const CONFIG_SCHEMA: u64 = 1;

#[derive(Parser, Debug)]
#[command(name = "radialwave", version, about = "Exact solutions and simulations of the radial semilinear wave equation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List catalog families matching the given parameters
    #[command(allow_negative_numbers = true)]
    Catalog(CatalogArgs),
    /// Run verification suites and emit a JSON report
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
    /// Evolve a catalog member or initial-data file
    #[command(allow_negative_numbers = true)]
    Simulate(SimulateArgs),
    /// Error against a catalog member at several resolutions
    #[command(allow_negative_numbers = true)]
    Convergence(ConvergenceArgs),
    /// Simulate into blow-up and fit the rate at the axis
    #[command(allow_negative_numbers = true)]
    Blowup(BlowupArgs),
    /// Rebuild a solution on a grid from a closed-form (G, H) pair
    #[command(allow_negative_numbers = true)]
    Reconstruct(ReconstructArgs),
}

pub trait Merge {
    /// Fills every unset field of `self` from `file`.
    fn merge(self, file: Self) -> Self;
}

macro_rules! merge_impl {
    ($ty:ident { $($f:ident),* $(,)? } $(; nested $($g:ident),*)?) => {
        impl Merge for $ty {
            fn merge(self, file: Self) -> Self {
                $ty {
                    $($f: self.$f.or(file.$f),)*
                    $($($g: self.$g.merge(file.$g),)*)?
                }
            }
        }
    };
}

#[derive(Args, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct CatalogArgs {
    /// Spatial dimension
    #[arg(long)]
    pub n: Option<u32>,
    /// Power of the nonlinearity
    #[arg(long)]
    pub q: Option<f64>,
    /// Named special power: critical, conformal, inverse-dilation, static-line, minus-three
    #[arg(long)]
    pub power: Option<String>,
    /// Sign of the nonlinear term, 1 or -1
    #[arg(long)]
    pub k: Option<f64>,
    /// Also list the misprinted static conformal form
    #[arg(long)]
    #[serde(default)]
    pub include_erratum: bool,
    /// Emit JSON instead of a text table
    #[arg(long)]
    #[serde(default)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScopeArg {
    Pde,
    Foliation,
    Algebra,
    Potentials,
    Reductions,
    All,
}

#[derive(Args, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub scope: Option<ScopeArg>,
    /// Restrict to one dimension
    #[arg(long)]
    pub n: Option<u32>,
    /// Restrict the catalog checks to one family
    #[arg(long)]
    pub family: Option<String>,
    /// Seed for sampled points
    #[arg(long)]
    pub seed: Option<u64>,
    /// Interior points per catalog instance
    #[arg(long)]
    pub points: Option<usize>,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON config file
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}
merge_impl!(VerifyArgs { scope, n, family, seed, points, out, config });

/// Selects a catalog member and the equation it solves.
#[derive(Args, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct ModelArgs {
    /// Catalog family, e.g. U8
    #[arg(long)]
    pub family: Option<String>,
    /// Spatial dimension [default: 3]
    #[arg(long)]
    pub n: Option<u32>,
    /// Power of the nonlinearity; defaults to the family's special power
    #[arg(long)]
    pub q: Option<f64>,
    /// Named special power instead of --q
    #[arg(long)]
    pub power: Option<String>,
    /// Sign of the nonlinear term, 1 or -1
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long = "c-tilde")]
    pub c_tilde: Option<f64>,
    /// Branch sign, + or -
    #[arg(long)]
    pub branch: Option<String>,
    /// Second branch sign where the family has one
    #[arg(long)]
    pub branch2: Option<String>,
    /// Time translation of the member
    #[arg(long = "t-shift")]
    pub t_shift: Option<f64>,
}
merge_impl!(ModelArgs { family, n, q, power, k, c, c_tilde, branch, branch2, t_shift });

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryArg {
    Dirichlet,
    Sommerfeld,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeArg {
    Central,
    Upwind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NonlinearityArg {
    Power,
    SignPreserving,
    Off,
}

/// Time window and discretization shared by the simulation commands.
#[derive(Args, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct RunArgs {
    #[arg(long)]
    pub t0: Option<f64>,
    #[arg(long)]
    pub tend: Option<f64>,
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long)]
    pub cfl: Option<f64>,
    #[arg(long, value_enum)]
    pub boundary: Option<BoundaryArg>,
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
    #[arg(long, value_enum)]
    pub nonlinearity: Option<NonlinearityArg>,
    /// Raise values below this before taking a non-integer power
    #[arg(long)]
    pub floor: Option<f64>,
    /// Energy and snapshot output every this many steps; 0 disables both
    #[arg(long)]
    pub stride: Option<usize>,
    /// Blow-up is declared once max|u| exceeds this
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Initial-data CSV to evolve instead of a catalog member
    #[arg(long)]
    pub init: Option<PathBuf>,
}
merge_impl!(RunArgs { t0, tend, rmax, cfl, boundary, scheme, nonlinearity, floor, stride, threshold, init });

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    Completed,
    Blowup,
    Any,
}

#[derive(Args, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(default)]
    pub model: ModelArgs,
    #[command(flatten)]
    #[serde(default)]
    pub run: RunArgs,
    /// Number of radial intervals
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub grid: Option<usize>,
    /// Outcome that counts as success [default: completed]
    #[arg(long, value_enum)]
    pub expect: Option<Expectation>,
    /// Directory for the CSV outputs and summary
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}
merge_impl!(SimulateArgs { grid, expect, out, config }; nested model, run);

#[derive(Args, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    #[serde(default)]
    pub model: ModelArgs,
    #[command(flatten)]
    #[serde(default)]
    pub run: RunArgs,
    /// Comma-separated resolutions [default: 100,200,400]
    #[arg(long = "N", value_delimiter = ',')]
    #[serde(rename = "N")]
    pub grids: Option<Vec<usize>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}
merge_impl!(ConvergenceArgs { grids, out, config }; nested model, run);

#[derive(Args, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct BlowupArgs {
    #[command(flatten)]
    #[serde(default)]
    pub model: ModelArgs,
    #[command(flatten)]
    #[serde(default)]
    pub run: RunArgs,
    /// Number of radial intervals [default: 800]
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub grid: Option<usize>,
    /// Fraction of the run before blow-up used in the fit [default: 0.1]
    #[arg(long)]
    pub fraction: Option<f64>,
    /// Samples dropped just before blow-up [default: 3]
    #[arg(long = "exclude-last")]
    pub exclude_last: Option<usize>,
    /// Allowed deviation of the exponent from the reference [default: 0.05]
    #[arg(long = "exponent-tol")]
    pub exponent_tol: Option<f64>,
    /// Allowed relative error of the blow-up time [default: 0.05]
    #[arg(long = "time-tol")]
    pub time_tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}
merge_impl!(BlowupArgs { grid, fraction, exclude_last, exponent_tol, time_tol, out, config }; nested model, run);

#[derive(Args, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct ReconstructArgs {
    /// Closed-form (G, H) pair, e.g. S1 or C1
    #[arg(long)]
    pub gh: Option<String>,
    /// Chart to integrate in; defaults to the pair's own chart
    #[arg(long)]
    pub chart: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub power: Option<String>,
    #[arg(long)]
    pub k: Option<f64>,
    /// Branch sign of the pair, + or -
    #[arg(long)]
    pub branch: Option<String>,
    /// Seed point as t,r
    #[arg(long = "seed-point", value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(rename = "seed_point")]
    pub seed_point: Option<Vec<f64>>,
    /// Value of u at the seed point
    #[arg(long)]
    pub constant: Option<f64>,
    /// Time interval as a,b
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub t: Option<Vec<f64>>,
    /// Radial interval as a,b
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub r: Option<Vec<f64>>,
    /// Grid points along t [default: 16]
    #[arg(long)]
    pub nt: Option<usize>,
    /// Grid points along r [default: 16]
    #[arg(long)]
    pub nr: Option<usize>,
    /// CSV of t,r,u; stdout carries the summary either way
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}
merge_impl!(ReconstructArgs { gh, chart, n, q, power, k, branch, seed_point, constant, t, r, nt, nr, out, config });

/// Reads a versioned config file. The `schema` key must be present and equal
/// to [`CONFIG_SCHEMA`]; every other key must belong to the command.
pub fn load_config<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let bad = |m: String| CliError::Config(format!("{}: {m}", path.display()));
    let mut value: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let obj = value.as_object_mut().ok_or_else(|| bad("config must be a JSON object".into()))?;
    match obj.remove("schema") {
        Some(serde_json::Value::Number(v)) if v.as_u64() == Some(CONFIG_SCHEMA) => {}
        Some(v) => return Err(bad(format!("unsupported schema {v}, expected {CONFIG_SCHEMA}"))),
        None => return Err(bad("missing \"schema\" key".into())),
    }
    serde_json::from_value(value).map_err(|e| bad(e.to_string()))
}

/// Merges flags over the config file named by `config`, if any.
pub fn with_config<T: Merge + DeserializeOwned>(flags: T, config: Option<&Path>) -> Result<T, CliError> {
    match config {
        Some(path) => Ok(flags.merge(load_config(path)?)),
        None => Ok(flags),
    }
}
