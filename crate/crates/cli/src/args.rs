use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "puncture-metric",
    version,
    about = "Kobayashi-Royden metric asymptotics near a puncture"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Floating precision for evaluation.
    #[arg(
        long,
        global = true,
        value_enum,
        env = "PUNCTURE_METRIC_PRECISION",
        default_value = "double"
    )]
    pub precision: Precision,

    /// Output format (default: json, or human for verify).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Covering coefficients c, b, l as exact rationals.
    Coeffs(CoeffsArgs),
    /// Metric chi(p; v) from the expansion, with the direct value for comparison.
    Metric(MetricArgs),
    /// Picard maximal-radius bound R(p).
    Radius(RadiusArgs),
    /// Run the invariant suite on built-in or supplied data.
    Verify(VerifyArgs),
    /// Print a built-in dataset, or list them.
    Example(ExampleArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    Double,
    Extended,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuiltIn {
    Lambda,
    Gamma3,
}

/// Where covering data comes from. At most one of the groups may be given.
#[derive(Args, Debug, Clone, Default)]
pub struct SourceArgs {
    /// Built-in dataset.
    #[arg(long, value_enum, conflicts_with_all = ["coeffs_file", "level", "c"])]
    pub example: Option<BuiltIn>,

    /// JSON file written by `coeffs` or `example`.
    #[arg(long, conflicts_with_all = ["level", "c"])]
    pub coeffs_file: Option<PathBuf>,

    /// Level N in {2,3,4,5}: solve c_3.. from c_1, c_2.
    #[arg(long = "N", requires_all = ["c1", "c2"], conflicts_with = "c")]
    pub level: Option<u32>,

    #[arg(long, allow_hyphen_values = true, requires = "level")]
    pub c1: Option<String>,

    #[arg(long, allow_hyphen_values = true, requires = "level")]
    pub c2: Option<String>,

    /// User-supplied c_1,c_2,... (comma separated rationals).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub c: Option<Vec<String>>,

    /// Scale k of q_k for user-supplied coefficients.
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub scale_k: String,

    /// Number of c coefficients to solve for (built-ins and --N).
    #[arg(long, default_value_t = 10)]
    pub order: usize,
}

#[derive(Args, Debug)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub source: SourceArgs,
}

#[derive(Args, Debug)]
pub struct PointArgs {
    /// Real part of p.
    #[arg(long, allow_hyphen_values = true)]
    pub re: Option<String>,

    /// Imaginary part of p.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub im: String,

    /// Truncation order M.
    #[arg(long = "M")]
    pub m: Option<usize>,
}

#[derive(Args, Debug)]
pub struct MetricArgs {
    #[command(flatten)]
    pub source: SourceArgs,

    #[command(flatten)]
    pub point: PointArgs,

    /// Norm of the tangent vector v.
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub v_norm: String,

    /// Evaluate a 16 x 16 polar grid on the annulus 1e-4 <= |p| <= 1e-2.
    #[arg(long, conflicts_with = "re")]
    pub grid: bool,
}

#[derive(Args, Debug)]
pub struct RadiusArgs {
    #[command(flatten)]
    pub source: SourceArgs,

    #[command(flatten)]
    pub point: PointArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: SourceArgs,
}

#[derive(Args, Debug)]
pub struct ExampleArgs {
    /// Dataset to print; omit to list.
    #[arg(value_enum)]
    pub name: Option<BuiltIn>,

    #[arg(long, default_value_t = 10)]
    pub order: usize,
}
