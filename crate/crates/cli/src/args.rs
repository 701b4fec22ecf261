use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ctl",
    version,
    about = "Tail dependence of Archimedean copulas: closed forms, numeric limits and simulation",
    after_help = "Family specs: clayton:theta=2, gumbel:theta=2, frank:theta=1, joeb5:theta=2,\n\
                  negbin:theta=0.3,alpha=1, logsv, testfn:exp-t2\n\n\
                  Environment: CTL_UGRID_MIN sets the smallest u of the default u grid,\n\
                  CTL_TGRID_MAX the largest t of the default t grid."
)]
pub struct Cli {
    /// Output style: human summary (6 significant digits) or JSON report.
    #[arg(long, value_enum, default_value_t = OutputFormat::Human, global = true)]
    pub format: OutputFormat,

    /// Exit with code 4 when an estimate fails to converge or a classification is inconclusive.
    #[arg(long, global = true)]
    pub strict: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate C(u) and log C(u).
    Eval(EvalArgs),
    /// Tail order, tail dependence and tau: theory against numeric limits.
    Tail(TailArgs),
    /// Classify the tail regime of the generator numerically.
    Classify(FamilyArg),
    /// Complete monotonicity, gamma-class, self-neglect and slow-variation checks.
    Check(CheckArgs),
    /// Simulate a batch through the scale mixture.
    Sample(SampleArgs),
    /// Empirical tail estimates from a batch file.
    Empirical(EmpiricalArgs),
    /// CSV of (u, C(u w), C(u w) / u^k) along a ray, for plotting.
    Grid(GridArgs),
}

#[derive(Debug, Args)]
pub struct FamilyArg {
    /// Family spec, e.g. `gumbel:theta=2`.
    pub family: String,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub family: String,

    /// Point in (0, 1]^d, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    pub u: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct GridOverrides {
    /// Smallest u of the u grid (overrides CTL_UGRID_MIN).
    #[arg(long)]
    pub u_min: Option<f64>,

    /// Largest t of the t grid (overrides CTL_TGRID_MAX).
    #[arg(long)]
    pub t_max: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TailArgs {
    pub family: String,

    #[arg(long, default_value_t = 2)]
    pub d: usize,

    /// Weights, comma separated; defaults to all ones.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub w: Option<Vec<f64>>,

    /// Closed-form profile only (both blocks when neither flag is given).
    #[arg(long)]
    pub theory: bool,

    /// Numeric estimates only.
    #[arg(long)]
    pub estimate: bool,

    #[command(flatten)]
    pub grids: GridOverrides,

    /// Convergence tolerance for tail order and tail dependence.
    #[arg(long, default_value_t = copula_tail::tail_numeric::LIMIT_TOLERANCE)]
    pub tol: f64,

    /// Convergence tolerance for tau.
    #[arg(long, default_value_t = copula_tail::tail_numeric::TAU_TOLERANCE)]
    pub tau_tol: f64,

    /// Agreement tolerance between theory and numerics
    /// [default: 1e-3, or 1e-2 for slowly varying generators].
    #[arg(long)]
    pub agree_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub family: String,

    /// Check complete monotonicity up to this derivative order.
    #[arg(long)]
    pub cm_order: Option<usize>,

    /// Gamma-class check with the declared (or hazard) auxiliary scale.
    #[arg(long)]
    pub gamma: bool,

    /// Self-neglect check of the auxiliary scale.
    #[arg(long)]
    pub self_neglecting: bool,

    /// Rapid variation of the inverse of a slowly varying generator.
    #[arg(long)]
    pub sv_inverse: bool,

    #[arg(long, default_value_t = copula_tail::tail_numeric::LIMIT_TOLERANCE)]
    pub tol: f64,

    #[command(flatten)]
    pub grids: GridOverrides,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FileFormat {
    Csv,
    Binary,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    pub family: String,

    #[arg(long, default_value_t = 2)]
    pub d: usize,

    #[arg(long)]
    pub n: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output file; `.bin` selects the binary format unless --out-format is given.
    #[arg(long)]
    pub out: PathBuf,

    #[arg(long, value_enum)]
    pub out_format: Option<FileFormat>,

    /// Write the mixture X = E / V instead of the copula sample U.
    #[arg(long)]
    pub mixture: bool,
}

#[derive(Debug, Args)]
pub struct EmpiricalArgs {
    /// Batch file (CSV or binary).
    #[arg(long = "in")]
    pub input: PathBuf,

    /// Scale u for P(U_i <= u w_i for all i).
    #[arg(long)]
    pub u: Option<f64>,

    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub w: Option<Vec<f64>>,

    /// Grid for C_n(u 1) / u, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub u_grid: Option<Vec<f64>>,

    /// Family to compare against the exact copula.
    #[arg(long)]
    pub family: Option<String>,

    /// Agreement bound in binomial standard errors.
    #[arg(long, default_value_t = 3.0)]
    pub sigma: f64,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    pub family: String,

    #[arg(long, default_value_t = 2)]
    pub d: usize,

    /// Direction w of the ray u -> u w; defaults to all ones.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub w_ray: Option<Vec<f64>>,

    /// `min,max[,points]` of the geometric u range.
    #[arg(long, value_delimiter = ',')]
    pub u_range: Option<Vec<f64>>,

    /// Exponent k of the normalization u^k; defaults to the tail order.
    #[arg(long)]
    pub k: Option<f64>,

    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
