//! `bgb`: densities, samplers, moments, hypergeometric series and the
//! verification suites from the command line.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bgb_core::Error;

pub const EXIT_DOMAIN: u8 = 2;
pub const EXIT_NOT_CONVERGED: u8 = 3;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_PARSE: u8 = 65;
pub const EXIT_IO: u8 = 74;

#[derive(Parser, Debug)]
#[command(name = "bgb", version, about = "Bimatrix generalised beta distributions and matrix-argument hypergeometric series")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,

    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand. Flags win over `BGB_*` variables,
/// which win over the defaults.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    #[arg(long, global = true, env = "BGB_SEED", default_value_t = 42)]
    pub seed: u64,

    /// Relative truncation tolerance for series.
    #[arg(long, global = true, env = "BGB_REL_TOL", default_value_t = 1e-10)]
    pub rel_tol: f64,

    /// Degree cap for series. Identity-argument series (moments, `mhg
    /// --identity`) use a larger built-in budget unless this is given.
    #[arg(long, global = true, env = "BGB_MAX_DEGREE")]
    pub max_degree: Option<usize>,

    /// Worker threads for sampling and Monte Carlo checks.
    #[arg(long, global = true, env = "BGB_THREADS", default_value_t = 1)]
    pub threads: usize,

    #[arg(long, global = true, env = "BGB_FORMAT", value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Log-density at a point.
    Density(DensityArgs),
    /// Draw pairs and write one record per draw.
    Sample(SampleArgs),
    /// Evaluate a hypergeometric function of a matrix argument.
    Mhg(MhgArgs),
    /// Determinant moments of a type I pair.
    Moment(MomentArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityFamily {
    Gamma,
    Beta1,
    Beta2,
    Bgb1,
    Bgb2,
    ProductZ,
    InversePair,
}

#[derive(Args, Debug)]
pub struct ShapeArgs {
    /// Dimension; inferred from the inputs when omitted.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[arg(value_enum)]
    pub family: DensityFamily,
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// Scalar value of the first (or only) argument; implies m = 1.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "first")]
    pub u1: Option<f64>,
    /// Scalar value of the second argument; implies m = 1.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "second")]
    pub u2: Option<f64>,
    /// JSON array-of-rows file for the first (or only) argument.
    #[arg(long)]
    pub first: Option<PathBuf>,
    /// JSON array-of-rows file for the second argument.
    #[arg(long)]
    pub second: Option<PathBuf>,
    /// Scale matrix file for the gamma family (identity when omitted).
    #[arg(long)]
    pub theta: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleFamily {
    Bgb1,
    Bgb2,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(value_enum)]
    pub family: SampleFamily,
    #[arg(long)]
    pub m: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long)]
    pub n: usize,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MhgArgs {
    /// Upper parameters, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub upper: Vec<f64>,
    /// Lower parameters, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lower: Vec<f64>,
    /// Eigenvalues of the argument, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["matrix", "identity"])]
    pub eigenvalues: Option<Vec<f64>>,
    /// JSON array-of-rows file holding the argument.
    #[arg(long, conflicts_with = "identity")]
    pub matrix: Option<PathBuf>,
    /// Evaluate at the identity of dimension `--m`.
    #[arg(long, requires = "m")]
    pub identity: bool,
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentKind {
    /// `E(|U₁|ʳ|U₂|ˢ)`.
    UMoment,
    /// `E(|Z|ʳ)` for `Z = U₂^{1/2} U₁ U₂^{1/2}`.
    ZMoment,
}

#[derive(Args, Debug)]
pub struct MomentArgs {
    #[arg(value_enum)]
    pub kind: MomentKind,
    #[arg(long)]
    pub m: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub r: f64,
    /// Only used by `u-moment`.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub s: f64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// One of constants, zonal, mhg, densities, moments, lemma1, all.
    pub suite: String,
    /// Monte Carlo draws per stochastic check.
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
}

/// A command failure: exit code, message for stderr and optional stdout body.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    pub stdout: Option<String>,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into(), stdout: None }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(EXIT_USAGE, message)
    }

    pub fn with_stdout(mut self, body: String) -> Self {
        self.stdout = Some(body);
        self
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, hint) = match e {
            Error::NotConverged { .. } => (EXIT_NOT_CONVERGED, "; raise --max-degree or loosen --rel-tol"),
            Error::DivergentSeries | Error::NoConvergence { .. } => (EXIT_NOT_CONVERGED, ""),
            Error::Parse(_) => (EXIT_PARSE, ""),
            _ => (EXIT_DOMAIN, ""),
        };
        Failure::new(code, format!("{e}{hint}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Density(args) => commands::density(&cli.config, args),
        Command::Sample(args) => commands::sample(&cli.config, args),
        Command::Mhg(args) => commands::mhg(&cli.config, args),
        Command::Moment(args) => commands::moment(&cli.config, args),
        Command::Verify(args) => commands::verify(&cli.config, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(body) = &f.stdout {
                if io::write_stdout(body).is_err() {
                    return ExitCode::from(EXIT_IO);
                }
            }
            eprintln!("bgb: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
