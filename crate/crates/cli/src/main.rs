//! Batch front end: builds family members, runs the verification battery,
//! and exposes single-graph analyses (spectrum, mixing, density) over the
//! on-disk edge-list formats.
//!
//! Exit codes: 0 success, 1 configuration error, 2 failed mathematical
//! check, 3 I/O or parse error. Clap's own exit code for bad flags would
//! collide with the math-check code, so parse errors are remapped in main.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "planegap", version, about = "Spectral gap experiments on bounded-degree triangulations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Build family members and write graph, triangulation and report files.
    Gen(GenArgs),
    /// Run the verification battery over generated artifacts or control graphs.
    Verify(VerifyArgs),
    /// Second-smallest Laplacian eigenvalue of one graph file.
    Spectrum(SpectrumArgs),
    /// Lazy random walk mixing time of one graph file.
    Mixing(MixingArgs),
    /// Distance density of a rooted graph file.
    Density(DensityArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Dense below the size cutoff, iterative above it.
    Auto,
    /// Full symmetric eigendecomposition; size-capped (PLANEGAP_DENSE_CAP).
    Dense,
    /// Deflated power iteration on a shifted Laplacian.
    Iterative,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    /// Maximize total-variation distance over every start vertex.
    #[value(name = "worst_exact")]
    WorstExact,
    /// Start from --starts plus a double-sweep diametral endpoint.
    #[value(name = "heuristic")]
    Heuristic,
}

#[derive(Args)]
pub struct GenArgs {
    /// Comma-separated base orders; each must be even and at least 4.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Subdivision exponent: base edges are split into n^alpha unit edges.
    #[arg(long, default_value_t = 1)]
    pub alpha: u32,
    /// Certification threshold for the base expander's spectral gap.
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Master seed; every random choice derives from it.
    #[arg(long)]
    pub seed: u64,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Directory holding artifacts written by gen.
    #[arg(long = "in")]
    pub in_dir: Option<PathBuf>,
    /// Base orders of the family members to verify (with --in).
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Control graphs (plain edge lists) to verify instead of a family.
    #[arg(long, value_delimiter = ',')]
    pub graphs: Vec<PathBuf>,
    /// Relative tolerance when re-checking eigenvalues recorded in reports.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SpectrumArgs {
    /// Graph file; rooted and triangulation trailers are accepted.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    /// Iterative solver tolerance.
    #[arg(long, default_value_t = planegap::spectral::DEFAULT_TOL)]
    pub tol: f64,
    /// Seed for the iterative solver's start vector.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct MixingArgs {
    /// Graph file; rooted and triangulation trailers are accepted.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Policy::WorstExact)]
    pub policy: Policy,
    /// Extra start vertices for the heuristic policy.
    #[arg(long, value_delimiter = ',')]
    pub starts: Vec<usize>,
    /// json: full mixing record; csv: the total-variation curve.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct DensityArgs {
    /// Rooted graph file, or a plain edge list together with --root.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Root vertex; overrides any root recorded in the file.
    #[arg(long)]
    pub root: Option<usize>,
    /// csv: one row per constant piece; json: pieces, jumps and integral.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Gen(args) => commands::gen(&args),
        Command::Verify(args) => commands::verify(&args),
        Command::Spectrum(args) => commands::spectrum(&args),
        Command::Mixing(args) => commands::mixing(&args),
        Command::Density(args) => commands::density(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("planegap: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
