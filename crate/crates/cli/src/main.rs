mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use copx_core::CopxError;

use commands::Outcome;

/// Exact verification of combinatorial optimality via normal cones.
#[derive(Parser, Debug)]
#[command(name = "copx", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Worker threads; output never depends on this.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Where reports, counterexamples and error files are written.
    #[arg(long, global = true, env = "COPX_RESULTS_DIR", default_value = "results")]
    pub results_dir: PathBuf,
    /// Largest n for the full {-1,0,1}^n lattice.
    #[arg(long, global = true, default_value_t = 14, value_parser = clap::value_parser!(u64).range(1..))]
    pub full_cap: u64,
    /// Largest n for cube and shifted-cube lattices.
    #[arg(long, global = true, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub cube_cap: u64,
    /// Largest dimension handed to the hull oracle.
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    pub hull_cap: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Decide optimality of vertices for a weight vector.
    Certify(CertifyArgs),
    /// Synthesize a facet description and compare it with the hull oracle.
    Facets(FacetsArgs),
    /// Run a verification suite over instance files.
    Verify(VerifyArgs),
    /// Convert between vertex and inequality descriptions.
    Oracle(OracleArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum FamilyArg {
    SpanningTrees,
    KSubsets,
    PerfectMatchings,
    Tsp,
    Explicit,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// `triangle`, `k<m>` or an edge list such as `0-1,1-2,0-2`.
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long)]
    pub cities: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Explicit vertices as 0/1 strings, e.g. `011,110,101`.
    #[arg(long)]
    pub points: Option<String>,
    /// Output path (default: <results-dir>/instance.json).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Weights file (copx-weights-v1).
    #[arg(long, conflicts_with = "c")]
    pub weights: Option<PathBuf>,
    /// Inline weights, e.g. `0,1,-1/2`.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long, conflicts_with = "all")]
    pub vertex: Option<usize>,
    #[arg(long)]
    pub all: bool,
    /// nonneg, signed-support or general.
    #[arg(long, default_value = "general")]
    pub regime: String,
    /// Run this many seeded random weight vectors instead.
    #[arg(long, conflicts_with_all = ["weights", "c", "vertex"])]
    pub random: Option<usize>,
}

#[derive(Args, Debug)]
pub struct FacetsArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// V or H.
    #[arg(long, default_value = "V")]
    pub variant: String,
    /// literal or irreducible.
    #[arg(long, default_value = "irreducible")]
    pub mode: String,
    /// Also test each row for necessity.
    #[arg(long)]
    pub audit: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub instances: Vec<PathBuf>,
    /// default, regions, shift, trials or facets.
    #[arg(long, default_value = "default")]
    pub suite: String,
    /// Random weight vectors per instance and regime.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Direction {
    V2h,
    H2v,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long, value_enum)]
    pub direction: Direction,
    /// Instance or vertex-list JSON for v2h, inequality JSON for h2v.
    #[arg(long)]
    pub input: PathBuf,
    /// Intersect with the unit box before enumerating vertices.
    #[arg(long = "box")]
    pub unit_box: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            if code != 0 {
                let dir = std::env::var_os("COPX_RESULTS_DIR").map(PathBuf::from).unwrap_or_else(|| "results".into());
                commands::write_error(&dir, "usage", 2, &e.kind().to_string());
                return ExitCode::from(2);
            }
            return ExitCode::SUCCESS;
        }
    };
    let g = cli.global.clone();
    let (name, result) = match &cli.command {
        Command::Gen(a) => ("gen", commands::gen(&g, a)),
        Command::Certify(a) => ("certify", commands::certify(&g, a)),
        Command::Facets(a) => ("facets", commands::facets(&g, a)),
        Command::Verify(a) => ("verify", commands::verify(&g, a)),
        Command::Oracle(a) => ("oracle", commands::oracle(&g, a)),
    };
    let code = match result {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Fail { code, message }) => {
            eprintln!("{name}: {message}");
            commands::write_error(&g.results_dir, name, code, &message);
            code
        }
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("{name}: {e}");
            commands::write_error(&g.results_dir, name, code, &e.to_string());
            code
        }
    };
    ExitCode::from(code)
}

fn exit_code(e: &CopxError) -> u8 {
    match e {
        CopxError::SizeCap { .. } | CopxError::Unbounded { .. } => 4,
        CopxError::CertificateInvalid(_) => 3,
        _ => 2,
    }
}
