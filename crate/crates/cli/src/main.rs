//! `coarsekit`: command-line front end.

mod commands;
mod input;
mod manifest;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "coarsekit", version, about = "Coarse-geometry diagnostics for subgroups of free groups")]
struct Cli {
    /// Directory receiving the artifacts.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate a ball in a Cayley graph.
    Ball(BallArgs),
    /// Core graph, membership, height, width and malnormality of a subgroup.
    Subgroup(SubgroupArgs),
    /// Coset joins in a free-group ball.
    Pattern(PatternArgs),
    /// Coset complex, as JSON and as a DOT 1-skeleton.
    Ccx(CcxArgs),
    /// Pairing, induced map q and its quasi-isometry fit.
    Rigidity(RigidityArgs),
    /// Boundary model, limit sets and annular cross-ratios.
    Boundary(BoundaryArgs),
    /// Measured tables for the four pattern axioms.
    Axioms(AxiomsArgs),
    /// End-to-end report for a subgroup paired with itself.
    Report(ReportArgs),
}

/// Which subgroup to work with. Exactly one source is required.
#[derive(Args, Debug, Serialize)]
pub struct SubgroupSpec {
    /// Rank of the ambient free group.
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
    /// Subgroup generator as a word such as "a b^-1"; repeatable.
    #[arg(long = "generator", value_name = "WORD")]
    pub generators: Vec<String>,
    /// Use the kernel of the abelianization map.
    #[arg(long, conflicts_with_all = ["generators", "core"])]
    pub kernel: bool,
    /// Core graph JSON, either bare or as written by `subgroup`.
    #[arg(long, value_name = "FILE", conflicts_with = "generators")]
    pub core: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct BallArgs {
    /// Presentation file; the free group of `--rank` when omitted.
    #[arg(long, value_name = "FILE")]
    pub presentation: Option<PathBuf>,
    /// Rank of the free group used without `--presentation`.
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
    #[arg(long)]
    pub radius: usize,
    /// Largest number of vertices before giving up.
    #[arg(long)]
    pub vertex_cap: Option<usize>,
    /// Also estimate the four-point delta of the ball.
    #[arg(long)]
    pub delta: bool,
    /// Sampled quadruples when the ball is too large for an exhaustive scan.
    #[arg(long, default_value_t = 1_000_000)]
    pub delta_samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct SubgroupArgs {
    #[command(flatten)]
    pub subgroup: SubgroupSpec,
    /// Conjugator radius for height, width and malnormality scans.
    #[arg(long, default_value_t = 4)]
    pub conjugator_radius: usize,
    /// Word to test for membership; repeatable.
    #[arg(long = "contains", value_name = "WORD")]
    pub contains: Vec<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct PatternArgs {
    #[command(flatten)]
    pub subgroup: SubgroupSpec,
    #[arg(long, default_value_t = 6)]
    pub radius: usize,
    /// Far-pair threshold for joins; two thirds of the radius by default.
    #[arg(long)]
    pub threshold: Option<usize>,
    /// Only list cosets with a representative of at most this length.
    #[arg(long)]
    pub window: Option<usize>,
    /// Largest projection diameter between nondegenerate joins.
    #[arg(long)]
    pub projection: bool,
    /// Radii for the discreteness profile, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub profile_radii: Vec<usize>,
    /// Radius N of the basepoint ball in the discreteness profile.
    #[arg(long, default_value_t = 2)]
    pub profile_n: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CcxMode {
    Exact,
    Coarse,
}

#[derive(Args, Debug, Serialize)]
pub struct CcxArgs {
    #[command(flatten)]
    pub subgroup: SubgroupSpec,
    #[arg(long, value_enum, default_value_t = CcxMode::Exact)]
    pub mode: CcxMode,
    /// Cosets with a representative of at most this length are vertices.
    #[arg(long)]
    pub window: Option<usize>,
    /// Ball radius for the coarse builder.
    #[arg(long)]
    pub radius: Option<usize>,
    /// Overlap diameter above which a tuple counts as a simplex.
    #[arg(long)]
    pub threshold: Option<u32>,
    /// Neighbourhood radius for coarse overlaps.
    #[arg(long)]
    pub k: Option<u32>,
    /// Check the pairing induced by left translation by this word.
    #[arg(long, value_name = "WORD")]
    pub translate: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct RigidityArgs {
    #[command(flatten)]
    pub subgroup: SubgroupSpec,
    #[arg(long)]
    pub radius: Option<usize>,
    /// Neighbourhood radius K for q.
    #[arg(long)]
    pub k: Option<u32>,
    /// Pair each join with its left translate by this word.
    #[arg(long, value_name = "WORD")]
    pub translate: Option<String>,
    /// Exchange the images of two members, as "i,j".
    #[arg(long, value_delimiter = ',')]
    pub swap: Option<Vec<usize>>,
    /// Width bound used by q; the subgroup width at `--scan-radius` by default.
    #[arg(long)]
    pub target_width: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub scan_radius: usize,
    /// Member indices whose minimal meeting ball is reported, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub meet: Vec<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct BoundaryArgs {
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Shadow radii generating the annulus system, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub shadows: Vec<u32>,
    /// Radius of the ball whose vertices cast shadows.
    #[arg(long)]
    pub shadow_ball_radius: Option<usize>,
    /// Two closed-set files K and L.
    #[arg(long, num_args = 2, value_names = ["K", "L"])]
    pub crossratio: Option<Vec<PathBuf>>,
    /// Subgroup whose coset limit sets are checked for discreteness.
    #[arg(long = "generator", value_name = "WORD")]
    pub generators: Vec<String>,
    /// Use the kernel of the abelianization map for limit sets.
    #[arg(long, conflicts_with = "generators")]
    pub kernel: bool,
    /// Cosets with a representative of at most this length enter the check.
    #[arg(long, default_value_t = 2)]
    pub window: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct AxiomsArgs {
    #[command(flatten)]
    pub subgroup: SubgroupSpec,
    #[arg(long, default_value_t = 6)]
    pub radius: usize,
    /// Use the grid-lines pattern of this half-width instead of a subgroup.
    #[arg(long, value_name = "HALF_WIDTH")]
    pub grid: Option<i64>,
    #[arg(long, default_value_t = 5)]
    pub spacing: i64,
    /// Append a copy of this member to the family.
    #[arg(long, value_name = "INDEX")]
    pub duplicate: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub k_grid: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pub n_grid: Vec<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct ReportArgs {
    #[command(flatten)]
    pub subgroup: SubgroupSpec,
    #[arg(long, default_value_t = 6)]
    pub radius: usize,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, default_value_t = 6)]
    pub depth: usize,
    #[arg(long, default_value_t = 2)]
    pub window: usize,
    #[arg(long, default_value_t = 3)]
    pub scan_radius: usize,
}

/// Failures sorted by exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
}

impl From<coarsekit::Error> for Failure {
    fn from(e: coarsekit::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("COARSEKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("COARSEKIT_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Domain(e.to_string()))
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, Failure> {
    configure_threads()?;
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let out = output::Output::new(cli.out, argv);
    match &cli.command {
        Command::Ball(a) => commands::ball(a, &out),
        Command::Subgroup(a) => commands::subgroup(a, &out),
        Command::Pattern(a) => commands::pattern(a, &out),
        Command::Ccx(a) => commands::ccx(a, &out),
        Command::Rigidity(a) => commands::rigidity(a, &out),
        Command::Boundary(a) => commands::boundary(a, &out),
        Command::Axioms(a) => commands::axioms(a, &out),
        Command::Report(a) => commands::report(a, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
