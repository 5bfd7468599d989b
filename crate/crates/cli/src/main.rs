mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use curvmorse::io::Format;
use curvmorse::ErrorClass;

use config::DirectionSpec;

#[derive(Parser)]
#[command(
    name = "curvmorse",
    version,
    about = "Morse indices, discrete curvatures and persistence on simplicial complexes"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Seed for every sampled direction.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Sample count (directions or Monte-Carlo draws); defaults depend on the command.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Generality tolerance relative to the bounding-box diagonal.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub eps_general: f64,
    /// Allowability tolerance on unit dot products.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub eps_allow: f64,
    /// Input format; inferred from the extension when omitted.
    #[arg(long, global = true, value_parser = parse_format)]
    pub format: Option<Format>,
    /// Write the artifact here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CurvatureKindArg {
    Defect,
    Combinatorial,
    FormanRicci,
    FormanScalar,
    StratifiedDefect,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Suite {
    Cpt,
    GaussBonnet,
    Egregium,
    StratifiedCpt,
    StratifiedEgregium,
    OpenStar,
    Forman,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FiltrationArg {
    Height,
    Defect,
    FormanScalar,
    FormanRicci,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum VertexRuleArg {
    MinIncident,
    Zero,
}

#[derive(Subcommand)]
enum Command {
    /// Per-simplex curvature values as CSV.
    Curvature {
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: CurvatureKindArg,
        /// Report angle defects in radians instead of normalized by 2π.
        #[arg(long)]
        radians: bool,
        /// Use (6 - d)/3 for the combinatorial curvature instead of (6 - d)/6.
        #[arg(long)]
        third: bool,
    },
    /// Vertex indices and the critical point theorem for one or more directions.
    Index {
        input: PathBuf,
        /// Comma-separated direction vector.
        #[arg(long, conflicts_with = "random")]
        direction: Option<String>,
        /// Number of seeded random general directions.
        #[arg(long)]
        random: Option<usize>,
        /// Break height ties by vertex id instead of rejecting the direction.
        #[arg(long)]
        jitter: bool,
    },
    /// Run a theorem check; exits with 4 when it fails.
    Verify {
        input: PathBuf,
        #[arg(long, value_enum)]
        suite: Suite,
    },
    /// Stratum classification and the stratified Euler characteristic.
    Stratify { input: PathBuf },
    /// Persistence diagram of a curvature or height filtration as CSV.
    Ph {
        input: PathBuf,
        #[arg(long, value_enum)]
        filtration: FiltrationArg,
        /// Height direction, `x,y,z` or `random:1`.
        #[arg(long)]
        direction: Option<DirectionSpec>,
        /// Use superlevel sets (negated values).
        #[arg(long)]
        negate: bool,
        #[arg(long, value_enum, default_value = "min-incident")]
        vertex_rule: VertexRuleArg,
    },
    /// Bottleneck distance between the diagrams of two filtrations.
    Compare {
        input: PathBuf,
        /// Two filtrations, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        filtrations: Vec<FiltrationArg>,
        #[arg(long, default_value_t = 0)]
        dim: usize,
        #[arg(long)]
        direction: Option<DirectionSpec>,
        #[arg(long, value_enum, default_value = "min-incident")]
        vertex_rule: VertexRuleArg,
    },
    /// Barycentric subdivision as complex-json.
    Subdivide { input: PathBuf },
}

fn run(cli: &Cli) -> Result<commands::Artifact, curvmorse::Error> {
    let c = &cli.common;
    match &cli.command {
        Command::Curvature {
            input,
            kind,
            radians,
            third,
        } => commands::curvature(c, input, *kind, *radians, *third),
        Command::Index {
            input,
            direction,
            random,
            jitter,
        } => {
            let spec = match (direction, random) {
                (Some(d), _) => Some(d.parse::<DirectionSpec>().map_err(curvmorse::Error::InvalidEmbedding)?),
                (None, Some(k)) => Some(DirectionSpec::Random(*k)),
                (None, None) => None,
            };
            commands::index(c, input, spec, *jitter)
        }
        Command::Verify { input, suite } => commands::verify(c, input, *suite),
        Command::Stratify { input } => commands::stratify(c, input),
        Command::Ph {
            input,
            filtration,
            direction,
            negate,
            vertex_rule,
        } => commands::ph(c, input, *filtration, direction.clone(), *negate, *vertex_rule),
        Command::Compare {
            input,
            filtrations,
            dim,
            direction,
            vertex_rule,
        } => {
            if filtrations.len() != 2 {
                return Err(curvmorse::Error::Precondition(format!(
                    "compare needs exactly two filtrations, got {}",
                    filtrations.len()
                )));
            }
            commands::compare(c, input, filtrations, *dim, direction.clone(), *vertex_rule)
        }
        Command::Subdivide { input } => commands::subdivide(c, input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let artifact = match run(&cli) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return match e.class() {
                ErrorClass::Input => ExitCode::from(2),
                ErrorClass::Precondition => ExitCode::from(3),
            };
        }
    };
    let written = match &cli.common.output {
        Some(path) => std::fs::write(path, &artifact.text),
        None => std::io::stdout().write_all(artifact.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if artifact.verdict == Some(false) {
        eprintln!("verification failed");
        return ExitCode::from(4);
    }
    ExitCode::SUCCESS
}
