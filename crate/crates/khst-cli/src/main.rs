//! `compute`: command-line front end for the spanning-tree Khovanov engine.
//!
//! Every subcommand prints JSON (default) or an aligned table.  Exit codes:
//! `0` on success, `1` on any error, `2` when a verification finds a mismatch.

mod commands;
mod input;
mod sweep;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

/// Errors reported by the command-line tool (exit status 1).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Diagram(#[from] khst::diagram::DiagramError),
    #[error(transparent)]
    Corpus(#[from] khst::corpus::CorpusError),
    #[error(transparent)]
    Cube(#[from] khst::cube::CubeError),
    #[error(transparent)]
    Homology(#[from] khst::homology::HomologyError),
    #[error(transparent)]
    Stc(#[from] khst::stc::StcError),
    #[error(transparent)]
    Sinv(#[from] khst::sinv::SinvError),
    #[error(transparent)]
    Jones(#[from] khst::jones::JonesError),
    /// Some corpus entries raised errors; the partial summary is still printed.
    #[error("{errors} corpus entr{} failed with an error", if *errors == 1 { "y" } else { "ies" })]
    Sweep { report: Box<Report>, errors: usize },
}

/// Output of a subcommand.
#[derive(Debug)]
pub struct Report {
    pub json: serde_json::Value,
    pub table: String,
    /// A verification found a disagreement (exit status 2).
    pub mismatch: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Spanning-tree complex.
    St,
    /// Brute-force cube complex.
    Cube,
    /// Both, compared.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Unreduced,
    ReducedPlus,
    ReducedMinus,
    Lee,
}

impl VariantArg {
    fn st(self) -> khst::stc::StVariant {
        use khst::stc::StVariant;
        match self {
            VariantArg::Unreduced => StVariant::Unreduced,
            VariantArg::ReducedPlus => StVariant::ReducedPlus,
            VariantArg::ReducedMinus => StVariant::ReducedMinus,
            VariantArg::Lee => StVariant::Lee,
        }
    }

    const ALL: [VariantArg; 4] = [
        VariantArg::Unreduced,
        VariantArg::ReducedPlus,
        VariantArg::ReducedMinus,
        VariantArg::Lee,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    /// ℤ₂-torsion of alternating knots, with the constructive witness.
    Torsion,
    /// Euler characteristic against the state-sum Jones polynomial.
    Euler,
    /// s-invariant: spanning-tree route against the cube oracle.
    S,
    /// Spanning-tree homology against cube homology (all variants).
    Homology,
}

/// Diagram selection shared by the per-diagram subcommands.
#[derive(Debug, Clone, Args)]
pub struct DiagramArgs {
    /// Corpus name or alias (e.g. `trefoil`, `8_20`), or a file holding a PD code.
    #[arg(long, conflicts_with = "pd")]
    pub knot: Option<String>,
    /// Inline PD code: JSON tuples, a JSON object, or `PD[X[..],..]`.
    #[arg(long)]
    pub pd: Option<String>,
    /// Edge order as a permutation of 1-based crossing ids, smallest first (e.g. `3,1,2`).
    #[arg(long)]
    pub edge_order: Option<String>,
    /// Label of the dotted (marked) arc.
    #[arg(long)]
    pub dotted_arc: Option<u32>,
    /// Use the mirror image.
    #[arg(long)]
    pub mirror: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Parser)]
#[command(
    name = "compute",
    version,
    about = "Khovanov homology from spanning trees of the Tait graph"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Signed Tait graph with its edge order.
    Tait {
        #[command(flatten)]
        diagram: DiagramArgs,
        /// Use the dual checkerboard graph.
        #[arg(long)]
        dual: bool,
    },
    /// Spanning trees with activity words, partial smoothings and bidegrees.
    Trees {
        #[command(flatten)]
        diagram: DiagramArgs,
        /// Include matching words and twist trees.
        #[arg(long)]
        dump_matching: bool,
        /// Include the generating relation between trees.
        #[arg(long)]
        relation: bool,
    },
    /// Spanning-tree complex: generators and incidences.
    Stcomplex {
        #[command(flatten)]
        diagram: DiagramArgs,
        #[arg(long, value_enum, default_value = "unreduced")]
        variant: VariantArg,
        /// Include the edge sets and activity words of the trees.
        #[arg(long)]
        dump_trees: bool,
    },
    /// Bigraded homology (ranks by degree for Lee).
    Homology {
        #[command(flatten)]
        diagram: DiagramArgs,
        #[arg(long, value_enum, default_value = "unreduced")]
        variant: VariantArg,
        #[arg(long, value_enum, default_value = "st")]
        method: Method,
    },
    /// Rasmussen s-invariant from the orientation-preserving tree.
    SInvariant {
        #[command(flatten)]
        diagram: DiagramArgs,
        /// Also compute the cube-complex oracle and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Compare spanning-tree and cube homology for every variant.
    Verify {
        #[command(flatten)]
        diagram: DiagramArgs,
        /// Restrict to one variant.
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        /// Also check this many random edge orders (needs `--seed`).
        #[arg(long, default_value_t = 0)]
        permutations: usize,
        /// Seed for the random edge orders.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Graded Euler characteristic against the state-sum Jones polynomial.
    Euler {
        #[command(flatten)]
        diagram: DiagramArgs,
    },
    /// Constructive ℤ₂-torsion witness of an alternating diagram.
    Torsion {
        #[command(flatten)]
        diagram: DiagramArgs,
    },
    /// Run checks over a corpus.
    Corpus {
        /// Corpus JSON file (defaults to the bundled corpus).
        #[arg(long)]
        corpus: Option<String>,
        /// Checks to run (repeatable).
        #[arg(long, value_enum, default_values_t = [Check::Euler])]
        check: Vec<Check>,
        /// Largest crossing number included.
        #[arg(long, default_value_t = 8)]
        max_crossings: usize,
        /// Stop at the first mismatch or error instead of collecting all results.
        #[arg(long)]
        fail_fast: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

impl Command {
    fn format(&self) -> Format {
        match self {
            Command::Tait { diagram, .. }
            | Command::Trees { diagram, .. }
            | Command::Stcomplex { diagram, .. }
            | Command::Homology { diagram, .. }
            | Command::SInvariant { diagram, .. }
            | Command::Verify { diagram, .. }
            | Command::Euler { diagram }
            | Command::Torsion { diagram } => diagram.format,
            Command::Corpus { format, .. } => *format,
        }
    }
}

fn run(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Tait { diagram, dual } => commands::tait(diagram, *dual),
        Command::Trees {
            diagram,
            dump_matching,
            relation,
        } => commands::trees(diagram, *dump_matching, *relation),
        Command::Stcomplex {
            diagram,
            variant,
            dump_trees,
        } => commands::stcomplex(diagram, *variant, *dump_trees),
        Command::Homology {
            diagram,
            variant,
            method,
        } => commands::homology(diagram, *variant, *method),
        Command::SInvariant { diagram, oracle } => commands::s_invariant(diagram, *oracle),
        Command::Verify {
            diagram,
            variant,
            permutations,
            seed,
        } => commands::verify(diagram, *variant, *permutations, *seed),
        Command::Euler { diagram } => commands::euler(diagram),
        Command::Torsion { diagram } => commands::torsion(diagram),
        Command::Corpus {
            corpus,
            check,
            max_crossings,
            fail_fast,
            ..
        } => sweep::sweep(corpus.as_deref(), check, *max_crossings, *fail_fast),
    }
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report.json).expect("JSON values serialize")
        ),
        Format::Table => print!("{}", report.table),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.command.format();
    match run(&cli.command) {
        Ok(report) => {
            emit(&report, format);
            if report.mismatch {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            if let CliError::Sweep { report, .. } = &e {
                emit(report, format);
            }
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
