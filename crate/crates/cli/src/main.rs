mod commands;
mod input;
mod report;
mod reproduce;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use finitude::field::FieldKind;

use crate::input::CliError;
use crate::report::RunReport;

#[derive(Parser, Debug)]
#[command(name = "finitude", version, about = "Exact module computations over finite-dimensional quiver algebras")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Coefficient field: Q, F2, F3, F5, F7, F11 or F13.
    #[arg(long, global = true)]
    pub field: Option<FieldKind>,
    /// Maximum string or band length for enumerated corpora.
    #[arg(long, global = true)]
    pub max_len: Option<usize>,
    /// Largest module dimension admitted to a corpus.
    #[arg(long, global = true)]
    pub dim_bound: Option<usize>,
    /// Syzygy depth after which projective dimension is reported as a lower bound.
    #[arg(long, global = true)]
    pub cutoff: Option<usize>,
    /// Largest index n of the test modules M_n in a refutation.
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    /// Print the full run report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print DOT output where the command has a graph.
    #[arg(long, global = true)]
    pub dot: bool,
    /// Seed for randomized isomorphism checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check, list the basis of, or classify an algebra.
    Algebra {
        #[command(subcommand)]
        action: AlgebraCmd,
    },
    /// Indecomposable projective modules and their dimension vectors.
    Projectives { algebra: String },
    /// Graphs, syzygies and projective dimension of a single module.
    Module {
        #[command(subcommand)]
        action: ModuleCmd,
    },
    /// String and band enumeration for special biserial algebras.
    Strings {
        #[command(subcommand)]
        action: StringsCmd,
    },
    /// Hypothesis check, socle scan and bounded refutation for left approximations of a simple.
    Criterion3 {
        #[command(subcommand)]
        action: CriterionCmd,
    },
    /// Right and left approximation checks by modules of finite projective dimension.
    Approx {
        #[command(subcommand)]
        action: ApproxCmd,
    },
    /// One-point extension by a new source vertex.
    Extend {
        algebra: String,
        /// Extension in DSL form (`extend: vertex 9; arrow chi1: 9 -> 5; ...`) or a file containing it.
        #[arg(long)]
        spec: String,
        /// Write the extended presentation here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finitistic dimension probes.
    Findim {
        #[command(subcommand)]
        action: FindimCmd,
    },
    /// Re-run the built-in worked examples and check their claims.
    Reproduce { example: Example },
}

#[derive(Subcommand, Debug)]
pub enum AlgebraCmd {
    Validate { algebra: String },
    Basis { algebra: String },
    Classify { algebra: String },
}

#[derive(Args, Debug, Clone, Default)]
pub struct ModuleArgs {
    /// Module file (JSON with dims and arrow matrices).
    #[arg(long)]
    pub module: Option<PathBuf>,
    /// String word such as `beta^- alpha chi^-`.
    #[arg(long = "string")]
    pub string: Option<String>,
    /// Band word; the parameter is given by --lambda.
    #[arg(long)]
    pub band: Option<String>,
    #[arg(long, default_value = "1")]
    pub lambda: String,
    /// Graph spec file (JSON with tops, edges, deps).
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Indecomposable projective at this vertex.
    #[arg(long)]
    pub projective: Option<String>,
    /// Simple module at this vertex.
    #[arg(long)]
    pub simple: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum ModuleCmd {
    Graph {
        algebra: String,
        #[command(flatten)]
        module: ModuleArgs,
    },
    Syzygy {
        algebra: String,
        #[command(flatten)]
        module: ModuleArgs,
        /// Syzygy index.
        #[arg(short, long, default_value_t = 1)]
        k: usize,
    },
    Pdim {
        algebra: String,
        #[command(flatten)]
        module: ModuleArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum StringsCmd {
    Enumerate {
        algebra: String,
        /// Also list bands.
        #[arg(long)]
        bands: bool,
    },
}

#[derive(Args, Debug, Clone)]
pub struct CriterionArgs {
    /// Comma-separated paths p_1,...,p_r.
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<String>,
    /// Comma-separated paths q_1,...,q_r.
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<String>,
    /// JSON file with fields `p` and `q` instead of the flags.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum CriterionCmd {
    Validate {
        algebra: String,
        #[command(flatten)]
        input: CriterionArgs,
    },
    Scan {
        algebra: String,
        #[command(flatten)]
        input: CriterionArgs,
    },
    Refute {
        algebra: String,
        #[command(flatten)]
        input: CriterionArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum ApproxCmd {
    /// Check the map sending each top element of the given type to the simple.
    Right {
        algebra: String,
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long)]
        vertex: String,
    },
    /// Check a candidate `S_v -> A`, or search the corpus for one.
    Left {
        algebra: String,
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long)]
        vertex: String,
    },
    /// Right check plus minimality.
    Minimal {
        algebra: String,
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long)]
        vertex: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum FindimCmd {
    Probe { algebra: String },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Example {
    Example2,
    Example6,
    Example7,
}

fn init_threads() {
    if let Some(n) = std::env::var("BW_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        // Fails only if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    init_threads();
    let start = Instant::now();
    match commands::run(&cli) {
        Ok(outcome) => {
            let report = RunReport::new(
                outcome.command.clone(),
                outcome.parameters.clone(),
                outcome.algebra_hash.clone(),
                outcome.pass,
                outcome.results.clone(),
                start.elapsed(),
            );
            if cli.opts.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else if cli.opts.dot && outcome.dot.is_some() {
                print!("{}", outcome.dot.as_deref().unwrap_or_default());
            } else {
                print!("{}", outcome.text);
            }
            ExitCode::from(if outcome.pass { 0 } else { 1 })
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
