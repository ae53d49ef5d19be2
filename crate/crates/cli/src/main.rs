//! `boolshap`: exact model counts, fixed-size model counts and Shapley
//! values for formulas, d-D circuits and conjunctive-query lineage.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use boolshap::Error;

#[derive(Parser, Debug)]
#[command(name = "boolshap", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,

    /// Input representation; inferred from the input when omitted
    /// (directory: lineage, `.nnf`: circuit, otherwise formula).
    #[arg(long, global = true, value_enum)]
    pub kind: Option<Kind>,

    /// Algorithm: `paper|direct|brute` for kcount, `reduction|brute` for
    /// shapley.
    #[arg(long, global = true)]
    pub method: Option<String>,

    /// Enumeration bound on the number of variables.
    #[arg(long, global = true)]
    pub max_vars: Option<usize>,

    /// Output file (or directory for `stretch` and `pp2dnf`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for generated instances.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Query file, or the query text itself.
    #[arg(long, global = true)]
    pub query: Option<String>,

    /// Write a JSON run report to this path.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,

    /// Include wall-clock timings in run reports.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Formula,
    Circuit,
    Lineage,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Formula => "formula",
            Kind::Circuit => "circuit",
            Kind::Lineage => "lineage",
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Model count `#F`.
    Count { input: PathBuf },
    /// Fixed-size model counts `#_0 F, …, #_n F`.
    Kcount { input: PathBuf },
    /// Shapley values of all variables, or of all endogenous tuples.
    Shapley { input: PathBuf },
    /// Stretch a query and its database directory.
    Stretch {
        input: PathBuf,
        /// `dummy`, or `expand:<a1,a2,…>` with one arity per endogenous tuple.
        #[arg(long, default_value = "dummy")]
        mode: String,
    },
    /// Classify a query, or validate a circuit.
    Check { input: Option<PathBuf> },
    /// Write the lineage of a query and its tuple map.
    Lineage { input: PathBuf },
    /// Build the RST instance of a bipartite edge list (`i j` per line).
    Pp2dnf { input: Option<PathBuf> },
    /// Run every applicable method and check that they agree.
    Compare { input: PathBuf },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) | Error::Parse { .. } | Error::Io(_) | Error::Csv(_) => 2,
        Error::Refusal(_) => 3,
        Error::OracleInconsistency(_) | Error::Internal(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("boolshap: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
