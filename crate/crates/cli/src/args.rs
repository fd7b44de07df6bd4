use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "qmodular",
    version,
    about = "Verifier for level-20 modular identities, modular equations and 1/π series"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RunConfig {
    /// q-order for exact checks (at least 10).
    #[arg(long, global = true, default_value_t = 200, value_parser = clap::value_parser!(i64).range(10..))]
    pub order: i64,
    /// Working precision in bits (at least 64).
    #[arg(long = "prec", global = true, default_value_t = 256, value_parser = clap::value_parser!(u32).range(64..))]
    pub precision: u32,
    /// Terms of each 1/π partial sum.
    #[arg(long, global = true, default_value_t = 80, value_parser = clap::value_parser!(u32).range(1..))]
    pub terms: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check catalog identities, differential equations and modular equations.
    Verify {
        /// Catalog keys, or `all`.
        #[arg(required = true)]
        keys: Vec<String>,
    },
    /// Print a_0 … a_{count−1} of Z = Σ a_n X^n.
    Coeffs { count: u32 },
    /// Partial sums of the 1/π series against an independent π.
    Pi {
        /// Series row, counting from 1.
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        row: Option<usize>,
        #[arg(long)]
        all: bool,
    },
    /// Singular values X(τ) at CM points.
    Singular {
        #[arg(long, conflicts_with = "form", required_unless_present = "form")]
        all: bool,
        /// A table form `a,b,c`.
        #[arg(long, allow_hyphen_values = true)]
        form: Option<String>,
    },
    /// Verify Ψ₃, or derive a modular equation of degree n.
    Modeq {
        #[arg(long)]
        n: Option<i64>,
        #[arg(long, default_value_t = 4, requires = "n")]
        bidegree: u32,
    },
    /// Check the Atkin-Lehner witness table.
    Table2 {
        /// Accepted for compatibility; every row is always checked.
        #[arg(long)]
        verify_all: bool,
    },
    /// Linear relations among catalog series, or weight-2 basis coordinates.
    Relations {
        /// Catalog keys of the series to relate.
        #[arg(required_unless_present = "decompose")]
        keys: Vec<String>,
        /// Decompose one key over the weight-2 basis instead.
        #[arg(long, conflicts_with = "keys")]
        decompose: Option<String>,
    },
}
