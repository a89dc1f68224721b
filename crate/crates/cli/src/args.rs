use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::parse::parse_vector;

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Finite reals given as `v1,v2,...`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealVector(pub Vec<f64>);

fn real_vector(s: &str) -> Result<RealVector, String> {
    parse_vector(s).map(RealVector)
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Parser)]
#[command(name = "gck", version, about = "Character-theoretic checks for length-function semigroups on finite groups")]
pub struct RunConfig {
    /// Seed for randomized steps (character-table splitting, fixture sampling).
    #[arg(long, global = true, env = "GCK_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format; CSV is available for `sweep`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct LengthArgs {
    /// Group descriptor: S<n>, Z<n>, D<n>, Q8, prod(A,B) or perm:[(1 2 3),(1 2)].
    pub group: String,

    /// Length values per conjugacy class, identity class first.
    #[arg(long, value_parser = real_vector, allow_hyphen_values = true)]
    pub lengths: RealVector,

    /// Read and write per-class and per-irrep vectors in the published order (S3, Q8, S4).
    #[arg(long)]
    pub paper_order: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Order, conjugacy classes, center and optionally the multiplication table.
    GroupInfo {
        group: String,
        /// Include the full multiplication table.
        #[arg(long)]
        table: bool,
    },
    /// Character table with its orthogonality report.
    Chartable {
        group: String,
        #[arg(long)]
        paper_order: bool,
    },
    /// Conditional negativity by the definition, constraint and kernel routes.
    CheckLength {
        #[command(flatten)]
        length: LengthArgs,
    },
    /// Coefficients p_i(t) of the character-induced decomposition.
    Decompose {
        #[command(flatten)]
        length: LengthArgs,
        #[arg(long, value_parser = finite)]
        t: f64,
    },
    /// Apply P_t and its decomposition to a group-algebra element.
    Evolve {
        #[command(flatten)]
        length: LengthArgs,
        #[arg(long, value_parser = finite)]
        t: f64,
        /// JSON array of coefficients by element id; each a number or [re, im].
        #[arg(long)]
        element: String,
    },
    /// p_i(t) and the kernel minimum eigenvalue over a t range.
    Sweep {
        #[command(flatten)]
        length: LengthArgs,
        #[arg(long, value_parser = finite, default_value_t = 1.0 / 256.0)]
        t_min: f64,
        #[arg(long, value_parser = finite, default_value_t = 8.0)]
        t_max: f64,
        #[arg(long, default_value_t = 25)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Spacing::Log)]
        spacing: Spacing,
    },
    /// G-circulant matrix of a class function: spectrum, multiplicities, PSD verdicts.
    Circulant {
        group: String,
        /// Real parts of f per class.
        #[arg(long, value_parser = real_vector, allow_hyphen_values = true)]
        class_function: RealVector,
        /// Imaginary parts of f per class.
        #[arg(long, value_parser = real_vector, allow_hyphen_values = true)]
        class_function_imag: Option<RealVector>,
        #[arg(long)]
        paper_order: bool,
        /// Emit the dense matrix as CSV (columns re,im per entry) instead of the report.
        #[arg(long)]
        dump_matrix: bool,
    },
    /// Run the published S3, Q8 and S4 fixtures.
    VerifyPaper {
        /// Run a single fixture.
        #[arg(long)]
        only: Option<String>,
        /// Perturb the named fixture's golden data (negative control).
        #[arg(long, hide = true)]
        inject_corruption: Option<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::GroupInfo { .. } => "group-info",
            Command::Chartable { .. } => "chartable",
            Command::CheckLength { .. } => "check-length",
            Command::Decompose { .. } => "decompose",
            Command::Evolve { .. } => "evolve",
            Command::Sweep { .. } => "sweep",
            Command::Circulant { .. } => "circulant",
            Command::VerifyPaper { .. } => "verify-paper",
        }
    }
}
