use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dupzero_core::{ChannelParams, Model, Repetition};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "dupzero", version, about = "Zero-error codes for duplication and 0-insertion channels")]
pub struct Cli {
    /// Output format for tabular results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct ParamArgs {
    /// Alphabet size.
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    /// Length of a duplicated substring / inserted zero block.
    #[arg(long, default_value_t = 1)]
    pub ell: u32,
    /// Maximum insertions per position, or `inf`.
    #[arg(long, default_value = "1", value_parser = parse_repetition)]
    pub r: Repetition,
}

impl ParamArgs {
    pub fn params(&self) -> Result<ChannelParams, CliError> {
        Ok(ChannelParams::new(self.q, self.ell, self.r)?)
    }
}

fn parse_repetition(s: &str) -> Result<Repetition, String> {
    s.parse().map_err(|e: dupzero_core::Error| e.to_string())
}

fn parse_model(s: &str) -> Result<Model, String> {
    s.parse().map_err(|e: dupzero_core::Error| e.to_string())
}

#[derive(Args, Debug, Clone, Copy)]
pub struct CodeArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Maximum word length.
    #[arg(long)]
    pub n: usize,
    /// Restrict to codewords of this weight.
    #[arg(long)]
    pub w: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the admissible blocks up to a given length.
    Blocks {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: u64,
    },
    /// Write every codeword of C(n), or C(n; w), in canonical order.
    Enumerate {
        #[command(flatten)]
        code: CodeArgs,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Refuse codes with more codewords than this.
        #[arg(long, default_value_t = dupzero_core::codebook::DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
    },
    /// Print the code size.
    Count {
        #[command(flatten)]
        code: CodeArgs,
        /// Print the size of C(m) for every m up to n.
        #[arg(long)]
        table: bool,
    },
    /// Map codewords (arguments or stdin lines) to their indices.
    Rank {
        #[command(flatten)]
        code: CodeArgs,
        words: Vec<String>,
    },
    /// Map indices (arguments or stdin lines) to codewords.
    #[command(alias = "encode")]
    Unrank {
        #[command(flatten)]
        code: CodeArgs,
        indices: Vec<String>,
    },
    /// Decode received words read from stdin, one per line.
    Decode {
        #[command(flatten)]
        params: ParamArgs,
        /// Decode for the prefixed code C'(n).
        #[arg(long)]
        prime: bool,
    },
    /// Apply the difference map (or its inverse) to words read from stdin.
    Transform {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        inverse: bool,
    },
    /// Pass words read from stdin through a seeded random channel.
    Simulate {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `zero` (0-insertion) or `dup` (duplication).
        #[arg(long, default_value = "zero", value_parser = parse_model)]
        model: Model,
        /// Outputs drawn per input word.
        #[arg(long, default_value_t = 1)]
        copies: u32,
        /// Largest per-position count when r is `inf`.
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Zero-error capacity.
    Capacity {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = dupzero_core::capacity::DEFAULT_TOL)]
        tol: f64,
    },
    /// Constant-weight capacity at relative weight omega, or at its optimum.
    CwCapacity {
        #[command(flatten)]
        params: ParamArgs,
        /// Relative weight in [0, 1]; omitted means the optimal weight.
        #[arg(long)]
        omega: Option<f64>,
        /// Sample the curve at this many evenly spaced points instead.
        #[arg(long, conflicts_with = "omega")]
        points: Option<usize>,
        #[arg(long, default_value_t = dupzero_core::capacity::DEFAULT_TOL)]
        tol: f64,
    },
    /// Check a code against the brute-force oracle.
    Verify {
        #[command(subcommand)]
        check: VerifyCheck,
    },
    /// Regenerate figure data as CSV.
    Figure {
        #[command(subcommand)]
        which: FigureKind,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCheck {
    /// No two codewords in FILE share a channel output. Parameters come
    /// from the file header when present.
    ZeroError {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        code: PathBuf,
        #[arg(long, default_value = "zero", value_parser = parse_model)]
        model: Model,
    },
    /// |C(n)| equals the exact maximum independent set of the
    /// confusability graph on all words of length at most n.
    Optimal {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "zero", value_parser = parse_model)]
        model: Model,
    },
}

#[derive(Subcommand, Debug)]
pub enum FigureKind {
    /// Greedy construction trace: every candidate block and what covers it.
    #[command(name = "1")]
    Greedy {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 30)]
        n: u64,
    },
    /// Weight-2 words `σ0^(u-1) σ0^(v-1)` with u + v <= n and whether each is a codeword.
    #[command(name = "2")]
    WeightTwo {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 19)]
        n: usize,
    },
    /// Capacity as a function of r for several q and ell.
    #[command(name = "3")]
    Capacity {
        #[arg(long, value_delimiter = ',', default_values_t = [2, 4])]
        qs: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3, 4])]
        ells: Vec<u32>,
        #[arg(long, default_value_t = 10)]
        r_max: u32,
        #[arg(long, default_value_t = dupzero_core::capacity::DEFAULT_TOL)]
        tol: f64,
    },
}
