use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lambda_sieve_core::jacobi::Normalization;

#[derive(Debug, Parser)]
#[command(
    name = "lambda-sieve",
    version,
    about = "Scans for primes p with lambda_p(K) > 1"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Resume from and save progress to this file (scans and searches).
    #[arg(long, global = true)]
    pub checkpoint: Option<PathBuf>,

    /// Raise or lower every per-command size guard.
    #[arg(
        long,
        global = true,
        env = "LAMBDA_SIEVE_MAX_BOUND",
        hide_env_values = true
    )]
    pub max_bound: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum PsiNormalization {
    #[default]
    Standard,
    Flipped,
}

impl From<PsiNormalization> for Normalization {
    fn from(n: PsiNormalization) -> Self {
        match n {
            PsiNormalization::Standard => Normalization::Standard,
            PsiNormalization::Flipped => Normalization::Flipped,
        }
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Fermat-quotient verdict and xi for every prime p ≡ 1 (mod m) up to the bound.
    ScanExceptional {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        bound: u64,
    },
    /// Non-trivial (and inapplicable) primes of Q(sqrt -d), every route cross-checked.
    ScanLambda {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        bound: u64,
    },
    /// Prime candidates (gamma^q + gamma^-q)/4 for prime q up to the bound.
    Pell {
        #[arg(long)]
        q_bound: u64,
    },
    /// G_{p-1} mod p and mod p^2 for p ≡ 1 (mod 3), 7 <= p <= bound.
    GlaisherTable {
        #[arg(long, default_value_t = 193)]
        bound: u64,
    },
    /// E_{p-1} mod p^2 for p ≡ 1 (mod 4), 5 <= p <= bound.
    EulerCheck {
        #[arg(long)]
        bound: u64,
    },
    /// Class numbers by forms and by character sums for square-free d <= bound.
    ClassNumbers {
        #[arg(long)]
        bound: u64,
    },
    /// Run the cross-module invariant suite.
    Verify {
        /// Comma-separated modules or invariant names.
        #[arg(long)]
        only: Option<String>,
        /// Character normalization on the Jacobi route; `flipped` is a fault injection.
        #[arg(long, value_enum, default_value_t = PsiNormalization::Standard)]
        normalization: PsiNormalization,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ScanExceptional { .. } => "scan-exceptional",
            Command::ScanLambda { .. } => "scan-lambda",
            Command::Pell { .. } => "pell",
            Command::GlaisherTable { .. } => "glaisher-table",
            Command::EulerCheck { .. } => "euler-check",
            Command::ClassNumbers { .. } => "class-numbers",
            Command::Verify { .. } => "verify",
        }
    }
}
