mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use symtrop::Rational;

use crate::commands::CmdResult;

#[derive(Parser, Debug)]
#[command(name = "symtrop", version, about = "Tropical and symmetric tropical ranks, lifts and witnesses")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Cap on worker threads for rank scans.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Report wall-clock time.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

/// Matrices are read from `catalog:<name>`, a file path, or `-` for stdin.
#[derive(Subcommand, Debug)]
enum Command {
    /// Tropical determinant and singularity of a square matrix.
    Det { matrix: String },
    /// Tropical rank, or symmetric tropical rank with --symmetric.
    Rank {
        matrix: String,
        #[arg(long)]
        symmetric: bool,
        /// Scan every level instead of stopping at the first singular one.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Block form of a symmetric matrix of symmetric tropical rank 2.
    Decompose { matrix: String },
    /// Symmetric scaling to a nonnegative matrix with zero row minima.
    Normalize { matrix: String },
    /// Symmetric Puiseux-series lift of rank 1 or 2.
    Lift {
        matrix: String,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Truncation order, an exact rational.
        #[arg(long)]
        trunc: Option<Rational>,
        /// Also write the series matrix to this file.
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// Check a series matrix against a tropical matrix.
    VerifyLift {
        matrix: String,
        /// Series matrix file, or `-` for stdin.
        lift: String,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// Witness that the symmetric r x r minors of an n x n matrix are not a tropical basis.
    Witness {
        #[arg(short = 'r')]
        r: usize,
        #[arg(short = 'n')]
        n: usize,
        /// Recompute the claimed ranks.
        #[arg(long)]
        verify: bool,
    },
    /// Duplicate the last row and column, or border the matrix with --border.
    Extend {
        matrix: String,
        #[arg(long)]
        border: bool,
        /// Border value, default max + 1.
        #[arg(long, requires = "border", allow_hyphen_values = true)]
        p: Option<Rational>,
        /// Corner value, default min - 1.
        #[arg(long, requires = "border", allow_hyphen_values = true)]
        m: Option<Rational>,
    },
    /// Classify the tropical conic A x^2 + B xy + C y^2 + D x + E y + F.
    Conic {
        #[arg(num_args = 6, allow_negative_numbers = true, value_names = ["A", "B", "C", "D", "E", "F"])]
        coeffs: Vec<Rational>,
    },
    /// List the catalog, or show one entry.
    Catalog { name: Option<String> },
    /// Re-derive every catalog claim.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(command: &Command) -> CmdResult {
    use commands::*;
    match command {
        Command::Det { matrix } => det(matrix),
        Command::Rank { matrix, symmetric, exhaustive } => rank(matrix, *symmetric, *exhaustive),
        Command::Decompose { matrix } => decompose(matrix),
        Command::Normalize { matrix } => normalize(matrix),
        Command::Lift { matrix, rank, seed, trunc, output } => lift(matrix, *rank, *seed, *trunc, output.as_deref()),
        Command::VerifyLift { matrix, lift, rank } => verify_lift(matrix, lift, *rank),
        Command::Witness { r, n, verify } => witness_cmd(*r, *n, *verify),
        Command::Extend { matrix, border, p, m } => extend(matrix, *border, *p, *m),
        Command::Conic { coeffs } => conic(coeffs),
        Command::Catalog { name } => catalog_cmd(name.as_deref()),
        Command::Selftest { seed } => selftest(*seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let outcome = match run(&cli.command) {
        Ok(outcome) => outcome,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };
    let mut report = outcome.report;
    report.command = std::env::args().skip(1).collect();
    if cli.timing {
        report.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    let rendered = match cli.format {
        Format::Text => report.to_text(),
        Format::Structured => report.to_structured(),
    };
    let _ = std::io::stdout().write_all(rendered.as_bytes());
    if outcome.negative {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
