//! `realspace`: digits, space profiles, oracle reductions and automata with
//! advice from the command line.

mod commands;
mod selector;
mod selftest;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    /// A check or property did not hold.
    Failure(String),
    Usage(String),
    /// A spec file was read but could not be understood.
    Spec(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Spec(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Failure(m) | CliError::Usage(m) | CliError::Spec(m) => m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    /// Left-cut membership using a tally oracle.
    #[value(name = "L2T")]
    L2T,
    /// Tally membership using a left-cut oracle.
    #[value(name = "T2L")]
    T2L,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Search {
    #[default]
    Greedy,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Scan {
    #[default]
    Fast,
    Faithful,
}

/// Numbers are named as sqrt2, sqrt2-1, golden, cbrt2, `rational P/Q`,
/// mu-square, mu-cube, liouville, primes, thue-morse, period-doubling or
/// file:PATH (a JSON algebraic or automaton spec).
///
/// `digits` prints the integer part; `tally`, `leftcut`, `reduce` and
/// `recover` only see the fractional digits, so sqrt2 and sqrt2-1 answer
/// identically there.
#[derive(Debug, Parser)]
#[command(name = "realspace", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the n-digit approximation.
    Digits {
        /// Number selector.
        number: Vec<String>,
        #[arg(short)]
        n: usize,
        #[arg(long)]
        base: Option<u32>,
        /// Also print the peak work cells.
        #[arg(long)]
        meter: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Print the i-th fractional digit via the counter-only probe.
    Nth {
        number: Vec<String>,
        #[arg(short)]
        i: usize,
        #[arg(long)]
        base: Option<u32>,
        #[arg(long)]
        meter: bool,
    },
    /// Measure peak space over a grid of n and classify its growth.
    Profile {
        number: Vec<String>,
        /// Comma-separated n values (default 2^6..2^12, or 2^6..2^10 for roots).
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<u64>>,
        #[arg(long)]
        base: Option<u32>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Is the triple `N I B` (or unary length L) in the number's tally set?
    Tally {
        /// Number selector followed by `N I B` unless --len is given.
        args: Vec<String>,
        #[arg(long)]
        len: Option<String>,
        #[arg(long)]
        base: Option<u32>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Is the dyadic D in the number's left cut?
    Leftcut {
        /// Number selector followed by D.
        args: Vec<String>,
        #[arg(long)]
        base: Option<u32>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Rebuild the n-digit fractional approximation from tally queries.
    Recover {
        number: Vec<String>,
        #[arg(short)]
        n: usize,
        #[arg(long, value_enum, default_value_t)]
        scan: Scan,
        #[arg(long)]
        base: Option<u32>,
    },
    /// Answer one membership question through the other oracle and print
    /// the query transcript.
    Reduce {
        #[arg(value_enum)]
        direction: Direction,
        number: Vec<String>,
        /// T2L instance.
        #[arg(long, num_args = 3, value_names = ["N", "I", "B"])]
        triple: Option<Vec<u64>>,
        /// T2L instance as a unary length.
        #[arg(long)]
        len: Option<String>,
        /// L2T instance.
        #[arg(long)]
        dyadic: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        search: Search,
        #[arg(long)]
        base: Option<u32>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run an automaton with advice from a JSON spec.
    Dfa {
        spec: String,
        #[arg(short)]
        n: u64,
        /// Output symbols to print at most.
        #[arg(long, default_value_t = 64)]
        limit: usize,
        /// Check the machine against a number for every n' <= n.
        #[arg(long)]
        check: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Cantor pairing: `encode I J [K]` or `decode H`.
    Pair {
        #[command(subcommand)]
        op: PairOp,
    },
    /// Run the built-in consistency checks in an order shuffled by
    /// REALSPACE_SEED.
    Selftest,
}

#[derive(Debug, Subcommand)]
enum PairOp {
    Encode {
        #[arg(num_args = 2..=3, required = true)]
        values: Vec<String>,
    },
    Decode {
        h: String,
        /// Decode as a nested triple.
        #[arg(long)]
        triple: bool,
    },
}

fn dispatch(cli: Cli) -> Result<String, CliError> {
    use commands as c;
    match cli.command {
        Command::Digits { number, n, base, meter, format } => c::digits(number, n, base, meter, format),
        Command::Nth { number, i, base, meter } => c::nth(number, i, base, meter),
        Command::Profile { number, grid, base, format } => c::profile(number, grid, base, format),
        Command::Tally { args, len, base, format } => c::tally(args, len, base, format),
        Command::Leftcut { args, base, format } => c::leftcut(args, base, format),
        Command::Recover { number, n, scan, base } => c::recover(number, n, scan, base),
        Command::Reduce { direction, number, triple, len, dyadic, search, base, format } => {
            c::reduce(direction, number, c::Instance { triple, len, dyadic }, search, base, format)
        }
        Command::Dfa { spec, n, limit, check, format } => c::dfa(&spec, n, limit, check, format),
        Command::Pair { op } => match op {
            PairOp::Encode { values } => c::pair_encode(&values),
            PairOp::Decode { h, triple } => c::pair_decode(&h, triple),
        },
        Command::Selftest => selftest::run(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::Failure(report) = &e {
                print!("{report}");
            } else {
                eprintln!("error: {}", e.message());
            }
            ExitCode::from(e.code())
        }
    }
}
