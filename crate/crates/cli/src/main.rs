//! `recurprimes` — prime divisors of binary recurrence sequences.
//!
//! Every subcommand writes one machine-readable report (JSON envelope or
//! CSV) to stdout or `--output`; human progress lines go to stderr. Reports
//! are deterministic: `--jobs` never changes the bytes, and `--no-timing`
//! drops the one field that varies between runs.

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use recurprimes::arith::FactorBudget;
use recurprimes::{Error, Result};
use recurprimes_cli::report::{CsvTable, Report};
use recurprimes_cli::{exec, shard, suites};

#[derive(Parser)]
#[command(
    name = "recurprimes",
    version,
    about = "Prime divisors of binary recurrence sequences: counts, ranks, censuses, constructions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for prime-range scans (default: RECURPRIMES_JOBS, else 1)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report to this file instead of stdout
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,

    /// Omit timing_ms so repeated runs compare byte-identically
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Factoring effort; anything unresolved within it is reported as an
/// interval, never guessed.
#[derive(Args)]
struct BudgetArgs {
    /// Trial-divide by every prime up to this bound
    #[arg(long, global = true, default_value_t = FactorBudget::default().trial_bound)]
    trial_bound: u64,

    /// Pollard-rho iteration cap per seed
    #[arg(long, global = true, default_value_t = FactorBudget::default().rho_iterations)]
    rho_iterations: u64,

    /// Miller-Rabin rounds for candidates beyond 2^64
    #[arg(long, global = true, default_value_t = FactorBudget::default().primality_rounds)]
    primality_rounds: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Exact terms, degeneracy classification, and dominant-root data
    Terms {
        #[arg(long)]
        r: i64,
        #[arg(long)]
        s: i64,
        #[arg(long)]
        u0: i64,
        #[arg(long)]
        u1: i64,
        /// First index to print
        #[arg(long, default_value_t = 0)]
        lo: u64,
        /// Last index to print (inclusive)
        #[arg(long)]
        hi: u64,
        /// Include log-gap diagnostics against the dominant root
        #[arg(long)]
        gaps: bool,
    },

    /// Distinct prime divisors of the product of terms up to N, as a
    /// certified interval
    Omega {
        #[arg(long)]
        r: i64,
        #[arg(long)]
        s: i64,
        #[arg(long)]
        u0: i64,
        #[arg(long)]
        u1: i64,
        #[arg(long = "N")]
        n: u64,
        /// Epsilon in the conditional linear floor (1 - 1/sqrt(2) - eps) N
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
    },

    /// Rank of apparition of p in the Lucas sequence for (r, s)
    Rank {
        #[arg(long)]
        r: i64,
        #[arg(long)]
        s: i64,
        #[arg(long)]
        p: u64,
    },

    /// p-adic valuation of the n-th Lucas term via the rank/valuation law
    Valuation {
        #[arg(long)]
        r: i64,
        #[arg(long)]
        s: i64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
    },

    /// Primitive prime divisors of the n-th Lucas term
    Primdiv {
        #[arg(long)]
        r: i64,
        #[arg(long)]
        s: i64,
        #[arg(long)]
        n: u64,
    },

    /// Count primes p <= x for which b is a power of a mod p
    Artin {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        x: u64,
        /// Include the primes themselves in the report
        #[arg(long)]
        list: bool,
    },

    /// Rational variant: primes p for which b1/b2 is a power of a1/a2 mod p
    ArtinRational {
        #[arg(long)]
        a1: i64,
        #[arg(long)]
        a2: i64,
        #[arg(long)]
        b1: i64,
        #[arg(long)]
        b2: i64,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        list: bool,
    },

    /// Greatest prime factor of a^n - b for the top window of indices
    GpfWindow {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        /// Top index of the window
        #[arg(long)]
        n: u64,
        /// Window depth: indices n-y through n are examined
        #[arg(long)]
        y: u64,
    },

    /// Census of primes where b is a power of a or a primitive root,
    /// restricted-set counts, and order case tallies
    Disjunction {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        list: bool,
    },

    /// Cubic-form solution families built from factorizations of a^n - b
    Thue {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long = "N")]
        n: u64,
    },

    /// Quadratic-twist points on d y^2 = x^5 - b built from a^n - b
    /// (or the rational variant with --rational)
    Curve {
        #[arg(long)]
        a: Option<i64>,
        #[arg(long)]
        b: Option<i64>,
        #[arg(long = "N")]
        n: u64,
        /// Build points with rational coordinates from a1/a2 and b1/b2
        #[arg(long)]
        rational: bool,
        #[arg(long)]
        a1: Option<i64>,
        #[arg(long)]
        a2: Option<i64>,
        #[arg(long)]
        b1: Option<i64>,
        #[arg(long)]
        b2: Option<i64>,
    },

    /// Run an acceptance suite; exit 0 if every criterion passes, 1 otherwise
    Verify {
        /// "all", "thm22", or an individual criterion name
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let jobs = shard::effective_jobs(cli.jobs);
    let budget = FactorBudget {
        trial_bound: cli.budget.trial_bound,
        rho_iterations: cli.budget.rho_iterations,
        primality_rounds: cli.budget.primality_rounds,
    };
    let started = Instant::now();

    let (subcommand, report, exit) = match &cli.command {
        Command::Terms { r, s, u0, u1, lo, hi, gaps } => (
            "terms",
            exec::terms(*r, *s, *u0, *u1, *lo, *hi, *gaps)?,
            ExitCode::SUCCESS,
        ),
        Command::Omega { r, s, u0, u1, n, eps } => (
            "omega",
            exec::omega(*r, *s, *u0, *u1, *n, *eps, &budget)?,
            ExitCode::SUCCESS,
        ),
        Command::Rank { r, s, p } => ("rank", exec::rank(*r, *s, *p)?, ExitCode::SUCCESS),
        Command::Valuation { r, s, p, n } => (
            "valuation",
            exec::valuation(*r, *s, *p, *n)?,
            ExitCode::SUCCESS,
        ),
        Command::Primdiv { r, s, n } => (
            "primdiv",
            exec::primdiv(*r, *s, *n, &budget)?,
            ExitCode::SUCCESS,
        ),
        Command::Artin { a, b, x, list } => (
            "artin",
            exec::artin(*a, *b, *x, *list, jobs)?,
            ExitCode::SUCCESS,
        ),
        Command::ArtinRational { a1, a2, b1, b2, x, list } => (
            "artin-rational",
            exec::artin_rational(*a1, *a2, *b1, *b2, *x, *list, jobs)?,
            ExitCode::SUCCESS,
        ),
        Command::GpfWindow { a, b, n, y } => (
            "gpf-window",
            exec::gpf(*a, *b, *n, *y, &budget)?,
            ExitCode::SUCCESS,
        ),
        Command::Disjunction { a, b, x, list } => (
            "disjunction",
            exec::disjunction(*a, *b, *x, *list, jobs)?,
            ExitCode::SUCCESS,
        ),
        Command::Thue { a, b, n } => ("thue", exec::thue(*a, *b, *n, &budget)?, ExitCode::SUCCESS),
        Command::Curve { a, b, n, rational, a1, a2, b1, b2 } => {
            if *rational {
                let (a1, a2, b1, b2) = match (a1, a2, b1, b2) {
                    (Some(a1), Some(a2), Some(b1), Some(b2)) => (*a1, *a2, *b1, *b2),
                    _ => {
                        return Err(Error::InvalidArgument(
                            "--rational requires --a1, --a2, --b1, and --b2".into(),
                        ))
                    }
                };
                (
                    "curve",
                    exec::curve_rational(a1, a2, b1, b2, *n, &budget)?,
                    ExitCode::SUCCESS,
                )
            } else {
                let (a, b) = match (a, b) {
                    (Some(a), Some(b)) => (*a, *b),
                    _ => {
                        return Err(Error::InvalidArgument(
                            "curve requires --a and --b (or --rational with a1/a2/b1/b2)".into(),
                        ))
                    }
                };
                ("curve", exec::curve(a, b, *n, &budget)?, ExitCode::SUCCESS)
            }
        }
        Command::Verify { suite } => {
            let results = suites::run_suite(suite)?;
            for r in &results {
                eprintln!("{}", r.line());
            }
            let pass = results.iter().all(|r| r.pass);
            let mut rep = Report::new(
                json!({"suite": suite}),
                json!({
                    "pass": pass,
                    "criteria": results
                        .iter()
                        .map(|r| json!({
                            "index": r.index,
                            "name": r.name,
                            "pass": r.pass,
                            "detail": r.detail,
                        }))
                        .collect::<Vec<_>>(),
                }),
            );
            let mut csv = CsvTable::new(vec!["index", "name", "pass", "detail"]);
            for r in &results {
                csv.push_row(vec![
                    r.index.to_string(),
                    r.name.to_string(),
                    r.pass.to_string(),
                    r.detail.clone(),
                ]);
            }
            rep.csv = csv;
            let exit = if pass { ExitCode::SUCCESS } else { ExitCode::from(1) };
            ("verify", rep, exit)
        }
    };

    let timing = (!cli.no_timing).then(|| started.elapsed().as_millis() as u64);
    let text = match cli.format {
        Format::Json => report.render_json(subcommand, timing),
        Format::Csv => report.render_csv(),
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            Error::InvalidArgument(format!("cannot write {}: {e}", path.display()))
        })?,
        None => print!("{text}"),
    }
    Ok(exit)
}
