//! Command-line surface: count formulas, cross-check against exhaustive
//! enumeration, emit branching statistics, and generate seeded instances.
//!
//! Exit codes: 0 success, 1 parse or validation error, 2 internal assertion,
//! 3 count mismatch in `check`.

use std::io::Read;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use clausecount::analysis::run_report;
use clausecount::dimacs::{parse_dimacs, serialize_dimacs};
use clausecount::gen::{generate, GenParams};
use clausecount::graph::ConstraintGraph;
use clausecount::mc2::count_mc2_with;
use clausecount::mc3::count_mc3_with;
use clausecount::propagate::{oracle_count, DEFAULT_ORACLE_CAP};
use clausecount::{Algorithm, CountOptions, Formula, ModelCount};

#[derive(Parser)]
#[command(name = "clausecount", version, about = "Exact model counting for 2-CNF and 3-CNF formulas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Alg {
    Mc2,
    Mc3,
    Oracle,
    /// mc2 when every clause has width at most two, otherwise mc3.
    Auto,
}

#[derive(Parser, Clone)]
struct CountFlags {
    /// Input path; `-` reads stdin.
    #[arg(default_value = "-")]
    input: String,
    #[arg(long, value_enum, default_value_t = Alg::Auto)]
    alg: Alg,
    /// Record per-node clause-drop vectors during the run.
    #[arg(long)]
    trace: bool,
    /// Dump the constraint graph in DOT format to stderr.
    #[arg(long)]
    dot: bool,
    /// Evaluate the two polarity branches concurrently.
    #[arg(long)]
    parallel: bool,
    /// Disable the five-vertex product rule (the count must not change).
    #[arg(long)]
    five_vertex_disabled: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Count the models of a DIMACS CNF formula.
    Count {
        #[command(flatten)]
        flags: CountFlags,
        /// Also print run statistics as a JSON object.
        #[arg(long)]
        json: bool,
    },
    /// Run a counting algorithm and exhaustive enumeration; fail on mismatch.
    Check {
        #[command(flatten)]
        flags: CountFlags,
    },
    /// Count under instrumentation and print the statistics JSON object.
    Stats {
        #[command(flatten)]
        flags: CountFlags,
    },
    /// Generate a seeded random k-CNF instance on stdout.
    Gen {
        /// Clause width, 2 or 3.
        #[arg(long)]
        k: u8,
        /// Number of variables.
        #[arg(long)]
        n: u32,
        /// Number of distinct clauses.
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match catch_unwind(AssertUnwindSafe(|| run(cli))) {
        Ok(code) => ExitCode::from(code),
        Err(_) => {
            eprintln!("internal error: an assertion failed during counting");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::Count { flags, json } => cmd_count(&flags, json),
        Command::Check { flags } => cmd_check(&flags),
        Command::Stats { flags } => cmd_stats(&flags),
        Command::Gen { k, n, m, seed } => cmd_gen(k, n, m, seed),
    }
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| format!("failed to read stdin: {e}"))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("failed to read {path}: {e}"))
    }
}

fn load_formula(path: &str) -> Result<Formula, String> {
    let text = read_input(path)?;
    let parsed = parse_dimacs(&text).map_err(|e| format!("parse error: {e}"))?;
    for warning in &parsed.warnings {
        eprintln!("warning: {warning}");
    }
    Ok(parsed.formula)
}

fn resolve_alg(alg: Alg, f: &Formula) -> Result<Option<Algorithm>, String> {
    let width = f.max_clause_len();
    let resolved = match alg {
        Alg::Oracle => return Ok(None),
        Alg::Mc2 => Algorithm::Mc2,
        Alg::Mc3 => Algorithm::Mc3,
        Alg::Auto if width <= 2 => Algorithm::Mc2,
        Alg::Auto if width <= 3 => Algorithm::Mc3,
        Alg::Auto => {
            return Err(format!("clauses of length {width} are unsupported; the widest algorithm handles 3"))
        }
    };
    let k = match resolved {
        Algorithm::Mc2 => 2,
        Algorithm::Mc3 => 3,
    };
    if !f.is_empty() && f.clauses().iter().any(|c| c.len() < k) {
        eprintln!("note: input contains clauses shorter than width {k}");
    }
    Ok(Some(resolved))
}

fn options(flags: &CountFlags) -> CountOptions {
    CountOptions {
        five_vertex: !flags.five_vertex_disabled,
        parallel: flags.parallel,
        trace: flags.trace,
    }
}

fn maybe_dump_dot(flags: &CountFlags, f: &Formula) {
    if flags.dot {
        eprint!("{}", ConstraintGraph::build(f).to_dot());
    }
}

fn count_with(f: &Formula, algorithm: Option<Algorithm>, opts: &CountOptions) -> Result<ModelCount, String> {
    match algorithm {
        None => oracle_count(f).map_err(|e| e.to_string()),
        Some(Algorithm::Mc2) => count_mc2_with(f, opts, None).map_err(|e| e.to_string()),
        Some(Algorithm::Mc3) => count_mc3_with(f, opts, None).map_err(|e| e.to_string()),
    }
}

fn cmd_count(flags: &CountFlags, json: bool) -> u8 {
    let (formula, algorithm) = match prepare(flags) {
        Ok(pair) => pair,
        Err(code) => return code,
    };
    let opts = options(flags);
    if json {
        let Some(algorithm) = algorithm else {
            eprintln!("error: --json statistics require a branching algorithm, not the oracle");
            return 1;
        };
        match run_report(&formula, algorithm, &opts) {
            Ok(report) => {
                println!("{}", report.count);
                println!("{}", serde_json::to_string(&report).expect("reports serialize"));
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        }
    } else {
        match count_with(&formula, algorithm, &opts) {
            Ok(count) => {
                println!("{count}");
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        }
    }
}

fn cmd_check(flags: &CountFlags) -> u8 {
    let (formula, algorithm) = match prepare(flags) {
        Ok(pair) => pair,
        Err(code) => return code,
    };
    let occurring = formula.occurring_vars().len();
    if occurring > DEFAULT_ORACLE_CAP {
        eprintln!("error: {occurring} occurring variables exceed the oracle cap of {DEFAULT_ORACLE_CAP}");
        return 1;
    }
    let opts = options(flags);
    let counted = match count_with(&formula, algorithm, &opts) {
        Ok(count) => count,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let oracle = match oracle_count(&formula) {
        Ok(count) => count,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let name = algorithm.map_or_else(|| "oracle".to_string(), |a| a.to_string());
    println!("{name}: {counted}");
    println!("oracle: {oracle}");
    if counted == oracle {
        0
    } else {
        eprintln!("error: counts disagree");
        3
    }
}

fn cmd_stats(flags: &CountFlags) -> u8 {
    let (formula, algorithm) = match prepare(flags) {
        Ok(pair) => pair,
        Err(code) => return code,
    };
    let Some(algorithm) = algorithm else {
        eprintln!("error: statistics require a branching algorithm, not the oracle");
        return 1;
    };
    match run_report(&formula, algorithm, &options(flags)) {
        Ok(report) => {
            println!("{}", serde_json::to_string(&report).expect("reports serialize"));
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn prepare(flags: &CountFlags) -> Result<(Formula, Option<Algorithm>), u8> {
    let formula = load_formula(&flags.input).map_err(|e| {
        eprintln!("error: {e}");
        1u8
    })?;
    maybe_dump_dot(flags, &formula);
    let algorithm = resolve_alg(flags.alg, &formula).map_err(|e| {
        eprintln!("error: {e}");
        1u8
    })?;
    Ok((formula, algorithm))
}

fn cmd_gen(k: u8, n: u32, m: usize, seed: u64) -> u8 {
    match generate(&GenParams { k, n, m, seed }) {
        Ok(formula) => {
            print!("{}", serialize_dimacs(&formula));
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
