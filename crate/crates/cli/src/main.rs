use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pfopt::driver::{
    parse_methods, parse_r_values, reproduce_table1_with, run_bounds_with, table1_csv, table1_render, ProblemFile,
    ProblemSpec, RunOptions, DEFAULT_BUDGET,
};
use pfopt::jacobi::monic_recurrence_from_moments;
use pfopt::measures::pushforward_moments;
use pfopt::pencil::PencilOptions;
use pfopt::Error;

#[derive(Parser)]
#[command(name = "pfopt", version, about = "Moment bounds on polynomial extrema over simple sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecisionArg {
    F64,
    Dd,
}

#[derive(Subcommand)]
enum Command {
    /// Bounds on min f and max f for a range of orders.
    Bounds {
        #[arg(long)]
        problem: PathBuf,
        /// `a..b`, a comma list, or a single order.
        #[arg(long, default_value = "1..6")]
        r: String,
        #[arg(long, default_value = "jacobi")]
        method: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        oracle_budget: usize,
        #[arg(long, value_enum, default_value = "csv")]
        out: Format,
        #[arg(long)]
        out_file: Option<PathBuf>,
        /// Include wall-clock time per method.
        #[arg(long)]
        timings: bool,
        /// Working precision of the dense pencil solver.
        #[arg(long, value_enum, default_value = "dd")]
        precision: PrecisionArg,
    },
    /// Exact moments of the pushforward, one `k,num,den` line each.
    Moments {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        max_k: usize,
    },
    /// Exact three-term recurrence coefficients up to degree `r`.
    Recurrence {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        r: usize,
    },
    /// The four two-variable test problems at r = 5, 6 against reference values.
    Table1 {
        #[arg(long, value_enum, default_value = "text")]
        out: TableFormat,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        oracle_budget: usize,
    },
}

enum Failure {
    Validation(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

fn load_problem(path: &Path) -> Result<ProblemFile, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?;
    Ok(ProblemFile::parse(&text)?)
}

fn load_spec(path: &Path) -> Result<ProblemSpec, Failure> {
    Ok(load_problem(path)?.into_problem(vec![1], [pfopt::driver::Method::Jacobi])?)
}

fn emit(text: &str, out_file: Option<&Path>) -> Result<(), Failure> {
    match out_file {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Validation(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Bounds {
            problem,
            r,
            method,
            oracle_budget,
            out,
            out_file,
            timings,
            precision,
        } => {
            if oracle_budget == 0 {
                return Err(Failure::Validation("--oracle-budget must be at least 1".into()));
            }
            let r_values = parse_r_values(&r)?;
            let methods = parse_methods(&method)?;
            let spec = load_problem(&problem)?.into_problem(r_values, methods)?;
            let opts = RunOptions {
                oracle_budget,
                pencil: match precision {
                    PrecisionArg::F64 => PencilOptions::f64(),
                    PrecisionArg::Dd => PencilOptions::double_double(),
                },
                parallel: true,
            };
            let report = run_bounds_with(&spec, &opts)?;
            for note in &report.notes {
                eprintln!("note: {note}");
            }
            for row in &report.rows {
                for flag in &row.flags {
                    eprintln!("warning: r={}: {flag}", row.r);
                }
            }
            let text = match out {
                Format::Csv => report.to_csv(timings),
                Format::Json => report.to_json(timings) + "\n",
            };
            emit(&text, out_file.as_deref())?;
            if report.failed_at_min_r() {
                let first = &report.rows[0];
                return Err(Failure::Numerical(format!("r={}: {}", first.r, first.errors.join("; "))));
            }
            Ok(())
        }
        Command::Moments { problem, max_k } => {
            let spec = load_spec(&problem)?;
            let seq = pushforward_moments(&spec.f, &spec.measure, max_k)?;
            let mut text = String::from("k,num,den\n");
            for (k, v) in seq.values.iter().enumerate() {
                text.push_str(&format!("{k},{},{}\n", v.numer(), v.denom()));
            }
            emit(&text, None)
        }
        Command::Recurrence { problem, r } => {
            let spec = load_spec(&problem)?;
            let seq = pushforward_moments(&spec.f, &spec.measure, 2 * r + 1)?;
            let rec = monic_recurrence_from_moments(&seq, r)?;
            if rec.max_valid_r < r {
                eprintln!("note: Hankel matrix is singular beyond r = {}", rec.max_valid_r);
            }
            emit(&rec.to_csv(), None)
        }
        Command::Table1 { out, oracle_budget } => {
            let opts = RunOptions {
                oracle_budget: oracle_budget.max(1),
                ..RunOptions::default()
            };
            let table = reproduce_table1_with(&opts)?;
            let text = match out {
                TableFormat::Text => table1_render(&table),
                TableFormat::Csv => table1_csv(&table),
                TableFormat::Json => serde_json::to_string_pretty(&table).expect("table serializes") + "\n",
            };
            emit(&text, None)?;
            for c in table.checks.iter().filter(|c| !c.pass) {
                eprintln!("warning: {} {}({}) does not match {}", c.problem, c.quantity, c.r, c.reference);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
