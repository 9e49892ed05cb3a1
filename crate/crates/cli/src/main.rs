//! `leafsup`: validate, slice, decompose and reassemble integer currents.
//!
//! Exit codes: 0 ok, 1 IO, 2 parse, 3 invalid current, 4 internal invariant
//! violation or failed check verdict, 5 usage.

mod report;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use leafsup::codec::{
    decode_chain, decode_leaf_stack, encode_chain, encode_leaf_stack, CodecError,
};
use leafsup::cubical::GridSpec;
use leafsup::current::{generate_random, CurrentError, PositiveClosedCurrent};
use leafsup::decompose::{leaf_decomposition, superpose, DecomposeError};
use leafsup::zero_current::{PositiveStack, ZeroCurrent};

use report::{CheckReport, InvalidReport, ValidReport};

#[derive(Parser)]
#[command(
    name = "leafsup",
    version,
    about = "Leaf decomposition of positive closed integer currents"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Input file, `-` or absent for stdin.
    input: Option<PathBuf>,
    /// Output file, stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a chain is closed with nonnegative horizontal part.
    Validate(Io),
    /// Export every vertical slice as CSV rows `x_0,..,x_{n-1},N,h_1,..,h_N`.
    Slice(Io),
    /// Write the monotone leaf stack of a current.
    Decompose(Io),
    /// Superpose a leaf stack back into a chain.
    Reconstruct(Io),
    /// Flat distance between two stacks of heights given as single-column CSV.
    Flatdist {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Audit decomposition, mass additivity and the flat-variation identity.
    Check {
        #[command(flatten)]
        io: Io,
        /// Also show that two crossing leaves lose mass when summed.
        #[arg(long)]
        demo_cancellation: bool,
    },
    /// Generate a random positive closed current.
    Gen(GenArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Column count per axis; repeat once per axis or give one value for all.
    #[arg(long, default_values_t = [8])]
    extent: Vec<i64>,
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], allow_negative_numbers = true,
          default_values_t = [0, 8])]
    y_range: Vec<i64>,
    #[arg(long, default_value_t = 3)]
    leaves: usize,
    /// Attempts at adding the boundary of a random unit cell.
    #[arg(long, default_value_t = 0)]
    perturb: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("check failed")]
    Verdict,
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Parse(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::Internal(_) | CliError::Verdict => 4,
            CliError::Usage(_) => 5,
        }
    }
}

impl From<CodecError> for CliError {
    fn from(e: CodecError) -> Self {
        match e {
            CodecError::Stack(e @ DecomposeError::MonotonicityViolation { .. }) => {
                CliError::Invalid(e.to_string())
            }
            e => CliError::Parse(e.to_string()),
        }
    }
}

fn io_err(path: &str) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_string(),
        source,
    }
}

fn read_input(input: Option<&Path>) -> Result<String, CliError> {
    match input {
        None => read_stdin(),
        Some(p) if p == Path::new("-") => read_stdin(),
        Some(p) => fs::read_to_string(p).map_err(io_err(&p.display().to_string())),
    }
}

fn read_stdin() -> Result<String, CliError> {
    let mut s = String::new();
    io::stdin()
        .read_to_string(&mut s)
        .map_err(io_err("<stdin>"))?;
    Ok(s)
}

fn write_output(output: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match output {
        Some(p) => fs::write(p, bytes).map_err(io_err(&p.display().to_string())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(io_err("<stdout>"))
        }
    }
}

fn json_line<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec(value).expect("report types serialize");
    v.push(b'\n');
    v
}

/// Reads and validates a chain. An invalid current prints its report to
/// stdout before failing.
fn load_current(input: Option<&Path>) -> Result<PositiveClosedCurrent, CliError> {
    let chain = decode_chain(&read_input(input)?)?;
    match PositiveClosedCurrent::validate(chain) {
        Ok(t) => Ok(t),
        Err(e) => {
            let report = match &e {
                CurrentError::Invalid(v) => InvalidReport::from_violations(v),
                other => InvalidReport::other(other.to_string()),
            };
            write_output(None, &json_line(&report))?;
            Err(CliError::Invalid(e.to_string()))
        }
    }
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

fn cmd_validate(io: &Io) -> Result<(), CliError> {
    let t = load_current(io.input.as_deref())?;
    write_output(io.output.as_deref(), &json_line(&ValidReport::new(&t)))
}

fn cmd_slice(io: &Io) -> Result<(), CliError> {
    let t = load_current(io.input.as_deref())?;
    let slices = t.slice_all().map_err(internal)?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_writer(Vec::new());
    for (column, stack) in slices.iter() {
        let row = column
            .coords()
            .iter()
            .map(i64::to_string)
            .chain([stack.len().to_string()])
            .chain(stack.heights().iter().map(i64::to_string));
        w.write_record(row).map_err(internal)?;
    }
    let bytes = w.into_inner().map_err(internal)?;
    write_output(io.output.as_deref(), &bytes)
}

fn cmd_decompose(io: &Io) -> Result<(), CliError> {
    let t = load_current(io.input.as_deref())?;
    let stack = leaf_decomposition(&t).map_err(internal)?;
    let mut text = encode_leaf_stack(&stack);
    text.push('\n');
    write_output(io.output.as_deref(), text.as_bytes())
}

fn cmd_reconstruct(io: &Io) -> Result<(), CliError> {
    let stack = decode_leaf_stack(&read_input(io.input.as_deref())?)?;
    let t = superpose(&stack).map_err(internal)?;
    let mut text = encode_chain(t.chain());
    text.push('\n');
    write_output(io.output.as_deref(), text.as_bytes())
}

/// Heights from a single-column CSV; a non-numeric first row is a header.
fn read_heights(path: &Path) -> Result<Vec<String>, CliError> {
    let name = path.display().to_string();
    let text = fs::read_to_string(path).map_err(io_err(&name))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Parse(format!("{name}: {e}")))?;
        if record.len() != 1 {
            return Err(CliError::Parse(format!(
                "{name}: row {} has {} fields, expected 1",
                i + 1,
                record.len()
            )));
        }
        let field = &record[0];
        if i == 0 && field.parse::<f64>().is_err() {
            continue;
        }
        out.push(field.to_string());
    }
    Ok(out)
}

fn flat_text<P: leafsup::zero_current::Position + std::str::FromStr>(
    a: &[String],
    b: &[String],
) -> Option<Result<String, CliError>> {
    let parse = |v: &[String]| {
        v.iter()
            .map(|s| s.parse::<P>().ok())
            .collect::<Option<Vec<P>>>()
    };
    let (a, b) = (parse(a)?, parse(b)?);
    let stack = |v: Vec<P>| PositiveStack::new(v).map_err(|e| CliError::Parse(e.to_string()));
    Some((|| {
        let (a, b) = (stack(a)?, stack(b)?);
        let diff: ZeroCurrent<P> = a.to_current().minus(&b.to_current());
        Ok(diff.flat_functional().to_string())
    })())
}

fn cmd_flatdist(a: &Path, b: &Path, output: Option<&Path>) -> Result<(), CliError> {
    let (a, b) = (read_heights(a)?, read_heights(b)?);
    let text = match flat_text::<i64>(&a, &b) {
        Some(r) => r?,
        None => flat_text::<f64>(&a, &b)
            .unwrap_or_else(|| Err(CliError::Parse("heights must be numbers".into())))?,
    };
    write_output(output, format!("{text}\n").as_bytes())
}

fn cmd_check(io: &Io, demo: bool) -> Result<(), CliError> {
    let start = Instant::now();
    let t = load_current(io.input.as_deref())?;
    let loaded = start.elapsed();
    let report = CheckReport::build(&t, demo).map_err(internal)?;
    eprintln!(
        "timing: load+validate {:.3} ms, audits {:.3} ms",
        loaded.as_secs_f64() * 1e3,
        (start.elapsed() - loaded).as_secs_f64() * 1e3
    );
    write_output(io.output.as_deref(), &json_line(&report))?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Verdict)
    }
}

fn cmd_gen(args: &GenArgs) -> Result<(), CliError> {
    let extents = match args.extent.as_slice() {
        [e] => vec![*e; args.n],
        es => es.to_vec(),
    };
    let grid = GridSpec::new(args.n, extents, (args.y_range[0], args.y_range[1]))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let t = generate_random(&grid, args.leaves, args.perturb, args.seed);
    let mut text = encode_chain(t.chain());
    text.push('\n');
    write_output(args.output.as_deref(), text.as_bytes())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Validate(io) => cmd_validate(io),
        Command::Slice(io) => cmd_slice(io),
        Command::Decompose(io) => cmd_decompose(io),
        Command::Reconstruct(io) => cmd_reconstruct(io),
        Command::Flatdist { a, b, output } => cmd_flatdist(a, b, output.as_deref()),
        Command::Check {
            io,
            demo_cancellation,
        } => cmd_check(io, *demo_cancellation),
        Command::Gen(args) => cmd_gen(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(5),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("leafsup: {e}");
            ExitCode::from(e.code())
        }
    }
}
