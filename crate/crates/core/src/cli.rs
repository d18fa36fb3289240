//! Command-line interface. Exit codes: 0 all checks pass, 1 a check
//! failed, 2 the input could not be used.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::InputError;
use crate::report::{ReportDocument, DEFAULT_TOLERANCE};
use crate::sample::{parse_grid, DEFAULT_SEED};
use crate::session::{RunOptions, Session};
use crate::soliton::SolitonOptions;
use crate::spec_file::ManifoldSpecFile;
use crate::{suite, zoo};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// The manifold the worked-example suite runs on.
pub const EXAMPLE: &str = "paper-kenmotsu";

#[derive(Debug, Parser)]
#[command(name = "solitonlab", version, about = "Curvature and soliton checks on almost contact metric manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Source {
    /// Built-in manifold (see `solitonlab zoo`).
    #[arg(long, conflicts_with = "spec")]
    pub zoo: Option<String>,
    /// JSON manifold spec file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Run {
    /// Base tolerance; every check family scales with it.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    /// Seed for the random sample points (default: the plan's own, 42 unless overridden in the file).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random sample points.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Grid override, e.g. `x=-1:1:5,z=1.1:2:5`.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the metric and structure axioms and fit (α, β).
    Validate {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        run: Run,
    },
    /// Curvature identities and component tables.
    Curvature {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        run: Run,
        /// Tables in the orthonormal frame instead of coordinates.
        #[arg(long)]
        frame: bool,
    },
    /// Soliton residuals and every identity that follows from them.
    CheckSoliton {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        run: Run,
        /// Candidate name from the manifold's list.
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        candidate: Option<String>,
        /// Every candidate, plus the checks that combine them.
        #[arg(long)]
        all: bool,
        /// Also solve for the best λ at each point.
        #[arg(long)]
        solve_lambda: bool,
    },
    /// Every suite on the 3-dimensional Kenmotsu worked example; a claim table goes to stderr.
    VerifyPaper {
        #[command(flatten)]
        run: Run,
    },
    /// Write a built-in manifold as a spec file.
    Export {
        #[arg(long)]
        zoo: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List the built-in manifolds.
    Zoo,
}

fn options(run: &Run) -> Result<RunOptions, InputError> {
    if !(run.tol.is_finite() && run.tol > 0.0) {
        return Err(InputError::Invalid(format!("--tol must be a positive number, got {}", run.tol)));
    }
    let grid = match &run.grid {
        Some(text) => parse_grid(text)?,
        None => Vec::new(),
    };
    Ok(RunOptions { tolerance: run.tol, seed: run.seed, samples: run.samples, grid })
}

fn session(source: &Source, run: &Run) -> Result<Session, InputError> {
    let opts = options(run)?;
    match (&source.zoo, &source.spec) {
        (Some(name), None) => zoo::load(name, &opts),
        (None, Some(path)) => Session::build(ManifoldSpecFile::load(path)?, &opts),
        _ => Err(InputError::Invalid("give exactly one of --zoo or --spec".into())),
    }
}

fn emit(doc: &ReportDocument, run: &Run, out: &mut dyn Write) -> Result<(), InputError> {
    let text = match run.format {
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv(),
    };
    write_text(&text, run.output.as_ref(), out)
}

fn write_text(text: &str, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<(), InputError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| InputError::Io { action: "write", path: p.display().to_string(), message: e.to_string() }),
        None => out.write_all(text.as_bytes()).map_err(|e| InputError::Io { action: "write", path: "stdout".into(), message: e.to_string() }),
    }
}

fn verdict_code(doc: &ReportDocument) -> i32 {
    if doc.passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, InputError> {
    match cli.command {
        Command::Validate { source, run } => {
            let doc = suite::validate(&session(&source, &run)?);
            emit(&doc, &run, out)?;
            Ok(verdict_code(&doc))
        }
        Command::Curvature { source, run, frame } => {
            let doc = suite::curvature(&session(&source, &run)?, frame);
            emit(&doc, &run, out)?;
            Ok(verdict_code(&doc))
        }
        Command::CheckSoliton { source, run, candidate, all: _, solve_lambda } => {
            let s = session(&source, &run)?;
            let selected = candidate.as_deref().map(|name| s.candidate(name)).transpose()?;
            let doc = suite::check_soliton(&s, selected, SolitonOptions { solve_lambda });
            emit(&doc, &run, out)?;
            Ok(verdict_code(&doc))
        }
        Command::VerifyPaper { run } => {
            let s = zoo::load(EXAMPLE, &options(&run)?)?;
            let doc = suite::verify(&s);
            let _ = err.write_all(doc.claim_table().as_bytes());
            emit(&doc, &run, out)?;
            Ok(verdict_code(&doc))
        }
        Command::Export { zoo: name, output } => {
            let spec = zoo::spec(&name)?;
            write_text(&spec.to_json(), output.as_ref(), out)?;
            Ok(EXIT_PASS)
        }
        Command::Zoo => {
            let mut text = String::new();
            for name in zoo::ENTRIES {
                let spec = zoo::spec(name)?;
                text.push_str(&format!("{name:<22} {}\n", spec.description));
            }
            text.push_str(&format!("\nfamilies: flat-cosymplectic-<m> (odd m ≥ 3), alpha-kenmotsu-<a> (a ≠ 0); default seed {DEFAULT_SEED}\n"));
            write_text(&text, None, out)?;
            Ok(EXIT_PASS)
        }
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}
