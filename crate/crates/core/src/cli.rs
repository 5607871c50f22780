//! The `fpa` command line.
//!
//! Reports go to standard output; every diagnostic goes to standard error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::classifier::{parse_matrix, ClassificationMatrix};
use crate::domain::{ComplexityLevel, ComponentClass, FpResult, Weights};
use crate::engine::{self, Adjustment, RcafTarget};
use crate::lexer::{Diagnostic, DiagnosticKind};
use crate::report::{self, ReportFormat};
use crate::sheet::{parse_sheet, parse_weights, ParsedSheet};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    /// The file reads fine but its content is invalid.
    Invalid = 1,
    /// The file could not be parsed.
    Parse = 2,
    /// A file could not be read.
    Io = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "fpa",
    version,
    about = "Function point analysis from count sheets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Shared {
    /// Weight override file with a complete [weights] section
    #[arg(long, value_name = "FILE")]
    weights: Option<PathBuf>,
    /// Classification matrix override file
    #[arg(long, value_name = "FILE")]
    matrix: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
    format: ReportFormat,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the function point estimate of a sheet
    Compute {
        path: PathBuf,
        #[command(flatten)]
        shared: Shared,
    },
    /// Check a sheet and list its diagnostics
    Validate { path: PathBuf },
    /// Compare two sheets (deltas are second minus first)
    Compare {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        shared: Shared,
    },
    /// Recompute a sheet after hypothetical changes
    Whatif {
        path: PathBuf,
        /// RCAF change such as `f3=+1` or `total=-2`; repeatable
        #[arg(long = "rcaf", value_name = "TARGET=±K", value_parser = parse_rcaf_flag)]
        rcaf: Vec<Adjustment>,
        /// One more component such as `ILF:high`; repeatable
        #[arg(long = "add", value_name = "CLASS:LEVEL", value_parser = parse_add_flag)]
        add: Vec<Adjustment>,
        #[command(flatten)]
        shared: Shared,
    },
}

fn parse_rcaf_flag(s: &str) -> Result<Adjustment, String> {
    let (target, delta) = s
        .split_once('=')
        .ok_or_else(|| format!("expected f<j>=±k or total=±k, found `{s}`"))?;
    let target = match target {
        "total" => RcafTarget::Total,
        f => RcafTarget::Factor(
            f.strip_prefix('f')
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| format!("unknown rcaf target `{f}`"))?,
        ),
    };
    let delta = delta
        .parse::<i64>()
        .map_err(|_| format!("malformed adjustment `{delta}`"))?;
    Ok(Adjustment::Rcaf { target, delta })
}

fn parse_add_flag(s: &str) -> Result<Adjustment, String> {
    let (class, level) = s
        .split_once(':')
        .ok_or_else(|| format!("expected CLASS:LEVEL, found `{s}`"))?;
    Ok(Adjustment::Add {
        class: ComponentClass::from_code(class)
            .ok_or_else(|| format!("unknown component class `{class}`"))?,
        level: ComplexityLevel::from_name(level)
            .ok_or_else(|| format!("unknown complexity level `{level}`"))?,
    })
}

/// A failed step: what to tell the user and how to exit.
struct Failure {
    status: ExitStatus,
    lines: Vec<String>,
}

impl Failure {
    fn new(status: ExitStatus, line: impl Into<String>) -> Self {
        Failure {
            status,
            lines: vec![line.into()],
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| {
        Failure::new(
            ExitStatus::Io,
            format!("error: cannot read {}: {e}", path.display()),
        )
    })
}

fn status_of(diags: &[Diagnostic]) -> ExitStatus {
    if diags
        .iter()
        .any(|d| d.is_error() && d.kind == DiagnosticKind::Syntax)
    {
        ExitStatus::Parse
    } else {
        ExitStatus::Invalid
    }
}

fn located(path: &Path, d: &Diagnostic) -> String {
    format!(
        "{}:{}: {}: {}",
        path.display(),
        d.line,
        d.severity,
        d.message
    )
}

fn diag_failure(path: &Path, diags: &[Diagnostic]) -> Failure {
    Failure {
        status: status_of(diags),
        lines: diags.iter().map(|d| located(path, d)).collect(),
    }
}

fn load_sheet(path: &Path) -> Result<ParsedSheet, Failure> {
    let text = read(path)?;
    parse_sheet(&text).map_err(|d| diag_failure(path, &d))
}

fn load_config(shared: &Shared) -> Result<(Option<Weights>, ClassificationMatrix), Failure> {
    let weights = match &shared.weights {
        Some(p) => Some(parse_weights(&read(p)?).map_err(|d| diag_failure(p, &d))?),
        None => None,
    };
    let matrix = match &shared.matrix {
        Some(p) => parse_matrix(&read(p)?).map_err(|d| diag_failure(p, &d))?,
        None => ClassificationMatrix::default(),
    };
    Ok((weights, matrix))
}

fn evaluate(path: &Path, shared: &Shared) -> Result<FpResult, Failure> {
    let (weights, matrix) = load_config(shared)?;
    let mut doc = load_sheet(path)?.document;
    if weights.is_some() {
        doc.weights = weights;
    }
    engine::evaluate_document(&doc, &Weights::default(), &matrix).map_err(|e| {
        Failure::new(
            ExitStatus::Invalid,
            format!("{}: error: {e}", path.display()),
        )
    })
}

fn execute(command: Command, out: &mut String, err: &mut Vec<String>) -> Result<(), Failure> {
    match command {
        Command::Compute { path, shared } => {
            let r = evaluate(&path, &shared)?;
            out.push_str(&report::render_result(&r, shared.format));
        }
        Command::Validate { path } => {
            let parsed = load_sheet(&path)?;
            err.extend(parsed.warnings.iter().map(|d| located(&path, d)));
            engine::evaluate_document(
                &parsed.document,
                &Weights::default(),
                &ClassificationMatrix::default(),
            )
            .map_err(|e| {
                Failure::new(
                    ExitStatus::Invalid,
                    format!("{}: error: {e}", path.display()),
                )
            })?;
            out.push_str("OK\n");
        }
        Command::Compare {
            left,
            right,
            shared,
        } => {
            let a = evaluate(&left, &shared)?;
            let b = evaluate(&right, &shared)?;
            out.push_str(&report::render_comparison(
                &engine::compare(&a, &b),
                shared.format,
            ));
        }
        Command::Whatif {
            path,
            rcaf,
            add,
            shared,
        } => {
            let (weights, matrix) = load_config(&shared)?;
            let mut doc = load_sheet(&path)?.document;
            if weights.is_some() {
                doc.weights = weights;
            }
            let flags: Vec<(&str, Adjustment)> = rcaf
                .iter()
                .map(|a| ("--rcaf", *a))
                .chain(add.iter().map(|a| ("--add", *a)))
                .collect();
            let adjustments: Vec<Adjustment> = flags.iter().map(|(_, a)| *a).collect();
            let w =
                engine::what_if(&doc, &adjustments, &Weights::default(), &matrix).map_err(|f| {
                    let msg = match f.adjustment {
                        Some(i) => {
                            let (flag, adj) = flags[i];
                            format!("error: {flag} {adj}: {}", f.error)
                        }
                        None => format!("{}: error: {}", path.display(), f.error),
                    };
                    Failure::new(ExitStatus::Invalid, msg)
                })?;
            out.push_str(&report::render_what_if(&w, shared.format));
        }
    }
    Ok(())
}

/// Runs the command line given by `args` (including the program name) and
/// returns the exit status. Nothing is written to `stdout` unless the
/// command succeeds.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                ExitStatus::Parse
            } else {
                let _ = write!(stdout, "{text}");
                ExitStatus::Success
            };
        }
    };
    let mut out = String::new();
    let mut notes = Vec::new();
    let result = execute(cli.command, &mut out, &mut notes);
    for line in &notes {
        let _ = writeln!(stderr, "{line}");
    }
    match result {
        Ok(()) => {
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitStatus::Io;
            }
            ExitStatus::Success
        }
        Err(f) => {
            for line in &f.lines {
                let _ = writeln!(stderr, "{line}");
            }
            f.status
        }
    }
}
