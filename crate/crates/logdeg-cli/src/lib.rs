//! The `logdeg` command line: file formats with checksummed envelopes,
//! dispatch to the core modules, and deterministic reports.
//!
//! Exit status is 0 on success, 1 when an input or a checked relation fails
//! validation, and 2 when a computation cannot be completed (including a
//! failed example suite, which reports a diff).

pub mod bundled;
mod commands;
pub mod files;
pub mod manifest;
pub mod render;
pub mod suites;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use logdeg_core::Error;

pub use manifest::{Kind, Manifest};

/// Exit status classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    ValidationFailure,
    ComputationError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::ValidationFailure => 1,
            Status::ComputationError => 2,
        }
    }
}

/// A failed command: its status class, a message, and optionally a
/// structured diff or partial result.
#[derive(Clone, Debug, PartialEq)]
pub struct CliError {
    pub status: Status,
    pub message: String,
    pub detail: Option<Value>,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError { status: Status::ValidationFailure, message: message.into(), detail: None }
    }

    pub fn computation(message: impl Into<String>) -> Self {
        CliError { status: Status::ComputationError, message: message.into(), detail: None }
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn context(mut self, what: &str) -> Self {
        if !self.message.starts_with(what) {
            self.message = format!("{what}: {}", self.message);
        }
        self
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::Parse(_)
            | Error::Invalid(_)
            | Error::UnknownId(_)
            | Error::NotFlat(_)
            | Error::NonGeneric(_)
            | Error::MissingEntry(_)
            | Error::DiagonalMismatch { .. } => CliError::validation(message),
            Error::Unsupported(_)
            | Error::Truncation(_)
            | Error::InsufficientTerms(_)
            | Error::Underdetermined(_)
            | Error::Computation(_) => CliError::computation(message),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "logdeg", version, about = "Tropical and generating-function tools for logarithmic degeneration formulas")]
pub struct Cli {
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall-clock timing in the report (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cone complexes: validation, stars, slices.
    #[command(subcommand)]
    Fan(FanCmd),
    /// Embedded 1-complexes: validation, retraction, balancing.
    #[command(subcommand)]
    Oc(OcCmd),
    /// Moduli of 1-complexes: realized dimension, rigidity, flattening.
    #[command(subcommand)]
    Moduli(ModuliCmd),
    /// Degenerations: rigid complexes, cutting and gluing.
    #[command(subcommand)]
    Deg(DegCmd),
    /// Nakajima basis coefficients.
    #[command(subcommand)]
    Nak(NakCmd),
    /// Series: MacMahon powers and the GW/DT variable change.
    #[command(subcommand)]
    Series(SeriesCmd),
    /// Assemble the glued series of a job.
    Assemble(AssembleArgs),
    /// Compare the assembled series of two jobs.
    Check(CheckArgs),
    /// Run a bundled end-to-end example.
    Examples(ExamplesArgs),
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Also write the produced object, in a manifest envelope, to this path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum FanCmd {
    /// Check the cone complex invariants.
    Validate { file: PathBuf },
    /// The star fan of a cone, in the quotient lattice.
    Star {
        file: PathBuf,
        #[arg(long)]
        cone: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// The polyhedral slice of a degeneration at a height.
    Slice {
        file: PathBuf,
        #[arg(long, default_value = "1")]
        height: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum OcCmd {
    /// Check embedding, cell and decoration invariants.
    Validate { file: PathBuf },
    /// Retract to the pure complex, keeping decorations.
    Retract {
        file: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Report vertices where the weighted directions do not balance.
    Balance { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum ModuliCmd {
    /// Dimension of the realized parameter cone of the complex's type.
    Dim { file: PathBuf },
    /// Is the complex's type rigid?
    Rigid { file: PathBuf },
    /// Flatten a cone morphism by subdivision.
    Flatten {
        file: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum DegCmd {
    /// Enumerate rigid 1-complexes of a degree through points on the slice.
    Rigid {
        file: PathBuf,
        /// Multiplicity on each horizontal ray, in cone order.
        #[arg(long, value_delimiter = ',')]
        degree: Vec<u32>,
        #[arg(long)]
        points: PathBuf,
        /// Only report balanced records.
        #[arg(long)]
        balanced: bool,
    },
    /// Cut a vertical 1-complex along a rigid record.
    Cut {
        file: PathBuf,
        #[arg(long)]
        record: PathBuf,
        #[arg(long)]
        complex: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Glue vertex parts back to a vertical 1-complex.
    Glue {
        file: PathBuf,
        #[arg(long)]
        record: PathBuf,
        #[arg(long)]
        parts: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum NakCmd {
    /// The diagonal class in the Nakajima basis.
    Diag {
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<u32>,
        /// Künneth rows of the boundary diagonal (point/unit by default).
        #[arg(long)]
        pairing: Option<PathBuf>,
    },
    /// Check the Γ-matrix inverse identities.
    Invcheck {
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<u32>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SeriesCmd {
    /// Coefficients of M(q)^power.
    Macmahon {
        #[arg(long)]
        order: i64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        power: i64,
        /// Expand M(−q)^power instead, the degree-zero DT normalization.
        #[arg(long)]
        minus_q: bool,
    },
    /// Compare a PT rational function with a GW series under −q = e^{iu}.
    GwdtCheck {
        /// Comparison input; the bundled q/(1+q)² example when absent.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct AssembleArgs {
    pub job: PathBuf,
    /// Report edge-label products and dilation factors per complex.
    #[arg(long)]
    pub show_cycle_factors: bool,
    /// Report every summand.
    #[arg(long)]
    pub terms: bool,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pub jobs: Vec<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Degree0,
    Conics,
    Trivalent,
    Splitting,
}

#[derive(Debug, Args)]
pub struct ExamplesArgs {
    pub name: Suite,
    /// Round trips per fixture (splitting only).
    #[arg(long, default_value_t = suites::DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Sampler seed (splitting only).
    #[arg(long, default_value_t = suites::DEFAULT_SEED)]
    pub seed: u64,
}

/// The structured output of one invocation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    /// sha256 of every input file, by path as given.
    pub inputs: BTreeMap<String, String>,
    pub status: Status,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }
}

/// Input digests and sampling seed gathered while a command runs.
#[derive(Debug, Default)]
pub struct Context {
    pub inputs: BTreeMap<String, String>,
    pub seed: Option<u64>,
}

impl Context {
    /// Reads a document of the given kind, recording its digest.
    pub fn read<T: serde::de::DeserializeOwned>(&mut self, path: &Path, kind: Kind) -> CliResult<T> {
        let shown = path.display().to_string();
        let bytes = std::fs::read(path).map_err(|e| CliError::validation(format!("{shown}: {e}")))?;
        self.inputs.insert(shown.clone(), format!("sha256:{}", manifest::sha256_hex(&bytes)));
        let text = String::from_utf8(bytes).map_err(|_| CliError::validation(format!("{shown}: not UTF-8")))?;
        manifest::parse_document(&text, kind, &shown)
    }
}

/// Outcome of a command before it is wrapped into a report: the result,
/// and whether a checked relation failed.
pub struct Outcome {
    pub result: Value,
    pub status: Status,
}

impl Outcome {
    pub fn ok<T: Serialize>(v: T) -> CliResult<Self> {
        Ok(Outcome { result: to_value(&v)?, status: Status::Ok })
    }

    /// A completed check: exit 0 when it held, 1 when it did not.
    pub fn check<T: Serialize>(v: T, held: bool) -> CliResult<Self> {
        let status = if held { Status::Ok } else { Status::ValidationFailure };
        Ok(Outcome { result: to_value(&v)?, status })
    }
}

pub(crate) fn to_value<T: Serialize>(v: &T) -> CliResult<Value> {
    serde_json::to_value(v).map_err(|e| CliError::computation(format!("serializing the result: {e}")))
}

/// Caps the rayon pool at `LOGDEG_THREADS` when set; call once at startup.
pub fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("LOGDEG_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::validation(format!("LOGDEG_THREADS must be a positive integer, got '{raw}'")))?;
    // a pool built earlier in the process already fixes the size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs a parsed command line and builds its report.
pub fn execute(cli: &Cli, argv: &[String]) -> Report {
    let mut ctx = Context::default();
    let start = Instant::now();
    let outcome = commands::dispatch(&cli.command, &mut ctx);
    let timing_ms = cli.timing.then(|| start.elapsed().as_millis() as u64);
    let (status, result, error) = match outcome {
        Ok(o) => (o.status, o.result, None),
        Err(e) => (e.status, e.detail.unwrap_or(Value::Null), Some(e.message)),
    };
    Report {
        command: argv.iter().skip(1).cloned().collect(),
        inputs: ctx.inputs,
        status,
        result,
        error,
        seed: ctx.seed,
        timing_ms,
    }
}

/// Parses `argv` (program name first), runs the command, and returns the
/// exit code and the text to print. Usage errors exit with 1.
pub fn run(argv: &[String]) -> (i32, String) {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let report = execute(&cli, argv);
    let text = if cli.json { render::json(&report) } else { render::text(&report) };
    (report.exit_code(), text)
}
