//! Command-line driver: argument parsing, report assembly and exit codes.
//!
//! Exit codes: 0 pass, 2 verification failure, 3 schema or input error,
//! 4 divergence.

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::path::PathBuf;

mod atlas;
mod fueter;
mod model;
mod report;
mod slag;
mod verify;

pub use report::render_text;

pub const PASS: i32 = 0;
pub const VERIFICATION_FAILED: i32 = 2;
pub const SCHEMA_ERROR: i32 = 3;
pub const DIVERGED: i32 = 4;

pub const DEFAULT_SEED: u64 = 0x7A31_5EED;

#[derive(Parser, Debug)]
#[command(
    name = "holokernel",
    version,
    about = "Exact verification suites for calibrated geometry and Novikov-type counts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Input file; repeat for commands taking several.
    #[arg(long, global = true)]
    input: Vec<PathBuf>,
    /// Where to write the report (for `glue`, the generating function).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Truncation horizon T, a rational.
    #[arg(long, global = true, allow_hyphen_values = true)]
    horizon: Option<String>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Overrides the command's floating-point tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Machine-readable report.
    #[arg(long, global = true)]
    json: bool,
    /// Corrupt the verified data on purpose; the run must then fail.
    #[arg(long, global = true)]
    mutate: bool,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Exact identity suite for the Spin(7), G₂ and SU(3) models.
    FormsVerify,
    /// Twisted Betti numbers of a flow model over an α grid.
    ModelRun {
        /// Cellular oracle to compare with: circle, torus or wall.
        #[arg(long)]
        oracle: Option<String>,
        /// Extra grid point, components `re:im` separated by commas.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Vec<String>,
    },
    /// Cocycle and bundle-rank checks for an atlas.
    AtlasCheck,
    /// Pairs two sections of an atlas into a generating function.
    Glue,
    /// Evaluates the weighted multiset count at κ.
    Slag {
        /// Overrides the file's κ; components separated by commas.
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<String>,
    },
    /// Lattice Fueter checks and spectral flow of operator families.
    Fueter {
        /// Lattice size, odd.
        #[arg(long = "N", default_value_t = 5)]
        n: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::FormsVerify => "forms-verify",
            Command::ModelRun { .. } => "model-run",
            Command::AtlasCheck => "atlas-check",
            Command::Glue => "glue",
            Command::Slag { .. } => "slag",
            Command::Fueter { .. } => "fueter",
        }
    }
}

/// Everything a command may read, echoed into each report.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: String,
    pub inputs: Vec<PathBuf>,
    pub horizon: Option<String>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub output: Option<PathBuf>,
    pub mutate: bool,
}

impl RunConfig {
    fn echo(&self, samples: usize, tolerance: f64) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            "horizon": self.horizon,
            "samples": samples,
            "seed": self.seed,
            "tolerance": tolerance,
            "mutate": self.mutate,
            "output": self.output.as_ref().map(|p| p.display().to_string()),
        })
    }

    fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    fn tolerance_or(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }
}

/// Exit code with the rendered report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

/// A finished command: exit code and report body. `artifact` replaces the
/// report as the content written to `--output`.
pub(crate) struct Finished {
    code: i32,
    report: Value,
    artifact: Option<String>,
}

impl Finished {
    fn new(code: i32, report: Value) -> Self {
        Finished {
            code,
            report,
            artifact: None,
        }
    }
}

/// An input that could not be read or parsed; always exit 3.
pub(crate) fn input_error(config: Value, message: impl ToString) -> Finished {
    Finished::new(
        SCHEMA_ERROR,
        json!({ "config": config, "verdict": "schema error", "error": message.to_string() }),
    )
}

pub(crate) fn read_input(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => PASS,
                _ => SCHEMA_ERROR,
            };
            return Outcome {
                code,
                stdout: e.render().to_string(),
            };
        }
    };
    let c = cli.common;
    let config = RunConfig {
        command: cli.command.name().to_string(),
        inputs: c.input,
        horizon: c.horizon,
        samples: c.samples,
        seed: c.seed,
        tolerance: c.tolerance,
        output: c.output,
        mutate: c.mutate,
    };
    let finished = match &cli.command {
        Command::FormsVerify => verify::forms_verify(&config),
        Command::ModelRun { oracle, alpha } => model::model_run(&config, oracle.as_deref(), alpha),
        Command::AtlasCheck => atlas::atlas_check(&config),
        Command::Glue => atlas::glue(&config),
        Command::Slag { kappa } => slag::slag(&config, kappa.as_deref()),
        Command::Fueter { n } => fueter::fueter(&config, *n),
    };
    let stdout = if c.json {
        serde_json::to_string_pretty(&finished.report).expect("report serializes") + "\n"
    } else {
        render_text(&finished.report)
    };
    if let Some(path) = &config.output {
        let body = finished.artifact.as_deref().unwrap_or(&stdout);
        if let Err(e) = std::fs::write(path, body) {
            return Outcome {
                code: SCHEMA_ERROR,
                stdout: format!("{stdout}cannot write {}: {e}\n", path.display()),
            };
        }
    }
    Outcome {
        code: finished.code,
        stdout,
    }
}
