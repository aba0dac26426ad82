//! Command-line front end: parses a [`RunConfig`], runs one verification
//! command on the shipped or user-supplied Schottky data and emits a JSON or
//! SVG artifact.
//!
//! Exit status is 0 when every check in the command's scope passed, 1 on a
//! violation or counterexample and 2 on bad input.
//!
//! # Input format
//!
//! `--input` takes a JSON document (schema in `schemas/schottky-data.schema.json`):
//!
//! ```json
//! {
//!   "gen_a": ["1325/507", "476/507", "476/507", "365/507"],
//!   "gen_b": ["365/507", "476/507", "476/507", "1325/507"],
//!   "circles": {
//!     "c_a": {"center": "-595/1276", "radius": "507/1276"},
//!     "c_a_prime": {"center": "595/76", "radius": "507/76"},
//!     "c_b": {"center": "-595/76", "radius": "507/76"},
//!     "c_b_prime": {"center": "595/1276", "radius": "507/1276"}
//!   }
//! }
//! ```
//!
//! Matrices are row-major with determinant exactly 1.

pub mod render;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use fuchsian_core::freewords::{verify_free_generation, FreeGenerationReport, WordFamily};
use fuchsian_core::limits::{
    enumerate_subgroup, estimate_limit_point, intersect_subgroups, matrix_coincidences,
    radial_check, theta_generators, LimitsError, RADIAL_DEPTH_MARGIN,
};
use fuchsian_core::rational::format_sig12;
use fuchsian_core::report::{build_report, RadialDistance, ReportConfig};
use fuchsian_core::schottky::{default_generators, verify_ping_pong, SchottkyData, SchottkyError};

pub const SCHOTTKY_DATA_SCHEMA: &str = include_str!("../schemas/schottky-data.schema.json");
pub const REPORT_SCHEMA: &str = include_str!("../schemas/construction-report.schema.json");

pub const EXIT_VERIFIED: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Exact ping-pong certificate for the generators and circles.
    Certify,
    /// Bounded free-generation check of the theta family.
    Freeness,
    /// Limit point eta and radial distances of theta_n(o).
    Construct,
    /// Odd/even theta subgroups and their intersection.
    Intersect,
    /// Full pipeline as one JSON report.
    Report,
    /// Poincare-disk figure.
    Render,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Svg,
}

#[derive(Debug, Parser)]
#[command(
    name = "fuchsian",
    version,
    about = "Verify a Schottky group whose odd and even theta subgroups meet trivially yet share a radial limit point"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Schottky data JSON; the shipped defaults when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
    #[arg(long, default_value_t = 6)]
    pub max_index: usize,
    #[arg(long, default_value_t = 3)]
    pub max_syllables: usize,
    #[arg(long, default_value_t = 8)]
    pub max_length: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Defaults to svg for `render` and json otherwise.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input_path: Option<PathBuf>,
    pub n_max: usize,
    pub max_index: usize,
    pub max_syllables: usize,
    pub max_length: usize,
    pub tol: f64,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        let d = ReportConfig::default();
        RunConfig {
            command,
            input_path: None,
            n_max: d.n_max,
            max_index: d.max_index,
            max_syllables: d.max_syllables,
            max_length: d.max_length,
            tol: d.tol,
            output_path: None,
            format: default_format(command),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let counts = [
            ("n-max", self.n_max),
            ("max-index", self.max_index),
            ("max-syllables", self.max_syllables),
            ("max-length", self.max_length),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(CliError::InvalidConfig(format!(
                "--{name} must be positive"
            )));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(CliError::InvalidConfig("--tol must lie in (0, 1)".into()));
        }
        if self.format != default_format(self.command) {
            return Err(CliError::InvalidConfig(format!(
                "{:?} output does not match command {:?}",
                self.format, self.command
            )));
        }
        Ok(())
    }

    fn report_config(&self) -> ReportConfig {
        ReportConfig {
            n_max: self.n_max,
            max_index: self.max_index,
            max_syllables: self.max_syllables,
            max_length: self.max_length,
            tol: self.tol,
        }
    }
}

impl From<Cli> for RunConfig {
    fn from(c: Cli) -> Self {
        RunConfig {
            command: c.command,
            input_path: c.input,
            n_max: c.n_max,
            max_index: c.max_index,
            max_syllables: c.max_syllables,
            max_length: c.max_length,
            tol: c.tol,
            output_path: c.out,
            format: c.format.unwrap_or(default_format(c.command)),
        }
    }
}

fn default_format(command: Command) -> Format {
    match command {
        Command::Render => Format::Svg,
        _ => Format::Json,
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    InputParse(String),
    #[error("{0}")]
    SchemaViolation(String),
    #[error("{0}")]
    InvalidConfig(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Limits(#[from] LimitsError),
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            CliError::InputParse(_) => "InputParse",
            CliError::SchemaViolation(_) => "SchemaViolation",
            CliError::InvalidConfig(_) => "InvalidConfig",
            CliError::Io(_) => "Io",
            CliError::Limits(e) => e.name(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Limits(_) => EXIT_VIOLATION,
            _ => EXIT_INPUT,
        }
    }
}

impl From<SchottkyError> for CliError {
    fn from(e: SchottkyError) -> Self {
        match e {
            SchottkyError::Json(j) if j.is_data() => CliError::SchemaViolation(j.to_string()),
            SchottkyError::Json(j) => CliError::InputParse(j.to_string()),
            other => CliError::SchemaViolation(other.to_string()),
        }
    }
}

/// What a command produced. `verified` decides the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub verified: bool,
    pub artifact: String,
    /// One-line summary for stderr when `verified` is false.
    pub failure: Option<String>,
}

#[derive(Serialize)]
struct CertifyOutput {
    command: &'static str,
    certified: bool,
    checks: Vec<String>,
    violation: Option<&'static str>,
    detail: Option<String>,
}

#[derive(Serialize)]
struct FreenessOutput {
    command: &'static str,
    passed: bool,
    #[serde(flatten)]
    report: FreeGenerationReport,
}

#[derive(Serialize)]
struct ConstructOutput {
    command: &'static str,
    scope: &'static str,
    eta: String,
    eta_interval_width: String,
    eta_reached_at: Option<usize>,
    interval_widths: Vec<String>,
    constant_c: String,
    per_n: Vec<RadialDistance>,
    first_half_max: String,
    last_quartile_max: String,
    bounded_trend: bool,
}

#[derive(Serialize)]
struct IntersectOutput {
    command: &'static str,
    scope: &'static str,
    g1_generators: Vec<usize>,
    g2_generators: Vec<usize>,
    max_syllables: usize,
    g1_size: usize,
    g2_size: usize,
    matrix_cross_check: bool,
    intersection: Vec<String>,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

pub fn load_data(cfg: &RunConfig) -> Result<SchottkyData, CliError> {
    match &cfg.input_path {
        None => Ok(default_generators()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::InputParse(format!("cannot read {}: {e}", path.display()))
            })?;
            Ok(SchottkyData::from_json_str(&text)?)
        }
    }
}

/// Runs one command and returns its artifact without writing it anywhere.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let sd = load_data(cfg)?;
    let scope = fuchsian_core::freewords::BOUNDED_SCOPE;
    let depth = cfg.n_max + RADIAL_DEPTH_MARGIN;
    let family = WordFamily::standard(cfg.max_index.max(depth));
    match cfg.command {
        Command::Certify => Ok(match verify_ping_pong(&sd) {
            Ok(cert) => Outcome {
                verified: true,
                artifact: to_json(&CertifyOutput {
                    command: "certify",
                    certified: true,
                    checks: cert.checks,
                    violation: None,
                    detail: None,
                }),
                failure: None,
            },
            Err(v) => Outcome {
                verified: false,
                artifact: to_json(&CertifyOutput {
                    command: "certify",
                    certified: false,
                    checks: vec![],
                    violation: Some(v.name()),
                    detail: Some(v.to_string()),
                }),
                failure: Some(format!("Violation({})", v.name())),
            },
        }),
        Command::Freeness => {
            let report =
                verify_free_generation(&WordFamily::standard(cfg.max_index), cfg.max_syllables)
                    .map_err(LimitsError::from)?;
            let passed = report.passed();
            let failure = report
                .counterexample
                .as_ref()
                .map(|c| format!("Counterexample({}): {}", c.symbol_word, c.reason));
            Ok(Outcome {
                verified: passed,
                artifact: to_json(&FreenessOutput {
                    command: "freeness",
                    passed,
                    report,
                }),
                failure,
            })
        }
        Command::Construct => {
            let eta = estimate_limit_point(&family, &sd, depth, cfg.tol)?;
            let rw = radial_check(&eta, &family, &sd, cfg.n_max)?;
            Ok(Outcome {
                verified: rw.bounded_trend,
                artifact: to_json(&ConstructOutput {
                    command: "construct",
                    scope,
                    eta: format_sig12(rw.eta),
                    eta_interval_width: format_sig12(eta.width()),
                    eta_reached_at: eta.reached_at,
                    interval_widths: eta.widths.iter().map(|&w| format_sig12(w)).collect(),
                    constant_c: format_sig12(rw.constant_c),
                    per_n: rw
                        .per_n
                        .iter()
                        .map(|&(n, d)| RadialDistance {
                            n,
                            distance: format_sig12(d),
                        })
                        .collect(),
                    first_half_max: format_sig12(rw.first_half_max),
                    last_quartile_max: format_sig12(rw.last_quartile_max),
                    bounded_trend: rw.bounded_trend,
                }),
                failure: (!rw.bounded_trend).then(|| "radial distances grow with n".into()),
            })
        }
        Command::Intersect => {
            let odd = theta_generators(&family, 1, cfg.max_index)?;
            let even = theta_generators(&family, 0, cfg.max_index)?;
            let g1 = enumerate_subgroup(&odd, cfg.max_syllables)?;
            let g2 = enumerate_subgroup(&even, cfg.max_syllables)?;
            let both = intersect_subgroups(&g1, &g2);
            let pairs = matrix_coincidences(&g1, &g2, &sd);
            let cross = pairs.len() == both.len()
                && pairs.iter().zip(&both).all(|((u, v), w)| u == w && v == w);
            let intersection: Vec<String> = both.iter().map(|w| w.to_string()).collect();
            let verified = cross && intersection == ["e"];
            Ok(Outcome {
                verified,
                artifact: to_json(&IntersectOutput {
                    command: "intersect",
                    scope,
                    g1_generators: (1..=cfg.max_index).filter(|n| n % 2 == 1).collect(),
                    g2_generators: (1..=cfg.max_index).filter(|n| n % 2 == 0).collect(),
                    max_syllables: cfg.max_syllables,
                    g1_size: g1.len(),
                    g2_size: g2.len(),
                    matrix_cross_check: cross,
                    intersection: intersection.clone(),
                }),
                failure: (!verified)
                    .then(|| format!("nontrivial intersection {}", intersection.join(", "))),
            })
        }
        Command::Report => {
            let report = build_report(&sd, &cfg.report_config())?;
            Ok(Outcome {
                verified: report.verified,
                artifact: report.to_json(),
                failure: (!report.verified).then(|| "report has failed checks".into()),
            })
        }
        Command::Render => {
            verify_ping_pong(&sd).map_err(LimitsError::from)?;
            let svg = render::render_svg(&sd, &family, cfg.n_max, cfg.tol)?;
            Ok(Outcome {
                verified: true,
                artifact: svg,
                failure: None,
            })
        }
    }
}

/// Parses arguments, runs, writes the artifact and returns the exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_VERIFIED
            };
        }
    };
    let cfg = RunConfig::from(cli);
    let result = run(&cfg).and_then(|outcome| {
        match &cfg.output_path {
            Some(path) => std::fs::write(path, &outcome.artifact)?,
            None => print!("{}", outcome.artifact),
        }
        Ok(outcome)
    });
    match result {
        Ok(o) if o.verified => EXIT_VERIFIED,
        Ok(o) => {
            eprintln!(
                "{}",
                o.failure.unwrap_or_else(|| "verification failed".into())
            );
            EXIT_VIOLATION
        }
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            e.exit_code()
        }
    }
}
