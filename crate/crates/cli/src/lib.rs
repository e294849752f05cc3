//! Scenario-driven front end for `gca-core`: parses scenario files, runs the
//! property deciders, checks expected theorem instances and renders reports.

pub mod audit;
pub mod corpus;
pub mod implications;
pub mod report;
pub mod run;
pub mod scenario;

use std::path::Path;

pub use audit::{load_graph, run_audit, SoficReport};
pub use corpus::{run_corpus, CorpusReport};
pub use implications::{implication_violations, Rule, RULES};
pub use report::{CheckResult, Report};
pub use run::run_scenario;
pub use scenario::Scenario;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => exit::PARSE,
            CliError::Validation(_) => exit::VALIDATION,
            CliError::Internal(_) => exit::INTERNAL,
        }
    }
}

impl From<gca_core::Error> for CliError {
    fn from(e: gca_core::Error) -> Self {
        match e {
            gca_core::Error::Parse { .. } => CliError::Parse(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const VALIDATION: i32 = 3;
    pub const INTERNAL: i32 = 4;
}

/// Reads a scenario from disk, falling back to the embedded registry for
/// names such as `prop44` or `examples/prop44.scn`. Returns the display name
/// and the text.
pub fn load_source(path: &str) -> Result<(String, String), CliError> {
    let p = Path::new(path);
    let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or(path).to_string();
    match std::fs::read_to_string(p) {
        Ok(text) => Ok((stem, text)),
        Err(e) => match scenario::embedded(path) {
            Some(text) => Ok((stem, text.to_string())),
            None => Err(CliError::Parse(format!("cannot read `{path}`: {e}"))),
        },
    }
}

/// Loads and parses a scenario, see [`load_source`].
pub fn load_scenario(path: &str) -> Result<(String, Scenario), CliError> {
    let (stem, text) = load_source(path)?;
    let scn = scenario::parse(&text)?;
    Ok((scn.display_name(&stem), scn))
}
