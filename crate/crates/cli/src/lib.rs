//! Reproducible experiments over the `clrlab` library.
//!
//! A run takes an [`ExperimentConfig`] and writes `<name>.csv` (one row per
//! probe) and `<name>.summary.json` (pass/fail per assertion, headline
//! metrics, configuration echo). Nothing is written when the configuration
//! is rejected.

pub mod catalog;
pub mod config;
mod experiments;
pub mod outcome;

use std::fs;
use std::path::{Path, PathBuf};

pub use catalog::{CatalogEntry, CATALOG};
pub use config::{Experiment, ExperimentConfig};
pub use outcome::{Check, Outcome};

#[derive(Debug)]
pub enum RunError {
    /// Unreadable, malformed or out-of-range configuration.
    Config(String),
    /// The library rejected a computation.
    Library(clrlab::Error),
    Io(String),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Config(m) => write!(f, "config error: {m}"),
            Self::Library(e) => write!(f, "experiment error: {e}"),
            Self::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<clrlab::Error> for RunError {
    fn from(e: clrlab::Error) -> Self {
        Self::Library(e)
    }
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Runs the experiment in memory after validating the configuration.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    cfg.validate()?;
    experiments::run(&cfg.experiment, cfg.seed)
}

/// Paths of the artifacts of a completed run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifacts {
    pub csv: PathBuf,
    pub summary: PathBuf,
}

/// Runs the experiment and writes its artifacts into `out_dir`.
pub fn execute(cfg: &ExperimentConfig, out_dir: &Path) -> Result<(Outcome, Artifacts), RunError> {
    let outcome = run_experiment(cfg)?;
    let io = |e: std::io::Error| RunError::Io(e.to_string());
    fs::create_dir_all(out_dir).map_err(io)?;
    let stem = cfg.stem();
    let csv = out_dir.join(format!("{stem}.csv"));
    let summary = out_dir.join(format!("{stem}.summary.json"));
    let mut buf = Vec::new();
    outcome.write_csv(&mut buf).map_err(|e| RunError::Io(e.to_string()))?;
    fs::write(&csv, buf).map_err(io)?;
    let config = serde_json::to_value(cfg).map_err(|e| RunError::Io(e.to_string()))?;
    let doc = outcome.summary_json(&stem, cfg.experiment.kind(), cfg.seed, &config);
    let text = serde_json::to_string_pretty(&doc).map_err(|e| RunError::Io(e.to_string()))?;
    fs::write(&summary, text + "\n").map_err(io)?;
    Ok((outcome, Artifacts { csv, summary }))
}

/// Configuration with the default parameters of `kind`.
pub fn default_config(kind: &str) -> Option<ExperimentConfig> {
    use config::*;
    let e = match kind {
        "bound-vs-oracle-lattice" => Experiment::BoundVsOracleLattice(Default::default()),
        "subordination-identity" => Experiment::SubordinationIdentity(Default::default()),
        "free-group" => Experiment::FreeGroup(Default::default()),
        "levy-exponents" => Experiment::LevyExponents(Default::default()),
        "affine-mc" => Experiment::AffineMc(Default::default()),
        "heisenberg-mc" => Experiment::HeisenbergMc(Default::default()),
        "group-walks" => Experiment::GroupWalks(Default::default()),
        "anderson" => Experiment::Anderson(Default::default()),
        "quantum-graph-edges" => Experiment::QuantumGraphEdges(Default::default()),
        "oracle-integrity" => Experiment::OracleIntegrity(Default::default()),
        "discrete-split" => Experiment::DiscreteSplit(Default::default()),
        _ => return None,
    };
    Some(ExperimentConfig::new(e))
}
