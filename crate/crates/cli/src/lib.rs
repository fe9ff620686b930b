//! Scenario-driven experiments on finite-dimensional quantum metric spaces.
//!
//! A scenario is a JSON file naming an algebra, a table of Lip-norms, solver
//! settings and one experiment. [`run_scenario`] computes it and writes
//! `results.csv`, `report.json` and `manifest.json`.

pub mod config;
pub mod experiments;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};

use qmetric_core::engine::{
    brute_force_oracle, BallSpec, OperatorNormFunctional, OracleProblem, SpreadFunctional,
};
use qmetric_core::HermitianMatrix;
use serde::Deserialize;
use serde_json::json;

pub use config::{ScenarioConfig, ValidationErrors};
pub use experiments::{Outcome, Row};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_TAINTED: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid configuration:\n{0}")]
    Validation(ValidationErrors),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("worker pool: {0}")]
    Pool(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Validation(_) => EXIT_VALIDATION,
            RunError::Io { .. } | RunError::Pool(_) => EXIT_IO,
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        RunError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Command-line overrides.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    /// Worker threads; the global pool when unset.
    pub jobs: Option<usize>,
}

#[derive(Debug)]
pub struct RunSummary {
    pub dir: PathBuf,
    pub outcome: Outcome,
}

impl RunSummary {
    /// Tainted rows or failed assertions.
    pub fn is_tainted(&self) -> bool {
        !self.outcome.failures.is_empty() || self.outcome.rows.iter().any(Row::is_tainted)
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_tainted() {
            EXIT_TAINTED
        } else {
            EXIT_OK
        }
    }
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, RunError> {
    let text = fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
    ScenarioConfig::from_json(&text).map_err(RunError::Validation)
}

/// Runs a validated scenario and writes its reports.
pub fn run_scenario(mut config: ScenarioConfig, opts: &RunOptions) -> Result<RunSummary, RunError> {
    if let Some(seed) = opts.seed {
        config.solver.seed = seed;
    }
    config.validate().map_err(RunError::Validation)?;
    let dir = opts
        .out
        .clone()
        .or_else(|| config.output.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(&config.name));
    // Fail on an unwritable directory before spending time on the computation.
    fs::create_dir_all(&dir).map_err(|e| RunError::io(&dir, e))?;
    let outcome = match opts.jobs {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| RunError::Pool(e.to_string()))?
            .install(|| experiments::run(&config)),
        None => experiments::run(&config),
    };
    output::write_all(&dir, &config, &outcome, opts.seed.is_some())
        .map_err(|e| RunError::io(&dir, e))?;
    Ok(RunSummary { dir, outcome })
}

/// Input of `qmetric oracle`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleRequest {
    pub ball: BallSpec,
    pub problem: OracleTask,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleTask {
    MaxLinear(HermitianMatrix),
    MinDistance(HermitianMatrix),
    MaxOperatorNorm,
    MaxSpread,
}

fn default_resolution() -> usize {
    101
}

/// Grid-search answer to an oracle request, as JSON.
pub fn run_oracle(text: &str) -> Result<serde_json::Value, RunError> {
    let invalid = |e: String| RunError::Validation(ValidationErrors(vec![e]));
    let req: OracleRequest = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
    let problem = match &req.problem {
        OracleTask::MaxLinear(c) => OracleProblem::MaxLinear(c.clone()),
        OracleTask::MinDistance(a) => OracleProblem::MinDistance(a.clone()),
        OracleTask::MaxOperatorNorm => OracleProblem::MaxConvex(&OperatorNormFunctional),
        OracleTask::MaxSpread => OracleProblem::MaxConvex(&SpreadFunctional),
    };
    let r = brute_force_oracle(&problem, &req.ball, req.resolution)
        .map_err(|e| invalid(e.to_string()))?;
    Ok(json!({
        "value": r.value,
        "error_bound": r.error_bound,
        "lipschitz": r.lipschitz,
        "outer_radius": r.outer_radius,
        "inner_radius": r.inner_radius,
        "evaluations": r.evaluations,
    }))
}
