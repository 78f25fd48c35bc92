//! Versioned on-disk layouts for the files a run produces.
//!
//! `model.json`, `graph.json`, and `graph.dot` are byte-deterministic for
//! identical inputs and flags. `report.json` is too except for its `timing`
//! object, which holds the only wall-clock-dependent values and should be
//! excluded when comparing runs.

use serde::{Deserialize, Serialize};

use pokm_core::{Assignment, ClusterModel, Dataset};

pub const MODEL_SCHEMA_VERSION: u32 = 1;
pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const TRUTH_SCHEMA_VERSION: u32 = 1;

/// Fitted model: means, memberships, and fit metadata.
#[derive(Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema_version: u32,
    pub k: usize,
    pub n: usize,
    pub m: f64,
    /// Seed of the random stream that produced the winning run.
    pub run_seed: u64,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    pub means: Vec<Vec<f64>>,
    pub assignments: Vec<Assignment>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl ModelFile {
    pub fn new(model: &ClusterModel, data: &Dataset) -> Self {
        Self {
            schema_version: MODEL_SCHEMA_VERSION,
            k: model.k(),
            n: model.dim(),
            m: model.m,
            run_seed: model.seed,
            objective: model.objective,
            iterations: model.iterations,
            converged: model.converged,
            means: model.means.to_row_vecs(),
            assignments: model.assignments.clone(),
            labels: data.labels().map(<[String]>::to_vec),
        }
    }
}

/// Everything needed to rerun and audit a clustering invocation.
#[derive(Debug, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub config: ConfigEcho,
    pub per_restart_objectives: Vec<f64>,
    pub winning_restart: usize,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    pub cluster_sizes: Vec<usize>,
    pub overlap_counts: Vec<PairCount>,
    pub edges: Vec<PairCount>,
    /// Wall-clock values; the one part of the report that varies between
    /// otherwise identical runs.
    pub timing: Timing,
}

/// The resolved parameters of the run, with both `m` and the overlap level
/// filled in regardless of which one was supplied.
#[derive(Debug, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub input: String,
    pub has_header: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label_column: Option<String>,
    pub standardize: bool,
    pub k: usize,
    pub m: f64,
    pub overlap: f64,
    pub gamma: f64,
    pub restarts: usize,
    pub max_iterations: usize,
    pub init: String,
    pub seed: u64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PairCount {
    pub a: usize,
    pub b: usize,
    pub count: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Timing {
    pub wall_clock_seconds: f64,
}

/// Ground truth emitted next to a generated dataset.
#[derive(Debug, Serialize, Deserialize)]
pub struct TruthFile {
    pub schema_version: u32,
    pub seed: u64,
    pub n_points: usize,
    pub true_bridges: Vec<(usize, usize)>,
}
