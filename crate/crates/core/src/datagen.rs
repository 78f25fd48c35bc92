//! Synthetic blob-and-bridge datasets with ground truth, CSV ingestion, and
//! column standardization.
//!
//! A scenario is a set of isotropic Gaussian blobs plus optional "bridges":
//! point clouds spread uniformly along the middle third of the segment
//! between two blob centers, with Gaussian jitter perpendicular to the
//! segment. Bridged blob pairs are the ground truth a relation graph should
//! recover.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// An isotropic Gaussian point cloud.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlobSpec {
    pub center: Vec<f64>,
    /// Per-coordinate standard deviation, in data units.
    pub spread: f64,
    pub count: usize,
}

/// A point cloud connecting two blobs, occupying the middle third of the
/// segment between their centers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeSpec {
    pub blob_a: usize,
    pub blob_b: usize,
    pub count: usize,
    /// Standard deviation of the perpendicular jitter, in data units.
    pub jitter: f64,
}

/// A full scenario description, loadable from a JSON config file with keys
/// `seed`, `blobs[]`, and `bridges[]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub blobs: Vec<BlobSpec>,
    #[serde(default)]
    pub bridges: Vec<BridgeSpec>,
}

/// A generated dataset together with the blob pairs that are really bridged.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioTruth {
    pub dataset: Dataset,
    pub true_bridges: BTreeSet<(usize, usize)>,
}

fn validate_scenario(blobs: &[BlobSpec], bridges: &[BridgeSpec]) -> Result<usize> {
    if blobs.len() < 2 {
        return Err(Error::InvalidScenario(format!(
            "at least two blobs required, got {}",
            blobs.len()
        )));
    }
    let dim = blobs[0].center.len();
    if dim == 0 {
        return Err(Error::InvalidScenario("blob centers are empty".into()));
    }
    for (i, blob) in blobs.iter().enumerate() {
        if blob.center.len() != dim {
            return Err(Error::InvalidScenario(format!(
                "blob {i} has dimension {}, expected {dim}",
                blob.center.len()
            )));
        }
        if blob.center.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidScenario(format!(
                "blob {i} has a non-finite center"
            )));
        }
        if !blob.spread.is_finite() || blob.spread <= 0.0 {
            return Err(Error::InvalidScenario(format!(
                "blob {i} spread must be positive, got {}",
                blob.spread
            )));
        }
        if blob.count == 0 {
            return Err(Error::InvalidScenario(format!("blob {i} has zero points")));
        }
    }
    for bridge in bridges {
        for idx in [bridge.blob_a, bridge.blob_b] {
            if idx >= blobs.len() {
                return Err(Error::InvalidScenario(format!(
                    "bridge references blob {idx}, but only {} blobs are defined",
                    blobs.len()
                )));
            }
        }
        if bridge.blob_a == bridge.blob_b {
            return Err(Error::InvalidScenario(format!(
                "bridge connects blob {} to itself",
                bridge.blob_a
            )));
        }
        if bridge.count == 0 {
            return Err(Error::InvalidScenario(format!(
                "bridge {}-{} has zero points",
                bridge.blob_a, bridge.blob_b
            )));
        }
        if !bridge.jitter.is_finite() || bridge.jitter < 0.0 {
            return Err(Error::InvalidScenario(format!(
                "bridge {}-{} jitter must be non-negative, got {}",
                bridge.blob_a, bridge.blob_b, bridge.jitter
            )));
        }
        let same_center = blobs[bridge.blob_a].center == blobs[bridge.blob_b].center;
        if same_center {
            return Err(Error::InvalidScenario(format!(
                "bridge {}-{} connects blobs with identical centers",
                bridge.blob_a, bridge.blob_b
            )));
        }
    }
    Ok(dim)
}

/// Draws a scenario. Blob points are sampled blob by blob, then bridge
/// points bridge by bridge, from a single seeded stream, so output is
/// deterministic for a given seed.
pub fn generate_scenario(
    blobs: &[BlobSpec],
    bridges: &[BridgeSpec],
    seed: u64,
) -> Result<ScenarioTruth> {
    let dim = validate_scenario(blobs, bridges)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: usize = blobs.iter().map(|b| b.count).sum::<usize>()
        + bridges.iter().map(|b| b.count).sum::<usize>();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(total);
    for blob in blobs {
        for _ in 0..blob.count {
            let point: Vec<f64> = blob
                .center
                .iter()
                .map(|&c| c + blob.spread * rng.sample::<f64, _>(StandardNormal))
                .collect();
            rows.push(point);
        }
    }
    for bridge in bridges {
        let a = &blobs[bridge.blob_a].center;
        let b = &blobs[bridge.blob_b].center;
        let direction: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
        let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
        let unit: Vec<f64> = direction.iter().map(|v| v / norm).collect();
        for _ in 0..bridge.count {
            let t: f64 = rng.random_range(1.0 / 3.0..=2.0 / 3.0);
            let mut point: Vec<f64> = a.iter().zip(&direction).map(|(x, d)| x + t * d).collect();
            // Gaussian noise with the along-segment component projected out.
            let noise: Vec<f64> = (0..dim)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect();
            let along: f64 = noise.iter().zip(&unit).map(|(g, u)| g * u).sum();
            for ((p, g), u) in point.iter_mut().zip(&noise).zip(&unit) {
                *p += bridge.jitter * (g - along * u);
            }
            rows.push(point);
        }
    }
    let true_bridges = bridges
        .iter()
        .map(|b| (b.blob_a.min(b.blob_b), b.blob_a.max(b.blob_b)))
        .collect();
    Ok(ScenarioTruth {
        dataset: Dataset::from_rows(&rows)?,
        true_bridges,
    })
}

/// Loads a comma-separated numeric matrix. With `has_header`, the first row
/// names the columns; `label_column` (which requires a header) moves one
/// column into the row labels. Every remaining cell must parse as a finite
/// number; cell errors are reported with 1-based row and column positions,
/// the row counted over data rows only.
pub fn load_csv(path: &Path, has_header: bool, label_column: Option<&str>) -> Result<Dataset> {
    if label_column.is_some() && !has_header {
        return Err(Error::LabelRequiresHeader);
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .from_path(path)?;
    let label_idx = match label_column {
        Some(name) => {
            let headers = reader.headers()?;
            Some(
                headers
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::MissingColumn(name.to_string()))?,
            )
        }
        None => None,
    };
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    let mut width: Option<usize> = None;
    for (r, record) in reader.records().enumerate() {
        let record = record?;
        let row_num = r + 1;
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::RaggedRow {
                row: row_num,
                expected,
                got: record.len(),
            });
        }
        let mut row = Vec::with_capacity(record.len().saturating_sub(label_idx.is_some() as usize));
        for (c, cell) in record.iter().enumerate() {
            if Some(c) == label_idx {
                labels.push(cell.to_string());
                continue;
            }
            let value: f64 = cell.trim().parse().map_err(|_| Error::InvalidCell {
                row: row_num,
                col: c + 1,
                value: cell.to_string(),
            })?;
            if !value.is_finite() {
                return Err(Error::InvalidCell {
                    row: row_num,
                    col: c + 1,
                    value: cell.to_string(),
                });
            }
            row.push(value);
        }
        rows.push(row);
    }
    let matrix = Matrix::from_rows(&rows)?;
    if label_idx.is_some() {
        Dataset::with_labels(matrix, labels)
    } else {
        Dataset::new(matrix)
    }
}

/// Writes the feature matrix as headerless comma-separated text. Values are
/// printed with the shortest representation that parses back to the exact
/// same number, so a write/load round trip is lossless.
pub fn write_csv(data: &Dataset, path: &Path) -> Result<()> {
    let mut out = String::new();
    for row in data.points().iter_rows() {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Shifts every column to mean 0 and scales it to unit population standard
/// deviation; zero-variance columns stay at 0 after centering. Labels are
/// preserved.
pub fn standardize(data: &Dataset) -> Result<Dataset> {
    let n_points = data.len();
    if n_points < 2 {
        return Err(Error::InvalidConfig(format!(
            "standardization needs at least two points, got {n_points}"
        )));
    }
    let n = data.dim();
    let mut mean = vec![0.0f64; n];
    for j in 0..n_points {
        for (acc, v) in mean.iter_mut().zip(data.point(j)) {
            *acc += v;
        }
    }
    for acc in &mut mean {
        *acc /= n_points as f64;
    }
    let mut variance = vec![0.0f64; n];
    for j in 0..n_points {
        for ((acc, v), mu) in variance.iter_mut().zip(data.point(j)).zip(&mean) {
            let d = v - mu;
            *acc += d * d;
        }
    }
    let scale: Vec<f64> = variance
        .iter()
        .map(|&v| {
            let sd = (v / n_points as f64).sqrt();
            if sd > 0.0 {
                1.0 / sd
            } else {
                0.0
            }
        })
        .collect();
    let rows: Vec<Vec<f64>> = (0..n_points)
        .map(|j| {
            data.point(j)
                .iter()
                .zip(&mean)
                .zip(&scale)
                .map(|((v, mu), s)| (v - mu) * s)
                .collect()
        })
        .collect();
    let matrix = Matrix::from_rows(&rows)?;
    match data.labels() {
        Some(labels) => Dataset::with_labels(matrix, labels.to_vec()),
        None => Dataset::new(matrix),
    }
}
