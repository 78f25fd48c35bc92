//! Brute-force reference implementations for validating the engine.
//!
//! These are deliberately slow and obvious: costs come from enumerating
//! every candidate, the objective materializes the dense membership matrix,
//! and the k-means baseline is plain Lloyd iteration. Where the engine and
//! an oracle disagree, the oracle is right.

use crate::dataset::Dataset;
use crate::engine::{Assignment, ClusterModel, MEAN_TOLERANCE};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.len() {
        let d = a[i] - b[i];
        acc += d * d;
    }
    acc
}

/// Cost one element contributes to the objective under the given
/// membership: its squared distance when exclusive, `(d1 + d2) / 2^m` when
/// dual.
pub fn assignment_cost(x: &[f64], means: &Matrix, assignment: Assignment, m: f64) -> f64 {
    let d1 = dist_sq(x, means.row(assignment.primary()));
    match assignment.secondary() {
        None => d1,
        Some(s) => (d1 + dist_sq(x, means.row(s))) / 2f64.powf(m),
    }
}

/// Minimizes one element's cost by enumerating all k exclusive candidates
/// and all k(k-1)/2 dual candidates. Ties keep the earliest candidate in
/// enumeration order: exclusives by index first, then pairs in
/// lexicographic order, so equal-cost pairs never displace an exclusive.
pub fn brute_force_assign(x: &[f64], means: &Matrix, m: f64) -> Result<Assignment> {
    if x.len() != means.cols() {
        return Err(Error::DimensionMismatch {
            what: "point vs means",
            expected: means.cols(),
            got: x.len(),
        });
    }
    let k = means.rows();
    let mut best: Option<(Assignment, f64)> = None;
    for i in 0..k {
        let candidate = Assignment::exclusive(i);
        let cost = assignment_cost(x, means, candidate, m);
        if best.is_none_or(|(_, bc)| cost < bc) {
            best = Some((candidate, cost));
        }
    }
    for i in 0..k {
        for j in (i + 1)..k {
            // In a dual assignment the primary must be the closer cluster.
            let di = dist_sq(x, means.row(i));
            let dj = dist_sq(x, means.row(j));
            let candidate = if dj < di {
                Assignment::dual(j, i)
            } else {
                Assignment::dual(i, j)
            };
            let cost = assignment_cost(x, means, candidate, m);
            if best.is_none_or(|(_, bc)| cost < bc) {
                best = Some((candidate, cost));
            }
        }
    }
    Ok(best.expect("matrices have at least one row").0)
}

/// Literal term-by-term evaluation of the objective over the dense k x N
/// membership matrix.
pub fn naive_objective(
    data: &Dataset,
    assignments: &[Assignment],
    means: &Matrix,
    m: f64,
) -> Result<f64> {
    if assignments.len() != data.len() {
        return Err(Error::DimensionMismatch {
            what: "assignments vs points",
            expected: data.len(),
            got: assignments.len(),
        });
    }
    if data.dim() != means.cols() {
        return Err(Error::DimensionMismatch {
            what: "point vs means",
            expected: means.cols(),
            got: data.dim(),
        });
    }
    let k = means.rows();
    let n_points = data.len();
    let mut membership = vec![vec![0u8; n_points]; k];
    for (j, a) in assignments.iter().enumerate() {
        for c in a.members() {
            if c >= k {
                return Err(Error::ClusterIndexOutOfRange { index: c, k });
            }
            membership[c][j] = 1;
        }
    }
    let mut total = 0.0;
    for j in 0..n_points {
        let mut numerator = 0.0;
        let mut count = 0.0;
        for (i, row) in membership.iter().enumerate() {
            numerator += dist_sq(data.point(j), means.row(i)) * f64::from(row[j]);
            count += f64::from(row[j]);
        }
        total += numerator / count.powf(m);
    }
    Ok(total)
}

/// Standard Lloyd k-means from the given means: nearest-mean assignment
/// with lowest-index tie-break, arithmetic-mean update, and the same
/// termination rule and empty-cluster repair as the engine's fit, so that
/// per-iteration histories are directly comparable.
pub fn reference_kmeans(
    data: &Dataset,
    initial_means: Matrix,
    max_iterations: usize,
) -> Result<ClusterModel> {
    Ok(reference_kmeans_with_history(data, initial_means, max_iterations)?.0)
}

/// [`reference_kmeans`] plus the per-iteration label history.
pub fn reference_kmeans_with_history(
    data: &Dataset,
    initial_means: Matrix,
    max_iterations: usize,
) -> Result<(ClusterModel, Vec<Vec<usize>>)> {
    let k = initial_means.rows();
    if k > data.len() {
        return Err(Error::TooManyClusters {
            k,
            points: data.len(),
        });
    }
    if data.dim() != initial_means.cols() {
        return Err(Error::DimensionMismatch {
            what: "point vs means",
            expected: initial_means.cols(),
            got: data.dim(),
        });
    }
    if max_iterations == 0 {
        return Err(Error::InvalidConfig(
            "max_iterations must be at least 1".into(),
        ));
    }
    let n = data.dim();
    let n_points = data.len();
    let mut means = initial_means;
    let mut history = Vec::new();
    let mut prev: Option<Vec<usize>> = None;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iterations {
        iterations += 1;
        // Assignment: nearest mean, first index wins ties.
        let mut labels: Vec<usize> = (0..n_points)
            .map(|j| {
                let mut best = 0;
                let mut best_d = f64::INFINITY;
                for i in 0..k {
                    let d = dist_sq(data.point(j), means.row(i));
                    if d < best_d {
                        best_d = d;
                        best = i;
                    }
                }
                best
            })
            .collect();
        // Empty-cluster repair, mirroring the engine: the farthest point
        // whose cluster keeps at least one other member moves over.
        let mut counts = vec![0usize; k];
        for &l in &labels {
            counts[l] += 1;
        }
        while let Some(empty) = counts.iter().position(|&c| c == 0) {
            let mut worst: Option<(usize, f64)> = None;
            for (j, &l) in labels.iter().enumerate() {
                if counts[l] < 2 {
                    continue;
                }
                let d = dist_sq(data.point(j), means.row(l));
                if worst.is_none_or(|(_, wd)| d > wd) {
                    worst = Some((j, d));
                }
            }
            let Some((j, _)) = worst else {
                return Err(Error::InvalidConfig(format!(
                    "cannot repair empty cluster {empty}"
                )));
            };
            counts[labels[j]] -= 1;
            labels[j] = empty;
            counts[empty] = 1;
            let point = data.point(j).to_vec();
            means.row_mut(empty).copy_from_slice(&point);
        }
        let unchanged = prev.as_ref() == Some(&labels);
        // Update: arithmetic mean of each cluster.
        let mut sums = Matrix::zeros(k, n)?;
        for (j, &l) in labels.iter().enumerate() {
            for (acc, v) in sums.row_mut(l).iter_mut().zip(data.point(j)) {
                *acc += v;
            }
        }
        for (i, &c) in counts.iter().enumerate() {
            for acc in sums.row_mut(i) {
                *acc /= c as f64;
            }
        }
        let delta = sums.max_abs_diff(&means);
        means = sums;
        history.push(labels.clone());
        prev = Some(labels);
        if unchanged && delta < MEAN_TOLERANCE {
            converged = true;
            break;
        }
    }
    let labels = prev.expect("at least one iteration ran");
    let assignments: Vec<Assignment> = labels.iter().map(|&l| Assignment::exclusive(l)).collect();
    let objective = labels
        .iter()
        .enumerate()
        .map(|(j, &l)| dist_sq(data.point(j), means.row(l)))
        .sum();
    Ok((
        ClusterModel {
            means,
            assignments,
            objective,
            iterations,
            converged,
            m: 1.0,
            seed: 0,
        },
        history,
    ))
}
