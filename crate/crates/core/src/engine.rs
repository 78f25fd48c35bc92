//! Pairwise overlapping clustering.
//!
//! Each point belongs to one or two clusters. With the two nearest means at
//! squared distances `d1 <= d2`, a point stays exclusive to the nearest
//! cluster when `d1 < (d1 + d2) / 2^m` and joins both otherwise. The
//! objective charges an exclusive point its squared distance and a dual
//! point `(d1 + d2) / 2^m`; means minimizing it are weighted averages where
//! dual members weigh `1 / 2^m`. Fitting alternates assignment and mean
//! updates until neither changes, which drives the objective monotonically
//! down to a local minimum.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calibration::validate_exponent;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Convergence threshold on the largest absolute change of any mean
/// coordinate across one update step.
pub const MEAN_TOLERANCE: f64 = 1e-10;

/// How initial means are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitMethod {
    /// k distinct data rows sampled without replacement.
    RandomPoints,
    /// A seeded random row first, then repeatedly the row farthest from its
    /// nearest already-chosen mean.
    GreedySpread,
}

/// Parameters of a fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Number of clusters.
    pub k: usize,
    /// Overlap exponent, at least 1. See [`crate::calibration`].
    pub m: f64,
    pub init: InitMethod,
    pub restarts: usize,
    pub max_iterations: usize,
    /// Base seed; per-restart streams are derived via [`restart_seed`].
    pub seed: u64,
}

impl FitConfig {
    pub fn new(k: usize, m: f64) -> Self {
        Self {
            k,
            m,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        validate_exponent(self.m)?;
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            k: 8,
            m: 5f64.log2(), // overlap level 1/3
            init: InitMethod::RandomPoints,
            restarts: 100,
            max_iterations: 500,
            seed: 0,
        }
    }
}

/// Membership of one element: a primary cluster and, for points in an
/// overlap region, a secondary one. The primary cluster is never farther
/// than the secondary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Assignment {
    primary: usize,
    secondary: Option<usize>,
}

impl Assignment {
    pub fn exclusive(cluster: usize) -> Self {
        Self {
            primary: cluster,
            secondary: None,
        }
    }

    /// Dual membership; `primary` must be the closer cluster.
    pub fn dual(primary: usize, secondary: usize) -> Self {
        assert_ne!(primary, secondary, "dual assignment needs two clusters");
        Self {
            primary,
            secondary: Some(secondary),
        }
    }

    pub fn primary(&self) -> usize {
        self.primary
    }

    pub fn secondary(&self) -> Option<usize> {
        self.secondary
    }

    pub fn is_dual(&self) -> bool {
        self.secondary.is_some()
    }

    pub fn contains(&self, cluster: usize) -> bool {
        self.primary == cluster || self.secondary == Some(cluster)
    }

    pub fn members(&self) -> impl Iterator<Item = usize> {
        std::iter::once(self.primary).chain(self.secondary)
    }

    /// The unordered cluster pair `(low, high)` for dual members.
    pub fn overlap_pair(&self) -> Option<(usize, usize)> {
        self.secondary
            .map(|s| (self.primary.min(s), self.primary.max(s)))
    }
}

/// A fitted clustering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterModel {
    /// k x n cluster means.
    pub means: Matrix,
    /// One membership per data point.
    pub assignments: Vec<Assignment>,
    /// Objective value, recomputed from scratch on the final state.
    pub objective: f64,
    /// Alternation iterations executed.
    pub iterations: usize,
    /// Whether a fixed point was reached before the iteration cap.
    pub converged: bool,
    /// Overlap exponent the model was fitted with.
    pub m: f64,
    /// Seed of the random stream that produced the initial means
    /// (derived from `FitConfig::seed` via [`restart_seed`]).
    pub seed: u64,
}

impl ClusterModel {
    pub fn k(&self) -> usize {
        self.means.rows()
    }

    pub fn dim(&self) -> usize {
        self.means.cols()
    }

    pub fn n_points(&self) -> usize {
        self.assignments.len()
    }

    /// Member count per cluster; a dual point counts toward both clusters.
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k()];
        for a in &self.assignments {
            for c in a.members() {
                sizes[c] += 1;
            }
        }
        sizes
    }

    pub fn dual_count(&self) -> usize {
        self.assignments.iter().filter(|a| a.is_dual()).count()
    }
}

/// Result of a multi-restart sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct RestartOutcome {
    /// Model with the smallest objective; ties go to the lowest restart index.
    pub best: ClusterModel,
    /// Index of the winning restart.
    pub winner: usize,
    /// Objective of every restart, in restart order.
    pub objectives: Vec<f64>,
}

/// Per-iteration record of a traced fit.
#[derive(Debug, Clone)]
pub struct IterationTrace {
    /// Memberships after the assignment step (including any cluster repair).
    pub assignments: Vec<Assignment>,
    pub objective_after_assignment: f64,
    pub objective_after_update: f64,
    /// Number of empty clusters re-seeded during the assignment step.
    pub reseeded: usize,
}

/// Full history of one fit, for convergence diagnostics and testing.
#[derive(Debug, Clone)]
pub struct FitTrace {
    pub initial_means: Matrix,
    pub iterations: Vec<IterationTrace>,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// Indices and squared distances of the two nearest means, `d1 <= d2`.
/// Ties go to the lower index. Requires at least two means.
fn two_nearest(x: &[f64], means: &Matrix) -> (usize, f64, usize, f64) {
    let mut best = (0usize, f64::INFINITY);
    let mut second = (0usize, f64::INFINITY);
    for (i, row) in means.iter_rows().enumerate() {
        let d = squared_distance(x, row);
        if d < best.1 {
            second = best;
            best = (i, d);
        } else if d < second.1 {
            second = (i, d);
        }
    }
    (best.0, best.1, second.0, second.1)
}

fn assign_inner(x: &[f64], means: &Matrix, two_pow_m: f64) -> Assignment {
    if means.rows() == 1 {
        return Assignment::exclusive(0);
    }
    let (i1, d1, i2, d2) = two_nearest(x, means);
    if d1 < (d1 + d2) / two_pow_m {
        Assignment::exclusive(i1)
    } else {
        Assignment::dual(i1, i2)
    }
}

fn check_dims(x: &[f64], means: &Matrix) -> Result<()> {
    if x.len() != means.cols() {
        return Err(Error::DimensionMismatch {
            what: "point vs means",
            expected: means.cols(),
            got: x.len(),
        });
    }
    Ok(())
}

/// Optimal membership of a single point for fixed means: exclusive to the
/// nearest cluster, or dual with the second nearest when the overlap
/// condition `d1 >= (d1 + d2) / 2^m` holds.
pub fn assign_element(x: &[f64], means: &Matrix, m: f64) -> Result<Assignment> {
    validate_exponent(m)?;
    check_dims(x, means)?;
    Ok(assign_inner(x, means, 2f64.powf(m)))
}

/// [`assign_element`] applied to every point.
pub fn assign_all(data: &Dataset, means: &Matrix, m: f64) -> Result<Vec<Assignment>> {
    validate_exponent(m)?;
    check_dims(data.point(0), means)?;
    let two_pow_m = 2f64.powf(m);
    Ok((0..data.len())
        .map(|j| assign_inner(data.point(j), means, two_pow_m))
        .collect())
}

fn element_cost(x: &[f64], means: &Matrix, a: Assignment, two_pow_m: f64) -> f64 {
    let d1 = squared_distance(x, means.row(a.primary));
    match a.secondary {
        None => d1,
        Some(s) => (d1 + squared_distance(x, means.row(s))) / two_pow_m,
    }
}

fn check_assignments(assignments: &[Assignment], n_points: usize, k: usize) -> Result<()> {
    if assignments.len() != n_points {
        return Err(Error::DimensionMismatch {
            what: "assignments vs points",
            expected: n_points,
            got: assignments.len(),
        });
    }
    for a in assignments {
        for c in a.members() {
            if c >= k {
                return Err(Error::ClusterIndexOutOfRange { index: c, k });
            }
        }
    }
    Ok(())
}

/// Objective value: exclusive points contribute their squared distance,
/// dual points `(d1 + d2) / 2^m`.
pub fn objective(
    data: &Dataset,
    assignments: &[Assignment],
    means: &Matrix,
    m: f64,
) -> Result<f64> {
    validate_exponent(m)?;
    check_dims(data.point(0), means)?;
    check_assignments(assignments, data.len(), means.rows())?;
    let two_pow_m = 2f64.powf(m);
    Ok(assignments
        .iter()
        .enumerate()
        .map(|(j, &a)| element_cost(data.point(j), means, a, two_pow_m))
        .sum())
}

/// Means minimizing the objective for fixed assignments: per cluster, the
/// weighted average of its members with exclusive weight 1 and dual weight
/// `1 / 2^m`. A cluster with no members is reported as an error; the fit
/// loop repairs such clusters before updating.
pub fn update_means(
    data: &Dataset,
    assignments: &[Assignment],
    k: usize,
    m: f64,
) -> Result<Matrix> {
    validate_exponent(m)?;
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    check_assignments(assignments, data.len(), k)?;
    let dual_weight = 1.0 / 2f64.powf(m);
    let n = data.dim();
    let mut sums = Matrix::zeros(k, n)?;
    let mut weights = vec![0.0f64; k];
    for (j, a) in assignments.iter().enumerate() {
        let w = if a.is_dual() { dual_weight } else { 1.0 };
        let x = data.point(j);
        for c in a.members() {
            weights[c] += w;
            let row = sums.row_mut(c);
            for (acc, v) in row.iter_mut().zip(x) {
                *acc += w * v;
            }
        }
    }
    for (c, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            return Err(Error::EmptyCluster(c));
        }
        for acc in sums.row_mut(c) {
            *acc /= w;
        }
    }
    Ok(sums)
}

/// Initial means for a fit. Both methods return k data rows with distinct
/// row indices and are deterministic for a given seed.
pub fn initialize_means(data: &Dataset, k: usize, method: InitMethod, seed: u64) -> Result<Matrix> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    let n_points = data.len();
    if k > n_points {
        return Err(Error::TooManyClusters {
            k,
            points: n_points,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen: Vec<usize> = match method {
        InitMethod::RandomPoints => {
            // Partial Fisher-Yates over the row indices.
            let mut idx: Vec<usize> = (0..n_points).collect();
            for i in 0..k {
                let j = rng.random_range(i..n_points);
                idx.swap(i, j);
            }
            idx.truncate(k);
            idx
        }
        InitMethod::GreedySpread => {
            let first = rng.random_range(0..n_points);
            let mut chosen = vec![first];
            let mut taken = vec![false; n_points];
            taken[first] = true;
            let mut nearest: Vec<f64> = (0..n_points)
                .map(|j| squared_distance(data.point(j), data.point(first)))
                .collect();
            while chosen.len() < k {
                let mut best: Option<(usize, f64)> = None;
                for (j, &d) in nearest.iter().enumerate() {
                    if taken[j] {
                        continue;
                    }
                    if best.is_none_or(|(_, bd)| d > bd) {
                        best = Some((j, d));
                    }
                }
                let (next, _) = best.expect("k <= N leaves an unchosen row");
                taken[next] = true;
                chosen.push(next);
                for (j, slot) in nearest.iter_mut().enumerate() {
                    let d = squared_distance(data.point(j), data.point(next));
                    if d < *slot {
                        *slot = d;
                    }
                }
            }
            chosen
        }
    };
    let rows: Vec<Vec<f64>> = chosen.iter().map(|&j| data.point(j).to_vec()).collect();
    Matrix::from_rows(&rows)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// RNG seed for restart `restart` derived from the base seed: two rounds of
/// the SplitMix64 finalizer, `splitmix64(seed ^ splitmix64(restart))`.
/// A single fit is restart 0.
pub fn restart_seed(seed: u64, restart: u64) -> u64 {
    splitmix64(seed ^ splitmix64(restart))
}

/// Re-seeds clusters that lost all members after an assignment step: each
/// empty cluster takes over the point with the largest objective
/// contribution among points that are not the sole member of any of their
/// clusters (such a point always exists when k <= N). The point becomes
/// exclusive to the empty cluster and the cluster's mean moves onto it, so
/// the objective never increases.
fn reseed_empty_clusters(
    data: &Dataset,
    assignments: &mut [Assignment],
    means: &mut Matrix,
    k: usize,
    m: f64,
) -> Result<usize> {
    let mut member_counts = vec![0usize; k];
    for a in assignments.iter() {
        for c in a.members() {
            member_counts[c] += 1;
        }
    }
    let two_pow_m = 2f64.powf(m);
    let mut reseeded = 0;
    while let Some(empty) = member_counts.iter().position(|&c| c == 0) {
        let mut worst: Option<(usize, f64)> = None;
        for (j, a) in assignments.iter().enumerate() {
            if a.members().any(|c| member_counts[c] < 2) {
                continue;
            }
            let cost = element_cost(data.point(j), means, *a, two_pow_m);
            if worst.is_none_or(|(_, wc)| cost > wc) {
                worst = Some((j, cost));
            }
        }
        let Some((j, _)) = worst else {
            return Err(Error::InvalidConfig(format!(
                "cannot repair empty cluster {empty}: k exceeds distinct occupied points"
            )));
        };
        for c in assignments[j].members() {
            member_counts[c] -= 1;
        }
        assignments[j] = Assignment::exclusive(empty);
        member_counts[empty] = 1;
        let point = data.point(j).to_vec();
        means.row_mut(empty).copy_from_slice(&point);
        reseeded += 1;
    }
    Ok(reseeded)
}

struct RunResult {
    means: Matrix,
    assignments: Vec<Assignment>,
    iterations: usize,
    converged: bool,
}

/// One assignment/update alternation from the given means. A fixed point is
/// declared when an assignment step leaves every membership unchanged and
/// the following update moves no mean coordinate by [`MEAN_TOLERANCE`] or
/// more.
fn alternate(
    data: &Dataset,
    mut means: Matrix,
    config: &FitConfig,
    mut trace: Option<&mut Vec<IterationTrace>>,
) -> Result<RunResult> {
    let (k, m) = (config.k, config.m);
    let mut prev: Option<Vec<Assignment>> = None;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iterations {
        iterations += 1;
        let mut assignments = assign_all(data, &means, m)?;
        let reseeded = reseed_empty_clusters(data, &mut assignments, &mut means, k, m)?;
        let unchanged = prev.as_ref() == Some(&assignments);
        let after_assignment = if trace.is_some() {
            Some(objective(data, &assignments, &means, m)?)
        } else {
            None
        };
        let new_means = update_means(data, &assignments, k, m)?;
        let delta = new_means.max_abs_diff(&means);
        if let Some(steps) = trace.as_deref_mut() {
            steps.push(IterationTrace {
                assignments: assignments.clone(),
                objective_after_assignment: after_assignment.unwrap(),
                objective_after_update: objective(data, &assignments, &new_means, m)?,
                reseeded,
            });
        }
        means = new_means;
        prev = Some(assignments);
        if unchanged && delta < MEAN_TOLERANCE {
            converged = true;
            break;
        }
    }
    Ok(RunResult {
        means,
        assignments: prev.expect("at least one iteration ran"),
        iterations,
        converged,
    })
}

fn single_run(
    data: &Dataset,
    config: &FitConfig,
    rng_seed: u64,
    trace: Option<&mut Vec<IterationTrace>>,
) -> Result<(ClusterModel, Matrix)> {
    config.validate()?;
    let initial = initialize_means(data, config.k, config.init, rng_seed)?;
    let run = alternate(data, initial.clone(), config, trace)?;
    let objective = objective(data, &run.assignments, &run.means, config.m)?;
    Ok((
        ClusterModel {
            means: run.means,
            assignments: run.assignments,
            objective,
            iterations: run.iterations,
            converged: run.converged,
            m: config.m,
            seed: rng_seed,
        },
        initial,
    ))
}

fn require_single_restart(config: &FitConfig) -> Result<()> {
    if config.restarts != 1 {
        return Err(Error::InvalidConfig(format!(
            "fit runs a single restart, got restarts={}; use fit_multi_restart",
            config.restarts
        )));
    }
    Ok(())
}

/// Runs a single fit (restart 0 of the config's seed) to a fixed point or
/// the iteration cap. Deterministic given `(data, config)`.
pub fn fit(data: &Dataset, config: &FitConfig) -> Result<ClusterModel> {
    require_single_restart(config)?;
    Ok(single_run(data, config, restart_seed(config.seed, 0), None)?.0)
}

/// Like [`fit`], but records the initial means, every intermediate
/// assignment, and the objective after each half-step.
pub fn fit_with_trace(data: &Dataset, config: &FitConfig) -> Result<(ClusterModel, FitTrace)> {
    require_single_restart(config)?;
    let mut steps = Vec::new();
    let (model, initial) =
        single_run(data, config, restart_seed(config.seed, 0), Some(&mut steps))?;
    Ok((
        model,
        FitTrace {
            initial_means: initial,
            iterations: steps,
        },
    ))
}

/// Runs the alternation from explicitly provided initial means; `config.k`
/// must match the number of rows. `config.init`, `restarts`, and `seed` are
/// not consulted for initialization.
pub fn fit_from_means(
    data: &Dataset,
    initial_means: Matrix,
    config: &FitConfig,
) -> Result<(ClusterModel, FitTrace)> {
    config.validate()?;
    if initial_means.rows() != config.k {
        return Err(Error::InvalidConfig(format!(
            "initial means have {} rows but k={}",
            initial_means.rows(),
            config.k
        )));
    }
    check_dims(data.point(0), &initial_means)?;
    for (i, row) in initial_means.iter_rows().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    row: i + 1,
                    col: j + 1,
                });
            }
        }
    }
    if config.k > data.len() {
        return Err(Error::TooManyClusters {
            k: config.k,
            points: data.len(),
        });
    }
    let mut steps = Vec::new();
    let run = alternate(data, initial_means.clone(), config, Some(&mut steps))?;
    let objective = objective(data, &run.assignments, &run.means, config.m)?;
    Ok((
        ClusterModel {
            means: run.means,
            assignments: run.assignments,
            objective,
            iterations: run.iterations,
            converged: run.converged,
            m: config.m,
            seed: config.seed,
        },
        FitTrace {
            initial_means,
            iterations: steps,
        },
    ))
}

/// Runs `config.restarts` independent fits with seeds derived from
/// `config.seed` and keeps every objective. Restarts run in parallel; the
/// winner is the smallest objective, ties broken by lowest restart index,
/// so the outcome does not depend on scheduling.
pub fn fit_restarts(data: &Dataset, config: &FitConfig) -> Result<RestartOutcome> {
    config.validate()?;
    let models: Vec<ClusterModel> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            single_run(data, config, restart_seed(config.seed, r as u64), None)
                .map(|(model, _)| model)
        })
        .collect::<Result<_>>()?;
    let objectives: Vec<f64> = models.iter().map(|m| m.objective).collect();
    let winner = objectives
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.partial_cmp(b).expect("objectives are finite"))
        .map(|(i, _)| i)
        .expect("restarts >= 1");
    let best = models.into_iter().nth(winner).expect("winner in range");
    Ok(RestartOutcome {
        best,
        winner,
        objectives,
    })
}

/// Best-of-restarts fit; see [`fit_restarts`].
pub fn fit_multi_restart(data: &Dataset, config: &FitConfig) -> Result<ClusterModel> {
    Ok(fit_restarts(data, config)?.best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn means_1d(values: &[f64]) -> Matrix {
        Matrix::from_rows(&values.iter().map(|&v| vec![v]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn point_at_a_mean_stays_exclusive() {
        let means = Matrix::from_rows(&[vec![1.0, 2.0], vec![5.0, 5.0]]).unwrap();
        for m in [1.0, 2.0, 5f64.log2(), 6.0] {
            let a = assign_element(&[1.0, 2.0], &means, m).unwrap();
            assert_eq!(a, Assignment::exclusive(0));
        }
    }

    #[test]
    fn assignment_respects_the_overlap_interval() {
        // Means {0, 1} with m = log2(5): the shared interval is the middle
        // third, so 0.2 stays exclusive and 0.5 is dual.
        let means = means_1d(&[0.0, 1.0]);
        let m = 5f64.log2();
        assert_eq!(
            assign_element(&[0.2], &means, m).unwrap(),
            Assignment::exclusive(0)
        );
        assert_eq!(
            assign_element(&[0.5], &means, m).unwrap(),
            Assignment::dual(0, 1)
        );
        // Just outside / inside the boundary at 1/3.
        assert_eq!(
            assign_element(&[1.0 / 3.0 - 1e-9], &means, m).unwrap(),
            Assignment::exclusive(0)
        );
        assert_eq!(
            assign_element(&[1.0 / 3.0 + 1e-9], &means, m).unwrap(),
            Assignment::dual(0, 1)
        );
    }

    #[test]
    fn exact_tie_at_m_one_is_dual() {
        // d1 == d2 makes the exclusive condition d1 < (d1 + d2) / 2 false.
        let means = means_1d(&[0.0, 1.0]);
        assert_eq!(
            assign_element(&[0.5], &means, 1.0).unwrap(),
            Assignment::dual(0, 1)
        );
    }

    #[test]
    fn single_cluster_is_always_exclusive() {
        let means = means_1d(&[3.0]);
        assert_eq!(
            assign_element(&[100.0], &means, 4.0).unwrap(),
            Assignment::exclusive(0)
        );
    }

    #[test]
    fn assignment_rejects_dimension_mismatch() {
        let means = Matrix::from_rows(&[vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            assign_element(&[1.0], &means, 2.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn update_means_weights_dual_members_down() {
        // Cluster 0 holds 0.0 exclusively and shares 1.0 with cluster 1.
        // At m = 1 the shared point weighs 1/2: mean = 0.5 / 1.5 = 1/3.
        let data = Dataset::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        let assignments = vec![Assignment::exclusive(0), Assignment::dual(1, 0)];
        let means = update_means(&data, &assignments, 2, 1.0).unwrap();
        assert!((means.get(0, 0) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(means.get(1, 0), 1.0);
    }

    #[test]
    fn update_means_without_overlaps_is_the_arithmetic_mean() {
        let data = Dataset::from_rows(&[vec![0.0], vec![2.0], vec![10.0]]).unwrap();
        let assignments = vec![
            Assignment::exclusive(0),
            Assignment::exclusive(0),
            Assignment::exclusive(1),
        ];
        for m in [1.0, 2.0, 3.5] {
            let means = update_means(&data, &assignments, 2, m).unwrap();
            assert_eq!(means.get(0, 0), 1.0);
            assert_eq!(means.get(1, 0), 10.0);
        }
    }

    #[test]
    fn update_means_reports_empty_clusters() {
        let data = Dataset::from_rows(&[vec![0.0]]).unwrap();
        let err = update_means(&data, &[Assignment::exclusive(0)], 2, 1.0).unwrap_err();
        assert!(matches!(err, Error::EmptyCluster(1)));
    }

    #[test]
    fn objective_hand_values() {
        let data = Dataset::from_rows(&[vec![0.5]]).unwrap();
        let means = means_1d(&[0.0, 1.0]);
        let dual = vec![Assignment::dual(0, 1)];
        assert!((objective(&data, &dual, &means, 1.0).unwrap() - 0.25).abs() < 1e-15);
        // Point sitting on its exclusive mean costs nothing.
        let data = Dataset::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        let excl = vec![Assignment::exclusive(0), Assignment::exclusive(1)];
        assert_eq!(objective(&data, &excl, &means, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn perfect_fit_converges_immediately() {
        let data = Dataset::from_rows(&[vec![0.0, 0.0], vec![5.0, 0.0], vec![0.0, 7.0]]).unwrap();
        for m in [1.0, 5f64.log2(), 3.0] {
            let config = FitConfig {
                k: 3,
                m,
                restarts: 1,
                ..FitConfig::default()
            };
            let model = fit(&data, &config).unwrap();
            assert_eq!(model.objective, 0.0);
            assert!(model.converged);
            assert!(model.iterations <= 2);
            assert!(model.assignments.iter().all(|a| !a.is_dual()));
            // Each point exclusive to its own cluster: all clusters distinct.
            let mut primaries: Vec<usize> = model.assignments.iter().map(|a| a.primary()).collect();
            primaries.sort_unstable();
            assert_eq!(primaries, vec![0, 1, 2]);
        }
    }

    #[test]
    fn degenerate_identical_points_yield_equal_means() {
        let data = Dataset::from_rows(&vec![vec![2.0, 3.0]; 5]).unwrap();
        let config = FitConfig {
            k: 3,
            m: 2.0,
            restarts: 1,
            ..FitConfig::default()
        };
        let model = fit(&data, &config).unwrap();
        assert!(model.converged);
        for i in 0..model.k() {
            assert_eq!(model.means.row(i), &[2.0, 3.0]);
        }
        assert_eq!(model.objective, 0.0);
    }

    #[test]
    fn fit_rejects_more_clusters_than_points() {
        let data = Dataset::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        let config = FitConfig {
            k: 3,
            m: 2.0,
            restarts: 1,
            ..FitConfig::default()
        };
        assert!(matches!(
            fit(&data, &config),
            Err(Error::TooManyClusters { k: 3, points: 2 })
        ));
    }

    #[test]
    fn fit_rejects_multi_restart_configs() {
        let data = Dataset::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        let config = FitConfig {
            k: 2,
            m: 2.0,
            restarts: 3,
            ..FitConfig::default()
        };
        assert!(matches!(fit(&data, &config), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn empty_cluster_is_reseeded_and_k_preserved() {
        // Third initial mean is far from all data, so its cluster starts
        // empty and must be repaired without dropping below k clusters.
        let data = Dataset::from_rows(&[vec![0.0], vec![0.1], vec![10.0], vec![10.1], vec![20.0]])
            .unwrap();
        let initial = means_1d(&[0.05, 10.05, 1000.0]);
        let config = FitConfig {
            k: 3,
            m: 2.0,
            restarts: 1,
            ..FitConfig::default()
        };
        let (model, trace) = fit_from_means(&data, initial, &config).unwrap();
        assert!(trace.iterations[0].reseeded >= 1);
        assert!(model.converged);
        let sizes = model.cluster_sizes();
        assert!(sizes.iter().all(|&s| s > 0), "sizes: {sizes:?}");
        // The outlier at 20.0 had the largest contribution and takes over
        // the empty cluster.
        assert_eq!(model.assignments[4], Assignment::exclusive(2));
    }

    #[test]
    fn reseed_never_increases_the_objective() {
        let data = Dataset::from_rows(&[vec![0.0], vec![0.1], vec![10.0], vec![10.1], vec![20.0]])
            .unwrap();
        let initial = means_1d(&[0.05, 10.05, 1000.0]);
        let config = FitConfig {
            k: 3,
            m: 2.0,
            restarts: 1,
            ..FitConfig::default()
        };
        let (_, trace) = fit_from_means(&data, initial, &config).unwrap();
        let mut last = f64::INFINITY;
        for step in &trace.iterations {
            assert!(step.objective_after_assignment <= last + 1e-9);
            assert!(step.objective_after_update <= step.objective_after_assignment + 1e-9);
            last = step.objective_after_update;
        }
    }

    #[test]
    fn initialize_random_points_takes_distinct_rows() {
        let data =
            Dataset::from_rows(&(0..10).map(|i| vec![i as f64]).collect::<Vec<_>>()).unwrap();
        let means = initialize_means(&data, 10, InitMethod::RandomPoints, 3).unwrap();
        let mut values: Vec<f64> = (0..10).map(|i| means.get(i, 0)).collect();
        values.sort_by(f64::total_cmp);
        assert_eq!(values, (0..10).map(|i| i as f64).collect::<Vec<_>>());
    }

    #[test]
    fn initialize_is_deterministic() {
        let data = Dataset::from_rows(
            &(0..20)
                .map(|i| vec![(i * 7 % 13) as f64])
                .collect::<Vec<_>>(),
        )
        .unwrap();
        for method in [InitMethod::RandomPoints, InitMethod::GreedySpread] {
            let a = initialize_means(&data, 4, method, 42).unwrap();
            let b = initialize_means(&data, 4, method, 42).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn greedy_spread_picks_the_farthest_row() {
        let data = Dataset::from_rows(&[vec![0.0], vec![0.1], vec![10.0]]).unwrap();
        // Find a seed whose first pick is row 0, then the second mean must
        // be the far point at 10.
        let seed = (0..200)
            .find(|&s| {
                initialize_means(&data, 1, InitMethod::GreedySpread, s)
                    .unwrap()
                    .get(0, 0)
                    == 0.0
            })
            .expect("some seed picks row 0 first");
        let means = initialize_means(&data, 2, InitMethod::GreedySpread, seed).unwrap();
        assert_eq!(means.get(0, 0), 0.0);
        assert_eq!(means.get(1, 0), 10.0);
    }

    #[test]
    fn initialize_rejects_k_above_n() {
        let data = Dataset::from_rows(&[vec![0.0]]).unwrap();
        assert!(matches!(
            initialize_means(&data, 2, InitMethod::RandomPoints, 0),
            Err(Error::TooManyClusters { .. })
        ));
    }

    #[test]
    fn multi_restart_returns_the_smallest_objective() {
        let data = Dataset::from_rows(
            &(0..40)
                .map(|i| vec![(i % 4) as f64 * 10.0 + (i / 4) as f64 * 0.01])
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let config = FitConfig {
            k: 4,
            m: 2.0,
            restarts: 8,
            seed: 11,
            ..FitConfig::default()
        };
        let outcome = fit_restarts(&data, &config).unwrap();
        assert_eq!(outcome.objectives.len(), 8);
        let min = outcome
            .objectives
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        assert_eq!(outcome.best.objective, min);
        assert_eq!(outcome.objectives[outcome.winner], min);
        // Every restart reproduces independently.
        for (r, &obj) in outcome.objectives.iter().enumerate() {
            let single = single_run(&data, &config, restart_seed(config.seed, r as u64), None)
                .unwrap()
                .0;
            assert_eq!(single.objective, obj);
        }
    }

    #[test]
    fn multi_restart_with_one_restart_equals_fit() {
        let data = Dataset::from_rows(
            &(0..12)
                .map(|i| vec![i as f64, (i % 3) as f64])
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let config = FitConfig {
            k: 3,
            m: 5f64.log2(),
            restarts: 1,
            seed: 5,
            ..FitConfig::default()
        };
        let from_multi = fit_multi_restart(&data, &config).unwrap();
        let from_fit = fit(&data, &config).unwrap();
        assert_eq!(from_multi, from_fit);
    }

    #[test]
    fn refits_are_bit_identical() {
        let data = Dataset::from_rows(
            &(0..30)
                .map(|i| vec![(i as f64 * 0.37).sin(), (i as f64 * 0.71).cos()])
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let config = FitConfig {
            k: 4,
            m: 2.0,
            restarts: 6,
            seed: 9,
            ..FitConfig::default()
        };
        let a = fit_multi_restart(&data, &config).unwrap();
        let b = fit_multi_restart(&data, &config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn restart_seed_is_stable() {
        // Frozen values so the derivation never drifts silently.
        assert_eq!(restart_seed(0, 0), restart_seed(0, 0));
        assert_ne!(restart_seed(0, 0), restart_seed(0, 1));
        assert_ne!(restart_seed(0, 1), restart_seed(1, 0));
        assert_eq!(restart_seed(7, 3), splitmix64(7 ^ splitmix64(3)));
    }
}
