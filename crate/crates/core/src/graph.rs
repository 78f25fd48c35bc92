//! Cluster-relation graph extraction and export.
//!
//! Two clusters are related when many elements sit in their overlap: the
//! edge rule keeps pair `(i, j)` exactly when
//! `overlap_count > gamma * min(size_i, size_j)`, with a strict inequality.
//! Vertices carry member counts (dual members count toward both clusters);
//! edges carry the raw overlap count. Export formats are deterministic so
//! identical models produce identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::engine::ClusterModel;
use crate::error::{Error, Result};

/// Version tag written into every graph JSON document.
pub const GRAPH_SCHEMA_VERSION: u32 = 1;

/// A cluster vertex: its index and member count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterVertex {
    pub cluster: usize,
    pub size: usize,
}

/// An undirected edge between clusters `a < b` with its overlap count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterEdge {
    pub a: usize,
    pub b: usize,
    pub overlap_count: usize,
}

/// The extracted relation graph. Edges are stored once with `a < b`,
/// sorted, deduplicated, and every one passes the strict threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterGraph {
    vertices: Vec<ClusterVertex>,
    edges: Vec<ClusterEdge>,
    gamma: f64,
}

/// On-disk JSON layout; `ratio` is `overlap_count / min(size_a, size_b)`,
/// derived on write and ignored on read.
#[derive(Serialize, Deserialize)]
struct GraphFile {
    schema_version: u32,
    gamma: f64,
    vertices: Vec<ClusterVertex>,
    edges: Vec<EdgeRecord>,
}

#[derive(Serialize, Deserialize)]
struct EdgeRecord {
    a: usize,
    b: usize,
    overlap_count: usize,
    ratio: f64,
}

/// Tally of dual assignments per unordered cluster pair; pairs that never
/// co-occur are absent.
pub fn count_overlaps(model: &ClusterModel) -> BTreeMap<(usize, usize), usize> {
    let mut counts = BTreeMap::new();
    for a in &model.assignments {
        if let Some(pair) = a.overlap_pair() {
            *counts.entry(pair).or_insert(0) += 1;
        }
    }
    counts
}

/// Applies the edge rule to a fitted model.
pub fn extract_graph(model: &ClusterModel, gamma: f64) -> Result<ClusterGraph> {
    if !gamma.is_finite() || !(0.0..=1.0).contains(&gamma) {
        return Err(Error::GammaOutOfRange(gamma));
    }
    let sizes = model.cluster_sizes();
    let vertices: Vec<ClusterVertex> = sizes
        .iter()
        .enumerate()
        .map(|(cluster, &size)| ClusterVertex { cluster, size })
        .collect();
    let edges: Vec<ClusterEdge> = count_overlaps(model)
        .into_iter()
        .filter(|&((a, b), count)| count as f64 > gamma * sizes[a].min(sizes[b]) as f64)
        .map(|((a, b), overlap_count)| ClusterEdge {
            a,
            b,
            overlap_count,
        })
        .collect();
    Ok(ClusterGraph {
        vertices,
        edges,
        gamma,
    })
}

impl ClusterGraph {
    pub fn vertices(&self) -> &[ClusterVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[ClusterEdge] {
        &self.edges
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Edge endpoints as a set of `(a, b)` pairs.
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.a, e.b)).collect()
    }

    /// Undirected DOT rendering: vertices in index order labeled
    /// `C<i> (n=<size>)`, edges in `(a, b)` order labeled with the overlap
    /// count. Byte-deterministic.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph clusters {\n");
        for v in &self.vertices {
            let _ = writeln!(
                out,
                "  c{} [label=\"C{} (n={})\"];",
                v.cluster, v.cluster, v.size
            );
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  c{} -- c{} [label=\"{}\"];",
                e.a, e.b, e.overlap_count
            );
        }
        out.push_str("}\n");
        out
    }

    /// Versioned JSON rendering with keys in a fixed order. Byte-
    /// deterministic; round-trips through [`ClusterGraph::from_json`].
    pub fn to_json(&self) -> String {
        let sizes: Vec<usize> = self.vertices.iter().map(|v| v.size).collect();
        let file = GraphFile {
            schema_version: GRAPH_SCHEMA_VERSION,
            gamma: self.gamma,
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    a: e.a,
                    b: e.b,
                    overlap_count: e.overlap_count,
                    ratio: e.overlap_count as f64 / sizes[e.a].min(sizes[e.b]) as f64,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("graph serialization cannot fail")
    }

    /// Parses and validates a graph JSON document.
    pub fn from_json(text: &str) -> Result<ClusterGraph> {
        let file: GraphFile = serde_json::from_str(text)?;
        if file.schema_version != GRAPH_SCHEMA_VERSION {
            return Err(Error::InvalidGraph(format!(
                "unsupported schema version {}",
                file.schema_version
            )));
        }
        if !file.gamma.is_finite() || !(0.0..=1.0).contains(&file.gamma) {
            return Err(Error::GammaOutOfRange(file.gamma));
        }
        if file.vertices.is_empty() {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        for (i, v) in file.vertices.iter().enumerate() {
            if v.cluster != i {
                return Err(Error::InvalidGraph(format!(
                    "vertex {i} carries cluster index {}",
                    v.cluster
                )));
            }
        }
        let k = file.vertices.len();
        let mut prev: Option<(usize, usize)> = None;
        let mut edges = Vec::with_capacity(file.edges.len());
        for e in &file.edges {
            if e.a >= e.b {
                return Err(Error::InvalidGraph(format!(
                    "edge {}-{}: endpoints must satisfy a < b",
                    e.a, e.b
                )));
            }
            if e.b >= k {
                return Err(Error::InvalidGraph(format!(
                    "edge {}-{} references a missing vertex",
                    e.a, e.b
                )));
            }
            if prev.is_some_and(|p| p >= (e.a, e.b)) {
                return Err(Error::InvalidGraph(format!(
                    "edges must be strictly sorted by (a, b); saw {}-{} out of order",
                    e.a, e.b
                )));
            }
            prev = Some((e.a, e.b));
            let min_size = file.vertices[e.a].size.min(file.vertices[e.b].size);
            if e.overlap_count as f64 <= file.gamma * min_size as f64 {
                return Err(Error::InvalidGraph(format!(
                    "edge {}-{} fails the threshold: {} <= {} * {}",
                    e.a, e.b, e.overlap_count, file.gamma, min_size
                )));
            }
            edges.push(ClusterEdge {
                a: e.a,
                b: e.b,
                overlap_count: e.overlap_count,
            });
        }
        Ok(ClusterGraph {
            vertices: file.vertices,
            edges,
            gamma: file.gamma,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Assignment;
    use crate::matrix::Matrix;

    /// Model stub: only assignments and k matter to the graph.
    fn model_with(k: usize, assignments: Vec<Assignment>) -> ClusterModel {
        ClusterModel {
            means: Matrix::zeros(k, 1).unwrap(),
            assignments,
            objective: 0.0,
            iterations: 1,
            converged: true,
            m: 2.0,
            seed: 0,
        }
    }

    fn mixed_model() -> ClusterModel {
        let mut assignments = vec![Assignment::exclusive(0); 44];
        assignments.extend(vec![Assignment::exclusive(1); 34]);
        assignments.extend(vec![Assignment::exclusive(2); 20]);
        assignments.extend(vec![Assignment::dual(0, 1); 6]);
        assignments.extend(vec![Assignment::dual(1, 2); 1]);
        model_with(3, assignments)
    }

    #[test]
    fn counts_tally_dual_pairs() {
        let model = model_with(
            3,
            vec![
                Assignment::dual(0, 1),
                Assignment::dual(1, 0),
                Assignment::dual(1, 2),
                Assignment::exclusive(2),
            ],
        );
        let counts = count_overlaps(&model);
        assert_eq!(counts.get(&(0, 1)), Some(&2));
        assert_eq!(counts.get(&(1, 2)), Some(&1));
        assert_eq!(counts.len(), 2);
        let dual_total: usize = counts.values().sum();
        assert_eq!(dual_total, model.dual_count());
    }

    #[test]
    fn no_overlaps_means_no_counts() {
        let model = model_with(2, vec![Assignment::exclusive(0), Assignment::exclusive(1)]);
        assert!(count_overlaps(&model).is_empty());
    }

    #[test]
    fn threshold_keeps_and_drops_edges() {
        // Sizes 50 and 40 with 6 shared elements: gamma 0.1 gives threshold
        // 4 (edge), gamma 0.2 gives 8 (no edge).
        let model = mixed_model();
        let sizes = model.cluster_sizes();
        assert_eq!(sizes, vec![50, 41, 21]);
        let g = extract_graph(&model, 0.1).unwrap();
        assert!(g.edge_pairs().contains(&(0, 1)));
        let g = extract_graph(&model, 0.2).unwrap();
        assert!(!g.edge_pairs().contains(&(0, 1)));
    }

    #[test]
    fn gamma_zero_keeps_every_nonempty_overlap() {
        let model = mixed_model();
        let g = extract_graph(&model, 0.0).unwrap();
        assert_eq!(g.edge_pairs(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn gamma_out_of_range_is_rejected() {
        let model = mixed_model();
        assert!(matches!(
            extract_graph(&model, -0.1),
            Err(Error::GammaOutOfRange(_))
        ));
        assert!(matches!(
            extract_graph(&model, 1.5),
            Err(Error::GammaOutOfRange(_))
        ));
    }

    #[test]
    fn sizes_count_dual_members_twice() {
        let model = mixed_model();
        let total: usize = model.cluster_sizes().iter().sum();
        assert_eq!(total, model.n_points() + model.dual_count());
    }

    #[test]
    fn dot_output_is_exact_and_deterministic() {
        let model = model_with(
            2,
            vec![
                Assignment::exclusive(0),
                Assignment::exclusive(1),
                Assignment::dual(0, 1),
            ],
        );
        let g = extract_graph(&model, 0.0).unwrap();
        let dot = g.to_dot();
        assert_eq!(
            dot,
            "graph clusters {\n  c0 [label=\"C0 (n=2)\"];\n  c1 [label=\"C1 (n=2)\"];\n  c0 -- c1 [label=\"1\"];\n}\n"
        );
        assert_eq!(dot, g.to_dot());
    }

    #[test]
    fn single_vertex_graph_has_no_edges() {
        let model = model_with(1, vec![Assignment::exclusive(0)]);
        let g = extract_graph(&model, 0.1).unwrap();
        assert_eq!(g.vertices().len(), 1);
        assert!(g.edges().is_empty());
        assert_eq!(
            g.to_dot(),
            "graph clusters {\n  c0 [label=\"C0 (n=1)\"];\n}\n"
        );
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let g = extract_graph(&mixed_model(), 0.05).unwrap();
        let text = g.to_json();
        let parsed = ClusterGraph::from_json(&text).unwrap();
        assert_eq!(parsed, g);
        assert_eq!(parsed.to_json(), text);
        assert_eq!(parsed.gamma(), 0.05);
    }

    #[test]
    fn json_rejects_misordered_endpoints() {
        let g = extract_graph(&mixed_model(), 0.0).unwrap();
        let bad = g
            .to_json()
            .replace("\"a\": 0,\n      \"b\": 1", "\"a\": 1,\n      \"b\": 0");
        assert!(matches!(
            ClusterGraph::from_json(&bad),
            Err(Error::InvalidGraph(msg)) if msg.contains("a < b")
        ));
    }

    #[test]
    fn json_rejects_threshold_violations() {
        let g = extract_graph(&mixed_model(), 0.0).unwrap();
        let bad = g.to_json().replace("\"gamma\": 0.0", "\"gamma\": 0.9");
        assert!(matches!(
            ClusterGraph::from_json(&bad),
            Err(Error::InvalidGraph(msg)) if msg.contains("threshold")
        ));
    }
}
