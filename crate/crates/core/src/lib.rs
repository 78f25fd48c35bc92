//! Pairwise overlapping k-means clustering.
//!
//! A k-means variant where every element belongs to one or two clusters.
//! The width of the dual-assignment region is steered by the exponent `m`
//! (see [`calibration`]), and the pairwise overlaps induce a relation graph
//! over the clusters (see [`graph`]): two clusters are connected when their
//! overlap holds more elements than a fraction `gamma` of the smaller one.
//!
//! ```
//! use pokm_core::{calibration, datagen, engine, graph};
//!
//! let blobs = vec![
//!     datagen::BlobSpec { center: vec![0.0, 0.0], spread: 0.3, count: 60 },
//!     datagen::BlobSpec { center: vec![8.0, 0.0], spread: 0.3, count: 60 },
//! ];
//! let bridges = vec![datagen::BridgeSpec { blob_a: 0, blob_b: 1, count: 12, jitter: 0.1 }];
//! let truth = datagen::generate_scenario(&blobs, &bridges, 7).unwrap();
//!
//! let config = engine::FitConfig {
//!     k: 2,
//!     m: calibration::m_from_overlap(1.0 / 3.0).unwrap(),
//!     restarts: 10,
//!     seed: 7,
//!     ..engine::FitConfig::default()
//! };
//! let model = engine::fit_multi_restart(&truth.dataset, &config).unwrap();
//! let relations = graph::extract_graph(&model, 0.1).unwrap();
//! assert_eq!(relations.edge_pairs(), vec![(0, 1)]);
//! ```

pub mod calibration;
pub mod datagen;
pub mod dataset;
pub mod engine;
pub mod error;
pub mod graph;
pub mod matrix;
pub mod oracle;

pub use dataset::Dataset;
pub use engine::{Assignment, ClusterModel, FitConfig, InitMethod, RestartOutcome};
pub use error::{Error, Result};
pub use graph::ClusterGraph;
pub use matrix::Matrix;
