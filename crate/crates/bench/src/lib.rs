//! Shared fixtures for the criterion benchmarks.

use pokm_core::datagen::{generate_scenario, BlobSpec, BridgeSpec};
use pokm_core::Dataset;

/// Four well-separated blobs on a square with two bridged sides; the
/// workload used across the fitting benchmarks.
pub fn square_scenario(points_per_blob: usize, seed: u64) -> Dataset {
    let blobs = vec![
        BlobSpec {
            center: vec![0.0, 0.0],
            spread: 0.5,
            count: points_per_blob,
        },
        BlobSpec {
            center: vec![10.0, 0.0],
            spread: 0.5,
            count: points_per_blob,
        },
        BlobSpec {
            center: vec![10.0, 10.0],
            spread: 0.5,
            count: points_per_blob,
        },
        BlobSpec {
            center: vec![0.0, 10.0],
            spread: 0.5,
            count: points_per_blob,
        },
    ];
    let bridges = vec![
        BridgeSpec {
            blob_a: 0,
            blob_b: 1,
            count: points_per_blob / 8,
            jitter: 0.2,
        },
        BridgeSpec {
            blob_a: 1,
            blob_b: 2,
            count: points_per_blob / 8,
            jitter: 0.2,
        },
    ];
    generate_scenario(&blobs, &bridges, seed)
        .expect("valid scenario")
        .dataset
}
