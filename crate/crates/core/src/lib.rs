//! Prototype-based clustering built on projections onto convex sets.
//!
//! The central algorithm treats every data point of a cluster as a convex set
//! and moves the cluster prototype by a weighted parallel projection onto all
//! of its members, which lands each update on the distance-weighted mean of
//! the cluster. K-Means and Fuzzy C-Means are included as baselines, along
//! with dataset loading and normalization, an evaluation harness for seeded
//! repeated-run benchmarks, the underlying projection machinery, and SVG
//! output for 2-D results.

pub mod baselines;
pub mod cluster;
pub mod data;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod plot;

pub use baselines::{FuzzyModel, fit_fcm, fit_kmeans, harden, kmeanspp_init, random_point_init};
pub use cluster::{
    AlgoConfig, Algorithm, Assignment, ClusterModel, EmptyClusterPolicy, InitMethod, assign_points,
    fit_pocs, pocs_objective, pocs_update_prototype, pocs_weights,
};
pub use data::{
    Dataset, Delimiter, NormalizationSpec, RawTable, Scaling, load_dataset, make_blobs, normalize,
    normalize_with,
};
pub use error::{Error, Result};
pub use eval::{
    AggregateReport, AggregateRow, BenchRunner, FitOutcome, RunReport, RunningStats,
    clustering_error, run_experiment, run_experiment_with,
};
pub use geometry::{ConvexSet, PocsTrace, Point, alternating_pocs, parallel_pocs};
