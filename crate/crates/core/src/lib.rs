//! Manifold-approximated kernel alignment and its contemporaries.
//!
//! This crate compares pairs of representations (N x d feature matrices
//! over the same N samples) through kernel alignment scores:
//!
//! * **CKA** over linear or RBF kernels, with median-based bandwidth
//!   policies.
//! * **kCKA**: CKA over an RBF kernel sparsified to each point's k nearest
//!   neighbors with a global median bandwidth.
//! * **MKA**: alignment of row-normalized sparse manifold kernels built on
//!   exact k-NN graphs with per-row calibrated bandwidths. Under the
//!   constant-row-sum property the score reduces to a closed form over
//!   sparse Frobenius inner products, evaluated in O(n * k).
//! * **CKA over t-conorm-symmetrized manifold kernels** as a symmetric
//!   counterpart to MKA.
//!
//! Supporting pieces: matrix file I/O ([`matrix`]), exact neighbor graphs
//! and bandwidth calibration ([`neighbors`]), kernel constructions
//! ([`kernels`]), the metrics themselves ([`alignment`]), and seeded
//! synthetic dataset generators ([`synthgen`]) for the benchmark suites.
//!
//! All operations are pure functions over immutable inputs and are safe to
//! call from multiple threads.

// Indexed loops read better than iterator chains for the matrix kernels.
#![allow(clippy::needless_range_loop)]

pub mod alignment;
pub mod error;
pub mod kernels;
pub mod matrix;
pub mod neighbors;
pub mod synthgen;

pub use alignment::{
    cka, compute_alignment, hsic, kcka, kendall_tau, mka_fast, mka_naive, scale_divergence,
    AlignmentScore, MetricConfig, MkaPath, MkaResult,
};
pub use error::{Error, Result};
pub use kernels::{
    knn_rbf_kernel, knn_rbf_kernel_zero_diag, linear_kernel, median_distance, rbf_kernel,
    symmetrize_tconorm, DenseKernel, RbfForm, SigmaPolicy,
};
pub use matrix::{load_matrix, save_matrix, FeatureMatrix, Format};
pub use neighbors::{
    calibrate_graph, calibrate_row, knn_graph, manifold_kernel, manifold_kernel_from_graph,
    pairwise_distances, DistanceMatrix, KnnGraph, RowCalibration, SparseRowKernel,
};
pub use synthgen::{
    gen_clusters, gen_gaussian_spot, gen_rings, gen_s_curve, gen_swiss_roll,
    gen_uniform_two_spots, generate, lost_correspondence, perturb, GenSpec, Generated,
};
