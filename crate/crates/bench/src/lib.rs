//! Shared fixtures for the criterion benches.

use manifold_align::{gen_gaussian_spot, perturb, FeatureMatrix};

/// A Gaussian spot and its 0.5-scale perturbed copy, seeded for repeatable
/// benchmark inputs.
pub fn gaussian_pair(n: usize, d: usize, seed: u64) -> (FeatureMatrix, FeatureMatrix) {
    let x = gen_gaussian_spot(n, d, seed);
    let y = perturb(&x, 0.5, seed.wrapping_add(1_000_000));
    (x, y)
}
