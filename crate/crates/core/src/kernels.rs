//! Dense and sparse kernel constructions compared by the alignment metrics:
//! linear, RBF under median-based bandwidth policies, the k-NN-sparsified
//! RBF kernel, and the probabilistic t-conorm symmetrization of a sparse
//! row kernel.

use std::io::Write;

use crate::error::{Error, Result};
use crate::matrix::FeatureMatrix;
use crate::neighbors::{knn_graph, pairwise_distances, DistanceMatrix, SparseRowKernel};

/// Dense n x n kernel matrix with finite entries.
#[derive(Debug, Clone)]
pub struct DenseKernel {
    n: usize,
    values: Vec<f64>,
}

impl DenseKernel {
    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::Dimension(format!(
                "expected {n}x{n} values, got {}",
                values.len()
            )));
        }
        if let Some(idx) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: idx / n,
                col: idx % n,
            });
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Debug dump of all entries as `i,j,value` triples.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "i,j,value")?;
        for i in 0..self.n {
            for j in 0..self.n {
                writeln!(w, "{i},{j},{}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}

/// Bandwidth policy for the RBF kernel: the median pairwise distance M,
/// a scaled median `delta * M`, or an explicit value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaPolicy {
    Median,
    ScaledMedian(f64),
    Explicit(f64),
}

/// Exponent form of the RBF kernel. `Unsquared` uses
/// `exp(-d / (2 sigma^2))`; `Squared` uses the Gaussian
/// `exp(-d^2 / (2 sigma^2))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RbfForm {
    #[default]
    Unsquared,
    Squared,
}

/// Gram matrix of row inner products.
pub fn linear_kernel(x: &FeatureMatrix) -> DenseKernel {
    let n = x.n_samples();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        let ri = x.row(i);
        for j in i..n {
            let v: f64 = ri.iter().zip(x.row(j)).map(|(a, b)| a * b).sum();
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    DenseKernel { n, values }
}

/// Median of the strict upper-triangle entries of a distance matrix; an
/// even count averages the two middle values. Requires n >= 2.
pub fn median_distance(d: &DistanceMatrix) -> f64 {
    assert!(d.n() >= 2, "median needs at least one pair");
    let mut entries: Vec<f64> = d.upper_triangle().collect();
    entries.sort_unstable_by(f64::total_cmp);
    let m = entries.len();
    if m % 2 == 1 {
        entries[m / 2]
    } else {
        0.5 * (entries[m / 2 - 1] + entries[m / 2])
    }
}

/// Resolves a bandwidth policy against a distance matrix.
pub fn resolve_sigma(d: &DistanceMatrix, policy: SigmaPolicy) -> Result<f64> {
    let sigma = match policy {
        SigmaPolicy::Median => median_distance(d),
        SigmaPolicy::ScaledMedian(delta) => {
            if delta <= 0.0 || !delta.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "delta must be positive, got {delta}"
                )));
            }
            delta * median_distance(d)
        }
        SigmaPolicy::Explicit(sigma) => {
            if sigma <= 0.0 || !sigma.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "sigma must be positive, got {sigma}"
                )));
            }
            return Ok(sigma);
        }
    };
    if sigma == 0.0 {
        return Err(Error::ZeroMedian);
    }
    Ok(sigma)
}

/// RBF kernel of the sample rows of `x` under the given bandwidth policy.
pub fn rbf_kernel(x: &FeatureMatrix, policy: SigmaPolicy, form: RbfForm) -> Result<DenseKernel> {
    let d = pairwise_distances(x);
    let sigma = resolve_sigma(&d, policy)?;
    let n = x.n_samples();
    let denom = 2.0 * sigma * sigma;
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        values[i * n + i] = 1.0;
        for j in i + 1..n {
            let dist = d.get(i, j);
            let arg = match form {
                RbfForm::Unsquared => dist,
                RbfForm::Squared => dist * dist,
            };
            let v = (-arg / denom).exp();
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    Ok(DenseKernel { n, values })
}

fn knn_rbf_impl(x: &FeatureMatrix, k: usize, diagonal: f64) -> Result<SparseRowKernel> {
    let d = pairwise_distances(x);
    let graph = knn_graph(&d, k)?;
    let n = x.n_samples();
    // Global bandwidth: median of the retained neighbor distances over all
    // rows (a multiset of n*k directed entries).
    let mut retained: Vec<f64> = (0..n)
        .flat_map(|i| graph.distances_of(i).iter().copied())
        .collect();
    retained.sort_unstable_by(f64::total_cmp);
    let m = retained.len();
    let sigma = if m % 2 == 1 {
        retained[m / 2]
    } else {
        0.5 * (retained[m / 2 - 1] + retained[m / 2])
    };
    if sigma == 0.0 {
        return Err(Error::ZeroMedian);
    }
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| {
            graph
                .neighbors_of(i)
                .iter()
                .zip(graph.distances_of(i))
                .map(|(&j, &dist)| (j, (-dist / (2.0 * sigma)).exp()))
                .collect()
        })
        .collect();
    SparseRowKernel::from_rows(n, k, rows, diagonal, None)
}

/// k-NN-sparsified RBF kernel: `exp(-d / (2 sigma))` on each row's k
/// nearest neighbors, zero elsewhere, with the global median of retained
/// neighbor distances as `sigma`. The diagonal is set to 1 (self-similarity).
pub fn knn_rbf_kernel(x: &FeatureMatrix, k: usize) -> Result<SparseRowKernel> {
    knn_rbf_impl(x, k, 1.0)
}

/// Variant of [`knn_rbf_kernel`] with a zero diagonal (a point is not in
/// its own neighbor set).
pub fn knn_rbf_kernel_zero_diag(x: &FeatureMatrix, k: usize) -> Result<SparseRowKernel> {
    knn_rbf_impl(x, k, 0.0)
}

/// Symmetrizes a sparse row kernel with the probabilistic t-conorm
/// `a + b - a*b` applied to each pair of opposing entries. Weights in
/// [0, 1] stay in [0, 1] since `a + b - ab = 1 - (1-a)(1-b)`.
pub fn symmetrize_tconorm(ku: &SparseRowKernel) -> DenseKernel {
    let n = ku.n();
    let dense = ku.to_dense();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let a = dense.get(i, j);
            let b = dense.get(j, i);
            let v = a + b - a * b;
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    DenseKernel { n, values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neighbors::manifold_kernel;
    use approx::assert_relative_eq;

    fn matrix(rows: &[&[f64]]) -> FeatureMatrix {
        FeatureMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn linear_kernel_examples() {
        let k = linear_kernel(&matrix(&[&[1.0, 0.0], &[0.0, 1.0]]));
        assert_eq!(k.values(), &[1.0, 0.0, 0.0, 1.0]);

        let k = linear_kernel(&matrix(&[&[2.0]]));
        assert_eq!(k.get(0, 0), 4.0);

        let k = linear_kernel(&matrix(&[&[1.0, 1.0], &[1.0, -1.0]]));
        assert_eq!(k.values(), &[2.0, 0.0, 0.0, 2.0]);
    }

    #[test]
    fn median_single_pair() {
        let d = pairwise_distances(&matrix(&[&[0.0], &[3.0]]));
        assert_eq!(median_distance(&d), 3.0);
    }

    #[test]
    fn median_odd_and_even_counts() {
        // Upper triangles {1,2,3} and {1,2,3,10}.
        let d = DistanceMatrix::from_values(
            3,
            vec![0.0, 1.0, 2.0, 1.0, 0.0, 3.0, 2.0, 3.0, 0.0],
        )
        .unwrap();
        assert_eq!(median_distance(&d), 2.0);

        #[rustfmt::skip]
        let v = vec![
            0.0, 1.0, 2.0, 3.0,
            1.0, 0.0, 10.0, 10.0,
            2.0, 10.0, 0.0, 10.0,
            3.0, 10.0, 10.0, 0.0,
        ];
        // Upper triangle {1,2,3,10,10,10}: median = (3+10)/2.
        let d = DistanceMatrix::from_values(4, v).unwrap();
        assert_eq!(median_distance(&d), 6.5);
    }

    #[test]
    fn rbf_direct_evaluations() {
        // Coincident points.
        let k = rbf_kernel(
            &matrix(&[&[1.0], &[1.0]]),
            SigmaPolicy::Explicit(2.0),
            RbfForm::Unsquared,
        )
        .unwrap();
        assert_eq!(k.get(0, 1), 1.0);

        // Distance 2 at sigma 1: exp(-2 / 2) = exp(-1).
        let k = rbf_kernel(
            &matrix(&[&[0.0], &[2.0]]),
            SigmaPolicy::Explicit(1.0),
            RbfForm::Unsquared,
        )
        .unwrap();
        assert_relative_eq!(k.get(0, 1), (-1.0f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn rbf_median_policy() {
        // 1-D points {0,1,3}: distances {1,2,3}, M = 2, so
        // entry(0,1) = exp(-1/8).
        let x = matrix(&[&[0.0], &[1.0], &[3.0]]);
        let d = pairwise_distances(&x);
        assert_eq!(median_distance(&d), 2.0);
        let k = rbf_kernel(&x, SigmaPolicy::Median, RbfForm::Unsquared).unwrap();
        assert_relative_eq!(k.get(0, 1), (-0.125f64).exp(), max_relative = 1e-15);
        assert_relative_eq!(k.get(0, 1), 0.8824969025845955, max_relative = 1e-12);
    }

    #[test]
    fn rbf_squared_form() {
        let k = rbf_kernel(
            &matrix(&[&[0.0], &[2.0]]),
            SigmaPolicy::Explicit(1.0),
            RbfForm::Squared,
        )
        .unwrap();
        assert_relative_eq!(k.get(0, 1), (-2.0f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn rbf_rejects_degenerate_median() {
        let x = matrix(&[&[1.0], &[1.0], &[1.0]]);
        let err = rbf_kernel(&x, SigmaPolicy::Median, RbfForm::Unsquared).unwrap_err();
        assert!(matches!(err, Error::ZeroMedian), "{err}");
    }

    #[test]
    fn rbf_monotone_in_distance() {
        let x = matrix(&[&[0.0], &[1.0], &[3.5], &[9.0]]);
        let d = pairwise_distances(&x);
        let k = rbf_kernel(&x, SigmaPolicy::Explicit(1.7), RbfForm::Unsquared).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                for l in 0..4 {
                    if d.get(i, j) < d.get(i, l) {
                        assert!(k.get(i, j) >= k.get(i, l));
                    }
                }
            }
        }
    }

    #[test]
    fn knn_rbf_matches_brute_force_oracle() {
        // 1-D points {0,1,3,10} at k=2. The oracle recomputes the retained
        // neighbor multiset and its median from scratch.
        let pts = [0.0f64, 1.0, 3.0, 10.0];
        let x = matrix(&[&[0.0], &[1.0], &[3.0], &[10.0]]);
        let mut retained = Vec::new();
        for (i, a) in pts.iter().enumerate() {
            let mut ds: Vec<(f64, usize)> = pts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(j, b)| ((a - b).abs(), j))
                .collect();
            ds.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)));
            retained.extend(ds[..2].iter().map(|p| p.0));
        }
        retained.sort_by(f64::total_cmp);
        assert_eq!(retained, vec![1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 7.0, 9.0]);
        let sigma = 0.5 * (retained[3] + retained[4]);
        assert_eq!(sigma, 2.5);

        let kern = knn_rbf_kernel(&x, 2).unwrap();
        assert!(kern.declared_row_sum().is_none());
        for (i, a) in pts.iter().enumerate() {
            for (j, b) in pts.iter().enumerate() {
                let expected = if i == j {
                    1.0
                } else if kern.row_cols(i).contains(&j) {
                    (-(a - b).abs() / (2.0 * sigma)).exp()
                } else {
                    0.0
                };
                assert_relative_eq!(kern.get(i, j), expected, max_relative = 1e-15);
            }
        }
    }

    #[test]
    fn knn_rbf_entry_at_twice_sigma() {
        // A retained pair at distance 2*sigma gets weight exp(-1).
        let x = matrix(&[&[0.0], &[1.0], &[2.0]]);
        let kern = knn_rbf_kernel(&x, 2).unwrap();
        // Retained distances {1,2,1,1,1,2} -> sorted {1,1,1,1,2,2}, median 1.
        assert_relative_eq!(kern.get(0, 2), (-1.0f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn knn_rbf_row_cardinality() {
        let x = matrix(&[&[0.0], &[1.2], &[2.9], &[4.1], &[8.0], &[9.3]]);
        let kern = knn_rbf_kernel(&x, 3).unwrap();
        for i in 0..6 {
            let nonzero = (0..6).filter(|&j| j != i && kern.get(i, j) != 0.0).count();
            assert_eq!(nonzero, 3);
        }
    }

    #[test]
    fn knn_rbf_zero_diag_variant() {
        let x = matrix(&[&[0.0], &[1.2], &[2.9], &[4.1]]);
        let kern = knn_rbf_kernel_zero_diag(&x, 2).unwrap();
        for i in 0..4 {
            assert_eq!(kern.get(i, i), 0.0);
        }
    }

    #[test]
    fn tconorm_examples() {
        let x = matrix(&[&[0.0], &[1.0], &[2.5], &[6.0]]);
        let ku = manifold_kernel(&x, 2).unwrap();
        let sym = symmetrize_tconorm(&ku);
        for i in 0..4 {
            assert_eq!(sym.get(i, i), 1.0);
            for j in 0..4 {
                let a = ku.get(i, j);
                let b = ku.get(j, i);
                assert_relative_eq!(sym.get(i, j), a + b - a * b, max_relative = 1e-15);
                assert_eq!(sym.get(i, j), sym.get(j, i));
                assert!(sym.get(i, j) >= 0.0 && sym.get(i, j) <= 1.0);
            }
        }
        // One-sided edge: 0.5 vs 0 combines to 0.5 on both sides.
        let rows = vec![
            vec![(1, 0.5), (2, 0.25)],
            vec![(0, 0.0), (2, 0.0)],
            vec![(0, 0.0), (1, 0.0)],
        ];
        let one_sided = SparseRowKernel::from_rows(3, 2, rows, 1.0, None).unwrap();
        let sym = symmetrize_tconorm(&one_sided);
        assert_eq!(sym.get(0, 1), 0.5);
        assert_eq!(sym.get(1, 0), 0.5);
        assert_eq!(sym.get(1, 2), 0.0);
    }
}
