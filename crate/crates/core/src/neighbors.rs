//! Exact pairwise distances, k-nearest-neighbor graphs, per-row bandwidth
//! calibration, and the row-normalized manifold kernel built on top of them.
//!
//! The manifold kernel assigns row `i` the weights
//! `exp(-(d(x_i, x_j) - rho_i) / sigma_i)` over the k nearest neighbors of
//! `x_i` (diagonal 1, zero elsewhere), where `rho_i` is the nearest-neighbor
//! distance and `sigma_i` is calibrated by bisection so the neighbor weights
//! sum to `log2(k)`. Including the diagonal, every calibrated row then sums
//! to the constant `D = 1 + log2(k)`.

use std::io::Write;

use crate::error::{Error, Result};
use crate::matrix::FeatureMatrix;

/// Lower bisection bracket; also the bandwidth assigned to clamped rows.
pub const SIGMA_MIN: f64 = 1e-12;
/// Initial upper bisection bracket.
pub const SIGMA_MAX: f64 = 1e3;
/// Hard ceiling when the upper bracket has to be extended.
pub const SIGMA_CEIL: f64 = 1e9;
/// Convergence tolerance on the calibrated row sum.
pub const CALIBRATION_EPS: f64 = 1e-12;

const MAX_BISECTION_ITERS: usize = 200;

/// Symmetric matrix of Euclidean distances with a zero diagonal.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DistanceMatrix {
    /// Wraps raw values, validating symmetry, zero diagonal, and
    /// nonnegative finite entries.
    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::Dimension(format!(
                "expected {n}x{n} values, got {}",
                values.len()
            )));
        }
        for i in 0..n {
            if values[i * n + i] != 0.0 {
                return Err(Error::InvalidParameter(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let v = values[i * n + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                if v != values[j * n + i] {
                    return Err(Error::InvalidParameter(format!(
                        "asymmetric entries at ({i},{j})"
                    )));
                }
            }
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

    /// Strict upper-triangle entries, row by row.
    pub fn upper_triangle(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| self.get(i, j)))
    }
}

/// Euclidean distance matrix of the sample rows of `x`.
pub fn pairwise_distances(x: &FeatureMatrix) -> DistanceMatrix {
    let n = x.n_samples();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        let ri = x.row(i);
        for j in i + 1..n {
            let rj = x.row(j);
            let mut acc = 0.0;
            for (a, b) in ri.iter().zip(rj) {
                let diff = a - b;
                acc += diff * diff;
            }
            let d = acc.sqrt();
            values[i * n + j] = d;
            values[j * n + i] = d;
        }
    }
    DistanceMatrix { n, values }
}

/// Per-row result of bandwidth calibration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowCalibration {
    /// Distance to the nearest neighbor (the row's offset).
    pub rho: f64,
    /// Calibrated bandwidth.
    pub sigma: f64,
    /// True when no bandwidth in the bracket attains the target and
    /// `sigma` was pinned to the bracket edge instead.
    pub clamped: bool,
}

/// k-nearest-neighbor graph with per-row offsets and (after
/// [`calibrate_graph`]) per-row bandwidths.
///
/// Rows never reference themselves; neighbor lists are sorted by ascending
/// distance with ties broken by lower sample index.
#[derive(Debug, Clone)]
pub struct KnnGraph {
    n: usize,
    k: usize,
    neighbors: Vec<usize>,
    distances: Vec<f64>,
    rho: Vec<f64>,
    sigma: Vec<f64>,
    clamped: Vec<bool>,
}

impl KnnGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Neighbor indices of row `i`, ascending by distance.
    pub fn neighbors_of(&self, i: usize) -> &[usize] {
        &self.neighbors[i * self.k..(i + 1) * self.k]
    }

    /// Neighbor distances of row `i`, ascending.
    pub fn distances_of(&self, i: usize) -> &[f64] {
        &self.distances[i * self.k..(i + 1) * self.k]
    }

    pub fn rho(&self, i: usize) -> f64 {
        self.rho[i]
    }

    pub fn is_calibrated(&self) -> bool {
        !self.sigma.is_empty()
    }

    /// Calibrated bandwidth of row `i`. Panics when the graph has not been
    /// calibrated yet.
    pub fn sigma(&self, i: usize) -> f64 {
        assert!(self.is_calibrated(), "graph not calibrated");
        self.sigma[i]
    }

    pub fn is_clamped(&self, i: usize) -> bool {
        assert!(self.is_calibrated(), "graph not calibrated");
        self.clamped[i]
    }

    /// Number of clamped rows. Zero before calibration.
    pub fn clamped_rows(&self) -> usize {
        self.clamped.iter().filter(|&&c| c).count()
    }

    /// Debug dump: `row,neighbor,distance,rho,sigma,clamped` per edge.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "row,neighbor,distance,rho,sigma,clamped")?;
        for i in 0..self.n {
            for (j, d) in self.neighbors_of(i).iter().zip(self.distances_of(i)) {
                let (sigma, clamped) = if self.is_calibrated() {
                    (format!("{}", self.sigma[i]), format!("{}", self.clamped[i]))
                } else {
                    (String::new(), String::new())
                };
                writeln!(w, "{i},{j},{d},{},{sigma},{clamped}", self.rho[i])?;
            }
        }
        Ok(())
    }
}

/// Builds the exact k-nearest-neighbor graph of a distance matrix by
/// brute-force selection. Bandwidths are left uncalibrated; call
/// [`calibrate_graph`] before building a manifold kernel.
pub fn knn_graph(d: &DistanceMatrix, k: usize) -> Result<KnnGraph> {
    let n = d.n();
    if n < 3 || k < 2 || k > n - 1 {
        return Err(Error::KOutOfRange {
            k,
            max: n.saturating_sub(1),
        });
    }
    let mut neighbors = Vec::with_capacity(n * k);
    let mut distances = Vec::with_capacity(n * k);
    let mut rho = Vec::with_capacity(n);
    let mut scratch: Vec<(f64, usize)> = Vec::with_capacity(n - 1);
    for i in 0..n {
        scratch.clear();
        let row = d.row(i);
        scratch.extend(
            row.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(j, &dist)| (dist, j)),
        );
        let cmp = |a: &(f64, usize), b: &(f64, usize)| {
            a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
        };
        scratch.select_nth_unstable_by(k - 1, cmp);
        scratch.truncate(k);
        scratch.sort_unstable_by(cmp);
        rho.push(scratch[0].0);
        for &(dist, j) in &scratch {
            neighbors.push(j);
            distances.push(dist);
        }
    }
    Ok(KnnGraph {
        n,
        k,
        neighbors,
        distances,
        rho,
        sigma: Vec::new(),
        clamped: Vec::new(),
    })
}

fn neighbor_weight_sum(distances: &[f64], rho: f64, sigma: f64) -> f64 {
    distances.iter().map(|d| (-(d - rho) / sigma).exp()).sum()
}

/// Solves `sum_j exp(-(d_j - rho) / sigma) = target` for `sigma` by
/// bisection over `[SIGMA_MIN, SIGMA_MAX]`, where `rho` is the smallest
/// distance. The sum is nondecreasing in `sigma`, ranging from the
/// multiplicity of the minimum distance (as `sigma -> 0`) up to `k`.
///
/// When the sum at `SIGMA_MIN` already reaches the target (duplicate or
/// equal distances), `sigma` is clamped to `SIGMA_MIN` and the row is
/// flagged. When the sum at `SIGMA_MAX` still falls short, the bracket is
/// doubled up to `SIGMA_CEIL` before clamping high.
pub fn calibrate_row(neighbor_distances: &[f64], target: f64) -> RowCalibration {
    assert!(
        neighbor_distances.len() >= 2,
        "need at least two neighbor distances"
    );
    debug_assert!(
        neighbor_distances.windows(2).all(|w| w[0] <= w[1]),
        "distances must be ascending"
    );
    let rho = neighbor_distances[0];
    if neighbor_weight_sum(neighbor_distances, rho, SIGMA_MIN) >= target {
        return RowCalibration {
            rho,
            sigma: SIGMA_MIN,
            clamped: true,
        };
    }
    let mut hi = SIGMA_MAX;
    while neighbor_weight_sum(neighbor_distances, rho, hi) < target && hi < SIGMA_CEIL {
        hi *= 2.0;
    }
    if neighbor_weight_sum(neighbor_distances, rho, hi) < target {
        return RowCalibration {
            rho,
            sigma: hi,
            clamped: true,
        };
    }
    let mut lo = SIGMA_MIN;
    let mut sigma = 0.5 * (lo + hi);
    for _ in 0..MAX_BISECTION_ITERS {
        sigma = 0.5 * (lo + hi);
        let sum = neighbor_weight_sum(neighbor_distances, rho, sigma);
        if (sum - target).abs() <= CALIBRATION_EPS {
            break;
        }
        if sum > target {
            hi = sigma;
        } else {
            lo = sigma;
        }
    }
    RowCalibration {
        rho,
        sigma,
        clamped: false,
    }
}

/// Calibrates every row of the graph against the target `log2(k)`.
pub fn calibrate_graph(graph: &mut KnnGraph) {
    let target = (graph.k as f64).log2();
    let mut sigma = Vec::with_capacity(graph.n);
    let mut clamped = Vec::with_capacity(graph.n);
    for i in 0..graph.n {
        let cal = calibrate_row(graph.distances_of(i), target);
        sigma.push(cal.sigma);
        clamped.push(cal.clamped);
    }
    graph.sigma = sigma;
    graph.clamped = clamped;
}

/// Row-sparse non-symmetric kernel: a diagonal weight plus k weighted
/// neighbor entries per row, column indices strictly increasing.
///
/// Manifold kernels carry `declared_row_sum = Some(1 + log2(k))`; the
/// k-NN RBF kernel leaves it unset since its rows are not constrained.
#[derive(Debug, Clone)]
pub struct SparseRowKernel {
    n: usize,
    k: usize,
    cols: Vec<usize>,
    weights: Vec<f64>,
    diagonal: f64,
    declared_row_sum: Option<f64>,
}

impl SparseRowKernel {
    /// Assembles a kernel from per-row `(column, weight)` pairs. Pairs are
    /// sorted into canonical (ascending-column) form; rows must not
    /// reference themselves.
    pub fn from_rows(
        n: usize,
        k: usize,
        mut rows: Vec<Vec<(usize, f64)>>,
        diagonal: f64,
        declared_row_sum: Option<f64>,
    ) -> Result<Self> {
        if rows.len() != n {
            return Err(Error::Dimension(format!(
                "expected {n} rows, got {}",
                rows.len()
            )));
        }
        let mut cols = Vec::with_capacity(n * k);
        let mut weights = Vec::with_capacity(n * k);
        for (i, row) in rows.iter_mut().enumerate() {
            if row.len() != k {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {k}",
                    row.len()
                )));
            }
            row.sort_unstable_by_key(|&(c, _)| c);
            for pair in row.windows(2) {
                if pair[0].0 == pair[1].0 {
                    return Err(Error::InvalidParameter(format!(
                        "duplicate column {} in row {i}",
                        pair[0].0
                    )));
                }
            }
            for &(c, w) in row.iter() {
                if c == i {
                    return Err(Error::InvalidParameter(format!(
                        "row {i} references itself"
                    )));
                }
                if c >= n || !w.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "bad entry ({c}, {w}) in row {i}"
                    )));
                }
                cols.push(c);
                weights.push(w);
            }
        }
        Ok(Self {
            n,
            k,
            cols,
            weights,
            diagonal,
            declared_row_sum,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn diagonal(&self) -> f64 {
        self.diagonal
    }

    pub fn declared_row_sum(&self) -> Option<f64> {
        self.declared_row_sum
    }

    /// Column indices of row `i`, strictly increasing.
    pub fn row_cols(&self, i: usize) -> &[usize] {
        &self.cols[i * self.k..(i + 1) * self.k]
    }

    pub fn row_weights(&self, i: usize) -> &[f64] {
        &self.weights[i * self.k..(i + 1) * self.k]
    }

    /// Entry `(i, j)`, including the implicit diagonal and zeros.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diagonal;
        }
        match self.row_cols(i).binary_search(&j) {
            Ok(pos) => self.row_weights(i)[pos],
            Err(_) => 0.0,
        }
    }

    /// Sum of row `i` including the diagonal.
    pub fn row_sum(&self, i: usize) -> f64 {
        self.diagonal + self.row_weights(i).iter().sum::<f64>()
    }

    /// Largest `|row_sum(i) - expected|` over all rows.
    pub fn max_row_sum_deviation(&self, expected: f64) -> f64 {
        (0..self.n)
            .map(|i| (self.row_sum(i) - expected).abs())
            .fold(0.0, f64::max)
    }

    /// Frobenius inner product `<self, other>` computed by merging the
    /// sorted per-row column lists; cost O(n * k).
    pub fn frobenius_dot(&self, other: &SparseRowKernel) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "kernel sizes differ: {} vs {}",
                self.n, other.n
            )));
        }
        let mut total = self.n as f64 * self.diagonal * other.diagonal;
        for i in 0..self.n {
            let (ac, aw) = (self.row_cols(i), self.row_weights(i));
            let (bc, bw) = (other.row_cols(i), other.row_weights(i));
            let (mut p, mut q) = (0, 0);
            while p < ac.len() && q < bc.len() {
                match ac[p].cmp(&bc[q]) {
                    std::cmp::Ordering::Less => p += 1,
                    std::cmp::Ordering::Greater => q += 1,
                    std::cmp::Ordering::Equal => {
                        total += aw[p] * bw[q];
                        p += 1;
                        q += 1;
                    }
                }
            }
        }
        Ok(total)
    }

    /// Squared Frobenius norm `<self, self>`.
    pub fn frobenius_norm_sq(&self) -> f64 {
        let mut total = self.n as f64 * self.diagonal * self.diagonal;
        for w in &self.weights {
            total += w * w;
        }
        total
    }

    /// Materializes the kernel as a dense matrix.
    pub fn to_dense(&self) -> crate::kernels::DenseKernel {
        let mut values = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            values[i * self.n + i] = self.diagonal;
            for (&c, &w) in self.row_cols(i).iter().zip(self.row_weights(i)) {
                values[i * self.n + c] = w;
            }
        }
        crate::kernels::DenseKernel::from_values(self.n, values)
            .expect("sparse kernel entries are finite")
    }

    /// Debug dump of stored entries as `i,j,value` triples.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "i,j,value")?;
        for i in 0..self.n {
            writeln!(w, "{i},{i},{}", self.diagonal)?;
            for (&c, &wt) in self.row_cols(i).iter().zip(self.row_weights(i)) {
                writeln!(w, "{i},{c},{wt}")?;
            }
        }
        Ok(())
    }
}

/// Builds the manifold kernel of a calibrated graph: diagonal 1, neighbor
/// weights `exp(-(d - rho_i) / sigma_i)`, declared row sum `1 + log2(k)`.
pub fn manifold_kernel_from_graph(graph: &KnnGraph) -> SparseRowKernel {
    assert!(graph.is_calibrated(), "graph must be calibrated first");
    let d = 1.0 + (graph.k as f64).log2();
    let mut rows = Vec::with_capacity(graph.n);
    for i in 0..graph.n {
        let rho = graph.rho(i);
        let sigma = graph.sigma(i);
        let row: Vec<(usize, f64)> = graph
            .neighbors_of(i)
            .iter()
            .zip(graph.distances_of(i))
            .map(|(&j, &dist)| (j, (-(dist - rho) / sigma).exp()))
            .collect();
        rows.push(row);
    }
    SparseRowKernel::from_rows(graph.n, graph.k, rows, 1.0, Some(d))
        .expect("graph rows are valid kernel rows")
}

/// Convenience path from features to the manifold kernel: exact k-NN graph,
/// per-row calibration, then [`manifold_kernel_from_graph`].
pub fn manifold_kernel(x: &FeatureMatrix, k: usize) -> Result<SparseRowKernel> {
    let d = pairwise_distances(x);
    let mut graph = knn_graph(&d, k)?;
    calibrate_graph(&mut graph);
    Ok(manifold_kernel_from_graph(&graph))
}
