//! Alignment metrics over kernel matrices: HSIC, CKA, manifold kernel
//! alignment (closed-form fast path and dense row-centered evaluation),
//! the k-NN CKA composite, the divergence scaling transform, and Kendall's
//! rank correlation for ranking experiments.

use crate::error::{Error, Result};
use crate::kernels::{
    knn_rbf_kernel, knn_rbf_kernel_zero_diag, linear_kernel, rbf_kernel, symmetrize_tconorm,
    DenseKernel, RbfForm, SigmaPolicy,
};
use crate::matrix::FeatureMatrix;
use crate::neighbors::{manifold_kernel, SparseRowKernel};

/// Relative row-sum tolerance under which the closed-form path is valid.
pub const ROW_SUM_TOLERANCE: f64 = 1e-6;

/// Largest n for which sparse kernels may be materialized densely.
pub const DENSE_GUARD: usize = 5000;

/// Doubly centered copy `H M H`: entry minus row mean, column mean, plus
/// grand mean.
fn double_center(m: &DenseKernel) -> Vec<f64> {
    let n = m.n();
    let nf = n as f64;
    let mut row_mean = vec![0.0; n];
    let mut col_mean = vec![0.0; n];
    let mut grand = 0.0;
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j);
            row_mean[i] += v;
            col_mean[j] += v;
            grand += v;
        }
    }
    for v in row_mean.iter_mut().chain(col_mean.iter_mut()) {
        *v /= nf;
    }
    grand /= nf * nf;
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = m.get(i, j) - row_mean[i] - col_mean[j] + grand;
        }
    }
    out
}

/// Hilbert-Schmidt independence criterion `trace(K H L H) / (n-1)^2`,
/// computed as `trace((HKH)(HLH))` without materializing `H`. Terms are
/// accumulated over unordered index pairs so that swapping the arguments
/// reproduces the exact same floating-point value.
pub fn hsic(k: &DenseKernel, l: &DenseKernel) -> Result<f64> {
    let n = k.n();
    if n != l.n() {
        return Err(Error::Dimension(format!(
            "kernel sizes differ: {} vs {}",
            n,
            l.n()
        )));
    }
    if n < 2 {
        return Err(Error::Dimension("HSIC needs n >= 2".into()));
    }
    let nf = n as f64;
    let ck = double_center(k);
    let cl = double_center(l);
    let mut total = 0.0;
    for i in 0..n {
        total += ck[i * n + i] * cl[i * n + i];
        for j in i + 1..n {
            total += ck[i * n + j] * cl[j * n + i] + ck[j * n + i] * cl[i * n + j];
        }
    }
    Ok(total / ((nf - 1.0) * (nf - 1.0)))
}

/// Centered kernel alignment `HSIC(K,L) / sqrt(HSIC(K,K) HSIC(L,L))`.
pub fn cka(k: &DenseKernel, l: &DenseKernel) -> Result<f64> {
    let kl = hsic(k, l)?;
    let kk = hsic(k, k)?;
    let ll = hsic(l, l)?;
    if kk <= 0.0 || ll <= 0.0 {
        return Err(Error::DegenerateKernel(format!(
            "self-HSIC not positive (K: {kk:e}, L: {ll:e})"
        )));
    }
    Ok(kl / (kk * ll).sqrt())
}

/// Which evaluation path produced a manifold alignment value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MkaPath {
    /// Closed-form sparse evaluation under the constant-row-sum premise.
    Fast,
    /// Dense row-centered evaluation, used when clamped rows push row sums
    /// off the declared constant.
    RowSumFallback,
}

/// Manifold alignment value plus the path that computed it.
#[derive(Debug, Clone, Copy)]
pub struct MkaResult {
    pub value: f64,
    pub path: MkaPath,
}

/// Closed-form manifold kernel alignment
/// `(<K,L> - D^2) / sqrt((<K,K> - D^2)(<L,L> - D^2))`, valid when every
/// row of both kernels sums to the declared constant `D`. Rows further
/// than `ROW_SUM_TOLERANCE * D` from `D` void the premise, in which case
/// the dense evaluation runs instead and the result records it.
pub fn mka_fast(ku: &SparseRowKernel, lu: &SparseRowKernel) -> Result<MkaResult> {
    if ku.n() != lu.n() {
        return Err(Error::Dimension(format!(
            "kernel sizes differ: {} vs {}",
            ku.n(),
            lu.n()
        )));
    }
    let d = match (ku.declared_row_sum(), lu.declared_row_sum()) {
        (Some(a), Some(b)) if a == b => a,
        (Some(a), Some(b)) => {
            return Err(Error::MismatchedK(format!(
                "declared row sums differ ({a} vs {b})"
            )))
        }
        _ => {
            return Err(Error::MismatchedK(
                "kernel has no declared row sum".into(),
            ))
        }
    };
    let deviation = ku
        .max_row_sum_deviation(d)
        .max(lu.max_row_sum_deviation(d));
    if deviation > ROW_SUM_TOLERANCE * d {
        return Ok(MkaResult {
            value: mka_naive(ku, lu)?,
            path: MkaPath::RowSumFallback,
        });
    }
    let d2 = d * d;
    let kl = ku.frobenius_dot(lu)? - d2;
    let kk = ku.frobenius_norm_sq() - d2;
    let ll = lu.frobenius_norm_sq() - d2;
    if kk <= 0.0 || ll <= 0.0 {
        return Err(Error::DegenerateKernel(format!(
            "centered norm not positive (K: {kk:e}, L: {ll:e})"
        )));
    }
    Ok(MkaResult {
        value: kl / (kk * ll).sqrt(),
        path: MkaPath::Fast,
    })
}

/// Dense manifold kernel alignment: materializes both kernels, subtracts
/// each row's mean, and takes the cosine of the centered matrices under
/// the Frobenius inner product. Guarded to n <= `DENSE_GUARD`.
pub fn mka_naive(ku: &SparseRowKernel, lu: &SparseRowKernel) -> Result<f64> {
    let n = ku.n();
    if n != lu.n() {
        return Err(Error::Dimension(format!(
            "kernel sizes differ: {} vs {}",
            n,
            lu.n()
        )));
    }
    if n > DENSE_GUARD {
        return Err(Error::DenseGuard {
            n,
            guard: DENSE_GUARD,
        });
    }
    let row_centered = |kern: &SparseRowKernel| -> Vec<f64> {
        let dense = kern.to_dense();
        let mut values = dense.values().to_vec();
        for i in 0..n {
            let mean: f64 = values[i * n..(i + 1) * n].iter().sum::<f64>() / n as f64;
            for v in &mut values[i * n..(i + 1) * n] {
                *v -= mean;
            }
        }
        values
    };
    let a = row_centered(ku);
    let b = row_centered(lu);
    let mut kl = 0.0;
    let mut kk = 0.0;
    let mut ll = 0.0;
    for (x, y) in a.iter().zip(&b) {
        kl += x * y;
        kk += x * x;
        ll += y * y;
    }
    if kk <= 0.0 || ll <= 0.0 {
        return Err(Error::DegenerateKernel(
            "row-centered kernel vanishes".into(),
        ));
    }
    Ok(kl / (kk * ll).sqrt())
}

/// CKA over k-NN-sparsified RBF kernels of the two feature sets.
pub fn kcka(x: &FeatureMatrix, y: &FeatureMatrix, k: usize) -> Result<f64> {
    if x.n_samples() != y.n_samples() {
        return Err(Error::Dimension(format!(
            "sample counts differ: x has {} rows, y has {} rows",
            x.n_samples(),
            y.n_samples()
        )));
    }
    let kx = knn_rbf_kernel(x, k)?.to_dense();
    let ly = knn_rbf_kernel(y, k)?.to_dense();
    cka(&kx, &ly)
}

/// Maps a nonnegative divergence onto (0, 1] by `exp(-value / gamma)`.
pub fn scale_divergence(value: f64, gamma: f64) -> f64 {
    debug_assert!(value >= 0.0, "divergence must be nonnegative");
    debug_assert!(gamma > 0.0, "gamma must be positive");
    (-value / gamma).exp()
}

/// Kendall's tau-b over all pairs with tie correction:
/// `(nc - nd) / sqrt((nc + nd + tx)(nc + nd + ty))` where `tx`/`ty` count
/// pairs tied only in `a`/only in `b`.
pub fn kendall_tau(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::InvalidParameter(
            "rank correlation needs at least two observations".into(),
        ));
    }
    let mut concordant = 0u64;
    let mut discordant = 0u64;
    let mut ties_a = 0u64;
    let mut ties_b = 0u64;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let da = a[i].total_cmp(&a[j]);
            let db = b[i].total_cmp(&b[j]);
            match (da, db) {
                (std::cmp::Ordering::Equal, std::cmp::Ordering::Equal) => {}
                (std::cmp::Ordering::Equal, _) => ties_a += 1,
                (_, std::cmp::Ordering::Equal) => ties_b += 1,
                (x, y) if x == y => concordant += 1,
                _ => discordant += 1,
            }
        }
    }
    let denom_a = concordant + discordant + ties_a;
    let denom_b = concordant + discordant + ties_b;
    if denom_a == 0 || denom_b == 0 {
        return Err(Error::AllTies);
    }
    let num = concordant as f64 - discordant as f64;
    Ok(num / ((denom_a as f64) * (denom_b as f64)).sqrt())
}

/// Metric selection with its parameters, as reported in result tables.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricConfig {
    /// CKA over linear kernels.
    CkaLinear,
    /// CKA over RBF kernels, each side resolving the policy on its own
    /// distances.
    CkaRbf { sigma: SigmaPolicy, form: RbfForm },
    /// CKA over k-NN-sparsified RBF kernels.
    Kcka { k: usize, zero_diagonal: bool },
    /// Manifold kernel alignment over row-normalized sparse kernels.
    Mka { k: usize },
    /// CKA over t-conorm-symmetrized manifold kernels.
    CkaSymManifold { k: usize },
}

impl MetricConfig {
    /// Canonical metric label used in CLI flags and CSV output.
    pub fn name(&self) -> &'static str {
        match self {
            MetricConfig::CkaLinear => "cka",
            MetricConfig::CkaRbf { .. } => "cka-rbf",
            MetricConfig::Kcka { .. } => "kcka",
            MetricConfig::Mka { .. } => "mka",
            MetricConfig::CkaSymManifold { .. } => "cka-sym-manifold",
        }
    }

    /// Neighbor count, for metrics that have one.
    pub fn k(&self) -> Option<usize> {
        match *self {
            MetricConfig::Kcka { k, .. }
            | MetricConfig::Mka { k }
            | MetricConfig::CkaSymManifold { k } => Some(k),
            _ => None,
        }
    }

    /// Median-scaling factor, when the RBF policy uses one.
    pub fn delta(&self) -> Option<f64> {
        match self {
            MetricConfig::CkaRbf {
                sigma: SigmaPolicy::ScaledMedian(d),
                ..
            } => Some(*d),
            _ => None,
        }
    }
}

/// A computed alignment score with its configuration and, for manifold
/// alignment, the evaluation path that produced it.
#[derive(Debug, Clone)]
pub struct AlignmentScore {
    pub config: MetricConfig,
    pub value: f64,
    pub mka_path: Option<MkaPath>,
}

/// Computes one alignment metric between two feature sets with equal
/// sample counts.
pub fn compute_alignment(
    x: &FeatureMatrix,
    y: &FeatureMatrix,
    config: &MetricConfig,
) -> Result<AlignmentScore> {
    if x.n_samples() != y.n_samples() {
        return Err(Error::Dimension(format!(
            "sample counts differ: x has {} rows, y has {} rows",
            x.n_samples(),
            y.n_samples()
        )));
    }
    let mut mka_path = None;
    let value = match config {
        MetricConfig::CkaLinear => cka(&linear_kernel(x), &linear_kernel(y))?,
        MetricConfig::CkaRbf { sigma, form } => {
            let kx = rbf_kernel(x, *sigma, *form)?;
            let ly = rbf_kernel(y, *sigma, *form)?;
            cka(&kx, &ly)?
        }
        MetricConfig::Kcka { k, zero_diagonal } => {
            if *zero_diagonal {
                let kx = knn_rbf_kernel_zero_diag(x, *k)?.to_dense();
                let ly = knn_rbf_kernel_zero_diag(y, *k)?.to_dense();
                cka(&kx, &ly)?
            } else {
                kcka(x, y, *k)?
            }
        }
        MetricConfig::Mka { k } => {
            let ku = manifold_kernel(x, *k)?;
            let lu = manifold_kernel(y, *k)?;
            let result = mka_fast(&ku, &lu)?;
            mka_path = Some(result.path);
            result.value
        }
        MetricConfig::CkaSymManifold { k } => {
            let ku = symmetrize_tconorm(&manifold_kernel(x, *k)?);
            let lu = symmetrize_tconorm(&manifold_kernel(y, *k)?);
            cka(&ku, &lu)?
        }
    };
    Ok(AlignmentScore {
        config: config.clone(),
        value,
        mka_path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neighbors::manifold_kernel;
    use approx::assert_relative_eq;

    fn matrix(rows: &[&[f64]]) -> FeatureMatrix {
        FeatureMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn lcg_matrix(n: usize, d: usize, mut state: u64) -> FeatureMatrix {
        let mut vals = Vec::with_capacity(n * d);
        for _ in 0..n * d {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            vals.push((state >> 11) as f64 / (1u64 << 53) as f64 - 0.5);
        }
        FeatureMatrix::new(n, d, vals).unwrap()
    }

    /// Dense reference: materializes H and evaluates trace(KHLH)/(n-1)^2.
    fn hsic_oracle(k: &DenseKernel, l: &DenseKernel) -> f64 {
        let n = k.n();
        let mut h = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                h[i * n + j] = if i == j { 1.0 } else { 0.0 } - 1.0 / n as f64;
            }
        }
        let mul = |a: &[f64], b: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; n * n];
            for i in 0..n {
                for p in 0..n {
                    let aip = a[i * n + p];
                    for j in 0..n {
                        out[i * n + j] += aip * b[p * n + j];
                    }
                }
            }
            out
        };
        let khlh = mul(&mul(&mul(k.values(), &h), l.values()), &h);
        let trace: f64 = (0..n).map(|i| khlh[i * n + i]).sum();
        trace / ((n as f64 - 1.0) * (n as f64 - 1.0))
    }

    #[test]
    fn hsic_annihilates_constant_kernels() {
        let n = 4;
        let ones = DenseKernel::from_values(n, vec![3.7; n * n]).unwrap();
        let l = linear_kernel(&lcg_matrix(n, 2, 5));
        assert_relative_eq!(hsic(&ones, &l).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn hsic_identity_two_by_two() {
        // Direct 2x2 oracle: H = [[.5,-.5],[-.5,.5]], and for K = L = I the
        // product KHLH = H with trace 1, so HSIC = 1 / (2-1)^2 = 1.
        let k = DenseKernel::from_values(2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let oracle = hsic_oracle(&k, &k);
        assert_relative_eq!(oracle, 1.0, epsilon = 1e-15);
        assert_relative_eq!(hsic(&k, &k).unwrap(), oracle, epsilon = 1e-15);
    }

    #[test]
    fn hsic_matches_dense_oracle_and_is_symmetric() {
        let k = linear_kernel(&lcg_matrix(10, 3, 7));
        let l = linear_kernel(&lcg_matrix(10, 4, 9));
        let fast = hsic(&k, &l).unwrap();
        assert_relative_eq!(fast, hsic_oracle(&k, &l), max_relative = 1e-12);
        assert_relative_eq!(fast, hsic(&l, &k).unwrap(), max_relative = 1e-12);
    }

    #[test]
    fn cka_self_and_scale_invariance() {
        let k = linear_kernel(&lcg_matrix(8, 3, 21));
        assert_relative_eq!(cka(&k, &k).unwrap(), 1.0, epsilon = 1e-12);
        let scaled =
            DenseKernel::from_values(8, k.values().iter().map(|v| 2.5 * v).collect()).unwrap();
        assert_relative_eq!(cka(&k, &scaled).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cka_matches_direct_formula_on_fixed_points() {
        let x = matrix(&[&[1.0, 0.0], &[0.0, 2.0], &[1.0, 1.0]]);
        let y = matrix(&[&[0.5, 0.5], &[2.0, 0.0], &[0.0, 1.0]]);
        let k = linear_kernel(&x);
        let l = linear_kernel(&y);
        let oracle = hsic_oracle(&k, &l) / (hsic_oracle(&k, &k) * hsic_oracle(&l, &l)).sqrt();
        assert_relative_eq!(cka(&k, &l).unwrap(), oracle, epsilon = 1e-12);
    }

    #[test]
    fn cka_rejects_constant_kernel() {
        let ones = DenseKernel::from_values(3, vec![1.0; 9]).unwrap();
        let l = linear_kernel(&lcg_matrix(3, 2, 3));
        assert!(matches!(
            cka(&ones, &l),
            Err(Error::DegenerateKernel(_))
        ));
    }

    #[test]
    fn mka_self_alignment_is_one() {
        let x = lcg_matrix(30, 4, 99);
        let ku = manifold_kernel(&x, 5).unwrap();
        let fast = mka_fast(&ku, &ku).unwrap();
        assert_eq!(fast.path, MkaPath::Fast);
        assert_relative_eq!(fast.value, 1.0, epsilon = 1e-12);
        assert_relative_eq!(mka_naive(&ku, &ku).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn mka_is_symmetric() {
        let ku = manifold_kernel(&lcg_matrix(25, 3, 1), 6).unwrap();
        let lu = manifold_kernel(&lcg_matrix(25, 5, 2), 6).unwrap();
        let ab = mka_fast(&ku, &lu).unwrap().value;
        let ba = mka_fast(&lu, &ku).unwrap().value;
        assert!((ab - ba).abs() <= 1e-12);
        let nab = mka_naive(&ku, &lu).unwrap();
        let nba = mka_naive(&lu, &ku).unwrap();
        assert!((nab - nba).abs() <= 1e-12);
    }

    #[test]
    fn mka_fast_rejects_mismatched_row_sums() {
        let ku = manifold_kernel(&lcg_matrix(20, 3, 1), 4).unwrap();
        let lu = manifold_kernel(&lcg_matrix(20, 3, 2), 8).unwrap();
        assert!(matches!(
            mka_fast(&ku, &lu),
            Err(Error::MismatchedK(_))
        ));
        let kcka_kernel = knn_rbf_kernel(&lcg_matrix(20, 3, 3), 4).unwrap();
        assert!(matches!(
            mka_fast(&kcka_kernel, &kcka_kernel),
            Err(Error::MismatchedK(_))
        ));
    }

    #[test]
    fn mka_fast_falls_back_on_clamped_rows() {
        // Equilateral triangle plus a far point: the triangle rows clamp and
        // their sums exceed D, voiding the closed form.
        let h = 3f64.sqrt() / 2.0;
        let x = matrix(&[&[0.0, 0.0], &[1.0, 0.0], &[0.5, h], &[40.0, 0.0]]);
        let ku = manifold_kernel(&x, 2).unwrap();
        assert!(ku.max_row_sum_deviation(2.0) > 1e-6 * 2.0);
        let res = mka_fast(&ku, &ku).unwrap();
        assert_eq!(res.path, MkaPath::RowSumFallback);
        assert_relative_eq!(res.value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn mka_naive_matches_spreadsheet_oracle() {
        // Four 1-D points, k = 2: the oracle below recomputes everything
        // from scratch (distances, neighbor sets, per-row bandwidths via its
        // own bisection, dense row centering, cosine).
        let pts = [0.0, 1.0, 3.0, 7.0];
        let qts = [0.0, 2.0, 2.5, 6.0];
        let k = 2;
        let dense_oracle = |p: &[f64; 4]| -> Vec<f64> {
            let n = 4;
            let target = (k as f64).log2();
            let mut kern = vec![0.0; n * n];
            for i in 0..n {
                kern[i * n + i] = 1.0;
                let mut ds: Vec<(f64, usize)> = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| ((p[i] - p[j]).abs(), j))
                    .collect();
                ds.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                ds.truncate(k);
                let rho = ds[0].0;
                let sum = |sig: f64| -> f64 {
                    ds.iter().map(|(d, _)| (-(d - rho) / sig).exp()).sum()
                };
                let sigma = if sum(1e-12) >= target {
                    1e-12
                } else {
                    let (mut lo, mut hi) = (1e-12, 1e3);
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        if sum(mid) > target {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                    }
                    0.5 * (lo + hi)
                };
                for (d, j) in &ds {
                    kern[i * n + j] = (-(d - rho) / sigma).exp();
                }
            }
            kern
        };
        let centered = |kern: &[f64]| -> Vec<f64> {
            let n = 4;
            let mut out = kern.to_vec();
            for i in 0..n {
                let mean: f64 = out[i * n..(i + 1) * n].iter().sum::<f64>() / n as f64;
                for v in &mut out[i * n..(i + 1) * n] {
                    *v -= mean;
                }
            }
            out
        };
        let ka = centered(&dense_oracle(&pts));
        let kb = centered(&dense_oracle(&qts));
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let oracle = dot(&ka, &kb) / (dot(&ka, &ka) * dot(&kb, &kb)).sqrt();

        let x = matrix(&[&[0.0], &[1.0], &[3.0], &[7.0]]);
        let y = matrix(&[&[0.0], &[2.0], &[2.5], &[6.0]]);
        let ku = manifold_kernel(&x, k).unwrap();
        let lu = manifold_kernel(&y, k).unwrap();
        assert_relative_eq!(mka_naive(&ku, &lu).unwrap(), oracle, epsilon = 1e-12);
    }

    #[test]
    fn kcka_self_alignment_and_column_permutation() {
        let x = lcg_matrix(12, 3, 31);
        assert_relative_eq!(kcka(&x, &x, 4).unwrap(), 1.0, epsilon = 1e-9);

        // Permuting feature columns leaves distances unchanged.
        let permuted = FeatureMatrix::from_rows(
            &(0..x.n_samples())
                .map(|i| {
                    let r = x.row(i);
                    vec![r[2], r[0], r[1]]
                })
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let y = lcg_matrix(12, 2, 77);
        assert_relative_eq!(
            kcka(&x, &y, 4).unwrap(),
            kcka(&permuted, &y, 4).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn kcka_matches_dense_formula_oracle() {
        // n = 5 fixed cloud: materialize the sparsified kernels and apply
        // the dense H-based formula.
        let x = matrix(&[&[0.0, 0.1], &[1.0, -0.4], &[2.2, 0.7], &[3.0, 0.0], &[4.5, 1.0]]);
        let y = matrix(&[&[0.3], &[0.9], &[2.0], &[3.3], &[3.9]]);
        let kx = knn_rbf_kernel(&x, 2).unwrap().to_dense();
        let ly = knn_rbf_kernel(&y, 2).unwrap().to_dense();
        let oracle = {
            let kl = hsic_oracle(&kx, &ly);
            let kk = hsic_oracle(&kx, &kx);
            let ll = hsic_oracle(&ly, &ly);
            kl / (kk * ll).sqrt()
        };
        assert_relative_eq!(kcka(&x, &y, 2).unwrap(), oracle, epsilon = 1e-12);
    }

    #[test]
    fn scale_divergence_examples() {
        assert_eq!(scale_divergence(0.0, 2.0), 1.0);
        assert_relative_eq!(
            scale_divergence(3.0, 3.0),
            (-1.0f64).exp(),
            max_relative = 1e-15
        );
        assert!(scale_divergence(1.0, 5.0) > scale_divergence(2.0, 5.0));
    }

    #[test]
    fn kendall_tau_examples() {
        assert_eq!(
            kendall_tau(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]).unwrap(),
            1.0
        );
        assert_eq!(
            kendall_tau(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap(),
            -1.0
        );
        // Brute-force pair enumeration: 5 concordant, 1 discordant of 6.
        assert_relative_eq!(
            kendall_tau(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap(),
            4.0 / 6.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn kendall_tau_error_paths() {
        assert!(matches!(
            kendall_tau(&[1.0, 2.0], &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            kendall_tau(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::AllTies)
        ));
    }

    #[test]
    fn kendall_tau_with_ties_matches_tie_corrected_form() {
        // One pair tied in x only: nc=5, nd=0, tx=1, so
        // tau = 5 / sqrt(6 * 5).
        let tau = kendall_tau(&[1.0, 1.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_relative_eq!(tau, 5.0 / (6.0f64 * 5.0).sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn compute_alignment_checks_dimensions() {
        let x = lcg_matrix(10, 2, 1);
        let y = lcg_matrix(12, 2, 2);
        let err = compute_alignment(&x, &y, &MetricConfig::CkaLinear).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("10") && msg.contains("12"), "{msg}");
    }

    #[test]
    fn compute_alignment_reports_path() {
        let x = lcg_matrix(20, 3, 5);
        let score = compute_alignment(&x, &x, &MetricConfig::Mka { k: 5 }).unwrap();
        assert_eq!(score.mka_path, Some(MkaPath::Fast));
        assert_relative_eq!(score.value, 1.0, epsilon = 1e-12);
        let score = compute_alignment(&x, &x, &MetricConfig::CkaLinear).unwrap();
        assert_eq!(score.mka_path, None);
    }
}
