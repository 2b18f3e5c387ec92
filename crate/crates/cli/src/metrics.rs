//! Metric-name parsing shared by `align` and `bench`.

use anyhow::{bail, Result};
use manifold_align::{MetricConfig, RbfForm, SigmaPolicy};

/// Metric families selectable on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    CkaLinear,
    CkaRbf,
    Kcka,
    Mka,
    CkaSymManifold,
}

impl MetricKind {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name.trim() {
            "cka" => MetricKind::CkaLinear,
            "cka-rbf" => MetricKind::CkaRbf,
            "kcka" => MetricKind::Kcka,
            "mka" => MetricKind::Mka,
            "cka-sym-manifold" => MetricKind::CkaSymManifold,
            other => bail!(
                "unknown metric {other:?} (expected cka, cka-rbf, kcka, mka, or cka-sym-manifold)"
            ),
        })
    }

    pub fn needs_k(self) -> bool {
        matches!(
            self,
            MetricKind::Kcka | MetricKind::Mka | MetricKind::CkaSymManifold
        )
    }
}

/// Parses a comma list of metric names, preserving order.
pub fn parse_metric_list(spec: &str) -> Result<Vec<MetricKind>> {
    let kinds: Vec<MetricKind> = spec
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(MetricKind::parse)
        .collect::<Result<_>>()?;
    if kinds.is_empty() {
        bail!("no metrics given");
    }
    Ok(kinds)
}

/// Flags affecting metric construction.
#[derive(Debug, Clone, Copy, Default)]
pub struct MetricFlags {
    /// Median-scaling factor for cka-rbf (sigma = delta * M).
    pub delta: Option<f64>,
    /// Explicit sigma for cka-rbf, overriding the median policy.
    pub sigma_explicit: Option<f64>,
    /// Use the squared-distance Gaussian form of the RBF kernel.
    pub rbf_squared: bool,
    /// Zero the kcka kernel diagonal instead of setting it to 1.
    pub kcka_zero_diagonal: bool,
}

/// Builds a concrete metric configuration; `k` is required for the
/// neighbor-based metrics.
pub fn build_config(kind: MetricKind, k: Option<usize>, flags: &MetricFlags) -> Result<MetricConfig> {
    if kind.needs_k() && k.is_none() {
        bail!("metric requires --k");
    }
    Ok(match kind {
        MetricKind::CkaLinear => MetricConfig::CkaLinear,
        MetricKind::CkaRbf => {
            let sigma = match (flags.sigma_explicit, flags.delta) {
                (Some(s), _) => SigmaPolicy::Explicit(s),
                (None, Some(d)) => SigmaPolicy::ScaledMedian(d),
                (None, None) => SigmaPolicy::Median,
            };
            let form = if flags.rbf_squared {
                RbfForm::Squared
            } else {
                RbfForm::Unsquared
            };
            MetricConfig::CkaRbf { sigma, form }
        }
        MetricKind::Kcka => MetricConfig::Kcka {
            k: k.unwrap(),
            zero_diagonal: flags.kcka_zero_diagonal,
        },
        MetricKind::Mka => MetricConfig::Mka { k: k.unwrap() },
        MetricKind::CkaSymManifold => MetricConfig::CkaSymManifold { k: k.unwrap() },
    })
}

/// Expands metric kinds over a k grid in a fixed order: k-dependent
/// metrics get one configuration per k, the rest appear once.
pub fn expand_configs(
    kinds: &[MetricKind],
    ks: &[usize],
    flags: &MetricFlags,
) -> Result<Vec<MetricConfig>> {
    let mut configs = Vec::new();
    for &kind in kinds {
        if kind.needs_k() {
            if ks.is_empty() {
                bail!("metric requires a --k grid");
            }
            for &k in ks {
                configs.push(build_config(kind, Some(k), flags)?);
            }
        } else {
            configs.push(build_config(kind, None, flags)?);
        }
    }
    Ok(configs)
}
