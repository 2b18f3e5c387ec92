//! Sweep grid syntax: either a comma list (`10,25,50`) or an inclusive
//! range `start:stop:step` whose stop is reached within 1e-12.

use anyhow::{bail, Context, Result};

const MAX_GRID_POINTS: usize = 100_000;
const STOP_SLACK: f64 = 1e-12;

pub fn parse_f64_grid(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    if spec.is_empty() {
        bail!("empty grid");
    }
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            bail!("range grid must be start:stop:step, got {spec:?}");
        }
        let start: f64 = parts[0].trim().parse().context("bad range start")?;
        let stop: f64 = parts[1].trim().parse().context("bad range stop")?;
        let step: f64 = parts[2].trim().parse().context("bad range step")?;
        if !step.is_finite() || step <= 0.0 {
            bail!("range step must be positive, got {step}");
        }
        if stop < start - STOP_SLACK {
            bail!("range stop {stop} is below start {start}");
        }
        let mut values = Vec::new();
        let mut i = 0u64;
        loop {
            let v = start + i as f64 * step;
            if v > stop + STOP_SLACK {
                break;
            }
            values.push(v);
            i += 1;
            if values.len() > MAX_GRID_POINTS {
                bail!("grid has more than {MAX_GRID_POINTS} points");
            }
        }
        Ok(values)
    } else {
        spec.split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<f64>()
                    .with_context(|| format!("bad grid value {tok:?}"))
            })
            .collect()
    }
}

pub fn parse_usize_grid(spec: &str) -> Result<Vec<usize>> {
    parse_f64_grid(spec)?
        .into_iter()
        .map(|v| {
            let rounded = v.round();
            if (v - rounded).abs() > 1e-9 || rounded < 0.0 {
                bail!("grid value {v} is not a nonnegative integer");
            }
            Ok(rounded as usize)
        })
        .collect()
}
