//! `bench`: run one experiment suite over a seeded grid and emit a
//! machine-readable CSV result table.
//!
//! Every table starts with the comment line `# manifold-align v1 <experiment>`
//! followed by a header row. One `score` row is emitted per (configuration,
//! seed, metric); ranking experiments append `kendall_tau` summary rows per
//! metric configuration, and the spot experiments append per-configuration
//! `mean`/`std` rows over seeds. Scores are pure functions of the seed list,
//! so repeated invocations emit byte-identical score columns; only
//! `elapsed_ms` (always the last column) varies.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use manifold_align::{
    compute_alignment, gen_clusters, gen_gaussian_spot, gen_rings, gen_s_curve, gen_swiss_roll,
    gen_uniform_two_spots, kendall_tau, perturb, FeatureMatrix, MetricConfig,
};
use rayon::prelude::*;

use crate::gen::NOISE_SEED_OFFSET;
use crate::grid::{parse_f64_grid, parse_usize_grid};
use crate::metrics::{expand_configs, parse_metric_list, MetricFlags};

/// Seed offset for the unrelated second spot in lost-correspondence runs.
pub const LOST_SEED_OFFSET: u64 = 2_000_000;

const DEFAULT_K_GRID: &str = "10,15,25,50,100,200,300,400";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    /// Swiss-roll vs. S-curve over an r grid.
    SwissS,
    /// Collapsing concentric rings ranked against the five-ring reference.
    Rings,
    /// Cloud splitting into c clusters ranked against the c = 1 reference.
    Clusters,
    /// Gaussian spot vs. its perturbed copy over a k grid.
    GaussPerturb,
    /// Two unrelated Gaussian spots over a k grid.
    GaussLost,
    /// Uniform spot pair under translation of the second spot.
    UniformTranslate,
    /// RBF-vs-linear CKA gap as the bandwidth multiplier grows.
    SigmaConvergence,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Experiment suite to run.
    #[arg(value_enum)]
    pub experiment: Experiment,
    /// Sample count (experiment-specific default).
    #[arg(long)]
    pub n: Option<usize>,
    /// Feature dimension where applicable.
    #[arg(long)]
    pub d: Option<usize>,
    /// Points per spot for uniform-translate (total rows = 2 * n_per).
    #[arg(long)]
    pub n_per: Option<usize>,
    /// S-curve r grid (comma list or start:stop:step).
    #[arg(long)]
    pub r: Option<String>,
    /// Translation grid for uniform-translate.
    #[arg(long)]
    pub t: Option<String>,
    /// Neighbor-count grid for k-based metrics.
    #[arg(long)]
    pub k: Option<String>,
    /// Cluster-count grid (clusters) or bandwidth multipliers
    /// (sigma-convergence).
    #[arg(long)]
    pub c: Option<String>,
    /// Comma list of metrics (cka, cka-rbf, kcka, mka, cka-sym-manifold).
    #[arg(long)]
    pub metrics: Option<String>,
    /// Number of trial seeds; seeds run 1..=seeds.
    #[arg(long, default_value_t = 5)]
    pub seeds: u64,
    /// Perturbation noise scale for gauss-perturb.
    #[arg(long)]
    pub scale: Option<f64>,
    /// Median-scaling factor for cka-rbf (sigma = delta * M).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Use the squared-distance Gaussian RBF form.
    #[arg(long)]
    pub rbf_squared: bool,
    /// Zero the kcka kernel diagonal instead of setting it to 1.
    #[arg(long)]
    pub kcka_zero_diagonal: bool,
    /// Output CSV path; omit to print the table on standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Table {
    experiment: &'static str,
    header: &'static [&'static str],
    rows: Vec<Vec<String>>,
}

fn write_table(path: Option<&Path>, table: &Table) -> Result<()> {
    let mut buf = Vec::new();
    writeln!(buf, "# manifold-align v1 {}", table.experiment)?;
    writeln!(buf, "{}", table.header.join(","))?;
    for row in &table.rows {
        debug_assert_eq!(row.len(), table.header.len());
        writeln!(buf, "{}", row.join(","))?;
    }
    match path {
        Some(path) => {
            if let Err(e) = fs::write(path, &buf) {
                let _ = fs::remove_file(path);
                return Err(e).with_context(|| format!("writing {}", path.display()));
            }
        }
        None => std::io::stdout().write_all(&buf)?,
    }
    Ok(())
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

fn fmt_ms(v: f64) -> String {
    format!("{v:.3}")
}

fn opt_usize(v: Option<usize>) -> String {
    v.map(|k| k.to_string()).unwrap_or_default()
}

fn opt_f64(v: Option<f64>) -> String {
    v.map(fmt).unwrap_or_default()
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn std_dev(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64).sqrt()
}

/// One computed metric cell: configuration index, score, elapsed time.
type MetricRow = (usize, f64, f64);

fn run_metrics(
    x: &FeatureMatrix,
    y: &FeatureMatrix,
    configs: &[MetricConfig],
) -> Result<Vec<MetricRow>> {
    configs
        .iter()
        .enumerate()
        .map(|(ci, config)| {
            let start = Instant::now();
            let score = compute_alignment(x, y, config)
                .with_context(|| format!("metric {}", config.name()))?;
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            Ok((ci, score.value, elapsed))
        })
        .collect()
}

struct Context_ {
    configs: Vec<MetricConfig>,
    seeds: Vec<u64>,
}

fn build_context(args: &BenchArgs, n_rows: usize, default_k: &str) -> Result<Context_> {
    let kinds = parse_metric_list(args.metrics.as_deref().unwrap_or("mka,cka-rbf"))?;
    let ks = match &args.k {
        Some(spec) => {
            let ks = parse_usize_grid(spec)?;
            for &k in &ks {
                if k < 2 || k + 1 > n_rows {
                    bail!("k = {k} out of range for n = {n_rows} (need 2 <= k <= n-1)");
                }
            }
            ks
        }
        // The default grid silently drops entries above n-1 so that a
        // small --n does not invalidate it.
        None => parse_usize_grid(default_k)?
            .into_iter()
            .filter(|&k| k < n_rows)
            .collect(),
    };
    let flags = MetricFlags {
        delta: args.delta,
        sigma_explicit: None,
        rbf_squared: args.rbf_squared,
        kcka_zero_diagonal: args.kcka_zero_diagonal,
    };
    let configs = expand_configs(&kinds, &ks, &flags)?;
    if args.seeds == 0 {
        bail!("--seeds must be at least 1");
    }
    let seeds: Vec<u64> = (1..=args.seeds).collect();
    Ok(Context_ { configs, seeds })
}

fn config_cells(config: &MetricConfig) -> (String, String, String) {
    (
        config.name().to_string(),
        opt_usize(config.k()),
        opt_f64(config.delta()),
    )
}

pub fn run(args: BenchArgs) -> Result<()> {
    let table = match args.experiment {
        Experiment::SwissS => swiss_s(&args)?,
        Experiment::Rings => rings(&args)?,
        Experiment::Clusters => clusters(&args)?,
        Experiment::GaussPerturb => gauss_pair(&args, true)?,
        Experiment::GaussLost => gauss_pair(&args, false)?,
        Experiment::UniformTranslate => uniform_translate(&args)?,
        Experiment::SigmaConvergence => sigma_convergence(&args)?,
    };
    write_table(args.out.as_deref(), &table)
}

fn swiss_s(args: &BenchArgs) -> Result<Table> {
    let n = args.n.unwrap_or(1000);
    let r_grid = parse_f64_grid(args.r.as_deref().unwrap_or("0.30:0.70:0.05"))?;
    for &r in &r_grid {
        if !(0.0..=1.0).contains(&r) {
            bail!("r = {r} outside [0, 1]");
        }
    }
    let ctx = build_context(args, n, DEFAULT_K_GRID)?;
    let cells: Vec<(f64, u64)> = r_grid
        .iter()
        .flat_map(|&r| ctx.seeds.iter().map(move |&s| (r, s)))
        .collect();
    let results: Vec<Vec<MetricRow>> = cells
        .par_iter()
        .map(|&(r, seed)| {
            let (x, _) = gen_swiss_roll(n, seed);
            let (y, _) = gen_s_curve(n, r, seed);
            run_metrics(&x, &y, &ctx.configs)
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for (&(r, seed), metrics) in cells.iter().zip(&results) {
        for &(ci, score, ms) in metrics {
            let (name, k, delta) = config_cells(&ctx.configs[ci]);
            rows.push(vec![
                "score".into(),
                name,
                k,
                delta,
                fmt(r),
                n.to_string(),
                seed.to_string(),
                fmt(score),
                fmt_ms(ms),
            ]);
        }
    }
    Ok(Table {
        experiment: "swiss-s",
        header: &["row", "metric", "k", "delta", "r", "n", "seed", "score", "elapsed_ms"],
        rows,
    })
}

/// Shared runner for the two ranking experiments: compares each
/// configuration value against the reference configuration and appends a
/// tie-corrected rank correlation per metric over the emitted score column.
fn ranking_experiment(
    args: &BenchArgs,
    experiment: &'static str,
    header: &'static [&'static str],
    n: usize,
    config_values: Vec<u32>,
    make_pair: impl Fn(u32, u64) -> (FeatureMatrix, FeatureMatrix) + Sync,
) -> Result<Table> {
    let ctx = build_context(args, n, DEFAULT_K_GRID)?;
    let cells: Vec<(u32, u64)> = config_values
        .iter()
        .flat_map(|&v| ctx.seeds.iter().map(move |&s| (v, s)))
        .collect();
    let results: Vec<Vec<MetricRow>> = cells
        .par_iter()
        .map(|&(value, seed)| {
            let (reference, current) = make_pair(value, seed);
            run_metrics(&reference, &current, &ctx.configs)
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut series: Vec<(Vec<f64>, Vec<f64>)> = vec![Default::default(); ctx.configs.len()];
    for (&(value, seed), metrics) in cells.iter().zip(&results) {
        for &(ci, score, ms) in metrics {
            let (name, k, delta) = config_cells(&ctx.configs[ci]);
            rows.push(vec![
                "score".into(),
                name,
                k,
                delta,
                value.to_string(),
                n.to_string(),
                seed.to_string(),
                fmt(score),
                fmt_ms(ms),
            ]);
            series[ci].0.push(value as f64);
            series[ci].1.push(score);
        }
    }
    for (ci, (values, scores)) in series.iter().enumerate() {
        let tau = kendall_tau(values, scores)?;
        let (name, k, delta) = config_cells(&ctx.configs[ci]);
        rows.push(vec![
            "kendall_tau".into(),
            name,
            k,
            delta,
            String::new(),
            n.to_string(),
            String::new(),
            fmt(tau),
            String::new(),
        ]);
    }
    Ok(Table { experiment, header, rows })
}

fn rings(args: &BenchArgs) -> Result<Table> {
    let n = args.n.unwrap_or(500);
    if n < 5 {
        bail!("rings need n >= 5");
    }
    ranking_experiment(
        args,
        "rings",
        &["row", "metric", "k", "delta", "stage", "n", "seed", "score", "elapsed_ms"],
        n,
        vec![5, 4, 3, 2, 1],
        |stage, seed| (gen_rings(n, 5, seed), gen_rings(n, stage, seed)),
    )
}

fn clusters(args: &BenchArgs) -> Result<Table> {
    let n = args.n.unwrap_or(300);
    let c_grid: Vec<u32> = match &args.c {
        Some(spec) => parse_usize_grid(spec)?.into_iter().map(|c| c as u32).collect(),
        None => (1..=12).collect(),
    };
    for &c in &c_grid {
        if !(1..=12).contains(&c) || n < c as usize {
            bail!("cluster count c = {c} out of range for n = {n}");
        }
    }
    ranking_experiment(
        args,
        "clusters",
        &["row", "metric", "k", "delta", "c", "n", "seed", "score", "elapsed_ms"],
        n,
        c_grid,
        |c, seed| (gen_clusters(n, 1, seed), gen_clusters(n, c, seed)),
    )
}

fn gauss_pair(args: &BenchArgs, perturbed: bool) -> Result<Table> {
    let n = args.n.unwrap_or(1000);
    let d = args.d.unwrap_or(100);
    let scale = args.scale.unwrap_or(0.5);
    if scale < 0.0 {
        bail!("--scale must be nonnegative");
    }
    let ctx = build_context(args, n, DEFAULT_K_GRID)?;
    let results: Vec<Vec<MetricRow>> = ctx
        .seeds
        .par_iter()
        .map(|&seed| {
            let x = gen_gaussian_spot(n, d, seed);
            let y = if perturbed {
                perturb(&x, scale, seed.wrapping_add(NOISE_SEED_OFFSET))
            } else {
                gen_gaussian_spot(n, d, seed.wrapping_add(LOST_SEED_OFFSET))
            };
            run_metrics(&x, &y, &ctx.configs)
        })
        .collect::<Result<_>>()?;
    let (experiment, header): (&'static str, &'static [&'static str]) = if perturbed {
        (
            "gauss-perturb",
            &["row", "metric", "k", "delta", "n", "d", "scale", "seed", "score", "elapsed_ms"],
        )
    } else {
        (
            "gauss-lost",
            &["row", "metric", "k", "delta", "n", "d", "seed", "score", "elapsed_ms"],
        )
    };
    let mut rows = Vec::new();
    let mut per_config: Vec<Vec<f64>> = vec![Vec::new(); ctx.configs.len()];
    for (&seed, metrics) in ctx.seeds.iter().zip(&results) {
        for &(ci, score, ms) in metrics {
            let (name, k, delta) = config_cells(&ctx.configs[ci]);
            let mut row = vec!["score".into(), name, k, delta, n.to_string(), d.to_string()];
            if perturbed {
                row.push(fmt(scale));
            }
            row.extend([seed.to_string(), fmt(score), fmt_ms(ms)]);
            rows.push(row);
            per_config[ci].push(score);
        }
    }
    for (ci, scores) in per_config.iter().enumerate() {
        for (label, value) in [("mean", mean(scores)), ("std", std_dev(scores))] {
            let (name, k, delta) = config_cells(&ctx.configs[ci]);
            let mut row = vec![label.into(), name, k, delta, n.to_string(), d.to_string()];
            if perturbed {
                row.push(fmt(scale));
            }
            row.extend([String::new(), fmt(value), String::new()]);
            rows.push(row);
        }
    }
    Ok(Table { experiment, header, rows })
}

fn uniform_translate(args: &BenchArgs) -> Result<Table> {
    let n_per = args.n_per.unwrap_or(500);
    let d = args.d.unwrap_or(100);
    let t_grid = parse_f64_grid(args.t.as_deref().unwrap_or("1,10,50"))?;
    for &t in &t_grid {
        if t < 0.0 {
            bail!("t = {t} must be nonnegative");
        }
    }
    let n_rows = 2 * n_per;
    let ctx = build_context(args, n_rows, "100")?;
    let cells: Vec<(f64, u64)> = t_grid
        .iter()
        .flat_map(|&t| ctx.seeds.iter().map(move |&s| (t, s)))
        .collect();
    let results: Vec<Vec<MetricRow>> = cells
        .par_iter()
        .map(|&(t, seed)| {
            // Same seed on both sides: only the translation differs, so the
            // pointwise correspondence between the clouds is exact.
            let x = gen_uniform_two_spots(n_per, d, 0.0, seed);
            let y = gen_uniform_two_spots(n_per, d, t, seed);
            run_metrics(&x, &y, &ctx.configs)
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut groups: Vec<Vec<f64>> = vec![Vec::new(); ctx.configs.len() * t_grid.len()];
    for ((cell_idx, &(t, seed)), metrics) in cells.iter().enumerate().zip(&results) {
        let t_idx = cell_idx / ctx.seeds.len();
        for &(ci, score, ms) in metrics {
            let (name, k, delta) = config_cells(&ctx.configs[ci]);
            rows.push(vec![
                "score".into(),
                name,
                k,
                delta,
                n_per.to_string(),
                d.to_string(),
                fmt(t),
                seed.to_string(),
                fmt(score),
                fmt_ms(ms),
            ]);
            groups[ci * t_grid.len() + t_idx].push(score);
        }
    }
    for (ci, config) in ctx.configs.iter().enumerate() {
        for (t_idx, &t) in t_grid.iter().enumerate() {
            let scores = &groups[ci * t_grid.len() + t_idx];
            for (label, value) in [("mean", mean(scores)), ("std", std_dev(scores))] {
                let (name, k, delta) = config_cells(config);
                rows.push(vec![
                    label.into(),
                    name,
                    k,
                    delta,
                    n_per.to_string(),
                    d.to_string(),
                    fmt(t),
                    String::new(),
                    fmt(value),
                    String::new(),
                ]);
            }
        }
    }
    Ok(Table {
        experiment: "uniform-translate",
        header: &["row", "metric", "k", "delta", "n_per", "d", "t", "seed", "score", "elapsed_ms"],
        rows,
    })
}

fn sigma_convergence(args: &BenchArgs) -> Result<Table> {
    let n = args.n.unwrap_or(300);
    let d = args.d.unwrap_or(20);
    let c_grid = parse_f64_grid(args.c.as_deref().unwrap_or("1,3,10,30,100"))?;
    for &c in &c_grid {
        if c <= 0.0 {
            bail!("bandwidth multiplier c = {c} must be positive");
        }
    }
    if args.seeds == 0 {
        bail!("--seeds must be at least 1");
    }
    let seeds: Vec<u64> = (1..=args.seeds).collect();
    let c_grid_ref = &c_grid;
    let results: Vec<Vec<(f64, f64, f64, f64)>> = seeds
        .par_iter()
        .map(|&seed| {
            let x = gen_gaussian_spot(n, d, seed);
            let y = gen_gaussian_spot(n, d, seed.wrapping_add(LOST_SEED_OFFSET));
            let linear = compute_alignment(&x, &y, &MetricConfig::CkaLinear)?.value;
            c_grid_ref
                .iter()
                .map(|&c| {
                    let config = MetricConfig::CkaRbf {
                        sigma: manifold_align::SigmaPolicy::ScaledMedian(c),
                        form: manifold_align::RbfForm::Squared,
                    };
                    let start = Instant::now();
                    let score = compute_alignment(&x, &y, &config)?.value;
                    let ms = start.elapsed().as_secs_f64() * 1e3;
                    Ok((c, score, linear, ms))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for (&seed, cells) in seeds.iter().zip(&results) {
        for &(c, score, linear, ms) in cells {
            rows.push(vec![
                "score".into(),
                fmt(c),
                n.to_string(),
                d.to_string(),
                seed.to_string(),
                fmt(score),
                fmt(linear),
                fmt((score - linear).abs()),
                fmt_ms(ms),
            ]);
        }
    }
    Ok(Table {
        experiment: "sigma-convergence",
        header: &["row", "c", "n", "d", "seed", "score", "cka_linear", "abs_diff", "elapsed_ms"],
        rows,
    })
}
