//! `align`: compute one metric between two feature matrices and print the
//! score with 12 decimal digits.

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use manifold_align::matrix::load_csv;
use manifold_align::{compute_alignment, FeatureMatrix, Format};

use crate::metrics::{build_config, MetricFlags, MetricKind};

#[derive(Debug, Args)]
pub struct AlignArgs {
    /// First feature matrix.
    #[arg(long)]
    pub x: PathBuf,
    /// Second feature matrix (same number of rows).
    #[arg(long)]
    pub y: PathBuf,
    /// Metric: cka, cka-rbf, kcka, mka, or cka-sym-manifold.
    #[arg(long)]
    pub metric: String,
    /// Neighbor count for kcka/mka/cka-sym-manifold.
    #[arg(long)]
    pub k: Option<usize>,
    /// Bandwidth policy for cka-rbf: "median" or an explicit value.
    #[arg(long, default_value = "median")]
    pub sigma: String,
    /// Scale the median bandwidth by this factor (sigma = delta * M).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Use the squared-distance Gaussian RBF form.
    #[arg(long)]
    pub rbf_squared: bool,
    /// Zero the kcka kernel diagonal instead of setting it to 1.
    #[arg(long)]
    pub kcka_zero_diagonal: bool,
    /// Input format: csv, bin, or auto (sniff by extension).
    #[arg(long, default_value = "auto")]
    pub format: String,
    /// Skip a header line when reading CSV input.
    #[arg(long)]
    pub header: bool,
}

pub fn load_input(path: &PathBuf, format: Format, header: bool) -> Result<FeatureMatrix> {
    let m = if header {
        let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        load_csv(BufReader::new(file), true)
    } else {
        manifold_align::load_matrix(path, format)
    };
    m.with_context(|| format!("loading {}", path.display()))
}

pub fn run(args: AlignArgs) -> Result<()> {
    let format: Format = args.format.parse()?;
    if args.header && format == Format::Bin {
        bail!("--header only applies to CSV input");
    }
    let kind = MetricKind::parse(&args.metric)?;
    let sigma_explicit = match args.sigma.trim() {
        "median" => None,
        other => Some(
            other
                .parse::<f64>()
                .with_context(|| format!("--sigma must be \"median\" or a number, got {other:?}"))?,
        ),
    };
    let flags = MetricFlags {
        delta: args.delta,
        sigma_explicit,
        rbf_squared: args.rbf_squared,
        kcka_zero_diagonal: args.kcka_zero_diagonal,
    };
    let config = build_config(kind, args.k, &flags)?;
    let x = load_input(&args.x, format, args.header)?;
    let y = load_input(&args.y, format, args.header)?;
    let score = compute_alignment(&x, &y, &config)?;
    println!("{:.12}", score.value);
    Ok(())
}
