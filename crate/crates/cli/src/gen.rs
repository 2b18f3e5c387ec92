//! `gen`: write one synthetic dataset with full seed determinism, either to
//! a file or (without `--out`) as CSV on standard output.

use std::io::Write as _;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Subcommand;
use manifold_align::matrix::{write_bin, write_csv};
use manifold_align::{
    gen_s_curve, gen_swiss_roll, generate, save_matrix, FeatureMatrix, Format, GenSpec, Generated,
};

/// Default offset separating a perturbation noise seed from the base seed.
pub const NOISE_SEED_OFFSET: u64 = 1_000_000;

#[derive(Debug, Subcommand)]
pub enum GenCmd {
    /// 2-D Swiss roll of n points.
    Swiss {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "auto")]
        format: String,
        /// Also write the curve parameter vector t (one value per row).
        #[arg(long)]
        params_out: Option<PathBuf>,
    },
    /// 2-D S-curve with shape parameter r in [0, 1].
    SCurve {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "auto")]
        format: String,
        #[arg(long)]
        params_out: Option<PathBuf>,
    },
    /// d-dimensional standard normal spot.
    Gauss {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "auto")]
        format: String,
    },
    /// Gaussian spot plus scale * N(0, I) noise from an independent seed.
    Perturbed {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0.5)]
        scale: f64,
        #[arg(long)]
        seed: u64,
        /// Noise seed; defaults to seed + 1000000.
        #[arg(long)]
        noise_seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "auto")]
        format: String,
    },
    /// Two unrelated Gaussian spots (lost correspondence).
    Lost {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        seed_a: u64,
        #[arg(long)]
        seed_b: u64,
        #[arg(long)]
        out_a: PathBuf,
        #[arg(long)]
        out_b: PathBuf,
        #[arg(long, default_value = "auto")]
        format: String,
    },
    /// Two uniform spots, the second translated by (1.1 + t, 0, ..., 0).
    TwoSpots {
        #[arg(long)]
        n_per: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "auto")]
        format: String,
    },
    /// Concentric rings at a collapse stage in 1..=5 (5 = five rings).
    Rings {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        stage: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "auto")]
        format: String,
    },
    /// 2-D normal cloud split into c clusters on a circle of radius 10.
    Clusters {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "auto")]
        format: String,
    },
}

fn write(m: &FeatureMatrix, out: &Option<PathBuf>, format: &str) -> Result<()> {
    let format: Format = format.parse()?;
    match out {
        Some(path) => {
            save_matrix(m, path, format).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            match format {
                Format::Bin => write_bin(m, &mut w)?,
                // Without a path there is no extension to sniff.
                Format::Csv | Format::Auto => write_csv(m, &mut w)?,
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn write_params(t: &[f64], out: &PathBuf) -> Result<()> {
    let m = FeatureMatrix::new(t.len(), 1, t.to_vec())?;
    save_matrix(&m, out, Format::Csv).with_context(|| format!("writing {}", out.display()))
}

pub fn run(cmd: GenCmd) -> Result<()> {
    match cmd {
        GenCmd::Swiss { n, seed, out, format, params_out } => {
            let spec = GenSpec::SwissRoll { n, seed };
            spec.validate()?;
            let (m, t) = gen_swiss_roll(n, seed);
            write(&m, &out, &format)?;
            if let Some(p) = params_out {
                write_params(&t, &p)?;
            }
        }
        GenCmd::SCurve { n, r, seed, out, format, params_out } => {
            let spec = GenSpec::SCurve { n, r, seed };
            spec.validate()?;
            let (m, t) = gen_s_curve(n, r, seed);
            write(&m, &out, &format)?;
            if let Some(p) = params_out {
                write_params(&t, &p)?;
            }
        }
        GenCmd::Gauss { n, d, seed, out, format } => {
            let m = run_spec(GenSpec::GaussianSpot { n, d, seed })?;
            write(&m, &out, &format)?;
        }
        GenCmd::Perturbed { n, d, scale, seed, noise_seed, out, format } => {
            let noise_seed = noise_seed.unwrap_or(seed.wrapping_add(NOISE_SEED_OFFSET));
            let m = run_spec(GenSpec::Perturbed { n, d, scale, seed, noise_seed })?;
            write(&m, &out, &format)?;
        }
        GenCmd::Lost { n, d, seed_a, seed_b, out_a, out_b, format } => {
            let spec = GenSpec::LostCorrespondence { n, d, seed_a, seed_b };
            match generate(&spec)? {
                Generated::Pair(a, b) => {
                    write(&a, &Some(out_a), &format)?;
                    write(&b, &Some(out_b), &format)?;
                }
                Generated::Single(_) => unreachable!(),
            }
        }
        GenCmd::TwoSpots { n_per, d, t, seed, out, format } => {
            let m = run_spec(GenSpec::UniformTwoSpots { n_per, d, t, seed })?;
            write(&m, &out, &format)?;
        }
        GenCmd::Rings { n, stage, seed, out, format } => {
            let m = run_spec(GenSpec::Rings { n, stage, seed })?;
            write(&m, &out, &format)?;
        }
        GenCmd::Clusters { n, c, seed, out, format } => {
            let m = run_spec(GenSpec::Clusters { n, c, seed })?;
            write(&m, &out, &format)?;
        }
    }
    Ok(())
}

fn run_spec(spec: GenSpec) -> Result<FeatureMatrix> {
    match generate(&spec)? {
        Generated::Single(m) => Ok(m),
        Generated::Pair(..) => unreachable!("single-output spec"),
    }
}
