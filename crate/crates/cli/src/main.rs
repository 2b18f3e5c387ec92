//! Command-line front end: compute alignment metrics between feature
//! matrices, generate the synthetic datasets, and run the benchmark suites.

mod align;
mod bench;
mod gen;
mod grid;
mod metrics;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "manifold-align",
    version,
    about = "Kernel alignment metrics (MKA, CKA variants) with seeded synthetic benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one alignment metric between two matrices and print it.
    Align(align::AlignArgs),
    /// Generate a synthetic dataset file.
    Gen {
        #[command(subcommand)]
        cmd: gen::GenCmd,
    },
    /// Run an experiment suite and write a CSV result table.
    Bench(bench::BenchArgs),
}

/// Caps bench parallelism from `MANIFOLD_ALIGN_THREADS` (0 or unset = auto).
fn init_thread_pool() {
    if let Ok(value) = std::env::var("MANIFOLD_ALIGN_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            if threads > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Align(args) => align::run(args),
        Command::Gen { cmd } => gen::run(cmd),
        Command::Bench(args) => bench::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
