use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use covpovm::runner::{run, RunOptions, RunOutcome};

/// Covariant phase-space POVM computations driven by a flat key = value
/// config file. Exit codes: 0 success, 1 validation error, 2 a requested
/// numerical invariant exceeded its tolerance.
#[derive(Parser)]
#[command(name = "covpovm", version)]
struct Cli {
    /// Path to the run configuration
    config: PathBuf,

    /// Directory receiving the output files
    #[arg(long, default_value = ".")]
    out: PathBuf,

    /// Override the config seed for randomized checks
    #[arg(long)]
    seed: Option<u64>,

    /// Worker threads for quadrature; any value gives bit-identical results
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("covpovm: cannot configure {threads} threads: {e}");
            return ExitCode::from(1);
        }
    }
    let opts = RunOptions {
        config_path: cli.config,
        out_dir: cli.out,
        seed_override: cli.seed,
    };
    match run(&opts) {
        Ok(RunOutcome::Passed) => ExitCode::SUCCESS,
        Ok(RunOutcome::CheckFailed) => {
            eprintln!("covpovm: a requested numerical check exceeded its tolerance (see report)");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("covpovm: {e}");
            ExitCode::from(1)
        }
    }
}
