use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tsf_sim::config::ScenarioConfig;
use tsf_sim::io::{write_aggregate_file, write_heat_kernel_file, write_runs_file};
use tsf_sim::monte_carlo::time_average;
use tsf_sim::{monte_carlo, FilterLaw, SimError};

#[derive(Parser)]
#[command(name = "tsf", about = "Tangent space filter experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum LawArg {
    Se3,
    Dp,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo runs of the attitude and gyro-bias filter.
    Simulate {
        /// Flat `key = value` file applied over the defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "se3")]
        law: LawArg,
        /// Overrides mc_runs.
        #[arg(long)]
        runs: Option<usize>,
        /// Overrides master_seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Start from the four-hour, 200-run scenario instead of one hour and 50 runs.
        #[arg(long)]
        full: bool,
    },
    /// Radial profile of the attitude heat kernel.
    HeatKernel {
        /// Kernel time (q²·seconds/4 for rate noise q²I).
        #[arg(long)]
        t: f64,
        #[arg(long, default_value = "400")]
        points: usize,
        #[arg(long, default_value = "heat_kernel.csv")]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), SimError> {
    match cli.command {
        Command::Simulate { config, law, runs, seed, out, full } => {
            let mut cfg = if full { ScenarioConfig::full() } else { ScenarioConfig::desk() };
            if let Some(path) = config {
                let text = std::fs::read_to_string(&path).map_err(|source| SimError::Io { path, source })?;
                cfg = cfg.apply(&text)?;
            }
            if let Some(r) = runs {
                cfg.mc_runs = r;
            }
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            cfg.validate()?;
            std::fs::create_dir_all(&out).map_err(|source| SimError::Io { path: out.clone(), source })?;
            let laws = match law {
                LawArg::Se3 => vec![FilterLaw::Se3],
                LawArg::Dp => vec![FilterLaw::Dp],
                LawArg::Both => vec![FilterLaw::Se3, FilterLaw::Dp],
            };
            let mut records = Vec::new();
            let mut rows = Vec::new();
            for l in laws {
                let batch = monte_carlo(&cfg, l);
                for e in &batch.aborted {
                    eprintln!("{l}: {e}");
                }
                let avg = time_average(&batch.aggregate, 600.0, f64::INFINITY, |r| r.rms_chi2);
                let avg = if avg.is_nan() { "n/a".to_string() } else { format!("{avg:.4}") };
                eprintln!("{l}: {} runs, time-averaged RMS chi2 after 600 s = {avg}", batch.runs.len());
                records.extend(batch.runs.into_iter().flat_map(|r| r.records));
                rows.extend(batch.aggregate);
            }
            write_runs_file(&out.join("runs.csv"), &records)?;
            write_aggregate_file(&out.join("aggregate.csv"), &rows)?;
            Ok(())
        }
        Command::HeatKernel { t, points, out } => {
            if t.is_nan() || t <= 0.0 {
                return Err(SimError::Scenario("t must be positive".into()));
            }
            write_heat_kernel_file(&out, t, points)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
