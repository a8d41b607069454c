//! Command-line front end: run or validate experiment specs.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use uav_udn::harness::{parse_spec, run_experiment_jobs, write_csv, ExperimentSpec, ScenarioId};

#[derive(Parser)]
#[command(name = "uav-udn", version, about = "Seeded UAV network experiments with CSV output")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment spec and write its CSV.
    Run {
        spec: PathBuf,
        /// Output CSV path, overriding the spec's `output`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Master seed, overriding the spec.
        #[arg(long)]
        seed: Option<u64>,
        /// Trials per lattice point, overriding the spec.
        #[arg(long)]
        trials: Option<usize>,
        /// Worker threads. Results do not depend on it.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Check a spec and report every problem found.
    Validate { spec: PathBuf },
    /// List the available scenarios.
    ListScenarios,
}

const VALIDATION: u8 = 1;
const RUNTIME: u8 = 2;

fn load(path: &Path) -> Result<ExperimentSpec, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("{}: {e}", path.display());
        ExitCode::from(RUNTIME)
    })?;
    parse_spec(&text).map_err(|errors| {
        for issue in &errors.0 {
            eprintln!("{}: {issue}", path.display());
        }
        ExitCode::from(VALIDATION)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListScenarios => {
            for id in ScenarioId::ALL {
                println!("{:<6} {}", id.name(), id.summary());
            }
            ExitCode::SUCCESS
        }
        Command::Validate { spec } => match load(&spec) {
            Ok(s) => {
                println!("{}: ok ({} scenario, {} lattice points)", spec.display(), s.scenario.name(), s.lattice().len());
                ExitCode::SUCCESS
            }
            Err(code) => code,
        },
        Command::Run {
            spec,
            out,
            seed,
            trials,
            jobs,
        } => {
            let mut s = match load(&spec) {
                Ok(s) => s,
                Err(code) => return code,
            };
            if let Some(seed) = seed {
                s.seed = seed;
            }
            if let Some(trials) = trials {
                if trials == 0 {
                    eprintln!("--trials must be at least 1");
                    return ExitCode::from(VALIDATION);
                }
                s.trials = trials;
            }
            let out = out
                .or_else(|| s.output.clone())
                .unwrap_or_else(|| PathBuf::from(format!("{}.csv", s.scenario.name())));
            let report = match run_experiment_jobs(&s, jobs) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(VALIDATION);
                }
            };
            if let Err(e) = write_csv(&report, &out) {
                eprintln!("{e}");
                return ExitCode::from(RUNTIME);
            }
            for e in &report.errors {
                eprintln!("lattice point failed: {e}");
            }
            println!(
                "wrote {} rows to {} ({} failed lattice points)",
                report.rows.len(),
                out.display(),
                report.errors.len()
            );
            if report.errors.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(RUNTIME)
            }
        }
    }
}
