use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qmetric::{load_config, run_oracle, run_scenario, RunError, RunOptions, EXIT_IO, EXIT_OK};

#[derive(Parser)]
#[command(
    name = "qmetric",
    version,
    about = "Quantum metric experiments on matrix algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write results.csv, report.json and manifest.json.
    Run {
        config: PathBuf,
        /// Output directory; overrides the scenario's `output`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides `solver.seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Check a scenario and list every problem found.
    Validate { config: PathBuf },
    /// Brute-force grid search for a small optimization problem.
    Oracle { problem: PathBuf },
}

fn fail(e: &RunError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            config,
            out,
            seed,
            jobs,
        } => {
            let run =
                load_config(&config).and_then(|c| run_scenario(c, &RunOptions { out, seed, jobs }));
            match run {
                Ok(summary) => {
                    let o = &summary.outcome;
                    let tainted = o.rows.iter().filter(|r| r.is_tainted()).count();
                    println!(
                        "{} rows written to {} ({tainted} tainted)",
                        o.rows.len(),
                        summary.dir.display()
                    );
                    for f in &o.failures {
                        eprintln!("failed: {f}");
                    }
                    ExitCode::from(summary.exit_code() as u8)
                }
                Err(e) => fail(&e),
            }
        }
        Command::Validate { config } => match load_config(&config) {
            Ok(c) => {
                println!("{}: ok ({} experiment)", c.name, c.experiment.kind());
                ExitCode::from(EXIT_OK as u8)
            }
            Err(e) => fail(&e),
        },
        Command::Oracle { problem } => {
            let text = match std::fs::read_to_string(&problem) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {}: {e}", problem.display());
                    return ExitCode::from(EXIT_IO as u8);
                }
            };
            match run_oracle(&text) {
                Ok(v) => {
                    println!("{}", serde_json::to_string_pretty(&v).expect("plain JSON"));
                    ExitCode::from(EXIT_OK as u8)
                }
                Err(e) => fail(&e),
            }
        }
    }
}
