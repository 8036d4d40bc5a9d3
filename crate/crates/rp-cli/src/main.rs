use clap::{Parser, Subcommand};
use rp_cli::{parse_scenario, run_scenario_with_dump, run_suite, CliError};
use std::path::PathBuf;
use std::process::ExitCode;

/// Numerical positivity workbench: runs named checks from scenario files or
/// the built-in battery and emits JSON reports.
#[derive(Parser)]
#[command(name = "rp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single scenario from a JSON file.
    Run {
        /// Path to the scenario JSON document.
        file: PathBuf,
        /// Replace the scenario's `seed` payload field, if it has one.
        #[arg(long)]
        seed: Option<u64>,
        /// Write eigenvalue spectra as CSV files into this directory.
        #[arg(long)]
        dump_dir: Option<PathBuf>,
        /// Suppress wall-clock timing in the report.
        #[arg(long)]
        no_timestamps: bool,
    },
    /// Run the built-in scenario battery.
    Suite {
        /// Keep only scenarios whose module tag equals, or name contains,
        /// this string.
        #[arg(long)]
        filter: Option<String>,
        /// Replace every scenario's `seed` payload field, where present.
        #[arg(long)]
        seed: Option<u64>,
        /// Write eigenvalue spectra as CSV files into this directory.
        #[arg(long)]
        dump_dir: Option<PathBuf>,
        /// Suppress wall-clock timing in the reports.
        #[arg(long)]
        no_timestamps: bool,
    },
}

fn dump_csv(dir: &PathBuf, name: &str, eigs: &[f64]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(format!("{name}.csv")), rp_cli::eigenvalue_csv(eigs))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { file, seed, dump_dir, no_timestamps } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", file.display());
                    return ExitCode::from(2);
                }
            };
            let scenario = match parse_scenario(&text) {
                Ok(s) => s,
                Err(e @ (CliError::Parse(_) | CliError::Schema(_))) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let (report, eigenvalues) =
                run_scenario_with_dump(&scenario, seed, !no_timestamps);
            if let (Some(dir), Some(eigs)) = (&dump_dir, &eigenvalues) {
                if let Err(e) = dump_csv(dir, &scenario.name, eigs) {
                    eprintln!("error: cannot write dump: {e}");
                    return ExitCode::from(2);
                }
            }
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            match report.verdict {
                rp_cli::ScenarioVerdict::Pass => ExitCode::SUCCESS,
                rp_cli::ScenarioVerdict::Fail => ExitCode::from(1),
                rp_cli::ScenarioVerdict::Error => ExitCode::from(2),
            }
        }
        Command::Suite { filter, seed, dump_dir, no_timestamps } => {
            let mut dump_error = None;
            let report =
                run_suite(filter.as_deref(), seed, !no_timestamps, |name, eigs| {
                    if let Some(dir) = &dump_dir {
                        if let Err(e) = dump_csv(dir, name, eigs) {
                            dump_error = Some(e.to_string());
                        }
                    }
                });
            if let Some(e) = dump_error {
                eprintln!("error: cannot write dump: {e}");
                return ExitCode::from(2);
            }
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            if report.errored > 0 {
                ExitCode::from(2)
            } else if report.all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
