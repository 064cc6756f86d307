use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qradar::scenario::{
    emit_report, parse_scenario, roc_csv, run_scenario_with, ReportFormat, RunOptions,
};
use qradar::Execution;

#[derive(Parser)]
#[command(
    name = "qradar",
    version,
    about = "Entangled-photon radar detection simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and print (or write) its report.
    Run {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value = "structured")]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write ROC points as CSV.
        #[arg(long)]
        roc_out: Option<PathBuf>,
        /// Override the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the scenario trial count.
        #[arg(long)]
        trials: Option<u64>,
        /// Split Monte Carlo work into this many partitions (results are unchanged).
        #[arg(long)]
        partitions: Option<u64>,
        /// Run the Monte Carlo stage on one thread.
        #[arg(long)]
        sequential: bool,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("qradar: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            scenario,
            format,
            out,
            roc_out,
            seed,
            trials,
            partitions,
            sequential,
        } => {
            let text = match fs::read_to_string(&scenario) {
                Ok(t) => t,
                Err(e) => return fail(2, format!("cannot read {}: {e}", scenario.display())),
            };
            let mut s = match parse_scenario(&text) {
                Ok(s) => s,
                Err(e) => return fail(e.exit_code() as u8, format!("{}: {e}", scenario.display())),
            };
            if let Some(seed) = seed {
                s.seed = seed;
            }
            if let Some(trials) = trials {
                s.trials = trials;
            }
            let opts = RunOptions {
                execution: if sequential {
                    Execution::Sequential
                } else {
                    Execution::Parallel
                },
                partitions,
            };
            let report = match run_scenario_with(&s, opts) {
                Ok(r) => r,
                Err(e) => return fail(e.exit_code() as u8, e),
            };
            let format = match format {
                Format::Table => ReportFormat::Table,
                Format::Structured => ReportFormat::Structured,
            };
            let text = match emit_report(&report, format) {
                Ok(t) => t,
                Err(e) => return fail(e.exit_code() as u8, e),
            };
            match out {
                Some(path) => {
                    if let Err(e) = fs::write(&path, text) {
                        return fail(1, format!("cannot write {}: {e}", path.display()));
                    }
                }
                None => print!("{text}"),
            }
            if let Some(path) = roc_out {
                let Some(points) = &report.roc else {
                    return fail(2, "--roc-out given but the scenario has no roc_thresholds");
                };
                if let Err(e) = fs::write(&path, roc_csv(points)) {
                    return fail(1, format!("cannot write {}: {e}", path.display()));
                }
            }
            ExitCode::SUCCESS
        }
    }
}
