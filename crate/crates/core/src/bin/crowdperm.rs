use std::fs::File;
use std::io::{self, BufReader, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crowdperm::harness::{self, ExperimentConfig};
use crowdperm::scenarios::ScenarioKind;

#[derive(Parser)]
#[command(
    name = "crowdperm",
    version,
    about = "Crowd-labeling estimators and simulation harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the trials described by a config file and write per-trial CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's `output` key; stdout when neither is set.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; 0 uses all available cores.
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Aggregate a per-trial CSV into per-point statistics.
    Summarize {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// List the available scenarios.
    ListScenarios,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> crowdperm::Result<ExitCode> {
    match cli.command {
        Command::Run {
            config,
            out,
            threads,
        } => {
            let config = ExperimentConfig::from_file(&config)?;
            let report = harness::run(&config, threads)?;
            match out.or_else(|| config.output.clone()) {
                Some(path) => {
                    harness::write_results(BufWriter::new(File::create(path)?), &report.rows)?
                }
                None => harness::write_results(io::stdout().lock(), &report.rows)?,
            }
            if report.failures.is_empty() {
                return Ok(ExitCode::SUCCESS);
            }
            for f in &report.failures {
                let est = f.estimator.map(|e| format!(" [{e}]")).unwrap_or_default();
                eprintln!(
                    "point {}={}{est}: {}",
                    config.sweep_param, f.sweep_value, f.message
                );
            }
            Ok(ExitCode::from(2))
        }
        Command::Summarize { input } => {
            let rows = harness::read_results(BufReader::new(File::open(input)?))?;
            if rows.is_empty() {
                return Err(crowdperm::Error::InvalidParameter(
                    "no rows to summarize".into(),
                ));
            }
            harness::write_summary(io::stdout().lock(), &harness::summarize(&rows))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ListScenarios => {
            for k in ScenarioKind::ALL {
                println!("{:<14} {}", k.name(), k.description());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
