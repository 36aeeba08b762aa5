use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nullprop_cli::{replay, run, write_report, CliError, Command, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(
    name = "nullprop",
    version,
    about = "Lower confidence bounds for the proportion of false null hypotheses"
)]
struct Cli {
    #[command(subcommand)]
    command: TopCommand,

    /// Seed for every random draw; generated and recorded when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t)]
    format: OutputFormat,

    /// Output file; stdout when absent.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for replicate loops. Results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum TopCommand {
    #[command(flatten)]
    Run(Command),
    /// Rerun the configuration stored in a JSON report and compare results.
    Replay { report: PathBuf },
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let report = match cli.command {
        TopCommand::Run(command) => run(&RunConfig {
            command,
            seed: cli.seed,
            format: cli.format,
            output: cli.output.clone(),
        })?,
        TopCommand::Replay { report } => replay(&report)?,
    };
    write_report(&report, cli.format, cli.output.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let err = CliError::Config(e.kind().to_string());
            eprintln!("{}", err.to_json());
            eprint!("{e}");
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    let outcome = match cli.workers {
        Some(workers) => match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            Ok(pool) => pool.install(|| execute(cli)),
            Err(e) => Err(CliError::Config(format!(
                "cannot start {workers} workers: {e}"
            ))),
        },
        None => execute(cli),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
