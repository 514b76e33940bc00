use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use lexseq::config::{Mode, Overrides, PipelineConfig};

/// Dictionary-based indexing and multiword phrase detection.
#[derive(Debug, Parser)]
#[command(name = "lexseq", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Index a record file: protocol, index terms, unknown tokens.
    Index(RunArgs),
    /// Analyze a corpus: sequence frequency tables and reports.
    Analyze(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Pipeline configuration file (TOML).
    config: PathBuf,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    workers: Option<usize>,
    /// Sequence keys to leave out of the reports, one per line.
    #[arg(long)]
    exclude: Option<PathBuf>,
    /// Ignore patterns longer than this (2..=8).
    #[arg(long)]
    max_pattern_len: Option<usize>,
    /// Override the configured input file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Override the configured output directory.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn execute(mode: Mode, args: RunArgs) -> anyhow::Result<()> {
    let mut config = PipelineConfig::load(&args.config, mode)?;
    config.apply(Overrides {
        input: args.input,
        output: args.output,
        workers: args.workers,
        exclude: args.exclude,
        max_pattern_len: args.max_pattern_len,
    });
    let summary = lexseq::run(&config).with_context(|| format!("{mode:?} run failed"))?;
    println!(
        "{} documents, {} tokens ({} identified, {} unknown, {} dropped), {} sequence occurrences ({} distinct)",
        summary.documents,
        summary.tokens,
        summary.identified,
        summary.unknown,
        summary.dropped,
        summary.sequence_occurrences,
        summary.distinct_sequences,
    );
    println!("output written to {}", config.output.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Index(args) => execute(Mode::Index, args),
        Command::Analyze(args) => execute(Mode::Analyze, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::debug!("{e:?}");
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
