use clap::{Parser, Subcommand};
use gabor_diag::cli::{self, ExperimentConfig, RouteChoice};
use gabor_diag::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gabor-diag", version, about = "Gabor matrix decay and sparsity diagnostics")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Experiment config (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, overrides `output_dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for random test signals, overrides `seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    route: Option<RouteChoice>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    Stft,
    Frame,
    Matrix,
    Analyze,
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    List,
}

fn load(args: &Args) -> Result<ExperimentConfig, Error> {
    let path = args.config.as_ref().ok_or_else(|| Error::Config("--config is required".into()))?;
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(out) = &args.out {
        cfg.output_dir = out.to_string_lossy().into_owned();
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(route) = args.route {
        cfg.route = route;
    }
    Ok(cfg)
}

fn run(args: &Args) -> Result<(), Error> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("--threads: {e}")))?;
    }
    let written = match &args.command {
        Command::Corpus { action: CorpusAction::List } => {
            println!("{}", serde_json::to_string_pretty(&cli::corpus_list())?);
            return Ok(());
        }
        Command::Stft => cli::cmd_stft(&load(args)?)?,
        Command::Frame => cli::cmd_frame(&load(args)?)?,
        Command::Matrix => cli::cmd_matrix(&load(args)?)?,
        Command::Analyze => cli::cmd_analyze(&load(args)?)?,
    };
    for p in written {
        println!("{}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gabor-diag: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
