use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use relay_rates::cli::{self, CliError, Experiment, ExperimentConfig};

/// Achievable rates of relaying schemes on Gaussian relay channels.
#[derive(Debug, Parser)]
#[command(name = "relay-rates", version)]
struct Args {
    /// oneway-sweep, twrc-sum-sweep or twrc-region.
    #[arg(long)]
    experiment: Option<String>,
    /// Config file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Power budget of every node.
    #[arg(long)]
    p: Option<f64>,
    /// Path-loss exponent.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    d_min: Option<f64>,
    #[arg(long)]
    d_max: Option<f64>,
    #[arg(long)]
    d_steps: Option<usize>,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    coarse_steps: Option<usize>,
    #[arg(long)]
    refine_rounds: Option<usize>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
}

fn configure(args: &Args) -> Result<ExperimentConfig, CliError> {
    let mut cfg = ExperimentConfig::new(Experiment::OnewaySweep);
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        cfg.apply_text(&text)?;
    }
    if let Some(e) = &args.experiment {
        cfg.experiment = e.parse()?;
    } else if args.config.is_none() {
        return Err(CliError::Config(
            "--experiment or --config is required".into(),
        ));
    }
    cfg.p = args.p.or(cfg.p);
    cfg.gamma = args.gamma.unwrap_or(cfg.gamma);
    cfg.d_min = args.d_min.unwrap_or(cfg.d_min);
    cfg.d_max = args.d_max.unwrap_or(cfg.d_max);
    cfg.d_steps = args.d_steps.or(cfg.d_steps);
    cfg.coarse_steps = args.coarse_steps.or(cfg.coarse_steps);
    cfg.refine_rounds = args.refine_rounds.or(cfg.refine_rounds);
    if args.out.is_some() {
        cfg.out = args.out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(args: &Args) -> Result<(), CliError> {
    let cfg = configure(args)?;
    if let Some(jobs) = args.jobs {
        if jobs == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let csv = cli::run(&cfg)?.to_csv();
    match &cfg.out {
        Some(path) => std::fs::write(path, csv)?,
        None => std::io::stdout().lock().write_all(csv.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("relay-rates: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
