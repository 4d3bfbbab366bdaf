use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use postvar::experiment::{
    plot_script, preset, presets, run_convergence_check, run_learning_curve,
    run_variance_experiment, ConfigError, ExperimentConfig, RunError,
};

#[derive(Parser)]
#[command(
    name = "postvar",
    version,
    about = "Gaussian-process posterior variance bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// TOML experiment config.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Shipped preset name (see `presets list`).
    #[arg(long)]
    preset: Option<String>,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; stdout when absent and the config sets none.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact posterior variance against the ball bounds.
    Variance(Source),
    /// Average learning curve and its bounds.
    LearningCurve {
        #[command(flatten)]
        source: Source,
        /// Subtract the noise variance from every column.
        #[arg(long)]
        subtract_noise: bool,
    },
    /// Ball-population growth check.
    Convergence(Source),
    /// Shipped presets.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
    /// Emit a gnuplot script for an experiment's CSV.
    PlotScript {
        #[command(flatten)]
        source: Source,
        /// CSV file the script should read.
        #[arg(long, default_value = "output.csv")]
        csv: String,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    List,
}

enum Failure {
    Run(RunError),
    Io(String),
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        Failure::Run(e)
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Run(e.into())
    }
}

fn load(source: &Source) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match (&source.config, &source.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
            ExperimentConfig::from_toml(&text)?
        }
        (None, Some(name)) => preset(name)?.config(),
        (None, None) => {
            return Err(Failure::Io(
                "one of --config or --preset is required".into(),
            ))
        }
    };
    if let Some(seed) = source.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &source.out {
        cfg.output = Some(out.display().to_string());
    }
    Ok(cfg)
}

fn emit(path: Option<&str>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::Io(format!("cannot write {p}: {e}")))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Variance(source) => {
            let cfg = load(&source)?;
            let csv = run_variance_experiment(&cfg)?;
            emit(cfg.output.as_deref(), &csv)
        }
        Command::LearningCurve {
            source,
            subtract_noise,
        } => {
            let cfg = load(&source)?;
            let csv = run_learning_curve(&cfg, subtract_noise)?;
            emit(cfg.output.as_deref(), &csv)
        }
        Command::Convergence(source) => {
            let cfg = load(&source)?;
            let out = run_convergence_check(&cfg)?;
            print!("{}", out.report);
            if cfg.output.is_none() {
                println!();
            }
            emit(cfg.output.as_deref(), &out.csv)
        }
        Command::Presets {
            action: PresetAction::List,
        } => {
            for p in presets() {
                println!("{:<32} {}", p.name, p.summary());
            }
            Ok(())
        }
        Command::PlotScript { source, csv } => {
            let cfg = load(&source)?;
            emit(cfg.output.as_deref(), &plot_script(cfg.experiment, &csv))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
