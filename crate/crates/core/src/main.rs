use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use avs_channel::experiment::{
    cmd_capacity, cmd_compare, cmd_fit, cmd_parse_arrivals, cmd_sweep, cmd_trace, ExperimentConfig,
    FitInput, GainSource, TraceFormat, DEFAULT_BINS,
};

#[derive(Parser)]
#[command(name = "avs", version, about = "Vector-sensor shallow-water channel model and capacity experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config (key = value).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides mc.seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides mc.trials.
    #[arg(long)]
    trials: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Arr,
}

#[derive(Subcommand)]
enum Command {
    /// Image-method eigenrays of the configured scenario.
    Trace {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Convert a BELLHOP arrivals file to CSV.
    ParseArrivals {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the AoA scale map to arrivals, a points table or a traced config.
    Fit {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with_all = ["points", "config"])]
        arrivals: Option<PathBuf>,
        /// CSV with columns aoa_rad,gain_sq,weight.
        #[arg(long, conflicts_with = "config")]
        points: Option<PathBuf>,
        /// Overrides gain.bins.
        #[arg(long)]
        bins: Option<usize>,
    },
    /// Ergodic capacity and bounds at the configured SNR.
    Capacity {
        #[command(flatten)]
        common: Common,
    },
    /// Capacity table over the configured sweep.
    Sweep {
        #[command(flatten)]
        common: Common,
    },
    /// Vector sensor vs pressure-only vs bound across SNR.
    Compare {
        #[command(flatten)]
        common: Common,
    },
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_config(common: &Common) -> Result<ExperimentConfig, String> {
    let mut cfg = match &common.config {
        Some(p) => ExperimentConfig::parse(&read(p)?).map_err(|e| format!("{}: {e}", p.display()))?,
        None => ExperimentConfig::parse("").map_err(|e| e.to_string())?,
    };
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(t) = common.trials {
        cfg.trials = t;
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    let e = |err: avs_channel::experiment::ExperimentError| err.to_string();
    match cli.command {
        Command::Trace { common, format } => {
            let cfg = load_config(&common)?;
            let f = match format {
                Format::Csv => TraceFormat::Csv,
                Format::Arr => TraceFormat::Arrivals,
            };
            emit(&common.out, &cmd_trace(&cfg, f).map_err(e)?)
        }
        Command::ParseArrivals { file, out } => {
            let text = read(&file)?;
            let csv = cmd_parse_arrivals(&text).map_err(|err| format!("{}: {err}", file.display()))?;
            emit(&out, &csv)
        }
        Command::Fit {
            common,
            arrivals,
            points,
            bins,
        } => {
            let cfg = load_config(&common)?;
            let config_bins = match cfg.gain {
                GainSource::Fit { bins } => bins,
                GainSource::Explicit(_) => DEFAULT_BINS,
            };
            let bins = bins.unwrap_or(config_bins);
            let csv = if let Some(p) = &arrivals {
                let text = read(p)?;
                let name = p.display().to_string();
                cmd_fit(FitInput::Arrivals { name: &name, text: &text }, bins)
            } else if let Some(p) = &points {
                let text = read(p)?;
                let name = p.display().to_string();
                cmd_fit(FitInput::Points { name: &name, text: &text }, bins)
            } else {
                cmd_fit(FitInput::Trace(&cfg), bins)
            };
            emit(&common.out, &csv.map_err(e)?)
        }
        Command::Capacity { common } => {
            let cfg = load_config(&common)?;
            emit(&common.out, &cmd_capacity(&cfg).map_err(e)?)
        }
        Command::Sweep { common } => {
            let cfg = load_config(&common)?;
            emit(&common.out, &cmd_sweep(&cfg).map_err(e)?)
        }
        Command::Compare { common } => {
            let cfg = load_config(&common)?;
            emit(&common.out, &cmd_compare(&cfg).map_err(e)?)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
