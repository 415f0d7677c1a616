use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use timerev::io::{self, AnalysisConfig, Overrides};
use timerev::{harness::StatRequest, reverse, Error, ProcessSpec, Series, SimConfig};

#[derive(Parser)]
#[command(
    name = "timerev",
    version,
    about = "Time-reversal asymmetry statistics for financial time series"
)]
struct Cli {
    /// Worker threads for ensembles (default: all cores).
    #[arg(long, global = true, env = "TIMEREV_WORKERS")]
    workers: Option<usize>,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the statistics and curve data of a log-price CSV.
    Analyze {
        /// Two-column CSV: tick (or ISO timestamp) and log price
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate one path of a process and write it as CSV.
    Simulate {
        /// Preset name (gaussian_rw, garch11, lm_arch, ...)
        #[arg(long)]
        process: String,
        #[command(flatten)]
        common: Common,
        /// Master seed (overrides the config file)
        #[arg(long)]
        seed: Option<u64>,
        /// Output CSV file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo table (mean, stdDev, p-value) for a process.
    Ensemble {
        /// Preset name (gaussian_rw, garch11, lm_arch, ...)
        #[arg(long)]
        process: String,
        /// Number of Monte Carlo runs (default 200)
        #[arg(long)]
        runs: Option<usize>,
        /// Master seed (overrides the config file)
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print version information.
    Version,
    /// Run quick internal consistency checks.
    Selftest,
}

#[derive(Args)]
struct Common {
    /// Configuration file with `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn resolve(config: Option<&Path>, overrides: Overrides) -> timerev::Result<AnalysisConfig> {
    let entries = match config {
        Some(p) => io::read_config_file(p)?,
        None => Vec::new(),
    };
    AnalysisConfig::resolve(&entries, &overrides)
}

fn run(cli: Cli) -> Result<(), (&'static str, Error)> {
    let workers = cli.workers;
    match cli.command {
        Command::Analyze { input, common, out } => {
            let cfg = resolve(
                common.config.as_deref(),
                Overrides {
                    input: Some(input),
                    workers,
                    ..Default::default()
                },
            )
            .map_err(|e| ("analyze", e))?;
            for f in io::run_analyze(&cfg, &out).map_err(|e| ("analyze", e))? {
                println!("{}", f.display());
            }
        }
        Command::Simulate {
            process,
            common,
            seed,
            out,
        } => {
            let overrides = Overrides {
                process: Some(process),
                seed,
                workers,
                ..Default::default()
            };
            let cfg = resolve(common.config.as_deref(), overrides).map_err(|e| ("simulate", e))?;
            io::run_simulate(&cfg, &out).map_err(|e| ("simulate", e))?;
            println!("{}", out.display());
        }
        Command::Ensemble {
            process,
            runs,
            seed,
            common,
            out,
        } => {
            let overrides = Overrides {
                process: Some(process),
                seed,
                runs,
                workers,
                ..Default::default()
            };
            let cfg = resolve(common.config.as_deref(), overrides).map_err(|e| ("ensemble", e))?;
            for f in io::run_ensemble_job(&cfg, &out).map_err(|e| ("ensemble", e))? {
                println!("{}", f.display());
            }
        }
        Command::Version => println!("timerev {}", env!("CARGO_PKG_VERSION")),
        Command::Selftest => unreachable!("handled in main"),
    }
    Ok(())
}

fn selftest() -> anyhow::Result<bool> {
    let mut ok = true;
    let mut check = |name: &str, pass: bool| {
        println!("{} {name}", if pass { "PASS" } else { "FAIL" });
        ok &= pass;
    };

    let spec = ProcessSpec::preset("garch11")?;
    let x: Series = timerev::simulate(&spec, &SimConfig::new(60_000, 11))?;
    let req = StatRequest::all();
    let fwd = req.evaluate(&x).map_err(|(id, e)| anyhow::anyhow!("{id}: {e}"))?;
    let bwd = req
        .evaluate(&reverse(&x))
        .map_err(|(id, e)| anyhow::anyhow!("{id}: {e}"))?;
    for ((id, a), (_, b)) in fwd.iter().zip(&bwd) {
        check(&format!("reversal antisymmetry of {id}"), (a + b).abs() <= 1e-10);
    }

    let dir = std::env::temp_dir().join(format!("timerev-selftest-{}", std::process::id()));
    std::fs::create_dir_all(&dir).context("creating scratch directory")?;
    let path = dir.join("path.csv");
    io::save_series_csv(&x, &path, &[])?;
    let back: Series = io::load_series_csv(&path)?;
    let _ = std::fs::remove_dir_all(&dir);
    check("csv round trip", back == x);
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    if matches!(cli.command, Command::Selftest) {
        return match selftest() {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::FAILURE,
            Err(e) => {
                eprintln!("selftest error: {e:#}");
                ExitCode::FAILURE
            }
        };
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((job, err)) => {
            eprintln!("{}", io::error_report(job, &err));
            ExitCode::FAILURE
        }
    }
}
