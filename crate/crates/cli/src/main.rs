use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hybrid_secrecy::secrecy::MetricKind;
use secrecy_cli::sample::{draw, write_samples, Channel, Link};
use secrecy_cli::settings::write_eval;
use secrecy_cli::sweep::write_sweep;
use secrecy_cli::{exit, load_settings, parse_metric, run_eval, run_sweep, run_validate, CliError, CliResult, SweepSpec};

#[derive(Parser)]
#[command(name = "secrecy", version, about = "Secrecy metrics of cognitive underlay hybrid RF/FSO links")]
struct Cli {
    /// Target relative tolerance for series and contour integrals.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Override a config key, e.g. `--set psi_q_db=5`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Sop,
    Spsc,
    Est,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChannelArg {
    AlphaMu,
    Malaga,
}

#[derive(Clone, Copy, ValueEnum)]
enum LinkArg {
    Sr,
    Sp,
    Se,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one metric.
    Eval {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        metric: Metric,
        /// Overrides the config's scenario (1 or 2).
        #[arg(long)]
        scenario: Option<u8>,
    },
    /// Evaluate metrics on an evenly spaced grid of one config key.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Config key (e.g. `psi_q_db`) or dotted path (e.g. `pc.psi_q_db`).
        #[arg(long)]
        axis: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        points: usize,
        /// Comma-separated subset of sop, spsc, est.
        #[arg(long, default_value = "sop")]
        metrics: String,
        #[arg(long)]
        scenario: Option<u8>,
    },
    /// Compare analytic metrics and distribution functions with Monte-Carlo runs.
    Validate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Dump SNR draws of one channel.
    Sample {
        #[arg(long, value_enum)]
        channel: ChannelArg,
        /// RF link for `alpha-mu`.
        #[arg(long, value_enum, default_value = "sr")]
        link: LinkArg,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn configure_workers() -> CliResult<()> {
    let Ok(v) = std::env::var("SECRECY_WORKERS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("SECRECY_WORKERS={v:?} must be a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size worker pool: {e}")))
}

fn with_scenario(mut overrides: Vec<String>, scenario: Option<u8>) -> Vec<String> {
    if let Some(s) = scenario {
        overrides.push(format!("scenario={s}"));
    }
    overrides
}

fn run(cli: Cli, out: &mut dyn Write) -> CliResult<i32> {
    configure_workers()?;
    let mut out = out;
    match cli.command {
        Command::Eval { config, metric, scenario } => {
            let s = load_settings(&config, &with_scenario(cli.overrides, scenario), cli.tolerance)?;
            let kind = match metric {
                Metric::Sop => MetricKind::SopLower,
                Metric::Spsc => MetricKind::Spsc,
                Metric::Est => MetricKind::Est,
            };
            let row = run_eval(&s, kind)?;
            write_eval(&s, &row, &mut out)?;
        }
        Command::Sweep { config, axis, from, to, points, metrics, scenario } => {
            let s = load_settings(&config, &with_scenario(cli.overrides, scenario), cli.tolerance)?;
            let metrics = metrics.split(',').map(parse_metric).collect::<CliResult<Vec<_>>>()?;
            let spec = SweepSpec { axis, from, to, points, metrics };
            let rows = run_sweep(&s, &spec)?;
            write_sweep(&s, &spec, &rows, &mut out)?;
        }
        Command::Validate { config, samples, seed } => {
            let s = load_settings(&config, &cli.overrides, cli.tolerance)?;
            let report = run_validate(&s, &s, samples, seed)?;
            report.write(&mut out)?;
            if !report.passed() {
                eprintln!("validation failed: {}", report.failures().join(", "));
                return Ok(exit::VALIDATION_FAILED);
            }
        }
        Command::Sample { channel, link, config, n, seed } => {
            let s = load_settings(&config, &cli.overrides, cli.tolerance)?;
            let channel = match channel {
                ChannelArg::AlphaMu => Channel::AlphaMu,
                ChannelArg::Malaga => Channel::Malaga,
            };
            let link = match link {
                LinkArg::Sr => Link::SourceRelay,
                LinkArg::Sp => Link::SourcePrimary,
                LinkArg::Se => Link::SourceEavesdropper,
            };
            let xs = draw(&s, channel, link, n, seed)?;
            write_samples(&s, &xs, seed, &mut out)?;
        }
    }
    out.flush()?;
    Ok(exit::OK)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // Help and version requests are not errors.
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { exit::OK as u8 });
        }
    };
    let result = match &cli.out {
        Some(path) => match File::create(path) {
            Ok(f) => run(cli, &mut BufWriter::new(f)),
            Err(e) => Err(CliError::Io(e)),
        },
        None => run(cli, &mut std::io::stdout().lock()),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error [{}]: {e}", e.category());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
