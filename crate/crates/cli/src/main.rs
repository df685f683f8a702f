use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use seqsel::harness::{
    bound_sweep, optimal_rows, selftest, sweep, with_workers, write_outputs, ExperimentConfig,
    ResultRow, Scale, SweepReport,
};

/// Sequence-selection simulations for probabilistic amplitude shaping over
/// a nonlinear WDM fiber link.
#[derive(Parser)]
#[command(name = "seqsel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full sweep over schemes, launch powers and numbers of test sequences.
    Run(RunArgs),
    /// Empirical sequence-selection bound at every configured power.
    Bound {
        #[command(flatten)]
        run: RunArgs,
        /// Acceptance rate (overrides the configuration).
        #[arg(long)]
        eta: Option<f64>,
        /// Candidate blocks per channel (overrides the configuration).
        #[arg(long)]
        m_total: Option<usize>,
    },
    /// Runs the built-in property checks.
    Selftest {
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Prints the resolved configuration as TOML.
    Config(ConfigArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// TOML file merged over the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Preset the file is merged over.
    #[arg(long, default_value = "desk", value_parser = ["desk", "paper"])]
    scale: String,
    /// Master seed (overrides the configuration).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads, 0 for one per core (overrides the configuration).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Result table; the summary and metadata sidecars are written next to it.
    #[arg(long, default_value = "results.csv")]
    out: PathBuf,
    /// Record per-point wall times in the table (makes it run-dependent).
    #[arg(long)]
    timing: bool,
}

fn load(args: &ConfigArgs) -> Result<ExperimentConfig> {
    let scale: Scale = args.scale.parse()?;
    let mut cfg = ExperimentConfig::load(scale, args.config.as_deref())
        .with_context(|| "loading configuration")?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(w) = args.workers {
        cfg.workers = w;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn print_summary(rows: &[ResultRow]) {
    println!("optimal launch power per scheme:");
    for r in optimal_rows(rows) {
        println!(
            "  {:<9} {:<4} N_t={:<4} P={:>5.1} dBm  SE={:.4} +- {:.4} bit/s/Hz",
            r.scheme, r.metric, r.n_t, r.power_dbm, r.se_bits_per_s_hz, r.ci95
        );
    }
}

fn finish(
    report: SweepReport,
    cfg: &ExperimentConfig,
    args: &RunArgs,
    command: &str,
    start: Instant,
) -> Result<ExitCode> {
    let report = if args.timing { report.with_timing() } else { report };
    write_outputs(&report, cfg, &args.out, command, start.elapsed().as_secs_f64())
        .with_context(|| format!("writing {}", args.out.display()))?;
    print_summary(&report.rows);
    println!("wrote {}", args.out.display());
    let failed = report.failures();
    if failed > 0 {
        eprintln!("{failed} point(s) failed; see the metadata file for diagnostics");
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => {
            let cfg = load(&args.config)?;
            let start = Instant::now();
            let report = with_workers(cfg.workers, || sweep(&cfg))?;
            finish(report, &cfg, &args, "run", start)
        }
        Command::Bound { run: args, eta, m_total } => {
            let mut cfg = load(&args.config)?;
            if let Some(e) = eta {
                cfg.bound.eta = e;
            }
            if let Some(m) = m_total {
                cfg.bound.m_total = m;
            }
            cfg.validate()?;
            let start = Instant::now();
            let report = with_workers(cfg.workers, || bound_sweep(&cfg))?;
            finish(report, &cfg, &args, "bound", start)
        }
        Command::Selftest { workers } => {
            let cases = with_workers(workers, selftest)?;
            let mut failed = 0;
            for c in &cases {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                failed += usize::from(!c.passed);
            }
            if failed > 0 {
                bail!("{failed} of {} selftest cases failed", cases.len());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Config(args) => {
            print!("{}", load(&args)?.to_toml());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
