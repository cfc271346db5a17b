use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nslayer::harness::{
    emit_report, read_report_json, run_corrected_rates, run_corrector_checks, run_corrector_scalings,
    run_inequality_suite, run_torus_suite, run_uncorrected_rates, run_uniform_rates, ConvergenceReport,
    ReportFormat, StudyConfig, StudyKind,
};
use nslayer::Error;

/// Environment variable holding the worker-thread count.
const THREADS_VAR: &str = "NSLAYER_THREADS";

#[derive(Parser)]
#[command(name = "nslayer", version, about = "Vanishing-viscosity rate studies for Navier-slip channel flow")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Plain-text `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Do not write report files.
    #[arg(long)]
    no_emit: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum RateKind {
    Uncorrected,
    Corrected,
    Uniform,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Convergence rates of u^ε toward the Euler solution.
    Converge {
        #[arg(long, value_enum)]
        kind: RateKind,
        /// Replace the corrector by zero (corrected study only).
        #[arg(long)]
        zero_corrector: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Explicit corrector: ε-scalings or structural checks.
    Corrector {
        #[arg(long, conflicts_with = "check", required_unless_present = "check")]
        scalings: bool,
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Agmon, trace and integration-by-parts inequalities.
    Inequalities {
        #[command(flatten)]
        common: Common,
    },
    /// Corrector on the torus collar.
    Torus {
        #[command(flatten)]
        common: Common,
    },
    /// Re-emit a saved JSON report.
    Emit {
        /// JSON report written by an earlier run.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        prefix: Option<String>,
    },
}

enum Failure {
    Config(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Parse(_) => Failure::Config(e.to_string()),
            _ => Failure::Run(e.to_string()),
        }
    }
}

fn load(common: &Common, kind: StudyKind) -> Result<StudyConfig, Failure> {
    let mut cfg = match &common.config {
        Some(p) => StudyConfig::from_file(p)?,
        None => StudyConfig::for_kind(kind),
    };
    cfg.kind = kind;
    if let Some(o) = &common.out {
        cfg.output_dir = o.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn print_report(r: &ConvergenceReport) {
    for f in &r.fits {
        let status = if f.pass { "PASS" } else { "FAIL" };
        match (&f.fit, &f.target) {
            (Some(fit), Some(t)) => {
                let hi = t.hi.map_or("inf".to_string(), |h| format!("{h:.4}"));
                println!(
                    "{status} {:<28} slope {:>8.4}  r2 {:.5}  target {:.4} band [{:.4}, {hi}]",
                    f.series, fit.slope, fit.r_squared, t.exponent, t.lo
                );
            }
            (Some(fit), None) => println!("---- {:<28} slope {:>8.4}  r2 {:.5}", f.series, fit.slope, fit.r_squared),
            (None, _) => println!("{status} {:<28} {}", f.series, f.error.as_deref().unwrap_or("no fit")),
        }
    }
    for c in &r.checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        println!("{status} {:<28} {:.4e} (threshold {:.4e})  {}", c.name, c.value, c.threshold, c.detail);
    }
    for f in &r.failures {
        println!("FAIL epsilon {:e}: {}", f.epsilon, f.error);
    }
    for n in &r.notes {
        println!("note: {n}");
    }
    println!("wall clock {:.2} s", r.wall_clock.total_seconds);
}

fn finish(r: ConvergenceReport, common: &Common) -> Result<bool, Failure> {
    print_report(&r);
    if !common.no_emit {
        let dir = &r.config.output_dir;
        let prefix = &r.config.output_prefix;
        for format in [ReportFormat::Json, ReportFormat::Csv] {
            for p in emit_report(&r, dir, prefix, format)? {
                println!("wrote {}", p.display());
            }
        }
    }
    Ok(r.passed())
}

fn emit(input: &Path, format: Format, out: &Path, prefix: Option<String>) -> Result<bool, Failure> {
    let r = read_report_json(input)?;
    let prefix = prefix.unwrap_or_else(|| r.config.output_prefix.clone());
    let format = match format {
        Format::Csv => ReportFormat::Csv,
        Format::Json => ReportFormat::Json,
    };
    for p in emit_report(&r, out, &prefix, format)? {
        println!("wrote {}", p.display());
    }
    Ok(true)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Failure::Config(format!("{THREADS_VAR} must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Run(e.to_string()))
}

fn run(cli: Cli) -> Result<bool, Failure> {
    configure_threads()?;
    match cli.command {
        Command::Converge {
            kind,
            zero_corrector,
            common,
        } => {
            let sk = match kind {
                RateKind::Uncorrected => StudyKind::UncorrectedRates,
                RateKind::Corrected => StudyKind::CorrectedRates,
                RateKind::Uniform => StudyKind::UniformRates,
            };
            let mut cfg = load(&common, sk)?;
            cfg.zero_corrector |= zero_corrector;
            let r = match kind {
                RateKind::Uncorrected => run_uncorrected_rates(&cfg)?,
                RateKind::Corrected => run_corrected_rates(&cfg)?,
                RateKind::Uniform => run_uniform_rates(&cfg)?,
            };
            finish(r, &common)
        }
        Command::Corrector { scalings, common, .. } => {
            let cfg = load(&common, StudyKind::CorrectorScalings)?;
            let r = if scalings {
                run_corrector_scalings(&cfg)?
            } else {
                run_corrector_checks(&cfg)?
            };
            finish(r, &common)
        }
        Command::Inequalities { common } => {
            let cfg = load(&common, StudyKind::InequalitySuite)?;
            finish(run_inequality_suite(&cfg)?, &common)
        }
        Command::Torus { common } => {
            let cfg = load(&common, StudyKind::TorusSuite)?;
            finish(run_torus_suite(&cfg)?, &common)
        }
        Command::Emit {
            input,
            format,
            out,
            prefix,
        } => emit(&input, format, &out, prefix),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
