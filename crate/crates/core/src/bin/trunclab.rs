use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use truncation_lab::harness::{self, ConfigOverrides, ExperimentConfig, ExperimentKind, HarnessError};

/// Monte Carlo experiments on eigenvalues of truncated Haar unitaries.
#[derive(Parser, Debug)]
#[command(name = "trunclab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate spectra, count eigenvalues outside radii, test the radial law.
    Spectrum(Flags),
    /// Distances from the empirical spectral measure to the limit, with bounds.
    Distance(Flags),
    /// Counts and maxima beyond radii against the kernel and the edge bound.
    Edge(Flags),
    /// Evaluate every explicit bound and constant (no simulation).
    Bounds(Flags),
    /// Scatter plots and radial histograms at m/n in {0.25, 0.75, 0.99}.
    Figure(Flags),
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Config file: `key = value` lines or a JSON object with the flag names.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Comma-separated radii.
    #[arg(long, value_delimiter = ',')]
    radius_grid: Option<Vec<f64>>,
    /// Comma-separated distances for the concentration bounds.
    #[arg(long, value_delimiter = ',')]
    distance_grid: Option<Vec<f64>>,
    /// w1 or dbl.
    #[arg(long)]
    metric: Option<String>,
    /// Reference sample size (default 10 m).
    #[arg(long)]
    metric_samples: Option<usize>,
    #[arg(long)]
    lp_cap: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
}

impl Flags {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            kind: None,
            n: self.n,
            m: self.m,
            trials: self.trials,
            seed: self.seed,
            workers: self.workers,
            metric: self.metric.clone(),
            metric_samples: self.metric_samples,
            radius_grid: self.radius_grid.clone(),
            distance_grid: self.distance_grid.clone(),
            lp_cap: self.lp_cap,
            out: self.out.clone(),
            format: self.format.clone(),
        }
    }
}

fn build_config(kind: ExperimentKind, flags: &Flags) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = ExperimentConfig {
        kind,
        ..ExperimentConfig::default()
    };
    if let Some(path) = &flags.config {
        cfg.apply(&ConfigOverrides::load(path)?)?;
        cfg.kind = kind;
    }
    cfg.apply(&flags.overrides())?;
    cfg.validate()?;
    Ok(cfg)
}

fn execute(kind: ExperimentKind, flags: &Flags) -> Result<bool, HarnessError> {
    let cfg = build_config(kind, flags)?;
    let outcome = harness::run(&cfg)?;
    for path in outcome.write(&cfg.out)? {
        println!("wrote {}", path.display());
    }
    for w in &outcome.warnings {
        println!("warning: {w}");
    }
    if !outcome.flagged.is_empty() {
        println!("flagged trials: {:?}", outcome.flagged);
    }
    for a in &outcome.assertions {
        let status = match (a.passed, a.hard) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "NOTE",
        };
        println!("{status} {}: {}", a.name, a.detail);
    }
    Ok(outcome.passed())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (kind, flags) = match &cli.command {
        Command::Spectrum(f) => (ExperimentKind::Spectrum, f),
        Command::Distance(f) => (ExperimentKind::Distance, f),
        Command::Edge(f) => (ExperimentKind::Edge, f),
        Command::Bounds(f) => (ExperimentKind::Bounds, f),
        Command::Figure(f) => (ExperimentKind::Figure, f),
    };
    match execute(kind, flags) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("one or more assertions failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
