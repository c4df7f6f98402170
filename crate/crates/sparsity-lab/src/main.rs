use clap::{Parser, Subcommand};
use sparsity_lab::harness::{self, ExperimentConfig, HarnessError, OutputFormat};
use std::path::PathBuf;
use std::process::ExitCode;

/// Desk-scale experiments on sparse power representations of squares.
#[derive(Parser)]
#[command(name = "sparsity-lab", version, about)]
struct Cli {
    /// Flat key=value config file; CLI arguments override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format: csv or jsonl.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Workload budget (enumerated states). SPARSITY_LAB_BUDGET overrides.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Seed for any randomized sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    mode: Option<Mode>,
}

#[derive(Subcommand)]
enum Mode {
    /// Build a sieving prime set (g=, z=, alpha=, c1=).
    Sieve { params: Vec<String> },
    /// Count square tuples over an exponent box (c=, g=, K= or N=).
    CountSquares { params: Vec<String> },
    /// Count squares with few non-zero digits (g=, m=, K=).
    CountSparse { params: Vec<String> },
    /// Evaluate one character or exponential sum (kind=, ...).
    CharSum { params: Vec<String> },
    /// Check one stated bound or identity (lemma=, ...).
    VerifyLemma { params: Vec<String> },
    /// Bounded-exponent representation search (Q=, lambda=, c=, B=, N=).
    ApproxSearch { params: Vec<String> },
    /// Interval-verified tower counterexample (n=, bits=).
    #[command(name = "example-21")]
    Example21 { params: Vec<String> },
    /// Square-sieve statistics M, W, U, V (c=, g=, K=, z=, alpha=, c1=).
    SieveStats { params: Vec<String> },
    /// Counts against (log N)^m across a grid (c=, g=, N=).
    GrowthTable { params: Vec<String> },
}

impl Mode {
    fn name(&self) -> &'static str {
        match self {
            Mode::Sieve { .. } => "sieve",
            Mode::CountSquares { .. } => "count-squares",
            Mode::CountSparse { .. } => "count-sparse",
            Mode::CharSum { .. } => "char-sum",
            Mode::VerifyLemma { .. } => "verify-lemma",
            Mode::ApproxSearch { .. } => "approx-search",
            Mode::Example21 { .. } => "example-21",
            Mode::SieveStats { .. } => "sieve-stats",
            Mode::GrowthTable { .. } => "growth-table",
        }
    }

    fn params(&self) -> &[String] {
        match self {
            Mode::Sieve { params }
            | Mode::CountSquares { params }
            | Mode::CountSparse { params }
            | Mode::CharSum { params }
            | Mode::VerifyLemma { params }
            | Mode::ApproxSearch { params }
            | Mode::Example21 { params }
            | Mode::SieveStats { params }
            | Mode::GrowthTable { params } => params,
        }
    }
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = match &cli.mode {
        Some(mode) => ExperimentConfig::new(mode.name())?,
        None => ExperimentConfig::new("count-squares")?, // placeholder; config file must set mode
    };
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {}", path.display(), e)))?;
        cfg.apply_config_text(&text)?;
    }
    if let Some(mode) = &cli.mode {
        cfg.mode = mode.name().to_string();
        for pair in mode.params() {
            let (k, v) = pair.split_once('=').ok_or_else(|| {
                HarnessError::Config(format!("expected key=value argument, got {}", pair))
            })?;
            cfg.apply_pair(k, v)?;
        }
    } else if cli.config.is_none() {
        return Err(HarnessError::Config(
            "no mode given: pass a subcommand or --config with mode=".into(),
        ));
    }
    if let Some(fmt) = &cli.format {
        cfg.format = OutputFormat::parse(fmt)?;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(budget) = cli.budget {
        cfg.budget = budget;
    }
    if let Ok(env_budget) = std::env::var(harness::ENV_BUDGET) {
        cfg.budget = env_budget
            .parse()
            .map_err(|_| HarnessError::Config(format!("bad {} value {}", harness::ENV_BUDGET, env_budget)))?;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{}", e);
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match harness::execute(&cfg) {
        Ok(out) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &out.text) {
                    eprintln!("cannot write {}: {}", path.display(), e);
                    return ExitCode::from(1);
                }
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("{}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
