use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use ppvac::config::{Format, RunConfig};
use ppvac::runner;

#[derive(Debug, Parser)]
#[command(name = "ppvac", version, about = "Pump-probe signals with the vacuum stimulated-emission term")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Overrides `ensemble.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads; defaults to one per core.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Signal components over the configured sweep.
    Signal,
    /// Compare the closed forms with the quadrature oracle.
    Validate,
    /// Phase-sum statistics, superradiance ratio and beat visibility.
    Ensemble,
    /// Parameter table for the proposed experiment.
    ProposalReport,
}

enum Outcome {
    Pass,
    Fail,
}

fn load(cli: &Cli, required: bool) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_path(p)?,
        None if required => bail!("--config is required for this subcommand"),
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        match cfg.ensemble.as_mut() {
            Some(e) => e.seed = seed,
            None => bail!("--seed given but the config has no [ensemble] section"),
        }
    }
    Ok(cfg)
}

fn format(cli: &Cli, cfg: &RunConfig) -> Option<Format> {
    cli.format
        .map(|f| match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        })
        .or_else(|| cfg.output.as_ref().and_then(|o| o.format))
}

fn output_path(cli: &Cli, cfg: &RunConfig) -> Option<PathBuf> {
    cli.output
        .clone()
        .or_else(|| cfg.output.as_ref().and_then(|o| o.path.as_ref().map(PathBuf::from)))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn reports_are_json(cli: &Cli) -> Result<()> {
    if matches!(cli.format, Some(FormatArg::Csv)) {
        bail!("this subcommand writes JSON reports only");
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome> {
    match cli.command {
        Command::Signal => {
            let cfg = load(cli, true)?;
            let table = runner::run_signal(&cfg)?;
            let text = match format(cli, &cfg).unwrap_or(Format::Csv) {
                Format::Csv => table.to_csv(),
                Format::Json => json(&table)?,
            };
            emit(output_path(cli, &cfg).as_deref(), &text)?;
            Ok(Outcome::Pass)
        }
        Command::Validate => {
            reports_are_json(cli)?;
            let cfg = load(cli, true)?;
            let report = runner::run_validate(&cfg)?;
            emit(output_path(cli, &cfg).as_deref(), &json(&report)?)?;
            for f in &report.failures {
                eprintln!("FAIL {f}");
            }
            Ok(if report.pass { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Ensemble => {
            reports_are_json(cli)?;
            let cfg = load(cli, true)?;
            let report = runner::run_ensemble(&cfg)?;
            emit(output_path(cli, &cfg).as_deref(), &json(&report)?)?;
            Ok(Outcome::Pass)
        }
        Command::ProposalReport => {
            reports_are_json(cli)?;
            let cfg = load(cli, false)?;
            let out = runner::run_proposal(&cfg)?;
            let path = output_path(cli, &cfg);
            let as_json = matches!(format(cli, &cfg), Some(Format::Json));
            if path.is_some() || !as_json {
                print!("{}", out.report.to_text());
            }
            if path.is_some() || as_json {
                emit(path.as_deref(), &json(&out)?)?;
            }
            Ok(Outcome::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("cannot start the worker pool")
            .and_then(|pool| pool.install(|| run(&cli))),
        None => run(&cli),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
