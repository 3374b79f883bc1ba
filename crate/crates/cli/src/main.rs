//! Command-line harness: run seeded scenarios from config files, execute
//! registry experiments, and query the stopping-ratio constant.
//!
//! Exit codes: 0 on success/pass, 2 when an experiment check fails or a
//! deviation audit finds witnesses, 1 on any error.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use fairdiv::harness::{
    list_experiments, run_experiment_with_workers, run_scenario_with_workers, AuditKind,
    ScenarioConfig, SummaryReport,
};

#[derive(Parser)]
#[command(name = "fairdiv", version, about = "Monte Carlo harness for truthful fair-division mechanisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    /// JSON summary report.
    Report,
    /// Flat CSV table, one row per trial.
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a TOML config file.
    Run {
        config: PathBuf,
        /// Override the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's trial count.
        #[arg(long)]
        trials: Option<usize>,
        /// Worker threads (default: FAIRDIV_WORKERS or all cores).
        #[arg(long)]
        workers: Option<usize>,
        /// Write output here instead of the config's `out` path / stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "report")]
        format: Format,
    },
    /// Run a named registry experiment and gate on its checks.
    Experiment {
        name: String,
        #[arg(long)]
        workers: Option<usize>,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List registry experiment names.
    ListExperiments,
    /// Solve the asymptotic optimal-stopping ratio and print it.
    Beta {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the deviation audit for a config's mechanism; exits 2 on witnesses.
    AuditDsic {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_config(path: &PathBuf, seed: Option<u64>, trials: Option<usize>) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let mut config = ScenarioConfig::from_toml_str(&text)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(trials) = trials {
        config.trials = trials;
    }
    config.validate()?;
    Ok(config)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn report_payload(report: &SummaryReport, format: Format) -> String {
    match format {
        Format::Report => {
            let mut json = report.to_json_pretty();
            json.push('\n');
            json
        }
        Format::Table => report.table_csv(),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, seed, trials, workers, out, format } => {
            let config = load_config(&config, seed, trials)?;
            let report = run_scenario_with_workers(&config, workers)?;
            let destination = out.or_else(|| report.config.out.clone());
            emit(&report_payload(&report, format), destination.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Experiment { name, workers, out } => {
            let report = run_experiment_with_workers(&name, workers)?;
            print!("{}", report.render());
            if let Some(path) = out {
                let mut json = report.to_json_pretty();
                json.push('\n');
                std::fs::write(&path, json)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::ListExperiments => {
            for (name, description) in list_experiments() {
                println!("{name}: {description}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Beta { out } => {
            let beta = fairdiv::prophet::solve_beta()?;
            let residual = (fairdiv::prophet::beta_equation_lhs(1.0 / beta) - 1.0).abs();
            let payload = serde_json::json!({
                "beta": beta,
                "reciprocal": 1.0 / beta,
                "equation_residual": residual,
            });
            emit(&format!("{}\n", serde_json::to_string_pretty(&payload)?), out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::AuditDsic { config, seed, workers, out } => {
            let mut config = load_config(&config, seed, None)?;
            config.audits = vec![AuditKind::Dsic];
            let report = run_scenario_with_workers(&config, workers)?;
            let witnesses = match &report.audits["dsic"] {
                fairdiv::harness::AuditOutcome::Dsic { witnesses, .. } => *witnesses,
                _ => 0,
            };
            emit(&report_payload(&report, Format::Report), out.as_ref())?;
            Ok(if witnesses == 0 { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
    }
}
