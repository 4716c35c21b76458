//! Batch experiment driver: every verification and experiment is a
//! subcommand taking a JSON config and writing a JSON report plus one CSV
//! per table.
//!
//! Exit codes: 0 all checks pass, 1 a numerical check failed, 2 usage or
//! config error, 3 solver non-convergence.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use hncap_cli::commands;
use hncap_cli::config::{self, ExperimentConfig};

#[derive(Parser, Debug)]
#[command(
    name = "hncap",
    about = "Riesz capacities, equilibrium measures and Carleson-embedding experiments on the Heisenberg group",
    version
)]
struct Cli {
    /// Experiment to run
    #[arg(value_parser = SUBCOMMANDS)]
    subcommand: String,

    /// JSON config file (defaults are used when omitted)
    #[arg(long, env = "HNCAP_CONFIG")]
    config: Option<PathBuf>,

    /// Override the config seed
    #[arg(long, env = "HNCAP_SEED")]
    seed: Option<u64>,

    /// Output directory for reports and CSV tables
    #[arg(long, env = "HNCAP_OUT", default_value = "out")]
    out: PathBuf,

    /// Rayon thread count (results are thread-count independent)
    #[arg(long, env = "HNCAP_THREADS")]
    threads: Option<usize>,
}

const SUBCOMMANDS: [&str; 12] = [
    "verify-geometry",
    "verify-kernels",
    "norm-identity",
    "inner-product",
    "conv-identity",
    "a1",
    "maximal",
    "capacity",
    "strong-cap",
    "subcap",
    "carleson",
    "main-theorem",
];

fn error_record(kind: &str, message: &str, field: Option<String>) {
    let rec = serde_json::json!({
        "error": kind,
        "message": message,
        "field": field,
    });
    eprintln!("{rec}");
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, ExitCode> {
    let mut config = match &cli.config {
        None => ExperimentConfig::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                error_record("io", &format!("cannot read config {}: {e}", path.display()), None);
                ExitCode::from(2)
            })?;
            let de = &mut serde_json::Deserializer::from_str(&text);
            match serde_path_to_error::deserialize(de) {
                Ok(c) => c,
                Err(e) => {
                    error_record(
                        "config",
                        &format!("invalid config: {}", e.inner()),
                        Some(e.path().to_string()),
                    );
                    return Err(ExitCode::from(2));
                }
            }
        }
    };
    if config.schema_version != config::SCHEMA_VERSION {
        error_record(
            "config",
            &format!(
                "unsupported schema_version {} (expected {})",
                config.schema_version,
                config::SCHEMA_VERSION
            ),
            Some("schema_version".into()),
        );
        return Err(ExitCode::from(2));
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            error_record("usage", &format!("cannot configure thread pool: {e}"), None);
            return ExitCode::from(2);
        }
    }
    let config = match load_config(&cli) {
        Ok(c) => c,
        Err(code) => return code,
    };

    match commands::run(&cli.subcommand, &config) {
        Ok(report) => {
            let path = match report.write(&cli.out) {
                Ok(p) => p,
                Err(e) => {
                    error_record("io", &format!("cannot write report: {e}"), None);
                    return ExitCode::from(2);
                }
            };
            for c in &report.checks {
                println!(
                    "[{}] {} value={:.6e} target={:.6e} tol={:.1e}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.target,
                    c.tolerance
                );
            }
            println!(
                "{}: {} ({} checks) -> {}",
                cli.subcommand,
                if report.pass { "PASS" } else { "FAIL" },
                report.checks.len(),
                path.display()
            );
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            use hncap_core::Error as E;
            let code = match &e {
                E::InvalidParam(_) | E::AlphaRange { .. } | E::DimensionMismatch { .. } => 2,
                E::SolverDidNotConverge(_)
                | E::IllConditionedGram { .. }
                | E::EmptyTargetNodes
                | E::BudgetTooSmall(_)
                | E::NonFiniteSample { .. } => 3,
                _ => 3,
            };
            error_record("run", &format!("{e}"), None);
            ExitCode::from(code)
        }
    }
}
