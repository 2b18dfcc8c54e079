//! `christoffel`: reproducible, file-based runs of the christoffel-core
//! computations.
//!
//! Exit codes: 0 when every check passed, 2 for configuration errors, 3 for
//! tolerance failures, 4 for numeric breakdown.

mod commands;
mod config;
mod error;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser};
use serde::Serialize;
use serde_json::json;

use crate::config::{parse_z0, Command, RunConfig};
use crate::error::CliError;

const MANIFEST_SCHEMA: &str = "christoffel.manifest/1";
const SUMMARY_SCHEMA: &str = "christoffel.summary/1";
const TABLE_SCHEMA: &str = "christoffel.table/1";

#[derive(Debug, Parser)]
#[command(name = "christoffel", version, about = "Christoffel–Darboux kernel experiments")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Args)]
struct Flags {
    /// TOML or JSON run config; a previous run's manifest.json also works.
    /// Flags given on the command line take precedence over the file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Measure name (e.g. `uniform`, `chebyshev2`, `jacobi(0.5,-0.5)+0.2@3`)
    /// or path to a JSON measure file.
    #[arg(long, global = true)]
    measure: Option<String>,
    /// Degree.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Discretization resolution of an analytic measure.
    #[arg(long, global = true)]
    resolution: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    x0: Option<f64>,
    /// Complex point as `re,im`.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_z0)]
    z0: Option<[f64; 2]>,
    /// Point-mass weight.
    #[arg(long, global = true, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// `start:stop:step`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Zero-window half-width for `clock`.
    #[arg(long, global = true)]
    j: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Skip the independent recomputation in `update`.
    #[arg(long, global = true)]
    skip_oracle: bool,
}

impl Flags {
    fn to_config(&self, command: Option<Command>) -> RunConfig {
        RunConfig {
            command,
            measure: self.measure.clone(),
            resolution: self.resolution,
            n: self.n,
            x0: self.x0,
            z0: self.z0,
            lambda: self.lambda,
            grid: self.grid.clone(),
            tolerance: self.tolerance,
            j: self.j,
            output: self.output.clone(),
            seed: self.seed,
            skip_oracle: self.skip_oracle.then_some(true),
        }
    }
}

#[derive(Serialize)]
struct Artifact {
    file: String,
    schema: &'static str,
}

#[derive(Serialize)]
struct Manifest<'a> {
    schema: &'static str,
    tool: serde_json::Value,
    config: &'a RunConfig,
    artifacts: Vec<Artifact>,
    pass: bool,
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(CliError::io(path))
}

fn pretty(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Runs the command and writes its artifacts; returns whether all checks passed.
fn execute(cli: &Cli) -> Result<bool, CliError> {
    let mut cfg = match &cli.flags.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    cfg = cfg.overlay(cli.flags.to_config(cli.command));
    let resolved = cfg.resolve()?;
    let out_dir = resolved.output();
    std::fs::create_dir_all(&out_dir).map_err(CliError::io(&out_dir))?;

    let outcome = commands::run(&resolved)?;
    let name = resolved.command.name();
    let pass = outcome.pass();

    let mut artifacts = Vec::new();
    for (stem, table) in &outcome.tables {
        let file = format!("{stem}.csv");
        write(&out_dir.join(&file), &table.to_csv())?;
        artifacts.push(Artifact { file, schema: TABLE_SCHEMA });
    }
    let summary = json!({
        "schema": SUMMARY_SCHEMA,
        "command": name,
        "pass": pass,
        "checks": outcome.checks,
        "report": outcome.report,
    });
    write(&out_dir.join("summary.json"), &pretty(&summary))?;
    artifacts.push(Artifact {
        file: "summary.json".into(),
        schema: SUMMARY_SCHEMA,
    });
    let manifest = Manifest {
        schema: MANIFEST_SCHEMA,
        tool: json!({
            "name": "christoffel",
            "version": env!("CARGO_PKG_VERSION"),
            "coreVersion": christoffel_core::VERSION,
        }),
        config: &resolved.config,
        artifacts,
        pass,
    };
    write(&out_dir.join("manifest.json"), &pretty(&manifest))?;

    for c in &outcome.checks {
        eprintln!(
            "{name}: {} max error {:e} (tolerance {:e}) {}",
            c.experiment,
            c.max_error,
            c.tolerance,
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.flags.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("christoffel: cannot start thread pool: {e}");
            return ExitCode::from(2);
        }
    };
    let result = pool.install(|| execute(&cli));
    eprintln!("christoffel: finished in {:.3}s", start.elapsed().as_secs_f64());
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("christoffel: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
