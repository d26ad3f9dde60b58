mod args;
mod canon;
mod commands;
mod config;
mod error;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use sha2::{Digest, Sha256};

use args::Cli;
use canon::to_canonical_json;
use commands::{CsvTable, Outcome};
use config::{FileConfig, RunConfig};
use error::CliError;

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config_digest: String,
    config: &'a RunConfig,
    tolerances: &'a lieinv::linalg::Tolerances,
    exit_code: i32,
    result: &'a serde_value::Value,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
    exit_code: i32,
}

fn write_csv(dir: &Path, table: &CsvTable) -> Result<(), CliError> {
    let path = dir.join(format!("{}.csv", table.name));
    let shown = path.display().to_string();
    let mut w = csv::Writer::from_path(&path)
        .map_err(|e| CliError::io(shown.clone(), std::io::Error::other(e)))?;
    let io = |e: csv::Error| CliError::io(shown.clone(), std::io::Error::other(e));
    w.write_record(&table.header).map_err(io)?;
    for row in &table.rows {
        w.write_record(row).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(shown.clone(), e))
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let file = match &cli.overrides.config {
        Some(path) => config::load(path)?,
        None => FileConfig::default(),
    };
    let cfg = RunConfig::resolve(file, &cli.overrides)?;
    let Outcome {
        result,
        tables,
        exit,
    } = commands::run(cli.command, &cfg)?;
    let config_json = to_canonical_json(&cfg)?;
    let digest = hex::encode(Sha256::digest(config_json.as_bytes()));
    let report = to_canonical_json(&Envelope {
        tool: "lieinv",
        version: env!("CARGO_PKG_VERSION"),
        command: cli.command.name(),
        config_digest: digest,
        config: &cfg,
        tolerances: &cfg.tolerances,
        exit_code: exit,
        result: &result,
    })?;
    match &cfg.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display().to_string(), e))?;
            let path = dir.join(format!("{}.json", cli.command.name()));
            std::fs::write(&path, &report)
                .map_err(|e| CliError::io(path.display().to_string(), e))?;
            for t in &tables {
                write_csv(dir, t)?;
            }
            println!("{}", path.display());
        }
        None => print!("{report}"),
    }
    Ok(exit)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            let code = e.exit_code();
            let body = ErrorReport {
                error: ErrorBody {
                    kind: e.kind(),
                    message: e.to_string(),
                    exit_code: code,
                },
            };
            match to_canonical_json(&body) {
                Ok(s) => eprint!("{s}"),
                Err(_) => eprintln!("{e}"),
            }
            code
        }
    };
    ExitCode::from(code as u8)
}

#[cfg(test)]
mod tests;
