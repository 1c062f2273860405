use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Everything that determines a run's output.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub scene: Option<String>,
    pub params: serde_json::Value,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    config_hash: String,
    #[serde(flatten)]
    body: &'a T,
}

#[derive(Serialize)]
struct Meta<'a> {
    schema_version: u32,
    version: &'a str,
    command: &'a str,
    config_hash: String,
    config: &'a RunConfig,
    wall_time_s: f64,
}

pub fn json_text<T: Serialize>(config: &RunConfig, body: &T) -> Result<String> {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        command: &config.command,
        config_hash: config.hash(),
        body,
    };
    Ok(serde_json::to_string_pretty(&env)? + "\n")
}

pub fn csv_text<R: Serialize>(rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

/// `report.json` → `report.meta.json`.
pub fn meta_path(out: &Path) -> PathBuf {
    out.with_extension("meta.json")
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the main output to `--out` (plus its sidecar) or to stdout.
pub fn emit(config: &RunConfig, text: &str, elapsed: Duration) -> Result<()> {
    match &config.out {
        Some(path) => {
            write_file(path, text)?;
            let meta = Meta {
                schema_version: SCHEMA_VERSION,
                version: env!("CARGO_PKG_VERSION"),
                command: &config.command,
                config_hash: config.hash(),
                config,
                wall_time_s: elapsed.as_secs_f64(),
            };
            write_file(
                &meta_path(path),
                &(serde_json::to_string_pretty(&meta)? + "\n"),
            )
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}
