//! Output plumbing shared by every subcommand.
//!
//! All artifacts funnel through [`Run`] so the run manifest can record a
//! checksum per file. Output files themselves carry no timestamps; repeated
//! runs with the same config produce byte-identical artifacts, and only the
//! manifest records when the run happened.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// One run of one subcommand: resolved inputs, output directory and the
/// growing list of emitted artifacts.
pub struct Run {
    command: &'static str,
    config_path: PathBuf,
    config_sha256: String,
    out_dir: PathBuf,
    started_unix_ms: u128,
    started: Instant,
    outputs: Vec<OutputRecord>,
    /// Worker threads for grid evaluation; 0 means one per core.
    pub workers: usize,
    /// Override for adaptive-integral relative tolerances.
    pub tolerance: Option<f64>,
}

#[derive(Serialize)]
struct OutputRecord {
    file: String,
    sha256: String,
    bytes: usize,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    toolkit: String,
    command: &'a str,
    config: String,
    config_sha256: &'a str,
    started_unix_ms: u128,
    wall_time_ms: u128,
    outputs: &'a [OutputRecord],
}

impl Run {
    pub fn start(
        command: &'static str,
        config_path: &Path,
        out_dir: &Path,
        workers: usize,
        tolerance: Option<f64>,
    ) -> Result<Self> {
        let bytes = fs::read(config_path)
            .with_context(|| format!("cannot read config {}", config_path.display()))?;
        fs::create_dir_all(out_dir)
            .with_context(|| format!("cannot create output directory {}", out_dir.display()))?;
        Ok(Run {
            command,
            config_path: config_path.to_path_buf(),
            config_sha256: hex_digest(&bytes),
            out_dir: out_dir.to_path_buf(),
            started_unix_ms: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_millis())
                .unwrap_or(0),
            started: Instant::now(),
            outputs: Vec::new(),
            workers,
            tolerance,
        })
    }

    pub fn config_path(&self) -> &Path {
        &self.config_path
    }

    /// Directory input files named relative to the config resolve against.
    pub fn config_dir(&self) -> PathBuf {
        self.config_path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."))
    }

    /// Resolves a data-file path from a config: absolute paths pass
    /// through, relative ones are taken relative to the config file.
    pub fn resolve_input(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.config_dir().join(path)
        }
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_bytes(name, text.into_bytes())
    }

    /// Writes a CSV whose cells are already formatted. The csv crate
    /// handles quoting, so status messages may contain commas.
    pub fn write_table(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header)?;
        for row in rows {
            writer.write_record(row)?;
        }
        let bytes = writer.into_inner().context("flushing csv")?;
        self.write_bytes(name, bytes)
    }

    /// Writes an all-numeric CSV.
    pub fn write_csv(&mut self, name: &str, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
        let formatted: Vec<Vec<String>> = rows
            .iter()
            .map(|row| row.iter().map(|&v| cell(v)).collect())
            .collect();
        self.write_table(name, header, &formatted)
    }

    fn write_bytes(&mut self, name: &str, bytes: Vec<u8>) -> Result<()> {
        let path = self.out_dir.join(name);
        fs::write(&path, &bytes)
            .with_context(|| format!("cannot write {}", path.display()))?;
        self.outputs.push(OutputRecord {
            file: name.to_string(),
            sha256: hex_digest(&bytes),
            bytes: bytes.len(),
        });
        Ok(())
    }

    /// Writes the manifest and reports the artifact list on stdout.
    pub fn finish(self) -> Result<()> {
        let manifest = RunManifest {
            toolkit: format!("nanokerr {}", env!("CARGO_PKG_VERSION")),
            command: self.command,
            config: self.config_path.display().to_string(),
            config_sha256: &self.config_sha256,
            started_unix_ms: self.started_unix_ms,
            wall_time_ms: self.started.elapsed().as_millis(),
            outputs: &self.outputs,
        };
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        let path = self.out_dir.join("manifest.json");
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
        for record in &self.outputs {
            println!("{}  {}", record.sha256, self.out_dir.join(&record.file).display());
        }
        Ok(())
    }
}

/// Shortest round-trip formatting, matching the core CSV conventions.
pub fn cell(v: f64) -> String {
    format!("{v}")
}

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}
