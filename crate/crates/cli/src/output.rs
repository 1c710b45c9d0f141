//! Run-directory persistence: CSV artifacts, JSON sidecars, and the run
//! manifest (written last, as the commit marker).
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! given config and seed reproduce byte-identical CSV files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use longwave_core::invariants::ConservedTriple;
use longwave_core::limit::ErrorTrace;
use longwave_core::Field64;

use crate::AppError;

pub struct RunDir {
    root: PathBuf,
    files: Vec<String>,
    started_unix_ms: u128,
}

fn now_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

impl RunDir {
    pub fn create(root: &Path) -> Result<Self, AppError> {
        fs::create_dir_all(root)
            .map_err(|e| AppError::Io(format!("cannot create {}: {e}", root.display())))?;
        Ok(Self {
            root: root.to_path_buf(),
            files: Vec::new(),
            started_unix_ms: now_ms(),
        })
    }

    pub fn write_bytes(&mut self, rel: &str, bytes: &[u8]) -> Result<(), AppError> {
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)
                .map_err(|e| AppError::Io(format!("cannot create {}: {e}", parent.display())))?;
        }
        fs::write(&path, bytes)
            .map_err(|e| AppError::Io(format!("cannot write {}: {e}", path.display())))?;
        self.files.push(rel.to_string());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, rel: &str, value: &T) -> Result<(), AppError> {
        let mut bytes = serde_json::to_vec_pretty(value)
            .map_err(|e| AppError::Io(format!("JSON encode failure for {rel}: {e}")))?;
        bytes.push(b'\n');
        self.write_bytes(rel, &bytes)
    }

    /// Writes the manifest last and consumes the directory handle.
    pub fn finish(
        mut self,
        config_bytes: &[u8],
        seed: u64,
        status: &str,
        warnings: &[String],
    ) -> Result<(), AppError> {
        let manifest = Manifest {
            tool_version: env!("CARGO_PKG_VERSION"),
            config_sha256: hex_digest(config_bytes),
            seed,
            status: status.to_string(),
            started_unix_ms: self.started_unix_ms,
            finished_unix_ms: now_ms(),
            files: self.files.clone(),
            warnings: warnings.to_vec(),
        };
        self.write_json("manifest.json", &manifest)
    }
}

#[derive(Serialize)]
struct Manifest {
    tool_version: &'static str,
    config_sha256: String,
    seed: u64,
    status: String,
    started_unix_ms: u128,
    finished_unix_ms: u128,
    files: Vec<String>,
    warnings: Vec<String>,
}

pub fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn trace_csv(trace: &[(f64, Field64)]) -> Vec<u8> {
    let mut out = Vec::new();
    if let Some((_, first)) = trace.first() {
        let mut header = String::from("t");
        for j in 0..first.grid().n() {
            header.push_str(&format!(",u{j}"));
        }
        writeln!(out, "{header}").unwrap();
        for (t, f) in trace {
            let mut row = format!("{t}");
            for v in f.physical() {
                row.push_str(&format!(",{v}"));
            }
            writeln!(out, "{row}").unwrap();
        }
    }
    out
}

pub fn invariants_csv(log: &[(f64, ConservedTriple<f64>)]) -> Vec<u8> {
    let mut out = Vec::new();
    writeln!(out, "t,e0,e1,e2").unwrap();
    for (t, e) in log {
        writeln!(out, "{t},{},{},{}", e.e0, e.e1, e.e2).unwrap();
    }
    out
}

pub fn error_trace_csv(trace: &ErrorTrace<f64>) -> Vec<u8> {
    let mut out = Vec::new();
    writeln!(out, "t,error").unwrap();
    for (t, e) in trace.times.iter().zip(&trace.errors) {
        writeln!(out, "{t},{e}").unwrap();
    }
    out
}

/// Two-column whitespace-delimited plot data.
pub fn two_column(rows: &[(f64, f64)]) -> Vec<u8> {
    let mut out = Vec::new();
    for (a, b) in rows {
        writeln!(out, "{a} {b}").unwrap();
    }
    out
}
