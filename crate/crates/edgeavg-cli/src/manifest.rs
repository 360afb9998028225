//! Run manifests: every command that writes result files into an output
//! directory also drops a `manifest.json` there recording the resolved
//! configuration, the produced files, and timing. The manifest is written
//! even when the run fails, with the error recorded.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

pub fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

pub struct ManifestData {
    pub command: &'static str,
    pub base_seed: u64,
    pub config: Value,
    pub started_ms: u64,
    pub outputs: Vec<PathBuf>,
    pub error: Option<String>,
}

pub fn write_manifest(dir: &Path, data: &ManifestData) -> std::io::Result<PathBuf> {
    let manifest = json!({
        "command": data.command,
        "artifact_version": env!("CARGO_PKG_VERSION"),
        "base_seed": data.base_seed,
        "config": data.config,
        "started_unix_ms": data.started_ms,
        "finished_unix_ms": now_ms(),
        "outputs": data.outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "error": data.error,
    });
    let path = dir.join("manifest.json");
    let mut file = std::fs::File::create(&path)?;
    writeln!(file, "{}", serde_json::to_string_pretty(&manifest)?)?;
    Ok(path)
}
