//! Artifact emission: `report.json`, `trace-*.csv` and `metadata.json`, each
//! written to a temporary sibling and renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::run::RunOutput;

/// Run facts that differ between otherwise identical runs; kept out of the report.
#[derive(Debug, Serialize)]
pub struct Metadata {
    pub timestamp_unix: u64,
    pub elapsed_seconds: f64,
    pub version: &'static str,
}

impl Metadata {
    pub fn now(elapsed: Duration) -> Self {
        Self {
            timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            elapsed_seconds: elapsed.as_secs_f64(),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> std::io::Result<PathBuf> {
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    let mut file = fs::File::create(&tmp)?;
    file.write_all(bytes)?;
    file.sync_all()?;
    fs::rename(&tmp, &target)?;
    Ok(target)
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("reports serialize to JSON");
    bytes.push(b'\n');
    bytes
}

/// Writes every artifact of `output` into `dir`, creating it if needed, and
/// returns the written paths.
pub fn write_outputs(dir: &Path, output: &RunOutput, metadata: &Metadata) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = vec![write_atomic(dir, "report.json", &to_json(&output.report))?];
    for trace in &output.traces {
        written.push(write_atomic(
            dir,
            &format!("trace-{}.csv", trace.name),
            trace.csv.as_bytes(),
        )?);
    }
    written.push(write_atomic(dir, "metadata.json", &to_json(metadata))?);
    Ok(written)
}
