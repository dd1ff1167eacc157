//! Run manifests: one JSON record per artifact-producing command.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// Where the master seed came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedSource {
    Flag,
    Config,
    Entropy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRecord {
    pub path: String,
    pub sha256: String,
    /// Data rows for tables, absent for other files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
}

impl InputRecord {
    pub fn of_bytes(path: &Path, bytes: &[u8], rows: Option<usize>) -> Self {
        InputRecord {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
            rows,
        }
    }

    pub fn of_file(path: &Path, rows: Option<usize>) -> CliResult<Self> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        Ok(Self::of_bytes(path, &bytes, rows))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_source: Option<SeedSource>,
    /// Worker threads; absent when the global pool was used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    /// Verbatim text of the project config, if one was read.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<String>,
    pub inputs: Vec<InputRecord>,
    /// Workspace-relative output paths, in write order.
    pub outputs: Vec<String>,
    /// Command-specific settings and results.
    pub details: BTreeMap<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub started_at: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::usage(format!("invalid manifest: {e}")))
    }
}

/// Wall-clock bookkeeping, suppressed by `--no-timestamp`.
#[derive(Debug)]
pub struct Clock {
    start: Instant,
    started_at: Option<String>,
}

impl Clock {
    pub fn start(enabled: bool) -> Self {
        let started_at = enabled.then(now_rfc3339);
        Clock {
            start: Instant::now(),
            started_at,
        }
    }

    pub fn started_at(&self) -> Option<&str> {
        self.started_at.as_deref()
    }

    pub fn stamp(&self, m: &mut RunManifest) {
        if self.started_at.is_some() {
            m.started_at = self.started_at.clone();
            m.elapsed_ms = Some(self.start.elapsed().as_millis() as u64);
        }
    }
}

fn now_rfc3339() -> String {
    time::OffsetDateTime::now_utc()
        .format(&time::format_description::well_known::Rfc3339)
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let m = RunManifest {
            command: "learn".into(),
            argv: vec!["beliefnet".into(), "learn".into()],
            tool_version: "0.1.0".into(),
            seed: Some(7),
            seed_source: Some(SeedSource::Flag),
            threads: None,
            config: Some("seed = 7\n".into()),
            inputs: vec![InputRecord::of_bytes(Path::new("a.csv"), b"x\n1\n", Some(1))],
            outputs: vec!["models/m.toml".into()],
            details: BTreeMap::from([("threshold".into(), serde_json::json!(0.5))]),
            started_at: None,
            elapsed_ms: None,
        };
        let text = m.to_json();
        assert!(!text.contains("started_at"));
        assert_eq!(RunManifest::from_json(&text).unwrap(), m);
        assert_eq!(m.inputs[0].sha256.len(), 64);
    }

    #[test]
    fn disabled_clock_leaves_no_trace() {
        let c = Clock::start(false);
        assert!(c.started_at().is_none());
        assert!(Clock::start(true).started_at().unwrap().contains('T'));
    }
}
