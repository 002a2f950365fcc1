use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

/// One named pass/fail check performed by a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Assertion {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Record of one run. Everything except `wall_time_secs` is a pure function
/// of the resolved config (and seed), so two runs of the same config differ
/// only in that field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub kind: String,
    pub config: ExperimentConfig,
    /// File names (relative to the output directory) produced by the run.
    pub outputs: Vec<String>,
    pub assertions: Vec<Assertion>,
    /// Scalar results; BTreeMap keeps the serialized order stable.
    pub metrics: BTreeMap<String, serde_json::Value>,
    pub passed: bool,
    pub wall_time_secs: f64,
}

impl RunManifest {
    pub const FILE_NAME: &'static str = "manifest.json";

    /// Write atomically: serialize to a sibling temp file, then rename.
    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        let tmp = dir.join(".manifest.json.tmp");
        let path = dir.join(Self::FILE_NAME);
        let mut bytes = serde_json::to_vec_pretty(self).expect("manifest serializes");
        bytes.push(b'\n');
        std::fs::write(&tmp, bytes)?;
        std::fs::rename(tmp, path)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn metric_f64(&self, key: &str) -> Option<f64> {
        self.metrics.get(key).and_then(|v| v.as_f64())
    }
}
