use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Machine-readable record of one invocation. Identical inputs and flags
/// give identical reports unless `--timings` is set.
#[derive(Debug, Default, Serialize)]
pub struct RunReport {
    pub verb: String,
    pub kind: Option<String>,
    pub method: Option<String>,
    pub inputs: Vec<InputDigest>,
    pub num_vars: Option<usize>,
    pub oracle_calls: BTreeMap<String, usize>,
    pub provenance: BTreeMap<String, String>,
    pub warnings: Vec<String>,
    pub result: BTreeMap<String, serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl RunReport {
    pub fn new(verb: &str) -> Self {
        RunReport {
            verb: verb.to_string(),
            ..RunReport::default()
        }
    }

    pub fn digest_bytes(&mut self, label: &str, bytes: &[u8]) {
        self.inputs.push(InputDigest {
            path: label.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        });
    }

    /// A file, or a directory as the sorted sequence of its files' names and
    /// contents.
    pub fn digest_path(&mut self, path: &Path) -> std::io::Result<()> {
        let mut h = Sha256::new();
        if path.is_dir() {
            let mut entries: Vec<_> = fs::read_dir(path)?
                .filter_map(|e| e.ok())
                .map(|e| e.path())
                .filter(|p| p.is_file())
                .collect();
            entries.sort();
            for p in entries {
                let name = p
                    .file_name()
                    .unwrap_or_default()
                    .to_string_lossy()
                    .into_owned();
                h.update(name.as_bytes());
                h.update([0]);
                h.update(fs::read(&p)?);
                h.update([0]);
            }
        } else {
            h.update(fs::read(path)?);
        }
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(h.finalize()),
        });
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.result.insert(key.to_string(), v);
    }

    pub fn timing(&mut self, enabled: bool, key: &str, ms: f64) {
        if enabled {
            self.timings_ms
                .get_or_insert_with(BTreeMap::new)
                .insert(key.to_string(), ms);
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
