//! The `# {json}` provenance line written ahead of every CSV output.

use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::settings::Settings;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyEcho {
    pub series_tolerance: f64,
    pub series_max_terms: usize,
    pub contour_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    /// SHA-256 of the effective config (after overrides) in canonical JSON.
    pub config_sha256: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// RFC 3339 UTC; omitted from validation reports so reruns are byte-identical.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub policy: PolicyEcho,
    pub config: Value,
}

/// Canonical JSON: object keys sorted, no whitespace.
pub fn canonical_json(map: &Map<String, Value>) -> String {
    // serde_json's default Map is ordered by key.
    serde_json::to_string(map).expect("a JSON map always serializes")
}

pub fn config_hash(map: &Map<String, Value>) -> String {
    let digest = Sha256::digest(canonical_json(map).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl Manifest {
    pub fn new(command: &'static str, settings: &Settings, timestamped: bool) -> Self {
        Manifest {
            tool: "secrecy",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config_sha256: config_hash(&settings.raw),
            seed: None,
            samples: None,
            timestamp: timestamped
                .then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
            policy: PolicyEcho {
                series_tolerance: settings.series.tolerance,
                series_max_terms: settings.series.max_terms,
                contour_tolerance: settings.contour.tolerance,
            },
            config: Value::Object(settings.raw.clone()),
        }
    }

    pub fn with_run(mut self, seed: u64, samples: usize) -> Self {
        self.seed = Some(seed);
        self.samples = Some(samples);
        self
    }

    pub fn write_line(&self, out: &mut impl Write) -> std::io::Result<()> {
        let json = serde_json::to_string(self).expect("manifest fields always serialize");
        writeln!(out, "# {json}")
    }
}
