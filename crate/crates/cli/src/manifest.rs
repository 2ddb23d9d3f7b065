use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

/// Record of one invocation. Two runs whose manifests agree on everything
/// except `wall_time_ms` produce identical output.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name.
    pub parameters: Vec<String>,
    /// Input path to SHA-256 of its contents.
    pub input_digests: BTreeMap<String, String>,
    pub output_paths: Vec<String>,
    pub wall_time_ms: u64,
    pub threads: usize,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
