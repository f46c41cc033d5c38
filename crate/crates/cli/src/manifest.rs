//! Run manifests embedded in every artifact.

use std::collections::BTreeMap;

use coarsekit::frozen::{frozen, Frozen, SOURCE};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

const MODULES: [&str; 6] = ["cayley", "stallings", "patterns", "ccomplex", "rigidity", "boundary"];

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[derive(Clone, Debug, Serialize)]
pub struct FrozenTable {
    pub version: u32,
    pub sha256: String,
    pub table: &'static Frozen,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    /// Arguments after the program name.
    pub command_line: Vec<String>,
    /// SHA-256 of the canonical JSON form of `config`.
    pub config_digest: String,
    /// Resolved options together with the digests of every input file.
    pub config: Value,
    pub seeds: Vec<u64>,
    pub versions: BTreeMap<String, String>,
    pub frozen: FrozenTable,
}

impl RunManifest {
    pub fn new(command_line: Vec<String>, config: Value, seeds: Vec<u64>) -> Self {
        let canonical = serde_json::to_vec(&config).expect("config serializes");
        let mut versions: BTreeMap<String, String> =
            MODULES.iter().map(|m| (m.to_string(), coarsekit::VERSION.to_string())).collect();
        versions.insert("cli".into(), env!("CARGO_PKG_VERSION").into());
        RunManifest {
            command_line,
            config_digest: sha256_hex(&canonical),
            config,
            seeds,
            versions,
            frozen: FrozenTable {
                version: frozen().version,
                sha256: sha256_hex(SOURCE.as_bytes()),
                table: frozen(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_tracks_config() {
        let a = RunManifest::new(vec![], serde_json::json!({"radius": 2}), vec![]);
        let b = RunManifest::new(vec![], serde_json::json!({"radius": 2}), vec![]);
        let c = RunManifest::new(vec![], serde_json::json!({"radius": 3}), vec![]);
        assert_eq!(a.config_digest, b.config_digest);
        assert_ne!(a.config_digest, c.config_digest);
        assert_eq!(a.versions.len(), MODULES.len() + 1);
    }
}
