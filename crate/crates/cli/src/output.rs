//! Artifact writing. Every file carries the manifest of the run.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::json;

use crate::manifest::RunManifest;
use crate::Failure;

pub struct Output {
    dir: PathBuf,
    argv: Vec<String>,
}

impl Output {
    pub fn new(dir: PathBuf, argv: Vec<String>) -> Self {
        Output { dir, argv }
    }

    /// Fixes the manifest for `command` from its arguments, the digests of
    /// the files it read and its seeds.
    pub fn start(&self, command: &str, args: &impl Serialize, inputs: BTreeMap<String, String>, seeds: Vec<u64>) -> RunManifest {
        let config = json!({ "command": command, "args": args, "inputs": inputs });
        RunManifest::new(self.argv.clone(), config, seeds)
    }

    fn prepare(&self, file: &str) -> Result<PathBuf, Failure> {
        fs::create_dir_all(&self.dir)?;
        Ok(self.dir.join(file))
    }

    pub fn json(&self, manifest: &RunManifest, file: &str, result: &impl Serialize) -> Result<PathBuf, Failure> {
        let path = self.prepare(file)?;
        let doc = json!({ "manifest": manifest, "result": result });
        let mut text = serde_json::to_string_pretty(&doc).map_err(|e| Failure::Domain(e.to_string()))?;
        text.push('\n');
        fs::write(&path, text)?;
        Ok(path)
    }

    /// Writes a DOT graph with the manifest as a leading comment line.
    pub fn dot(&self, manifest: &RunManifest, file: &str, graph: &str) -> Result<PathBuf, Failure> {
        let path = self.prepare(file)?;
        let manifest = serde_json::to_string(&manifest).map_err(|e| Failure::Domain(e.to_string()))?;
        fs::write(&path, format!("// manifest: {manifest}\n{graph}"))?;
        Ok(path)
    }
}
