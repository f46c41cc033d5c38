//! Reading presentations, subgroups and closed sets from arguments and files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use coarsekit::boundary::{BoundaryModel, ClosedSet};
use coarsekit::presentation::Presentation;
use coarsekit::stallings::{CoreGraph, CoreGraphData, SubgroupPredicate};
use coarsekit::word::Word;

use crate::manifest::sha256_hex;
use crate::{Failure, SubgroupSpec};

/// Files read during one run, with their SHA-256 digests.
#[derive(Default)]
pub struct Inputs {
    pub digests: BTreeMap<String, String>,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let text = fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
        self.digests.insert(path.display().to_string(), sha256_hex(text.as_bytes()));
        Ok(text)
    }

    pub fn read_json(&mut self, path: &Path) -> Result<Value, Failure> {
        let text = self.read(path)?;
        serde_json::from_str(&text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
    }
}

pub fn words(p: &Presentation, texts: &[String]) -> Result<Vec<Word>, Failure> {
    texts.iter().map(|t| Ok(p.parse_word(t)?)).collect()
}

impl SubgroupSpec {
    pub fn presentation(&self) -> Presentation {
        Presentation::free(self.rank)
    }

    pub fn resolve(&self, inputs: &mut Inputs) -> Result<SubgroupPredicate, Failure> {
        if self.rank == 0 {
            return Err(Failure::Usage("--rank must be at least 1".into()));
        }
        if self.kernel {
            return Ok(SubgroupPredicate::AbelianizationKernel { rank: self.rank });
        }
        if let Some(path) = &self.core {
            let mut doc = inputs.read_json(path)?;
            if let Some(core) = doc.get_mut("result").and_then(|r| r.get_mut("core")) {
                doc = core.take();
            }
            let data: CoreGraphData =
                serde_json::from_value(doc).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
            if data.rank != self.rank {
                return Err(Failure::Domain(format!("core graph has rank {}, expected {}", data.rank, self.rank)));
            }
            return Ok(SubgroupPredicate::Core(CoreGraph::from_data(&data)?));
        }
        if self.generators.is_empty() {
            return Err(Failure::Usage("give the subgroup with --generator, --kernel or --core".into()));
        }
        let gens = words(&self.presentation(), &self.generators)?;
        Ok(SubgroupPredicate::Core(CoreGraph::fold(self.rank, &gens)?))
    }

    /// The core graph, for commands that need a finitely generated subgroup.
    pub fn resolve_core(&self, inputs: &mut Inputs) -> Result<CoreGraph, Failure> {
        match self.resolve(inputs)? {
            SubgroupPredicate::Core(h) => Ok(h),
            SubgroupPredicate::AbelianizationKernel { .. } => {
                Err(Failure::Domain("this command needs a finitely generated subgroup, not the kernel".into()))
            }
        }
    }
}

/// Closed-set file contents: a list of words, `{"words": [...]}`, or a
/// closed set as serialized by the library. A word shorter than the model
/// depth stands for its cylinder.
#[derive(Deserialize)]
#[serde(untagged)]
enum SetFile {
    Words(Vec<String>),
    Named { words: Vec<String> },
    Members { rank: usize, depth: usize, members: Vec<usize> },
}

pub fn closed_set(inputs: &mut Inputs, path: &Path, p: &Presentation, model: &BoundaryModel) -> Result<ClosedSet, Failure> {
    let doc = inputs.read_json(path)?;
    let file: SetFile = serde_json::from_value(doc)
        .map_err(|_| Failure::Domain(format!("{}: expected a word list or a closed set", path.display())))?;
    match file {
        SetFile::Words(w) | SetFile::Named { words: w } => Ok(model.closed_set(&words(p, &w)?)?),
        SetFile::Members { rank, depth, members } => {
            if rank != model.rank() || depth != model.depth() {
                return Err(Failure::Domain(format!(
                    "{}: closed set for rank {rank} depth {depth}, model has rank {} depth {}",
                    path.display(),
                    model.rank(),
                    model.depth()
                )));
            }
            Ok(ClosedSet::new(model, members)?)
        }
    }
}
