use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::altembed::{GroupChain, GroupChainSpec};
use crate::error::{Error, Result};
use crate::permcore::DEFAULT_DEGREE_CAP;
use crate::shrinklab::{Prefix, ShrinkCertificate};
use crate::treeauto::{SpinePair, Tree, TreeShape};

fn default_start() -> usize {
    1
}

fn default_horizon() -> usize {
    6
}

/// Scenario file:
///
/// ```json
/// {"id": "c2", "group": {"generators": ["s"], "quotients": [...]},
///  "start_level": 1, "horizon": 6,
///  "spine": {"alpha": [..], "beta": [..]}}
/// ```
///
/// `group` may be replaced by `group_file` and `spine` by `certificate`
/// (a shrink certificate whose prefix is used). Relative paths are
/// resolved against the scenario file. Levels beyond the given spine use
/// `(min Y, min Y')`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupChainSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_file: Option<String>,
    #[serde(default = "default_start")]
    pub start_level: usize,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spine: Option<Prefix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_cap: Option<usize>,
}

/// A resolved scenario: `G` as a quotient chain, `Q = Alt(5)`, the tree
/// shape up to the horizon and a spine with `α_i ∈ Y_i`, `β_i ∈ Y_i'`.
#[derive(Debug, Clone)]
pub struct GammaScenario {
    id: String,
    chain: GroupChain,
    start: usize,
    degree_cap: usize,
    given_spine: Option<Prefix>,
    tree: Arc<Tree>,
    provenance: BTreeMap<String, String>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

impl GammaScenario {
    /// Builds a scenario directly. `spine` covers some prefix of the levels
    /// starting at `start`; the rest is filled with `(min Y, min Y')`.
    pub fn new(
        id: &str,
        chain: GroupChain,
        start: usize,
        horizon: usize,
        spine: Option<Prefix>,
    ) -> Result<Self> {
        Self::with_cap(id, chain, start, horizon, spine, DEFAULT_DEGREE_CAP)
    }

    pub fn with_cap(
        id: &str,
        chain: GroupChain,
        start: usize,
        horizon: usize,
        spine: Option<Prefix>,
        degree_cap: usize,
    ) -> Result<Self> {
        let tree = build_tree(&chain, start, horizon, spine.as_ref(), degree_cap)?;
        Ok(GammaScenario {
            id: id.to_string(),
            chain,
            start,
            degree_cap,
            given_spine: spine,
            tree,
            provenance: BTreeMap::new(),
        })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let bytes = read(path)?;
        let spec: ScenarioSpec = serde_json::from_slice(&bytes)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let mut provenance = BTreeMap::new();
        provenance.insert(path.display().to_string(), sha256_hex(&bytes));
        Self::from_spec(&spec, &base, provenance)
    }

    /// Resolves a spec; `base` is the directory relative paths refer to.
    pub fn from_spec(
        spec: &ScenarioSpec,
        base: &Path,
        mut provenance: BTreeMap<String, String>,
    ) -> Result<Self> {
        let resolve = |p: &str| -> PathBuf { base.join(p) };
        let group = match (&spec.group, &spec.group_file) {
            (Some(g), None) => g.clone(),
            (None, Some(f)) => {
                let path = resolve(f);
                let bytes = read(&path)?;
                provenance.insert(path.display().to_string(), sha256_hex(&bytes));
                serde_json::from_slice(&bytes)?
            }
            _ => {
                return Err(Error::config(
                    "scenario needs exactly one of group and group_file",
                ))
            }
        };
        let chain = GroupChain::from_spec(&group)?;
        let spine = match (&spec.spine, &spec.certificate) {
            (Some(s), None) => Some(s.clone()),
            (None, Some(f)) => {
                let path = resolve(f);
                let bytes = read(&path)?;
                provenance.insert(path.display().to_string(), sha256_hex(&bytes));
                let cert: ShrinkCertificate = serde_json::from_slice(&bytes)?;
                if cert.start != spec.start_level {
                    return Err(Error::config(
                        "certificate starts at a different level than the scenario",
                    ));
                }
                Some(cert.prefix)
            }
            (None, None) => None,
            (Some(_), Some(_)) => {
                return Err(Error::config("scenario has both spine and certificate"))
            }
        };
        let cap = spec.degree_cap.unwrap_or(DEFAULT_DEGREE_CAP);
        let mut s = Self::with_cap(&spec.id, chain, spec.start_level, spec.horizon, spine, cap)?;
        s.provenance = provenance;
        Ok(s)
    }

    /// Same scenario with a different horizon; levels are rebuilt lazily.
    pub fn with_horizon(&self, horizon: usize) -> Result<Self> {
        if horizon == self.horizon() {
            return Ok(self.clone());
        }
        let tree = build_tree(
            &self.chain,
            self.start,
            horizon,
            self.given_spine.as_ref(),
            self.degree_cap,
        )?;
        Ok(GammaScenario {
            tree,
            ..self.clone()
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn chain(&self) -> &GroupChain {
        &self.chain
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn horizon(&self) -> usize {
        self.tree.shape().horizon()
    }

    pub fn tree(&self) -> &Arc<Tree> {
        &self.tree
    }

    pub fn shape(&self) -> &Arc<TreeShape> {
        self.tree.shape()
    }

    pub fn spine(&self) -> &SpinePair {
        self.tree.spine()
    }

    /// SHA-256 of every input file, keyed by path.
    pub fn provenance(&self) -> &BTreeMap<String, String> {
        &self.provenance
    }
}

fn build_tree(
    chain: &GroupChain,
    start: usize,
    horizon: usize,
    spine: Option<&Prefix>,
    degree_cap: usize,
) -> Result<Arc<Tree>> {
    let shape = Arc::new(TreeShape::with_cap(
        chain.clone(),
        start,
        horizon,
        degree_cap,
    )?);
    let canonical = SpinePair::canonical(&shape)?;
    let (mut alpha, mut beta) = match spine {
        Some(p) => {
            if p.alpha.len() != p.beta.len() {
                return Err(Error::config("spine alpha and beta have different lengths"));
            }
            (p.alpha.clone(), p.beta.clone())
        }
        None => (Vec::new(), Vec::new()),
    };
    alpha.truncate(horizon);
    beta.truncate(horizon);
    for i in alpha.len()..horizon {
        alpha.push(canonical.alpha[i]);
        beta.push(canonical.beta[i]);
    }
    let spine = SpinePair::new(start, alpha, beta)?;
    spine.validate_gamma(&shape)?;
    Tree::new(shape, spine)
}
