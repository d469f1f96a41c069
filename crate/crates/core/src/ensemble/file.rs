//! JSON ensemble definitions and the name registry used by the CLI.
//!
//! ```json
//! {"name": "tilted", "type": "iid",
//!  "states": [[[1,0],[0,0]], [[0.6,0],[0,0.8]]], "probs": [0.25, 0.75]}
//! {"type": "sequence", "states": [[[0,0],[1,0]], [[1,0],[0,0]]], "pattern": [0, 1]}
//! {"type": "finite", "states": [[[1,0],[0,0]], [[0,0],[1,0]]], "counts": [2, 2], "n_total": 4}
//! ```
//!
//! Each state is a list of `[re, im]` amplitude pairs; `pattern` indexes into `states`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Ensemble;
use crate::error::{Error, Result};
use crate::linalg::c;
use crate::state::PureState;

/// Amplitudes whose squared norm is this close to 1 are renormalized on load.
const LOAD_NORM_TOL: f64 = 1e-6;

pub type Amplitudes = Vec<[f64; 2]>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum EnsembleKind {
    Iid {
        states: Vec<Amplitudes>,
        probs: Vec<f64>,
    },
    Sequence {
        states: Vec<Amplitudes>,
        pattern: Vec<usize>,
    },
    Finite {
        states: Vec<Amplitudes>,
        counts: Vec<usize>,
        n_total: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleDefinition {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub kind: EnsembleKind,
}

fn load_state(amps: &Amplitudes) -> Result<PureState> {
    let v: Vec<_> = amps.iter().map(|[re, im]| c(*re, *im)).collect();
    let norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > LOAD_NORM_TOL {
        return Err(Error::EnsembleDefinition(format!(
            "state {amps:?} is not normalized (squared norm {norm_sqr})"
        )));
    }
    PureState::normalized(v)
}

fn dump_state(psi: &PureState) -> Amplitudes {
    psi.amplitudes().iter().map(|z| [z.re, z.im]).collect()
}

fn same_len(what: &str, a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::EnsembleDefinition(format!(
            "{what} has {b} entries but there are {a} states"
        )));
    }
    Ok(())
}

impl EnsembleDefinition {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::EnsembleDefinition(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn build(&self) -> Result<Ensemble> {
        match &self.kind {
            EnsembleKind::Iid { states, probs } => {
                same_len("probs", states.len(), probs.len())?;
                let members = probs
                    .iter()
                    .zip(states)
                    .map(|(p, s)| Ok((*p, load_state(s)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ensemble::iid(members)
            }
            EnsembleKind::Sequence { states, pattern } => {
                let loaded = states.iter().map(load_state).collect::<Result<Vec<_>>>()?;
                let seq = pattern
                    .iter()
                    .map(|&i| {
                        loaded.get(i).cloned().ok_or_else(|| {
                            Error::EnsembleDefinition(format!("pattern index {i} has no state"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ensemble::sequence(seq)
            }
            EnsembleKind::Finite {
                states,
                counts,
                n_total,
            } => {
                same_len("counts", states.len(), counts.len())?;
                let sum: usize = counts.iter().sum();
                if sum != *n_total {
                    return Err(Error::EnsembleDefinition(format!(
                        "counts sum to {sum} but n_total is {n_total}"
                    )));
                }
                let members = states
                    .iter()
                    .zip(counts)
                    .map(|(s, &k)| Ok((load_state(s)?, k)))
                    .collect::<Result<Vec<_>>>()?;
                Ensemble::finite(members)
            }
        }
    }

    pub fn describe(ensemble: &Ensemble, name: Option<&str>) -> Self {
        let kind = match ensemble {
            Ensemble::Iid(e) => EnsembleKind::Iid {
                states: e.members().iter().map(|(_, s)| dump_state(s)).collect(),
                probs: e.members().iter().map(|(p, _)| *p).collect(),
            },
            Ensemble::Sequence(e) => EnsembleKind::Sequence {
                states: e.pattern().iter().map(dump_state).collect(),
                pattern: (0..e.period()).collect(),
            },
            Ensemble::FiniteComposition(e) => EnsembleKind::Finite {
                states: e.counts().iter().map(|(s, _)| dump_state(s)).collect(),
                counts: e.counts().iter().map(|(_, k)| *k).collect(),
                n_total: e.n_total(),
            },
        };
        Self {
            name: name.map(str::to_owned),
            kind,
        }
    }
}

/// Named ensembles. `E1`–`E4` are registered up front; `E5`/`E6` are built on lookup for
/// the requested composition size.
#[derive(Debug, Clone)]
pub struct Registry {
    named: BTreeMap<String, Ensemble>,
}

impl Default for Registry {
    fn default() -> Self {
        let mut named = BTreeMap::new();
        named.insert("E1".to_owned(), Ensemble::e1());
        named.insert("E2".to_owned(), Ensemble::e2());
        named.insert("E3".to_owned(), Ensemble::e3());
        named.insert("E4".to_owned(), Ensemble::e4());
        Self { named }
    }
}

impl Registry {
    /// Registers a definition under its `name`, or under `fallback` if it has none.
    pub fn register(&mut self, def: &EnsembleDefinition, fallback: &str) -> Result<String> {
        let name = def.name.clone().unwrap_or_else(|| fallback.to_owned());
        self.named.insert(name.clone(), def.build()?);
        Ok(name)
    }

    pub fn register_file(&mut self, path: &Path) -> Result<String> {
        let def = EnsembleDefinition::from_path(path)?;
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("custom")
            .to_owned();
        self.register(&def, &stem)
    }

    /// Looks up `name`. `n_total` sizes the built-in fixed-composition ensembles.
    pub fn get(&self, name: &str, n_total: usize) -> Result<Ensemble> {
        if let Some(e) = self.named.get(name) {
            return Ok(e.clone());
        }
        match name {
            "E5" => Ensemble::e5(n_total),
            "E6" => Ensemble::e6(n_total),
            _ => Err(Error::InvalidArgument(format!(
                "unknown ensemble {name:?}; known: {}",
                self.names().join(", ")
            ))),
        }
    }

    pub fn names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.named.keys().cloned().collect();
        names.extend(["E5".to_owned(), "E6".to_owned()]);
        names.sort();
        names.dedup();
        names
    }
}
