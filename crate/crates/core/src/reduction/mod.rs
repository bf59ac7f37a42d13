//! Red-Blue Dominating Set instances and their transformation into eternal
//! vertex cover instances, with the constructive defender for nice covers
//! and dominating-set extraction from a winning guard position.

mod artifact;
mod build;
mod extract;
mod nice;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{binomial, Budget, GameError};
use crate::graph::{valid_id, Graph, GraphError};

pub use artifact::{load_artifact, Artifact, EdgeAnnotation, Sidecar};
pub use build::{
    build_reduction, check_connected_cover, verify_instance, Check, CheckStatus, EdgeKind,
    ReducedInstance, Role, Variant, VerifyReport,
};
pub use extract::{extract_dominating_set, extract_from_config};
pub use nice::{
    check_nice_closure, classify_cover, defend_nice, nice_cover_families, ClosureReport, NiceCover,
    NiceDefender, NiceKind, NiceMove,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("instance is not normalized: {0}")]
    NotNormalized(String),
    #[error("red set does not dominate blue `{0}`")]
    NotDominating(String),
    #[error("not a nice cover: {0}")]
    NotNice(String),
    #[error("safe set is empty")]
    EmptySafeSet,
    #[error("extraction failed: {0}")]
    Extraction(String),
    #[error("artifact: {0}")]
    Artifact(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A Red-Blue Dominating Set instance: choose at most `k` reds so that every
/// blue has a red neighbour. Reds and blues are numbered by list position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RbdsInstance {
    pub reds: Vec<String>,
    pub blues: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub k: usize,
}

impl RbdsInstance {
    pub fn r(&self) -> usize {
        self.reds.len()
    }

    pub fn b(&self) -> usize {
        self.blues.len()
    }

    pub fn from_json(text: &str) -> Result<RbdsInstance, ReductionError> {
        let inst: RbdsInstance =
            serde_json::from_str(text).map_err(|e| ReductionError::Invalid(e.to_string()))?;
        inst.blue_neighbours()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    /// Validates the instance and returns, for every blue, the sorted
    /// positions of its red neighbours.
    pub fn blue_neighbours(&self) -> Result<Vec<Vec<usize>>, ReductionError> {
        let mut seen = HashSet::new();
        for id in self.reds.iter().chain(&self.blues) {
            if !valid_id(id) {
                return Err(ReductionError::Invalid(format!("bad id `{id}`")));
            }
            if !seen.insert(id.as_str()) {
                return Err(ReductionError::Invalid(format!("duplicate id `{id}`")));
            }
        }
        let mut adj = vec![Vec::new(); self.b()];
        for (a, b) in &self.edges {
            let (red, blue) = match (self.red_pos(a), self.blue_pos(b), self.red_pos(b), self.blue_pos(a)) {
                (Some(r), Some(u), _, _) | (_, _, Some(r), Some(u)) => (r, u),
                _ => {
                    return Err(ReductionError::Invalid(format!(
                        "edge {a} {b} is not a red-blue pair"
                    )))
                }
            };
            if adj[blue].contains(&red) {
                return Err(ReductionError::Invalid(format!("duplicate edge {a} {b}")));
            }
            adj[blue].push(red);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        Ok(adj)
    }

    fn red_pos(&self, id: &str) -> Option<usize> {
        self.reds.iter().position(|r| r == id)
    }

    fn blue_pos(&self, id: &str) -> Option<usize> {
        self.blues.iter().position(|b| b == id)
    }

    /// Whether the reds in `set` (1-based) dominate every blue.
    pub fn dominates(&self, set: &[usize]) -> Result<bool, ReductionError> {
        Ok(self
            .blue_neighbours()?
            .iter()
            .all(|nb| nb.iter().any(|r| set.contains(&(r + 1)))))
    }

    /// The red-blue graph itself, for connectivity checks and display.
    pub fn graph(&self) -> Result<Graph, ReductionError> {
        self.blue_neighbours()?;
        Ok(Graph::new(
            self.reds.iter().chain(&self.blues).cloned(),
            self.edges.iter().cloned(),
        )?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preprocessed {
    TrivialYes(String),
    TrivialNo(String),
    Normalized(RbdsInstance),
}

/// Resolves the easy instances. Checks run in this order: a blue without red
/// neighbours, `k >= b`, and `b = 1`. Surviving instances have their budget
/// clamped to `min(k, r)`.
pub fn preprocess_rbds(inst: &RbdsInstance) -> Result<Preprocessed, ReductionError> {
    let adj = inst.blue_neighbours()?;
    if let Some(p) = adj.iter().position(Vec::is_empty) {
        return Ok(Preprocessed::TrivialNo(format!(
            "blue `{}` has no red neighbour",
            inst.blues[p]
        )));
    }
    if inst.k >= inst.b() {
        return Ok(Preprocessed::TrivialYes(format!("k = {} >= b = {}", inst.k, inst.b())));
    }
    if inst.b() == 1 {
        return Ok(if inst.k >= 1 {
            Preprocessed::TrivialYes("single blue, k >= 1".into())
        } else {
            Preprocessed::TrivialNo("single blue, k = 0".into())
        });
    }
    let mut out = inst.clone();
    out.k = out.k.min(out.r());
    Ok(Preprocessed::Normalized(out))
}

/// Brute force over red subsets by increasing size. Returns a dominating set
/// of at most `k` reds (1-based) if one exists.
pub fn rbds_oracle(inst: &RbdsInstance, budget: &Budget) -> Result<Option<Vec<usize>>, ReductionError> {
    let adj = inst.blue_neighbours()?;
    let r = inst.r();
    let kmax = inst.k.min(r);
    let total: u128 = (0..=kmax).map(|s| binomial(r, s)).sum();
    if total > budget.configs as u128 {
        return Err(GameError::Budget {
            what: "red subsets",
            needed: total,
            limit: budget.configs,
        }
        .into());
    }
    for size in 0..=kmax {
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            if adj.iter().all(|nb| nb.iter().any(|x| pick.contains(x))) {
                return Ok(Some(pick.iter().map(|x| x + 1).collect()));
            }
            // next combination in lexicographic order
            let Some(i) = (0..size).rev().find(|&i| pick[i] < r - size + i) else {
                break;
            };
            pick[i] += 1;
            for j in i + 1..size {
                pick[j] = pick[j - 1] + 1;
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn inst(r: usize, b: usize, edges: &[(usize, usize)], k: usize) -> RbdsInstance {
        RbdsInstance {
            reds: (1..=r).map(|i| format!("r{i}")).collect(),
            blues: (1..=b).map(|i| format!("b{i}")).collect(),
            edges: edges
                .iter()
                .map(|&(p, q)| (format!("r{p}"), format!("b{q}")))
                .collect(),
            k,
        }
    }

    #[test]
    fn preprocessing_order() {
        let undominated = inst(2, 2, &[(1, 1)], 5);
        assert!(matches!(preprocess_rbds(&undominated).unwrap(), Preprocessed::TrivialNo(_)));
        let big_k = inst(3, 3, &[(1, 1), (2, 2), (3, 3)], 3);
        assert!(matches!(preprocess_rbds(&big_k).unwrap(), Preprocessed::TrivialYes(_)));
        let single = inst(1, 1, &[(1, 1)], 1);
        assert!(matches!(preprocess_rbds(&single).unwrap(), Preprocessed::TrivialYes(_)));
        let clamp = inst(1, 3, &[(1, 1), (1, 2), (1, 3)], 2);
        match preprocess_rbds(&clamp).unwrap() {
            Preprocessed::Normalized(n) => assert_eq!(n.k, 1),
            p => panic!("{p:?}"),
        }
    }

    #[test]
    fn oracle_examples() {
        let b = Budget::default();
        let hub = inst(2, 3, &[(1, 1), (1, 2), (1, 3), (2, 3)], 1);
        assert_eq!(rbds_oracle(&hub, &b).unwrap(), Some(vec![1]));
        let split = inst(2, 2, &[(1, 1), (2, 2)], 1);
        assert_eq!(rbds_oracle(&split, &b).unwrap(), None);
        let two = inst(3, 3, &[(1, 1), (2, 2), (3, 3), (2, 3)], 2);
        assert_eq!(rbds_oracle(&two, &b).unwrap(), Some(vec![1, 2]));
    }

    #[test]
    fn validation() {
        let mut bad = inst(2, 2, &[(1, 1)], 1);
        bad.edges.push(("r1".into(), "r2".into()));
        assert!(bad.blue_neighbours().is_err());
        let mut dup = inst(2, 2, &[(1, 1)], 1);
        dup.blues[0] = "r1".into();
        assert!(dup.blue_neighbours().is_err());
        let json = inst(2, 2, &[(1, 1), (2, 2)], 1).to_json();
        assert_eq!(RbdsInstance::from_json(&json).unwrap(), inst(2, 2, &[(1, 1), (2, 2)], 1));
        // blue listed first in an edge is accepted
        let mut flipped = inst(1, 1, &[], 1);
        flipped.edges.push(("b1".into(), "r1".into()));
        assert_eq!(flipped.blue_neighbours().unwrap(), vec![vec![0]]);
    }
}
