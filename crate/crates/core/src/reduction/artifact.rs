use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{build_reduction, RbdsInstance, ReducedInstance, ReductionError, Variant};
use crate::graph::{parse_graph, serialize_graph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeAnnotation {
    pub u: String,
    pub v: String,
    pub kind: String,
}

/// Annotation file stored next to the graph file of a reduced instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sidecar {
    pub ell: usize,
    pub k: usize,
    pub variant: Variant,
    /// Hex SHA-256 of the compact JSON of `source`.
    pub source_digest: String,
    pub source: RbdsInstance,
    pub roles: BTreeMap<String, String>,
    pub edges: Vec<EdgeAnnotation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub graph: String,
    pub sidecar: Sidecar,
}

pub fn source_digest(inst: &RbdsInstance) -> String {
    let json = serde_json::to_string(inst).expect("instance serializes");
    hex::encode(Sha256::digest(json.as_bytes()))
}

impl Artifact {
    pub fn new(ri: &ReducedInstance) -> Artifact {
        let h = &ri.h;
        let roles = (0..h.n())
            .map(|v| (h.id(v).to_string(), ri.role(v).to_string()))
            .collect();
        let edges = h
            .edges()
            .iter()
            .map(|&e| EdgeAnnotation {
                u: h.id(e.0).to_string(),
                v: h.id(e.1).to_string(),
                kind: ri.kind(e).expect("edge of H").to_string(),
            })
            .collect();
        Artifact {
            graph: serialize_graph(h),
            sidecar: Sidecar {
                ell: ri.ell,
                k: ri.k(),
                variant: ri.variant,
                source_digest: source_digest(&ri.source),
                source: ri.source.clone(),
                roles,
                edges,
            },
        }
    }

    pub fn sidecar_json(&self) -> String {
        serde_json::to_string_pretty(&self.sidecar).expect("sidecar serializes")
    }
}

/// Rebuilds a reduced instance from its files, checking the digest and that
/// the stored graph and annotations match a fresh build.
pub fn load_artifact(graph_text: &str, sidecar_json: &str) -> Result<ReducedInstance, ReductionError> {
    let sidecar: Sidecar =
        serde_json::from_str(sidecar_json).map_err(|e| ReductionError::Artifact(e.to_string()))?;
    if source_digest(&sidecar.source) != sidecar.source_digest {
        return Err(ReductionError::Artifact("source digest mismatch".into()));
    }
    let ri = build_reduction(&sidecar.source, sidecar.variant)?;
    let stored = parse_graph(graph_text)?;
    if stored != ri.h {
        return Err(ReductionError::Artifact("graph differs from the rebuilt instance".into()));
    }
    if Artifact::new(&ri).sidecar != sidecar {
        return Err(ReductionError::Artifact("annotations differ from the rebuilt instance".into()));
    }
    Ok(ri)
}
