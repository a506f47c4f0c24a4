//! Certificate documents and their validation.

use anyhow::{bail, Result};
use flatwall_core::cross::{
    check_cross, cyclic_eq, replay_reduction_sequence, validate_disk, Cross, PlaneDrawing,
    ReductionSequence,
};
use flatwall_core::dispersed::{verify_blocker, BlockerCert};
use flatwall_core::flatwall::{
    apex_universal_defect, flat_cert_defect, ApexUniversalCert, FlatWallCert, RefineStep,
};
use flatwall_core::graph::{Graph, MinorModel, VertexId};
use flatwall_core::minor::{model_defect, GraspCert};
use flatwall_core::wall::{grid_contraction, Mesh, Wall};
use flatwall_core::Config;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::io::{graph_json, wall_json};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    KtModel,
    FlatWall,
    Cross,
    Blocker,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KtPayload {
    pub t: usize,
    pub model: MinorModel,
    /// The mesh grasping the model, if any.
    pub mesh: Option<Mesh>,
    pub grasp: Option<GraspCert>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatPayload {
    pub cert: FlatWallCert,
    /// Present after apex refinement.
    pub universal: Option<ApexUniversalCert>,
    pub trace: Vec<RefineStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossPayload {
    Cross {
        cycle: Vec<VertexId>,
        cross: Cross,
    },
    /// No cross: a reduction sequence and a drawing of the reduced graph
    /// with the cycle on the outer face.
    Reduction {
        cycle: Vec<VertexId>,
        sequence: ReductionSequence,
        drawing: PlaneDrawing,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockerPayload {
    pub mesh: Mesh,
    pub cert: BlockerCert,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Kt(KtPayload),
    Flat(Box<FlatPayload>),
    Cross(CrossPayload),
    Blocker(BlockerPayload),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub kind: Kind,
    /// SHA-256 of the graph and wall the document was computed on.
    pub instance: String,
    pub config: Option<Config>,
    pub payload: serde_json::Value,
}

/// Hex SHA-256 of the canonical JSON of the graph and wall.
pub fn instance_hash(g: &Graph, w: Option<&Wall>) -> String {
    let mut h = Sha256::new();
    h.update(graph_json(g).as_bytes());
    h.update(b"\n");
    if let Some(w) = w {
        h.update(wall_json(w).as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl CertificateDocument {
    pub fn new(
        kind: Kind,
        g: &Graph,
        w: Option<&Wall>,
        config: Option<&Config>,
        payload: &impl Serialize,
    ) -> Self {
        CertificateDocument {
            kind,
            instance: instance_hash(g, w),
            config: config.cloned(),
            payload: serde_json::to_value(payload).expect("payload serializes"),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn payload(&self) -> Result<Payload> {
        let v = self.payload.clone();
        Ok(match self.kind {
            Kind::KtModel => Payload::Kt(serde_json::from_value(v)?),
            Kind::FlatWall => Payload::Flat(Box::new(serde_json::from_value(v)?)),
            Kind::Cross => Payload::Cross(serde_json::from_value(v)?),
            Kind::Blocker => Payload::Blocker(serde_json::from_value(v)?),
        })
    }

    /// Re-checks the document against the instance it claims to be about.
    pub fn validate(&self, g: &Graph, w: Option<&Wall>) -> Result<()> {
        if self.instance != instance_hash(g, w) {
            bail!("document was computed on a different instance");
        }
        let defect = match self.payload()? {
            Payload::Kt(p) => {
                let grasp = match (&p.mesh, &p.grasp) {
                    (Some(m), Some(c)) => Some((m, c)),
                    (None, None) => None,
                    _ => bail!("a grasp needs both a mesh and a certificate"),
                };
                model_defect(g, &p.model, p.t, grasp)
            }
            Payload::Flat(p) => flat_cert_defect(g, &p.cert).or_else(|| {
                let u = p.universal.as_ref()?;
                if u.universal != p.cert.apex || u.wall != p.cert.wall {
                    return Some("universality certificate is for another wall".into());
                }
                apex_universal_defect(g, u)
            }),
            Payload::Cross(CrossPayload::Cross { cycle, cross }) => {
                check_cross(g, &cycle, &cross).err().map(|e| e.to_string())
            }
            Payload::Cross(CrossPayload::Reduction {
                cycle,
                sequence,
                drawing,
            }) => {
                let x = cycle.iter().copied().collect();
                match replay_reduction_sequence(g, &x, &sequence) {
                    Err(e) => Some(e.to_string()),
                    Ok(_) if !cyclic_eq(&drawing.outer, &cycle) => {
                        Some("the drawn outer face is not the cycle".into())
                    }
                    Ok((j, _)) => validate_disk(&j, &drawing).err().map(|e| e.to_string()),
                }
            }
            Payload::Blocker(p) => {
                let m = p.mesh.subgraph(g)?;
                let gc = grid_contraction(&p.mesh);
                (!verify_blocker(g, &m, &gc, &p.cert)?)
                    .then(|| "an M-path escapes the blocker".into())
            }
        };
        match defect {
            Some(d) => bail!("{:?} certificate rejected: {d}", self.kind),
            None => Ok(()),
        }
    }
}
