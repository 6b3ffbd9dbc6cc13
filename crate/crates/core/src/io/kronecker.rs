use serde::{Deserialize, Serialize};

use crate::error::FormatError;
use crate::graph::{Edge, InputGraph, VertexId};
use crate::partition::{hash64, unit_f64};

/// Recursive-matrix (Kronecker) generator settings. Defaults are the
/// Graph500 initiator `A=0.57, B=0.19, C=0.19, D=0.05` with 16 edges per
/// vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct KroneckerParams {
    pub scale: u32,
    pub edge_factor: u64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub seed: u64,
}

impl Default for KroneckerParams {
    fn default() -> Self {
        KroneckerParams {
            scale: 10,
            edge_factor: 16,
            a: 0.57,
            b: 0.19,
            c: 0.19,
            d: 0.05,
            seed: 0,
        }
    }
}

impl KroneckerParams {
    pub fn new(scale: u32, edge_factor: u64, seed: u64) -> Self {
        KroneckerParams {
            scale,
            edge_factor,
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), FormatError> {
        if !(1..=40).contains(&self.scale) {
            return Err(FormatError::Params(format!(
                "scale {} outside 1..=40",
                self.scale
            )));
        }
        let probs = [self.a, self.b, self.c, self.d];
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(FormatError::Params(format!(
                "initiator probabilities {probs:?} outside [0, 1]"
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(FormatError::Params(format!(
                "initiator probabilities sum to {sum}, not 1"
            )));
        }
        Ok(())
    }

    pub fn num_edges(&self) -> u64 {
        self.edge_factor << self.scale
    }
}

/// The raw directed edge stream, self-loops and duplicates included. Edge
/// `i` descends `scale` levels of the initiator matrix; level `l` draws one
/// uniform from `hash64` of the seeded counter `i * scale + l`.
pub fn kronecker_edges(p: &KroneckerParams) -> Result<Vec<(VertexId, VertexId)>, FormatError> {
    p.validate()?;
    let base = hash64(p.seed);
    let scale = u64::from(p.scale);
    let (ab, abc) = (p.a + p.b, p.a + p.b + p.c);
    let edges = (0..p.num_edges())
        .map(|i| {
            let (mut src, mut dst) = (0u64, 0u64);
            for level in 0..scale {
                let r = unit_f64(hash64(base.wrapping_add(i * scale + level)));
                let (row, col) = if r < p.a {
                    (0, 0)
                } else if r < ab {
                    (0, 1)
                } else if r < abc {
                    (1, 0)
                } else {
                    (1, 1)
                };
                src = src << 1 | row;
                dst = dst << 1 | col;
            }
            (src, dst)
        })
        .collect();
    Ok(edges)
}

/// Generates the edge stream and loads it: duplicates collapse, direction
/// and self-loops are kept, and only ids touched by an edge become vertices.
pub fn kronecker_generate(p: &KroneckerParams) -> Result<InputGraph, FormatError> {
    let edges = kronecker_edges(p)?;
    Ok(InputGraph::new(
        edges.into_iter().map(|(s, d)| Edge::new(s, d)),
        [],
        None,
    )?)
}
