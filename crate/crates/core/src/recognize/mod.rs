//! Structural recognizers: chordality, clique cut-set atoms, membership in
//! `F` with a certificate, and the sparsity-order classifier.

mod atoms;
mod chordal;
mod fclass;
mod order;

pub use atoms::{atom_decompose, brute_force_atoms, find_clique_cutset, AtomTree, Separator, BRUTE_FORCE_LIMIT};
pub use chordal::{find_hole, is_chordal, is_perfect_elimination_order, mcs_order, Chordality};
pub use fclass::{f_decompose, f_decompose_complement, f_decompose_extraction, FVerdict};
pub use order::{classify_atom, classify_order, classify_order_with_cap, AtomClass, OrderClass, OrderError, OrderVerdict};

use serde::Serialize;

use crate::graph::{Graph, VertexSet};

/// Certificate that a graph lies in `F_k`: paired cliques `(X_j, Y_j)` with
/// no edges inside a pair, every other pair of vertices adjacent, and an
/// unpaired clique `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FDecomposition {
    /// Vertex count of the host graph.
    pub n: usize,
    pub pairs: Vec<(VertexSet, VertexSet)>,
    pub z: VertexSet,
}

impl FDecomposition {
    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    /// Sorted `(|X_j|, |Y_j|)` with the smaller size first, for comparing
    /// decompositions up to pair order and side swaps.
    pub fn pair_sizes(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self
            .pairs
            .iter()
            .map(|(x, y)| (x.len().min(y.len()), x.len().max(y.len())))
            .collect();
        v.sort_unstable();
        v
    }

    /// Pairs ordered by smallest vertex; within a pair, `X` holds the smaller minimum.
    pub fn canonical(mut self) -> Self {
        for (x, y) in &mut self.pairs {
            if VertexSet::min(y) < VertexSet::min(x) {
                std::mem::swap(x, y);
            }
        }
        self.pairs.sort_by_key(|(x, _)| VertexSet::min(x));
        self
    }

    /// Checks the decomposition against `g`.
    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        if self.n != g.n() {
            return Err(format!("decomposition has n = {}, graph has {}", self.n, g.n()));
        }
        let mut part = vec![usize::MAX; g.n()];
        let mut assign = |s: &VertexSet, id: usize| -> Result<(), String> {
            if s.iter().any(|v| v >= g.n()) {
                return Err(format!("{s} leaves the vertex range"));
            }
            for v in s.iter() {
                if part[v] != usize::MAX {
                    return Err(format!("vertex {} appears twice", v + 1));
                }
                part[v] = id;
            }
            Ok(())
        };
        for (j, (x, y)) in self.pairs.iter().enumerate() {
            if x.is_empty() || y.is_empty() {
                return Err(format!("pair {} has an empty side", j + 1));
            }
            assign(x, 2 * j)?;
            assign(y, 2 * j + 1)?;
        }
        assign(&self.z, usize::MAX - 1)?;
        if part.contains(&usize::MAX) {
            return Err("pairs and Z do not cover the vertex set".into());
        }
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                let (a, b) = (part[u], part[v]);
                let opposite = a / 2 == b / 2 && a != b && a != usize::MAX - 1 && b != usize::MAX - 1;
                if g.has_edge(u, v) == opposite {
                    return Err(format!("adjacency of {} and {} contradicts the decomposition", u + 1, v + 1));
                }
            }
        }
        Ok(())
    }
}
