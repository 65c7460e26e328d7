//! Membership in `F`, the union of the classes `F_k`.
//!
//! Two independent recognizers. Extraction peels off one pair `(X_1, Y_1)` at
//! a time from a non-adjacent vertex pair and turns each violated property
//! into an induced `P4` or stable triple. The complement view reads the pairs
//! off the connected components of the complement, each of which must be a
//! complete bipartite graph.

use crate::graph::{Graph, VertexSet};
use crate::witness::{Pattern, Witness};

use super::FDecomposition;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FVerdict {
    Member(FDecomposition),
    /// An induced `P4` or stable triple.
    NotMember(Witness),
}

impl FVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, FVerdict::Member(_))
    }

    pub fn decomposition(&self) -> Option<&FDecomposition> {
        match self {
            FVerdict::Member(d) => Some(d),
            FVerdict::NotMember(_) => None,
        }
    }
}

fn witness(g: &Graph, pattern: Pattern, vertices: Vec<usize>) -> Witness {
    Witness::new(g, pattern, vertices).expect("extraction witnesses are induced by construction")
}

/// Recursive pair extraction, returning the canonical decomposition or the
/// witness produced by the first failed property.
pub fn f_decompose_extraction(g: &Graph) -> FVerdict {
    let mut rest: Vec<usize> = (0..g.n()).collect();
    let mut pairs = Vec::new();
    loop {
        // x1: smallest vertex with a non-neighbour in the remainder
        let found = rest.iter().find_map(|&x| rest.iter().find(|&&y| y != x && !g.has_edge(x, y)).map(|&y| (x, y)));
        let Some((x1, y1)) = found else {
            let z = VertexSet::new(rest);
            return FVerdict::Member(FDecomposition { n: g.n(), pairs, z }.canonical());
        };
        let xs: Vec<usize> = rest.iter().copied().filter(|&v| v != y1 && !g.has_edge(v, y1)).collect();
        let ys: Vec<usize> = rest.iter().copied().filter(|&v| v != x1 && !g.has_edge(v, x1)).collect();

        // X1 and Y1 disjoint
        if let Some(&v) = xs.iter().find(|v| ys.contains(v)) {
            return FVerdict::NotMember(witness(g, Pattern::CoK3, vec![x1, y1, v]));
        }
        // X1 a clique, Y1 a clique
        for (side, other) in [(&xs, y1), (&ys, x1)] {
            for (i, &a) in side.iter().enumerate() {
                if let Some(&b) = side[i + 1..].iter().find(|&&b| !g.has_edge(a, b)) {
                    return FVerdict::NotMember(witness(g, Pattern::CoK3, vec![a, b, other]));
                }
            }
        }
        // no edges between X1 and Y1
        for &x in &xs {
            if let Some(&y) = ys.iter().find(|&&y| g.has_edge(x, y)) {
                return FVerdict::NotMember(witness(g, Pattern::P4, vec![x1, x, y, y1]));
            }
        }
        // everything else sees all of X1 and Y1
        let outside: Vec<usize> = rest.iter().copied().filter(|v| !xs.contains(v) && !ys.contains(v)).collect();
        for &z in &outside {
            if let Some(&u) = xs.iter().find(|&&u| !g.has_edge(u, z)) {
                return FVerdict::NotMember(witness(g, Pattern::P4, vec![u, x1, z, y1]));
            }
            if let Some(&u) = ys.iter().find(|&&u| !g.has_edge(u, z)) {
                return FVerdict::NotMember(witness(g, Pattern::P4, vec![u, y1, z, x1]));
            }
        }
        pairs.push((VertexSet::new(xs), VertexSet::new(ys)));
        rest = outside;
    }
}

/// Complement-component recognizer. `None` when some component of the
/// complement is not complete bipartite.
pub fn f_decompose_complement(g: &Graph) -> Option<FDecomposition> {
    let co = g.complement();
    let mut pairs = Vec::new();
    let mut z = Vec::new();
    for comp in co.connected_components() {
        let c = comp.as_slice();
        if c.len() == 1 {
            z.push(c[0]);
            continue;
        }
        // the side of c[0] is its non-neighbourhood within the component
        let (x, y): (Vec<usize>, Vec<usize>) = c.iter().partition(|&&v| v == c[0] || !co.has_edge(c[0], v));
        if !co.is_stable(&x) || !co.is_stable(&y) || x.iter().any(|&a| y.iter().any(|&b| !co.has_edge(a, b))) {
            return None;
        }
        pairs.push((VertexSet::new(x), VertexSet::new(y)));
    }
    Some(FDecomposition { n: g.n(), pairs, z: VertexSet::new(z) }.canonical())
}

/// Runs both recognizers and insists that they agree exactly on the
/// canonical decomposition.
pub fn f_decompose(g: &Graph) -> FVerdict {
    let a = f_decompose_extraction(g);
    let b = f_decompose_complement(g);
    assert_eq!(a.decomposition(), b.as_ref(), "F recognizers disagree on {g:?}");
    a
}
