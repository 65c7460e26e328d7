//! Brute-force induced-subgraph oracles.
//!
//! Every search is exhaustive over ordered vertex maps in lexicographic order,
//! pruned by adjacency consistency (edges *and* non-edges must match), so the
//! first witness found is reproducible. Hosts above the configured cap are
//! rejected up front instead of being searched partially.

mod iso;

pub use iso::is_isomorphic;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::catalog;
use crate::graph::{Graph, VertexSet};

pub const DEFAULT_CAP: usize = 16;
/// Hard limit from the single-word masks used by the search.
pub const MAX_CAP: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("cap exceeded: host has {n} vertices, brute-force cap is {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("minimum hole length must be at least 4 (got {0})")]
    BadHoleLength(usize),
    #[error("vertices {vertices} do not induce {pattern}")]
    Unverified { pattern: Pattern, vertices: VertexSet },
}

/// Forbidden induced subgraphs that witnesses are reported against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pattern {
    P4,
    /// The stable set on three vertices.
    CoK3,
    Cycle(usize),
    D(usize),
}

impl Pattern {
    pub fn graph(&self) -> Graph {
        match *self {
            Pattern::P4 => catalog::path(4).expect("valid"),
            Pattern::CoK3 => Graph::empty(3).expect("valid"),
            Pattern::Cycle(n) => catalog::cycle(n).expect("cycle length >= 3"),
            Pattern::D(j) => catalog::d_block(j).expect("D1..D6"),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Pattern::P4 => "P4".into(),
            Pattern::CoK3 => "coK3".into(),
            Pattern::Cycle(n) => format!("C{n}"),
            Pattern::D(j) => format!("D{j}"),
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for Pattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

/// An induced copy of a named pattern inside a host graph.
///
/// `vertices[i]` is the host vertex playing pattern vertex `i` (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pattern: Pattern,
    vertices: Vec<usize>,
    induced: Graph,
}

impl Witness {
    /// Builds a witness, re-verifying that the listed host vertices induce
    /// a graph isomorphic to the pattern.
    pub fn new(host: &Graph, pattern: Pattern, vertices: Vec<usize>) -> Result<Self, WitnessError> {
        let fail = || WitnessError::Unverified { pattern, vertices: VertexSet::new(vertices.iter().copied()) };
        if vertices.iter().any(|&v| v >= host.n()) || VertexSet::new(vertices.iter().copied()).len() != vertices.len() {
            return Err(fail());
        }
        let induced = host.induced_ordered(&vertices).map_err(|_| fail())?;
        if !is_isomorphic(&induced, &pattern.graph()) {
            return Err(fail());
        }
        Ok(Witness { pattern, vertices, induced })
    }

    pub fn pattern(&self) -> Pattern {
        self.pattern
    }

    /// Host vertices in pattern order.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::new(self.vertices.iter().copied())
    }

    /// Snapshot of the induced adjacency, in pattern order.
    pub fn induced(&self) -> &Graph {
        &self.induced
    }

    /// Re-checks the witness against a host graph.
    pub fn verify(&self, host: &Graph) -> bool {
        Witness::new(host, self.pattern, self.vertices.clone()).is_ok()
    }

    /// Maps the witness through `map` (vertex of the current host -> vertex
    /// of a larger host) and re-verifies it there.
    pub fn lift(&self, host: &Graph, map: &[usize]) -> Result<Witness, WitnessError> {
        Witness::new(host, self.pattern, self.vertices.iter().map(|&v| map[v]).collect())
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.pattern, self.vertex_set())
    }
}

fn check_cap(host: &Graph, cap: usize) -> Result<(), WitnessError> {
    let cap = cap.min(MAX_CAP);
    if host.n() > cap {
        return Err(WitnessError::CapExceeded { n: host.n(), cap });
    }
    Ok(())
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// First induced copy of `pattern` in `host` in lexicographic map order, as
/// the host vertices in pattern order.
pub fn find_induced_map(host: &Graph, pattern: &Graph, cap: usize) -> Result<Option<Vec<usize>>, WitnessError> {
    check_cap(host, cap)?;
    let k = pattern.n();
    if k > host.n() {
        return Ok(None);
    }
    let full = full_mask(host.n());
    let adj: Vec<u64> = (0..host.n()).map(|v| host.row64(v)).collect();
    let non: Vec<u64> = (0..host.n()).map(|v| !adj[v] & full & !(1 << v)).collect();
    let mut map = Vec::with_capacity(k);
    fn go(pattern: &Graph, adj: &[u64], non: &[u64], full: u64, used: u64, map: &mut Vec<usize>) -> bool {
        let i = map.len();
        if i == pattern.n() {
            return true;
        }
        let mut cand = full & !used;
        for (j, &m) in map.iter().enumerate() {
            cand &= if pattern.has_edge(i, j) { adj[m] } else { non[m] };
        }
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            map.push(v);
            if go(pattern, adj, non, full, used | 1 << v, map) {
                return true;
            }
            map.pop();
        }
        false
    }
    Ok(go(pattern, &adj, &non, full, 0, &mut map).then_some(map))
}

/// Searches for an induced subgraph of `host` isomorphic to `pattern`.
pub fn find_induced(host: &Graph, pattern: Pattern, cap: usize) -> Result<Option<Witness>, WitnessError> {
    match find_induced_map(host, &pattern.graph(), cap)? {
        Some(map) => Witness::new(host, pattern, map).map(Some),
        None => Ok(None),
    }
}

/// An induced cycle of length at least `min_len`, or `None` after an
/// exhaustive search. Cycles are enumerated from their smallest vertex along
/// induced paths through larger vertices.
pub fn find_long_hole(host: &Graph, min_len: usize, cap: usize) -> Result<Option<Witness>, WitnessError> {
    if min_len < 4 {
        return Err(WitnessError::BadHoleLength(min_len));
    }
    check_cap(host, cap)?;
    let n = host.n();
    let adj: Vec<u64> = (0..n).map(|v| host.row64(v)).collect();

    // path[0] is the cycle's smallest vertex; `blocked` holds neighbours of
    // path[1..len-1], which a new vertex must avoid to keep the path induced.
    fn extend(adj: &[u64], allowed: u64, path: &mut Vec<usize>, blocked: u64, min_len: usize) -> bool {
        let last = *path.last().expect("nonempty");
        let start = path[0];
        let mut cand = adj[last] & allowed & !blocked;
        for &p in path.iter() {
            cand &= !(1 << p);
        }
        while cand != 0 {
            let u = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if path.len() >= 2 && adj[u] >> start & 1 == 1 {
                // closes a chordless cycle of length path.len() + 1
                if path.len() >= 3 && path.len() + 1 >= min_len {
                    path.push(u);
                    return true;
                }
                continue;
            }
            let next_blocked = if path.len() >= 2 { blocked | adj[last] } else { blocked };
            path.push(u);
            if extend(adj, allowed, path, next_blocked, min_len) {
                return true;
            }
            path.pop();
        }
        false
    }

    for s in 0..n {
        let allowed = full_mask(n) & !full_mask(s + 1);
        let mut path = vec![s];
        if extend(&adj, allowed, &mut path, 0, min_len) {
            let len = path.len();
            return Witness::new(host, Pattern::Cycle(len), path).map(Some);
        }
    }
    Ok(None)
}

/// Forbidden-subgraph families scanned by [`scan_forbidden`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `C_n` (n >= 5) and `D1`..`D6`: the obstructions to complex order <= 2.
    Order2Complex,
    /// `C_n` (n >= 5) and `D1`..`D4`: the obstructions to being a clique-sum
    /// of `F` members.
    CliqueSumF,
    /// `P4` and the stable triple: the obstructions to membership in `F`.
    F,
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "order2-complex" => Ok(Family::Order2Complex),
            "cliquesum-F" | "cliquesum-f" => Ok(Family::CliqueSumF),
            "F" | "f" => Ok(Family::F),
            _ => Err(format!("unknown family \"{s}\" (order2-complex | cliquesum-F | F)")),
        }
    }
}

/// First witness in the fixed scan order: long holes, then the D-blocks in
/// index order (or `P4` then the stable triple for [`Family::F`]).
pub fn scan_forbidden(host: &Graph, family: Family, cap: usize) -> Result<Option<Witness>, WitnessError> {
    let blocks: &[usize] = match family {
        Family::F => {
            for p in [Pattern::P4, Pattern::CoK3] {
                if let Some(w) = find_induced(host, p, cap)? {
                    return Ok(Some(w));
                }
            }
            return Ok(None);
        }
        Family::Order2Complex => &[1, 2, 3, 4, 5, 6],
        Family::CliqueSumF => &[1, 2, 3, 4],
    };
    if let Some(w) = find_long_hole(host, 5, cap)? {
        return Ok(Some(w));
    }
    for &j in blocks {
        if let Some(w) = find_induced(host, Pattern::D(j), cap)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{complete, cycle, d_block, path, petersen};

    #[test]
    fn p4_in_c5() {
        let w = find_induced(&cycle(5).unwrap(), Pattern::P4, DEFAULT_CAP).unwrap().unwrap();
        assert_eq!(w.vertices(), &[0, 1, 2, 3]);
        assert!(w.verify(&cycle(5).unwrap()));
    }

    #[test]
    fn no_stable_triple_in_k5() {
        assert!(find_induced(&complete(5).unwrap(), Pattern::CoK3, DEFAULT_CAP).unwrap().is_none());
    }

    #[test]
    fn stable_triple_in_d4() {
        let d4 = d_block(4).unwrap();
        let w = find_induced(&d4, Pattern::CoK3, DEFAULT_CAP).unwrap().unwrap();
        assert!(d4.is_stable(w.vertices()));
    }

    #[test]
    fn long_holes() {
        let c6 = cycle(6).unwrap();
        let w = find_long_hole(&c6, 5, DEFAULT_CAP).unwrap().unwrap();
        assert_eq!(w.pattern(), Pattern::Cycle(6));
        assert_eq!(w.vertex_set(), VertexSet::full(6));
        assert!(find_long_hole(&cycle(4).unwrap(), 5, DEFAULT_CAP).unwrap().is_none());
        assert!(find_long_hole(&cycle(4).unwrap(), 4, DEFAULT_CAP).unwrap().is_some());
        let w = find_long_hole(&petersen(), 5, DEFAULT_CAP).unwrap().unwrap();
        assert_eq!(w.pattern(), Pattern::Cycle(5));
        assert!(find_long_hole(&path(6).unwrap(), 4, DEFAULT_CAP).unwrap().is_none());
        assert_eq!(find_long_hole(&c6, 3, DEFAULT_CAP), Err(WitnessError::BadHoleLength(3)));
    }

    #[test]
    fn scans() {
        let d3 = d_block(3).unwrap();
        let w = scan_forbidden(&d3, Family::Order2Complex, DEFAULT_CAP).unwrap().unwrap();
        assert_eq!(w.pattern(), Pattern::D(3));
        assert_eq!(w.vertex_set(), VertexSet::full(6));
        assert!(scan_forbidden(&cycle(4).unwrap(), Family::Order2Complex, DEFAULT_CAP).unwrap().is_none());
        let p4 = path(4).unwrap();
        assert_eq!(scan_forbidden(&p4, Family::F, DEFAULT_CAP).unwrap().unwrap().pattern(), Pattern::P4);
        assert!(scan_forbidden(&p4, Family::CliqueSumF, DEFAULT_CAP).unwrap().is_none());
    }

    #[test]
    fn cap_is_enforced() {
        let big = cycle(17).unwrap();
        assert_eq!(
            find_induced(&big, Pattern::P4, DEFAULT_CAP),
            Err(WitnessError::CapExceeded { n: 17, cap: 16 })
        );
        assert!(find_induced(&big, Pattern::P4, 20).unwrap().is_some());
    }

    #[test]
    fn bogus_witness_rejected() {
        let c5 = cycle(5).unwrap();
        assert!(Witness::new(&c5, Pattern::P4, vec![0, 1, 2, 4]).is_ok());
        assert!(Witness::new(&c5, Pattern::CoK3, vec![0, 1, 3]).is_err());
        assert!(Witness::new(&c5, Pattern::P4, vec![0, 0, 1, 2]).is_err());
    }
}
