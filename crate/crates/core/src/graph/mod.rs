//! Simple undirected graphs on vertices `0..n` backed by a packed symmetric bitset.
//!
//! Vertices are 0-based inside the library. Every textual surface (files, CLI
//! output, JSON) uses 1-based labels, converted at the boundary by
//! [`VertexSet::labels`] and the parsers in [`graph6`] and [`edge_list`].

pub mod edge_list;
pub mod graph6;

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex set must be nonempty")]
    EmptyVertexSet,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Sorted, duplicate-free set of 0-based vertex indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new<I: IntoIterator<Item = usize>>(vertices: I) -> Self {
        let mut v: Vec<usize> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    /// The full vertex set `0..n`.
    pub fn full(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    /// Builds a set from 1-based labels, checking them against `n`.
    pub fn from_labels(labels: &[usize], n: usize) -> Result<Self, GraphError> {
        for &l in labels {
            if l == 0 || l > n {
                return Err(GraphError::VertexOutOfRange { vertex: l, n });
            }
        }
        Ok(VertexSet::new(labels.iter().map(|l| l - 1)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn min(&self) -> Option<usize> {
        self.0.first().copied()
    }

    /// 1-based labels, the form used in every textual output.
    pub fn labels(&self) -> Vec<usize> {
        self.0.iter().map(|v| v + 1).collect()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::new(self.iter().chain(other.iter()))
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|v| !other.contains(*v)).collect())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|v| other.contains(*v)).collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.labels().serialize(s)
    }
}

/// Serializes 0-based vertices as 1-based labels.
pub fn serialize_labels<S: Serializer>(vs: &[usize], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(vs.iter().map(|v| v + 1))
}

/// Serializes optional 0-based vertices as 1-based labels.
pub fn serialize_opt_labels<S: Serializer>(vs: &Option<Vec<usize>>, s: S) -> Result<S::Ok, S::Error> {
    match vs {
        None => s.serialize_none(),
        Some(vs) => s.serialize_some(&vs.iter().map(|v| v + 1).collect::<Vec<_>>()),
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

/// Simple undirected graph with vertex set `0..n`, `n >= 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let words = n.div_ceil(64);
        Ok(Graph { n, words, bits: vec![0; n * words] })
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        Graph::empty(n).map(|g| g.complement())
    }

    /// Builds a graph from 0-based edges. Duplicates and reversed pairs are
    /// tolerated; self-loops are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n)?;
        for (u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: x + 1, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u + 1));
        }
        self.set(u, v, true);
        Ok(())
    }

    /// Panics on out-of-range vertices or a self-loop.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.try_add_edge(u, v).expect("invalid edge");
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.set(u, v, false);
        }
    }

    fn set(&mut self, u: usize, v: usize, on: bool) {
        for (a, b) in [(u, v), (v, u)] {
            let w = &mut self.bits[a * self.words + b / 64];
            if on {
                *w |= 1 << (b % 64);
            } else {
                *w &= !(1 << (b % 64));
            }
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Packed adjacency row of `v`.
    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    /// Adjacency row as a single word; only valid for `n <= 64`.
    pub fn row64(&self, v: usize) -> u64 {
        debug_assert!(self.n <= 64);
        self.bits[v * self.words]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&u| self.has_edge(v, u))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| (u + 1..self.n).filter(move |&v| self.has_edge(u, v)).map(move |v| (u, v)))
    }

    /// Non-edges `(u, v)` with `u < v`.
    pub fn non_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| (u + 1..self.n).filter(move |&v| !self.has_edge(u, v)).map(move |v| (u, v)))
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count() == self.n * (self.n - 1) / 2
    }

    /// Exact set complement of the edge set off the diagonal.
    pub fn complement(&self) -> Graph {
        let mut g = self.clone();
        for v in 0..self.n {
            for w in 0..self.words {
                let lo = w * 64;
                let hi = (lo + 64).min(self.n);
                let valid = if hi - lo == 64 { u64::MAX } else { (1u64 << (hi - lo)) - 1 };
                let mut word = !self.bits[v * self.words + w] & valid;
                if v / 64 == w {
                    word &= !(1 << (v % 64));
                }
                g.bits[v * self.words + w] = word;
            }
        }
        g
    }

    pub fn check_set(&self, s: &VertexSet) -> Result<(), GraphError> {
        match s.iter().find(|&v| v >= self.n) {
            Some(v) => Err(GraphError::VertexOutOfRange { vertex: v + 1, n: self.n }),
            None => Ok(()),
        }
    }

    /// `G[S]`, relabeled to `0..|S|` in the order of `S`.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<Graph, GraphError> {
        self.induced_ordered(s.as_slice())
    }

    /// Induced subgraph with vertex `i` of the result being `order[i]`.
    pub fn induced_ordered(&self, order: &[usize]) -> Result<Graph, GraphError> {
        if order.is_empty() {
            return Err(GraphError::EmptyVertexSet);
        }
        let mut g = Graph::empty(order.len())?;
        for (i, &u) in order.iter().enumerate() {
            if u >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: u + 1, n: self.n });
            }
            for (j, &v) in order.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.set(i, j, true);
                }
            }
        }
        Ok(g)
    }

    /// Vacuously true for the empty set.
    pub fn is_clique(&self, s: &[usize]) -> bool {
        s.iter().enumerate().all(|(i, &u)| s[i + 1..].iter().all(|&v| u == v || self.has_edge(u, v)))
    }

    pub fn is_stable(&self, s: &[usize]) -> bool {
        s.iter().enumerate().all(|(i, &u)| s[i + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }

    pub fn connected_components(&self) -> Vec<VertexSet> {
        self.components_within(&vec![true; self.n])
    }

    /// Connected components of the subgraph induced by `allowed`, ordered by
    /// smallest vertex.
    pub fn components_within(&self, allowed: &[bool]) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for s in 0..self.n {
            if !allowed[s] || seen[s] {
                continue;
            }
            seen[s] = true;
            stack.push(s);
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for u in self.neighbors(v) {
                    if allowed[u] && !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            out.push(VertexSet::new(comp));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// Disjoint union, `other`'s vertices shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.n + other.n;
        let mut g = Graph::empty(n).expect("nonempty");
        for (u, v) in self.edges() {
            g.set(u, v, true);
        }
        for (u, v) in other.edges() {
            g.set(u + self.n, v + self.n, true);
        }
        g
    }

    /// Join: disjoint union plus every edge between the two parts.
    pub fn join(&self, other: &Graph) -> Graph {
        let mut g = self.disjoint_union(other);
        for u in 0..self.n {
            for v in 0..other.n {
                g.set(u, self.n + v, true);
            }
        }
        g
    }

    /// Relabels: vertex `v` of `self` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::empty(self.n).expect("nonempty");
        for (u, v) in self.edges() {
            g.set(perm[u], perm[v], true);
        }
        g
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}-{}", u + 1, v + 1)?;
        }
        write!(f, "])")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn complement_of_k3_is_edgeless() {
        let k3 = Graph::complete(3).unwrap();
        let c = k3.complement();
        assert_eq!(c.n(), 3);
        assert_eq!(c.edge_count(), 0);
    }

    #[test]
    fn complement_of_c4() {
        let c = cycle(4).complement();
        assert_eq!(c.edges().collect::<Vec<_>>(), vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn c5_is_self_complementary_under_relabeling() {
        // 1-3-5-2-4 in 1-based labels
        let c5 = cycle(5);
        let comp = c5.complement();
        let order = [0, 2, 4, 1, 3];
        let relabeled = comp.induced_ordered(&order).unwrap();
        assert_eq!(relabeled, c5);
    }

    #[test]
    fn complement_crosses_word_boundaries() {
        let mut g = Graph::empty(70).unwrap();
        g.add_edge(0, 69);
        g.add_edge(63, 64);
        let c = g.complement();
        assert!(!c.has_edge(0, 69));
        assert!(!c.has_edge(64, 63));
        assert!(c.has_edge(0, 64));
        assert!(!c.has_edge(69, 69));
        assert_eq!(c.complement(), g);
        assert_eq!(c.edge_count(), 70 * 69 / 2 - 2);
    }

    #[test]
    fn induced_subgraph_examples() {
        let p3 = cycle(5).induced_subgraph(&VertexSet::new([0, 1, 2])).unwrap();
        assert_eq!(p3.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        let k3 = Graph::complete(5).unwrap().induced_subgraph(&VertexSet::new([1, 3, 4])).unwrap();
        assert!(k3.is_complete());
        let s = cycle(6).induced_subgraph(&VertexSet::new([0, 2, 4])).unwrap();
        assert_eq!(s.edge_count(), 0);
        assert_eq!(
            cycle(5).induced_subgraph(&VertexSet::empty()),
            Err(GraphError::EmptyVertexSet)
        );
    }

    #[test]
    fn clique_and_stable() {
        let c4 = cycle(4);
        assert!(c4.is_clique(&[0, 1]));
        assert!(c4.is_stable(&[0, 2]));
        assert!(c4.is_clique(&[]));
        assert!(c4.is_stable(&[]));
        assert!(!c4.is_clique(&[0, 1, 2]));
    }

    #[test]
    fn components() {
        assert_eq!(Graph::empty(3).unwrap().connected_components().len(), 3);
        assert_eq!(cycle(5).connected_components(), vec![VertexSet::full(5)]);
        let comps = cycle(4).complement().connected_components();
        assert_eq!(comps, vec![VertexSet::new([0, 2]), VertexSet::new([1, 3])]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Graph::empty(0), Err(GraphError::Empty));
        assert_eq!(Graph::from_edges(3, [(1, 1)]), Err(GraphError::SelfLoop(2)));
        assert!(matches!(Graph::from_edges(3, [(0, 3)]), Err(GraphError::VertexOutOfRange { .. })));
        assert!(VertexSet::from_labels(&[0], 3).is_err());
        assert_eq!(VertexSet::from_labels(&[3, 1, 3], 3).unwrap(), VertexSet::new([0, 2]));
    }
}
