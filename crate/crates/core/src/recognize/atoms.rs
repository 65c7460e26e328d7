//! Clique minimal separator decomposition.
//!
//! MCS-M computes a minimal elimination ordering together with the fill of a
//! minimal triangulation `H`; the vertices at which the search label fails to
//! increase ("generators") carry the minimal separators `madj(x)` of `H`.
//! Walking the ordering and cutting along those separators that are cliques
//! of `G` yields the atoms. Disconnected graphs fall out naturally: a new
//! component starts at a generator whose separator is empty.

use serde::Serialize;

use crate::graph::{Graph, VertexSet};

/// One cut of the decomposition: `clique` separates `split_off` (which
/// becomes part of an atom) from `remainder`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Separator {
    pub clique: VertexSet,
    pub split_off: VertexSet,
    pub remainder: VertexSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomTree {
    pub atoms: Vec<VertexSet>,
    pub separators: Vec<Separator>,
    /// Minimal elimination ordering used to find the separators.
    #[serde(serialize_with = "crate::graph::serialize_labels")]
    pub elimination_order: Vec<usize>,
}

impl AtomTree {
    /// Union of the atoms' induced subgraphs.
    pub fn reassemble(&self, g: &Graph) -> Graph {
        let mut out = Graph::empty(g.n()).expect("nonempty");
        for atom in &self.atoms {
            let s = atom.as_slice();
            for (i, &u) in s.iter().enumerate() {
                for &v in &s[i + 1..] {
                    if g.has_edge(u, v) {
                        out.add_edge(u, v);
                    }
                }
            }
        }
        out
    }

    /// Checks the structural invariants against `g`: separators are cliques
    /// that disconnect their recorded sides, atoms cover every vertex and
    /// edge, and no atom has a clique cut-set (brute force, small atoms only).
    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        let covered = self.atoms.iter().fold(VertexSet::empty(), |acc, a| acc.union(a));
        if covered != VertexSet::full(g.n()) {
            return Err("atoms do not cover the vertex set".into());
        }
        if &self.reassemble(g) != g {
            return Err("clique-sum of atoms does not reproduce the graph".into());
        }
        for sep in &self.separators {
            if !g.is_clique(sep.clique.as_slice()) {
                return Err(format!("separator {} is not a clique", sep.clique));
            }
            for u in sep.split_off.iter() {
                if sep.remainder.iter().any(|v| g.has_edge(u, v)) {
                    return Err(format!("separator {} does not disconnect its sides", sep.clique));
                }
            }
        }
        for atom in &self.atoms {
            if atom.len() <= BRUTE_FORCE_LIMIT {
                if let Some(c) = find_clique_cutset(g, atom) {
                    return Err(format!("atom {atom} has clique cut-set {c}"));
                }
            }
        }
        Ok(())
    }
}

/// Largest vertex set [`find_clique_cutset`] and [`brute_force_atoms`] accept.
pub const BRUTE_FORCE_LIMIT: usize = 16;

struct Mcsm {
    /// alpha order: `order[i]` is eliminated i-th.
    order: Vec<usize>,
    /// `madj[x]`: neighbours of `x` in the triangulation that are eliminated after `x`.
    madj: Vec<VertexSet>,
    generator: Vec<bool>,
}

fn mcs_m(g: &Graph) -> Mcsm {
    let n = g.n();
    let mut label = vec![0usize; n];
    let mut numbered = vec![false; n];
    let mut madj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut generator = vec![false; n];
    let mut selected = Vec::with_capacity(n);
    let mut prev: Option<usize> = None;
    for _ in 0..n {
        let x = (0..n)
            .filter(|&v| !numbered[v])
            .max_by_key(|&v| (label[v], std::cmp::Reverse(v)))
            .expect("unnumbered vertex");
        // the first vertex never generates; the first of a new component does
        if prev.is_some_and(|p| label[x] <= p) {
            generator[x] = true;
        }
        prev = Some(label[x]);
        numbered[x] = true;
        selected.push(x);

        // Bottleneck search over unnumbered vertices. cost[y] is one more than
        // the smallest achievable maximum interior label on a path x..y, with
        // 0 meaning a direct edge.
        let mut cost = vec![usize::MAX; n];
        let mut fixed = vec![false; n];
        let mut reached = Vec::new();
        for y in g.neighbors(x).filter(|&y| !numbered[y]) {
            cost[y] = 0;
        }
        loop {
            let u = (0..n)
                .filter(|&u| !numbered[u] && !fixed[u] && cost[u] != usize::MAX)
                .min_by_key(|&u| (cost[u], u));
            let Some(u) = u else { break };
            fixed[u] = true;
            if cost[u] == 0 || cost[u] - 1 < label[u] {
                reached.push(u);
            }
            let through = cost[u].max(label[u] + 1);
            for w in g.neighbors(u) {
                if !numbered[w] && !fixed[w] && through < cost[w] {
                    cost[w] = through;
                }
            }
        }
        for y in reached {
            label[y] += 1;
            madj[y].push(x);
        }
    }
    let order: Vec<usize> = selected.into_iter().rev().collect();
    Mcsm { order, madj: madj.into_iter().map(VertexSet::new).collect(), generator }
}

/// Decomposes `g` into atoms along clique minimal separators.
pub fn atom_decompose(g: &Graph) -> AtomTree {
    let n = g.n();
    let m = mcs_m(g);
    let mut alive = vec![true; n];
    let mut atoms = Vec::new();
    let mut separators = Vec::new();
    for &x in &m.order {
        if !m.generator[x] || !alive[x] {
            continue;
        }
        let sep = &m.madj[x];
        if !g.is_clique(sep.as_slice()) {
            continue;
        }
        let mut without = alive.clone();
        for v in sep.iter() {
            without[v] = false;
        }
        let comp = g
            .components_within(&without)
            .into_iter()
            .find(|c| c.contains(x))
            .expect("x is alive and outside its separator");
        let remainder: VertexSet = (0..n).filter(|&v| without[v] && !comp.contains(v)).collect();
        if remainder.is_empty() {
            continue;
        }
        atoms.push(comp.union(sep));
        for v in comp.iter() {
            alive[v] = false;
        }
        separators.push(Separator { clique: sep.clone(), split_off: comp, remainder });
    }
    atoms.push((0..n).filter(|&v| alive[v]).collect());
    AtomTree { atoms, separators, elimination_order: m.order }
}

/// Brute force: a clique `C` inside `s` such that `G[s \ C]` has at least two
/// components. The empty clique counts, so a disconnected `G[s]` reports it.
pub fn find_clique_cutset(g: &Graph, s: &VertexSet) -> Option<VertexSet> {
    let verts = s.as_slice();
    let k = verts.len();
    assert!(k <= BRUTE_FORCE_LIMIT, "brute-force cut-set search limited to {BRUTE_FORCE_LIMIT} vertices");
    for mask in 0u32..(1 << k) {
        let c: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| verts[i]).collect();
        if !g.is_clique(&c) {
            continue;
        }
        let mut allowed = vec![false; g.n()];
        for (i, &v) in verts.iter().enumerate() {
            allowed[v] = mask >> i & 1 == 0;
        }
        if g.components_within(&allowed).len() >= 2 {
            return Some(VertexSet::new(c));
        }
    }
    None
}

/// Brute force: the inclusion-maximal vertex sets inducing a subgraph with no
/// clique cut-set. These are exactly the atoms.
pub fn brute_force_atoms(g: &Graph) -> Vec<VertexSet> {
    let n = g.n();
    assert!(n <= BRUTE_FORCE_LIMIT);
    let mut good: Vec<u32> = Vec::new();
    for mask in 1u32..(1 << n) {
        let s: VertexSet = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if find_clique_cutset(g, &s).is_none() {
            good.push(mask);
        }
    }
    let mut atoms: Vec<VertexSet> = good
        .iter()
        .filter(|&&m| !good.iter().any(|&o| o != m && o & m == m))
        .map(|&m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect();
    atoms.sort();
    atoms
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{bowtie, cycle, d_block, path, random_graph};
    use rand::SeedableRng;

    fn sorted(mut v: Vec<VertexSet>) -> Vec<VertexSet> {
        v.sort();
        v
    }

    #[test]
    fn bowtie_atoms() {
        let t = atom_decompose(&bowtie());
        assert_eq!(sorted(t.atoms.clone()), vec![VertexSet::new([0, 1, 2]), VertexSet::new([2, 3, 4])]);
        assert_eq!(t.separators.len(), 1);
        assert_eq!(t.separators[0].clique, VertexSet::new([2]));
        t.validate(&bowtie()).unwrap();
    }

    #[test]
    fn p4_atoms() {
        let p4 = path(4).unwrap();
        let t = atom_decompose(&p4);
        assert_eq!(
            sorted(t.atoms.clone()),
            vec![VertexSet::new([0, 1]), VertexSet::new([1, 2]), VertexSet::new([2, 3])]
        );
        let mut seps: Vec<VertexSet> = t.separators.iter().map(|s| s.clique.clone()).collect();
        seps.sort();
        assert_eq!(seps, vec![VertexSet::new([1]), VertexSet::new([2])]);
    }

    #[test]
    fn c5_single_atom() {
        let c5 = cycle(5).unwrap();
        assert_eq!(atom_decompose(&c5).atoms, vec![VertexSet::full(5)]);
        assert!(find_clique_cutset(&c5, &VertexSet::full(5)).is_none());
    }

    #[test]
    fn d_blocks_have_no_clique_cutset() {
        for j in 1..=6 {
            let d = d_block(j).unwrap();
            assert!(find_clique_cutset(&d, &VertexSet::full(d.n())).is_none(), "D{j}");
            assert_eq!(atom_decompose(&d).atoms.len(), 1, "D{j}");
        }
    }

    #[test]
    fn disconnected_uses_empty_separator() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let t = atom_decompose(&g);
        assert_eq!(sorted(t.atoms.clone()), vec![VertexSet::new([0, 1]), VertexSet::new([2, 3])]);
        assert!(t.separators[0].clique.is_empty());
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..400 {
            let n = 1 + rand::Rng::random_range(&mut rng, 0..8);
            let p = rand::Rng::random_range(&mut rng, 0.15..0.85);
            let g = random_graph(n, p, &mut rng);
            let t = atom_decompose(&g);
            t.validate(&g).unwrap();
            assert_eq!(sorted(t.atoms.clone()), brute_force_atoms(&g), "{g:?}");
        }
    }
}
