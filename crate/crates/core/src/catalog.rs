//! Named graphs and graph families used as fixtures and witness templates.
//!
//! Fixed labelings (1-based), each `D_j` being the complement of the graph
//! listed here:
//!
//! | name | complement                         | edges of the complement           |
//! |------|------------------------------------|-----------------------------------|
//! | D1   | P6                                 | 1-2 2-3 3-4 4-5 5-6               |
//! | D2   | C6                                 | 1-2 2-3 3-4 4-5 5-6 6-1           |
//! | D3   | P4 + K2                            | 1-2 2-3 3-4, 5-6                  |
//! | D4   | K3 + K2                            | 1-2 1-3 2-3, 4-5                  |
//! | D5   | P3 + K2 + K2                       | 1-2 2-3, 4-5, 6-7                 |
//! | D6   | K2 + K2 + K2 + K2                  | 1-2, 3-4, 5-6, 7-8                |
//!
//! `C_n` is the cycle `1-2-...-n-1`, `P_n` the path `1-2-...-n`, and
//! `K(l,m)` puts the `l`-side on vertices `1..=l`.
//!
//! Members of `F_k` are laid out pair by pair: `X_1, Y_1, X_2, Y_2, ..., Z`,
//! so the emitted [`FDecomposition`] is already in canonical form.

use rand::Rng;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::recognize::FDecomposition;

/// Upper bound on the vertex count of generated graphs.
pub const MAX_CATALOG_VERTICES: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown graph name \"{0}\"")]
    UnknownName(String),
    #[error("invalid size for {name}: {msg}")]
    BadSize { name: String, msg: String },
    #[error("invalid family spec: {0}")]
    BadSpec(String),
}

/// Parameters of a generated graph family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    /// `F_k` with clique sizes `|X_j| = x[j]`, `|Y_j| = y[j]`, `|Z| = z`.
    F { x: Vec<usize>, y: Vec<usize>, z: usize },
    /// `K_3`: `F_3` with singleton paired cliques.
    K3 { z: usize },
    Cycle(usize),
    Path(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
    DBlock(usize),
}

/// A generated graph plus its ground-truth `F` decomposition when it has one.
#[derive(Debug, Clone)]
pub struct Family {
    pub graph: Graph,
    pub decomposition: Option<FDecomposition>,
}

fn bad(name: &str, msg: &str) -> CatalogError {
    CatalogError::BadSize { name: name.to_string(), msg: msg.to_string() }
}

pub fn cycle(n: usize) -> Result<Graph, CatalogError> {
    if !(3..=MAX_CATALOG_VERTICES).contains(&n) {
        return Err(bad("C", "cycle needs n >= 3"));
    }
    Ok(Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid"))
}

pub fn path(n: usize) -> Result<Graph, CatalogError> {
    if !(1..=MAX_CATALOG_VERTICES).contains(&n) {
        return Err(bad("P", "path needs n >= 1"));
    }
    Ok(Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid"))
}

pub fn complete(n: usize) -> Result<Graph, CatalogError> {
    if !(1..=MAX_CATALOG_VERTICES).contains(&n) {
        return Err(bad("K", "complete graph needs n >= 1"));
    }
    Ok(Graph::complete(n).expect("valid"))
}

pub fn complete_bipartite(l: usize, m: usize) -> Result<Graph, CatalogError> {
    if l + m == 0 || l + m > MAX_CATALOG_VERTICES {
        return Err(bad("K(l,m)", "need 1 <= l+m"));
    }
    let mut g = Graph::empty(l + m).expect("nonempty");
    for u in 0..l {
        for v in l..l + m {
            g.add_edge(u, v);
        }
    }
    Ok(g)
}

/// Complement of `D_j` as fixed in the module table.
pub fn d_block_complement(j: usize) -> Result<Graph, CatalogError> {
    let (n, edges): (usize, &[(usize, usize)]) = match j {
        1 => (6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]),
        2 => (6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]),
        3 => (6, &[(0, 1), (1, 2), (2, 3), (4, 5)]),
        4 => (5, &[(0, 1), (0, 2), (1, 2), (3, 4)]),
        5 => (7, &[(0, 1), (1, 2), (3, 4), (5, 6)]),
        6 => (8, &[(0, 1), (2, 3), (4, 5), (6, 7)]),
        _ => return Err(bad("D", "D-blocks are D1..D6")),
    };
    Ok(Graph::from_edges(n, edges.iter().copied()).expect("valid"))
}

pub fn d_block(j: usize) -> Result<Graph, CatalogError> {
    d_block_complement(j).map(|g| g.complement())
}

pub fn petersen() -> Graph {
    let mut g = Graph::empty(10).expect("nonempty");
    for i in 0..5 {
        g.add_edge(i, (i + 1) % 5);
        g.add_edge(i, i + 5);
        g.add_edge(5 + i, 5 + (i + 2) % 5);
    }
    g
}

/// Two triangles sharing vertex 3.
pub fn bowtie() -> Graph {
    Graph::from_edges(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).expect("valid")
}

/// Cocktail-party graph on 6 vertices, the `K_3` member with `Z` empty.
pub fn octahedron() -> Graph {
    build_family(&FamilySpec::K3 { z: 0 }).expect("valid").graph
}

/// Resolves `Cn`, `Pn`, `Kn`, `K(l,m)`, `D1`..`D6`, `petersen`, `octahedron`
/// and `bowtie`. `n` supplies the size for a bare `C`, `P` or `K`.
pub fn build_named(name: &str, n: Option<usize>) -> Result<Graph, CatalogError> {
    let name = name.trim();
    let lower = name.to_ascii_lowercase();
    match lower.as_str() {
        "petersen" => return Ok(petersen()),
        "octahedron" | "cocktail" => return Ok(octahedron()),
        "bowtie" => return Ok(bowtie()),
        _ => {}
    }
    if let Some(inner) = lower.strip_prefix("k(").and_then(|s| s.strip_suffix(')')) {
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(CatalogError::UnknownName(name.to_string()));
        }
        let l = parts[0].parse().map_err(|_| bad(name, "l must be an integer"))?;
        let m = parts[1].parse().map_err(|_| bad(name, "m must be an integer"))?;
        return complete_bipartite(l, m);
    }
    let (head, tail) = lower.split_at(1.min(lower.len()));
    let size = if tail.is_empty() {
        n.ok_or_else(|| bad(name, "missing size"))?
    } else {
        tail.parse::<usize>().map_err(|_| CatalogError::UnknownName(name.to_string()))?
    };
    match head {
        "c" => cycle(size),
        "p" => path(size),
        "k" => complete(size),
        "d" => d_block(size),
        _ => Err(CatalogError::UnknownName(name.to_string())),
    }
}

/// Complement of a disjoint union of `K_{x_j, y_j}` plus `z` isolated vertices.
fn f_member(x: &[usize], y: &[usize], z: usize) -> Result<Family, CatalogError> {
    if x.len() != y.len() {
        return Err(CatalogError::BadSpec("x and y must list the same number of pairs".into()));
    }
    if x.iter().chain(y).any(|&s| s == 0) {
        return Err(CatalogError::BadSpec("paired cliques must be nonempty".into()));
    }
    let n: usize = x.iter().chain(y).sum::<usize>() + z;
    if n == 0 {
        return Err(CatalogError::BadSpec("graph must have at least one vertex".into()));
    }
    if n > MAX_CATALOG_VERTICES {
        return Err(CatalogError::BadSpec(format!("too many vertices ({n})")));
    }
    let mut g = Graph::complete(n).expect("nonempty");
    let mut pairs = Vec::with_capacity(x.len());
    let mut next = 0;
    for (&a, &b) in x.iter().zip(y) {
        let xs = VertexSet::new(next..next + a);
        let ys = VertexSet::new(next + a..next + a + b);
        for u in xs.iter() {
            for v in ys.iter() {
                g.remove_edge(u, v);
            }
        }
        next += a + b;
        pairs.push((xs, ys));
    }
    let zs = VertexSet::new(next..n);
    let decomposition = FDecomposition { n, pairs, z: zs };
    Ok(Family { graph: g, decomposition: Some(decomposition) })
}

pub fn build_family(spec: &FamilySpec) -> Result<Family, CatalogError> {
    let plain = |graph: Result<Graph, CatalogError>| graph.map(|graph| Family { graph, decomposition: None });
    match spec {
        FamilySpec::F { x, y, z } => f_member(x, y, *z),
        FamilySpec::K3 { z } => f_member(&[1, 1, 1], &[1, 1, 1], *z),
        FamilySpec::Cycle(n) => plain(cycle(*n)),
        FamilySpec::Path(n) => plain(path(*n)),
        FamilySpec::Complete(n) => f_member(&[], &[], *n),
        FamilySpec::CompleteBipartite(l, m) => plain(complete_bipartite(*l, *m)),
        FamilySpec::DBlock(j) => plain(d_block(*j)),
    }
}

impl FamilySpec {
    /// Parses `f:k=3,x=1,1,1,y=1,1,1,z=2`, `k2:x=1,2,y=2,1,z=0`, `k3:z=1`,
    /// `cycle:n=5`, `path:n=4`, `complete:n=4`, `bipartite:l=2,m=3`, `d:j=5`.
    pub fn parse(text: &str) -> Result<FamilySpec, CatalogError> {
        let bad = |m: &str| CatalogError::BadSpec(format!("{m} in \"{text}\""));
        let (tag, rest) = text.split_once(':').unwrap_or((text, ""));
        let mut keys: Vec<(String, Vec<usize>)> = Vec::new();
        for tok in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if let Some((k, v)) = tok.split_once('=') {
                let v = v.trim().parse().map_err(|_| bad("non-integer value"))?;
                keys.push((k.trim().to_ascii_lowercase(), vec![v]));
            } else {
                let v = tok.parse().map_err(|_| bad("non-integer value"))?;
                keys.last_mut().ok_or_else(|| bad("value without key"))?.1.push(v);
            }
        }
        let get = |k: &str| keys.iter().find(|(name, _)| name == k).map(|(_, v)| v.clone());
        let scalar = |k: &str| -> Result<Option<usize>, CatalogError> {
            match get(k) {
                None => Ok(None),
                Some(v) if v.len() == 1 => Ok(Some(v[0])),
                Some(_) => Err(bad(&format!("{k} takes one value"))),
            }
        };
        let need = |k: &str| scalar(k)?.ok_or_else(|| bad(&format!("missing {k}")));
        match tag.trim().to_ascii_lowercase().as_str() {
            "f" | "k2" => {
                let x = get("x").unwrap_or_default();
                let y = get("y").unwrap_or_default();
                let z = scalar("z")?.unwrap_or(0);
                if let Some(k) = scalar("k")? {
                    if k != x.len() || k != y.len() {
                        return Err(bad("k must match the number of x and y sizes"));
                    }
                }
                if tag.trim().eq_ignore_ascii_case("k2") && x.len() != 2 {
                    return Err(bad("k2 needs exactly two pairs"));
                }
                Ok(FamilySpec::F { x, y, z })
            }
            "k3" => Ok(FamilySpec::K3 { z: scalar("z")?.unwrap_or(0) }),
            "cycle" | "c" => Ok(FamilySpec::Cycle(need("n")?)),
            "path" | "p" => Ok(FamilySpec::Path(need("n")?)),
            "complete" | "k" => Ok(FamilySpec::Complete(need("n")?)),
            "bipartite" => Ok(FamilySpec::CompleteBipartite(need("l")?, need("m")?)),
            "d" => Ok(FamilySpec::DBlock(need("j")?)),
            other => Err(CatalogError::BadSpec(format!("unknown family \"{other}\""))),
        }
    }
}

/// Clique-sum of `a` and `b`: `b`'s vertex `clique_b[i]` is identified with
/// `a`'s vertex `clique_a[i]`; remaining vertices of `b` are appended.
pub fn clique_sum(a: &Graph, clique_a: &[usize], b: &Graph, clique_b: &[usize]) -> Graph {
    assert_eq!(clique_a.len(), clique_b.len(), "cliques must have equal size");
    assert!(a.is_clique(clique_a) && b.is_clique(clique_b), "clique-sum needs cliques");
    let mut map = vec![usize::MAX; b.n()];
    for (&u, &v) in clique_a.iter().zip(clique_b) {
        map[v] = u;
    }
    let mut next = a.n();
    for m in map.iter_mut().filter(|m| **m == usize::MAX) {
        *m = next;
        next += 1;
    }
    let mut g = Graph::empty(next).expect("nonempty");
    for (u, v) in a.edges() {
        g.add_edge(u, v);
    }
    for (u, v) in b.edges() {
        g.add_edge(map[u], map[v]);
    }
    g
}

/// A random clique of `g` of size at most `max` (greedy from a random vertex).
pub fn random_clique<R: Rng>(g: &Graph, max: usize, rng: &mut R) -> Vec<usize> {
    let target = rng.random_range(0..=max.min(g.n()));
    let mut order: Vec<usize> = (0..g.n()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut clique = Vec::new();
    for v in order {
        if clique.len() >= target {
            break;
        }
        if clique.iter().all(|&u| g.has_edge(u, v)) {
            clique.push(v);
        }
    }
    clique
}

/// Glues `parts` together one at a time along random cliques (possibly empty).
pub fn random_clique_sum<R: Rng>(parts: &[Graph], max_clique: usize, rng: &mut R) -> Graph {
    let mut acc = parts[0].clone();
    for part in &parts[1..] {
        let cb = random_clique(part, max_clique, rng);
        // pick a clique of the same size in acc, shrinking if needed
        let mut ca = random_clique(&acc, cb.len(), rng);
        let k = ca.len().min(cb.len());
        ca.truncate(k);
        acc = clique_sum(&acc, &ca, part, &cb[..k]);
    }
    acc
}

/// Random `K_2` member with clique sizes in `1..=max_side` and `|Z| <= max_z`.
pub fn random_k2<R: Rng>(max_side: usize, max_z: usize, rng: &mut R) -> Family {
    let mut s = || rng.random_range(1..=max_side);
    let x = vec![s(), s()];
    let y = vec![s(), s()];
    let z = rng.random_range(0..=max_z);
    f_member(&x, &y, z).expect("valid")
}

pub fn random_k3<R: Rng>(max_z: usize, rng: &mut R) -> Family {
    f_member(&[1, 1, 1], &[1, 1, 1], rng.random_range(0..=max_z)).expect("valid")
}

/// Random chordal graph: each new vertex is joined to a random clique (of
/// size at most `max_clique`) among the earlier vertices, so the reverse
/// insertion order is a perfect elimination order.
pub fn random_chordal<R: Rng>(n: usize, max_clique: usize, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n.max(1)).expect("n >= 1");
    for v in 1..n {
        let target = rng.random_range(0..=max_clique.min(v));
        let mut order: Vec<usize> = (0..v).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        let mut clique: Vec<usize> = Vec::new();
        for u in order {
            if clique.len() >= target {
                break;
            }
            if clique.iter().all(|&c| g.has_edge(c, u)) {
                clique.push(u);
            }
        }
        for u in clique {
            g.add_edge(u, v);
        }
    }
    g
}

/// Erdős–Rényi graph `G(n, p)`.
pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n).expect("n >= 1");
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}
