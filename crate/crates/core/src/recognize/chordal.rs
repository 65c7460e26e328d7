use crate::graph::Graph;

/// Outcome of [`is_chordal`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Chordality {
    /// Perfect elimination ordering: each vertex's later neighbours form a clique.
    Chordal { peo: Vec<usize> },
    /// Induced cycle of length >= 4, vertices in cycle order.
    Hole { cycle: Vec<usize> },
}

impl Chordality {
    pub fn is_chordal(&self) -> bool {
        matches!(self, Chordality::Chordal { .. })
    }
}

/// Maximum cardinality search; the reverse of the visiting order is a
/// perfect elimination ordering exactly when `g` is chordal.
pub fn mcs_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut done = vec![false; n];
    let mut visit = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| !done[v]).max_by_key(|&v| (weight[v], std::cmp::Reverse(v))).expect("unvisited");
        done[v] = true;
        visit.push(v);
        for u in g.neighbors(v) {
            if !done[u] {
                weight[u] += 1;
            }
        }
    }
    visit.reverse();
    visit
}

/// Checks that every vertex's later neighbours form a clique, using the
/// parent test: later neighbours minus the earliest one must be adjacent to it.
pub fn is_perfect_elimination_order(g: &Graph, order: &[usize]) -> bool {
    let n = g.n();
    if order.len() != n {
        return false;
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return false;
        }
        pos[v] = i;
    }
    for &v in order {
        let later: Vec<usize> = g.neighbors(v).filter(|&u| pos[u] > pos[v]).collect();
        if let Some(&parent) = later.iter().min_by_key(|&&u| pos[u]) {
            if later.iter().any(|&u| u != parent && !g.has_edge(u, parent)) {
                return false;
            }
        }
    }
    true
}

/// Finds an induced cycle of length >= 4 in polynomial time.
///
/// A hole through `v` uses two non-adjacent neighbours `a`, `b` of `v` joined
/// by a path avoiding the rest of `N[v]`; the shortest such path closes a
/// chordless cycle. Conversely every hole yields such a triple.
pub fn find_hole(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    for v in 0..n {
        let nbrs: Vec<usize> = g.neighbors(v).collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if g.has_edge(a, b) {
                    continue;
                }
                let mut allowed = vec![true; n];
                allowed[v] = false;
                for &u in &nbrs {
                    if u != a && u != b {
                        allowed[u] = false;
                    }
                }
                if let Some(p) = shortest_path(g, a, b, &allowed) {
                    let mut cycle = vec![v];
                    cycle.extend(p);
                    return Some(cycle);
                }
            }
        }
    }
    None
}

fn shortest_path(g: &Graph, from: usize, to: usize, allowed: &[bool]) -> Option<Vec<usize>> {
    let n = g.n();
    let mut prev = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::from([from]);
    prev[from] = from;
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut x = to;
            while x != from {
                x = prev[x];
                path.push(x);
            }
            path.reverse();
            return Some(path);
        }
        for w in g.neighbors(u) {
            if allowed[w] && prev[w] == usize::MAX {
                prev[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

pub fn is_chordal(g: &Graph) -> Chordality {
    let peo = mcs_order(g);
    if is_perfect_elimination_order(g, &peo) {
        Chordality::Chordal { peo }
    } else {
        let cycle = find_hole(g).expect("graph without a perfect elimination ordering has a hole");
        Chordality::Hole { cycle }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{complete, cycle, d_block};
    use crate::witness::{is_isomorphic, Pattern};

    #[test]
    fn complete_is_chordal() {
        assert!(is_chordal(&complete(6).unwrap()).is_chordal());
    }

    #[test]
    fn c4_hole() {
        match is_chordal(&cycle(4).unwrap()) {
            Chordality::Hole { cycle } => {
                let mut s = cycle.clone();
                s.sort();
                assert_eq!(s, vec![0, 1, 2, 3]);
            }
            other => panic!("expected hole, got {other:?}"),
        }
    }

    #[test]
    fn d1_has_induced_c4() {
        let d1 = d_block(1).unwrap();
        let Chordality::Hole { cycle } = is_chordal(&d1) else { panic!("D1 is not chordal") };
        let induced = d1.induced_ordered(&cycle).unwrap();
        assert!(is_isomorphic(&induced, &Pattern::Cycle(cycle.len()).graph()));
    }

    #[test]
    fn bad_orders_rejected() {
        let g = cycle(3).unwrap();
        assert!(!is_perfect_elimination_order(&g, &[0, 1]));
        assert!(!is_perfect_elimination_order(&g, &[0, 0, 1]));
        assert!(is_perfect_elimination_order(&g, &[2, 0, 1]));
    }
}
