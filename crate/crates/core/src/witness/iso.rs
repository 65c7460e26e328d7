use crate::graph::Graph;

/// Isomorphism test for small graphs: degree-sequence prefilter, then a
/// permutation search that only maps vertices of equal degree and checks
/// adjacency against every vertex placed so far.
pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    let n = a.n();
    if n != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let da: Vec<usize> = (0..n).map(|v| a.degree(v)).collect();
    let db: Vec<usize> = (0..n).map(|v| b.degree(v)).collect();
    let (mut sa, mut sb) = (da.clone(), db.clone());
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return false;
    }
    let mut order: Vec<usize> = (0..n).collect();
    // most constrained first
    order.sort_by_key(|&v| std::cmp::Reverse(da[v]));
    let mut image = vec![usize::MAX; n];
    let mut taken = vec![false; n];

    #[allow(clippy::too_many_arguments)]
    fn place(
        depth: usize,
        order: &[usize],
        a: &Graph,
        b: &Graph,
        da: &[usize],
        db: &[usize],
        image: &mut [usize],
        taken: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        for w in 0..b.n() {
            if taken[w] || db[w] != da[v] {
                continue;
            }
            let ok = order[..depth].iter().all(|&u| a.has_edge(u, v) == b.has_edge(image[u], w));
            if !ok {
                continue;
            }
            image[v] = w;
            taken[w] = true;
            if place(depth + 1, order, a, b, da, db, image, taken) {
                return true;
            }
            taken[w] = false;
        }
        false
    }

    place(0, &order, a, b, &da, &db, &mut image, &mut taken)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cycle, path};

    #[test]
    fn relabeled_cycle() {
        let c = cycle(7).unwrap();
        let perm = [3, 0, 6, 2, 5, 1, 4];
        assert!(is_isomorphic(&c, &c.permuted(&perm)));
    }

    #[test]
    fn same_degrees_not_isomorphic() {
        // C6 vs two triangles
        let two_k3 = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(!is_isomorphic(&cycle(6).unwrap(), &two_k3));
        assert!(!is_isomorphic(&path(4).unwrap(), &cycle(4).unwrap()));
    }
}
