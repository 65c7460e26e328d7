//! Property tests for the structural and numerical invariants.

use nalgebra::{Complex, DMatrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use psd_sparsity::catalog::{build_family, build_named, random_clique_sum, random_graph, random_k2, random_k3, FamilySpec};
use psd_sparsity::cone::{
    decompose_extremal, is_extremal, normalize, parse_matrix, random_extremal, random_psd, split_step, subspace_split_2d,
    write_complex, write_real, AnyMatrix, ExtremalClass, Field, PatternMatrix, Tolerance, TwoDecompositionProblem,
};
use psd_sparsity::graph::{edge_list, graph6, Graph, VertexSet};
use psd_sparsity::recognize::{
    atom_decompose, classify_order, f_decompose, f_decompose_complement, f_decompose_extraction, find_clique_cutset,
    OrderClass,
};
use psd_sparsity::witness::{scan_forbidden, Family, DEFAULT_CAP};

type C = Complex<f64>;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0..=1.0f64, any::<u64>()).prop_map(|(n, p, seed)| random_graph(n, p, &mut ChaCha8Rng::seed_from_u64(seed)))
}

fn subset(n: usize) -> impl Strategy<Value = VertexSet> {
    proptest::collection::vec(any::<bool>(), n).prop_map(|bits| bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect())
}

fn graph_and_subset(max_n: usize) -> impl Strategy<Value = (Graph, VertexSet)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), subset(n))
    })
}

/// Patterns whose atoms are cliques, `K_2` or `K_3` members.
fn order_two_pattern() -> impl Strategy<Value = Graph> {
    (1..=3usize, any::<u64>()).prop_map(|(parts, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let parts: Vec<Graph> = (0..parts)
            .map(|k| if k % 2 == 0 { random_k2(2, 1, &mut rng).graph } else { random_k3(1, &mut rng).graph })
            .collect();
        random_clique_sum(&parts, 2, &mut rng)
    })
}

fn reconstruction<T: Field>(x: &PatternMatrix<T>, pieces: &[&PatternMatrix<T>]) -> f64 {
    let mut sum = DMatrix::<T>::zeros(x.n(), x.n());
    for p in pieces {
        sum += p.matrix();
    }
    (sum - x.matrix()).norm() / x.norm()
}

fn psd_relative<T: Field>(x: &PatternMatrix<T>) -> bool {
    let ev = x.eigenvalues();
    ev[0] >= -1e-8 * ev[ev.len() - 1].max(0.0)
}

/// Every leaf is certified extremal, PSD relative to its own size and within
/// the rank bound; the leaves sum to the input.
fn check_decomposition<T: Field>(g: &Graph, bound: usize, seed: u64) -> Result<(), TestCaseError> {
    let tol = Tolerance::default();
    let x = random_psd::<T, _>(g, &mut ChaCha8Rng::seed_from_u64(seed));
    let leaves = decompose_extremal(&x, &tol).map_err(|e| TestCaseError::fail(e.to_string()))?;
    for s in &leaves {
        prop_assert_eq!(s.dimension, 1);
        prop_assert!(s.rank <= bound, "rank {} above {}", s.rank, bound);
        prop_assert!(psd_relative(&s.matrix), "leaf eigenvalues {:?}", s.matrix.eigenvalues());
    }
    let refs: Vec<&PatternMatrix<T>> = leaves.iter().map(|s| &s.matrix).collect();
    prop_assert!(reconstruction(&x, &refs) <= 1e-8);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn complement_is_an_involution(g in graph(12)) {
        prop_assert_eq!(g.complement().complement(), g);
    }

    #[test]
    fn induced_on_everything_is_identity(g in graph(12)) {
        prop_assert_eq!(g.induced_subgraph(&VertexSet::full(g.n())).unwrap(), g);
    }

    #[test]
    fn clique_stable_duality((g, s) in graph_and_subset(10)) {
        prop_assert_eq!(g.is_clique(s.as_slice()), g.complement().is_stable(s.as_slice()));
    }

    #[test]
    fn graph_formats_round_trip(g in graph(20)) {
        prop_assert_eq!(graph6::decode_line(&graph6::encode(&g), 1).unwrap(), g.clone());
        prop_assert_eq!(edge_list::parse(&edge_list::write(&g)).unwrap(), g);
    }

    #[test]
    fn f_members_have_no_obstruction(xs in proptest::collection::vec((1..=3usize, 1..=3usize), 0..=4), z in 0..=3usize) {
        let (x, y): (Vec<usize>, Vec<usize>) = xs.into_iter().unzip();
        let k = x.len();
        prop_assume!(k + z > 0);
        let fam = build_family(&FamilySpec::F { x, y, z }).unwrap();
        prop_assume!(fam.graph.n() <= DEFAULT_CAP);
        prop_assert!(scan_forbidden(&fam.graph, Family::F, DEFAULT_CAP).unwrap().is_none());
        // complement: k complete bipartite components plus |Z| isolated vertices
        let comps = fam.graph.complement().connected_components();
        prop_assert_eq!(comps.iter().filter(|c| c.len() > 1).count(), k);
        prop_assert_eq!(comps.iter().filter(|c| c.len() == 1).count(), z);
    }

    #[test]
    fn recognition_routes_agree(g in graph(10)) {
        let a = f_decompose_extraction(&g);
        let b = f_decompose_complement(&g);
        prop_assert_eq!(a.is_member(), b.is_some());
        if let (Some(da), Some(db)) = (a.decomposition(), b.as_ref()) {
            prop_assert_eq!(da.k(), db.k());
            let sizes = |d: &psd_sparsity::recognize::FDecomposition| {
                let mut s: Vec<(usize, usize)> = d.pair_sizes().into_iter().map(|(x, y)| (x.min(y), x.max(y))).collect();
                s.sort();
                s
            };
            prop_assert_eq!(sizes(da), sizes(db));
            prop_assert_eq!(da.z.len(), db.z.len());
            da.validate(&g).map_err(TestCaseError::fail)?;
            db.validate(&g).map_err(TestCaseError::fail)?;
        }
    }

    #[test]
    fn atoms_reassemble_and_are_atoms(g in graph(12)) {
        let tree = atom_decompose(&g);
        prop_assert_eq!(tree.reassemble(&g), g.clone());
        tree.validate(&g).map_err(TestCaseError::fail)?;
        for a in &tree.atoms {
            let h = g.induced_subgraph(a).unwrap();
            prop_assert!(find_clique_cutset(&h, &VertexSet::full(h.n())).is_none());
        }
    }

    #[test]
    fn order_is_monotone_under_induced_subgraphs((g, s) in graph_and_subset(10)) {
        prop_assume!(!s.is_empty());
        let h = g.induced_subgraph(&s).unwrap();
        prop_assert!(classify_order(&h).unwrap().class <= classify_order(&g).unwrap().class);
    }

    #[test]
    fn joining_a_clique_keeps_the_class(g in graph(9), k in 1..=3usize) {
        let joined = g.join(&Graph::complete(k).unwrap());
        prop_assert_eq!(classify_order(&joined).unwrap().class, classify_order(&g).unwrap().class);
    }

    #[test]
    fn witnesses_verify(g in graph(10)) {
        let v = classify_order(&g).unwrap();
        if let Some(w) = &v.witness {
            prop_assert!(w.verify(&g));
            prop_assert_eq!(v.class, OrderClass::GreaterThanTwo);
        }
        for family in [Family::F, Family::CliqueSumF, Family::Order2Complex] {
            if let Some(w) = scan_forbidden(&g, family, DEFAULT_CAP).unwrap() {
                prop_assert!(w.verify(&g));
            }
        }
        if let psd_sparsity::recognize::FVerdict::NotMember(w) = f_decompose(&g) {
            prop_assert!(w.verify(&g));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn split_step_lowers_both_ranks(g in graph(8), seed in any::<u64>(), complex in any::<bool>()) {
        fn run<T: Field>(g: &Graph, seed: u64) -> Result<(), TestCaseError> {
            let tol = Tolerance::default();
            let x = random_psd::<T, _>(g, &mut ChaCha8Rng::seed_from_u64(seed));
            let report = is_extremal(&x, &tol).map_err(|e| TestCaseError::fail(e.to_string()))?;
            if report.extremal {
                return Ok(());
            }
            let (x1, x2) = split_step(&x, &report, &tol).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let p = x.rank(&tol);
            prop_assert!(x1.rank(&tol) < p && x2.rank(&tol) < p);
            prop_assert!(psd_relative(&x1) && psd_relative(&x2));
            prop_assert!(reconstruction(&x, &[&x1, &x2]) <= 1e-8);
            Ok(())
        }
        if complex { run::<C>(&g, seed)? } else { run::<f64>(&g, seed)? }
    }

    #[test]
    fn order_two_patterns_decompose_into_rank_two(g in order_two_pattern(), seed in any::<u64>()) {
        check_decomposition::<f64>(&g, 2, seed)?;
        check_decomposition::<C>(&g, 2, seed)?;
    }

    #[test]
    fn chordal_patterns_decompose_into_rank_one(n in 1..=10usize, clique in 1..=4usize, seed in any::<u64>()) {
        let g = psd_sparsity::catalog::random_chordal(n, clique, &mut ChaCha8Rng::seed_from_u64(seed));
        check_decomposition::<f64>(&g, 1, seed)?;
        check_decomposition::<C>(&g, 1, seed)?;
    }

    #[test]
    fn normalize_keeps_the_verdict(seed in any::<u64>(), extremal in any::<bool>(), side in 1..=2usize) {
        let tol = Tolerance::default();
        let x: PatternMatrix<C> = if extremal {
            random_extremal::<C>(ExtremalClass::K2Unitary { side }, seed, &tol).unwrap().matrix
        } else {
            let g = build_family(&FamilySpec::F { x: vec![side, side], y: vec![side, side], z: 0 }).unwrap().graph;
            random_psd::<C, _>(&g, &mut ChaCha8Rng::seed_from_u64(seed))
        };
        let f = f_decompose(x.pattern()).decomposition().cloned().unwrap();
        let (xhat, _) = normalize(&x, &f, &tol).unwrap();
        prop_assert_eq!(is_extremal(&x, &tol).unwrap().extremal, is_extremal(&xhat, &tol).unwrap().extremal);
    }

    #[test]
    fn k3_blocks_compose(seed in any::<u64>()) {
        let tol = Tolerance::default();
        let r = random_extremal::<C>(ExtremalClass::K3Rank2, seed, &tol).unwrap();
        let f = f_decompose(r.matrix.pattern()).decomposition().cloned().unwrap();
        let (_, form) = normalize(&r.matrix, &f, &tol).unwrap();
        prop_assert_eq!(r.rank, 2);
        let id = DMatrix::<C>::identity(2, 2);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let c = form.c(i, j);
            prop_assert!((c.adjoint() * c - &id).norm() < 1e-8);
        }
        let lhs = form.c(0, 1).adjoint() * form.c(0, 2);
        prop_assert!((lhs - form.c(1, 2)).norm() < 1e-8);
    }

    #[test]
    fn subspace_split_certificate(p in 2..=12usize, seed in any::<u64>(), complex in any::<bool>()) {
        fn run<T: Field>(p: usize, seed: u64) -> Result<(), TestCaseError> {
            let tol = Tolerance::default();
            let prob = TwoDecompositionProblem::<T>::random(p, &mut ChaCha8Rng::seed_from_u64(seed));
            let cert = subspace_split_2d(&prob, &tol).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let r = cert.residuals(&prob, &tol);
            prop_assert_eq!(r.dim, 2);
            prop_assert!(r.worst() <= 1e-10, "{:?}", r);
            Ok(())
        }
        if complex { run::<C>(p, seed)? } else { run::<f64>(p, seed)? }
    }

    #[test]
    fn matrix_text_round_trips(n in 1..=8usize, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = DMatrix::from_fn(n, n, |_, _| f64::sample(&mut rng) * 1e3);
        let c = DMatrix::from_fn(n, n, |_, _| C::sample(&mut rng) * 1e-7);
        match parse_matrix(&write_real(&r)).unwrap() {
            AnyMatrix::Real(back) => prop_assert!(r.iter().zip(back.iter()).all(|(a, b)| a.to_bits() == b.to_bits())),
            AnyMatrix::Complex(_) => prop_assert!(false, "field changed"),
        }
        match parse_matrix(&write_complex(&c)).unwrap() {
            AnyMatrix::Complex(back) => prop_assert!(c.iter().zip(back.iter()).all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits())),
            AnyMatrix::Real(_) => prop_assert!(false, "field changed"),
        }
    }
}

#[test]
fn d_blocks_have_no_clique_cutset() {
    for j in 1..=6 {
        let g = build_named(&format!("D{j}"), None).unwrap();
        assert!(find_clique_cutset(&g, &VertexSet::full(g.n())).is_none(), "D{j}");
        assert_eq!(atom_decompose(&g).atoms.len(), 1, "D{j}");
    }
}
