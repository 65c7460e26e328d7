//! Self-test suites: recognizer/oracle equivalences over exhaustive and
//! random graph populations, randomized numeric checks, and catalog goldens.
//!
//! Every sample draws from its own generator seeded by `(seed, suite, index)`,
//! so results do not depend on the worker count.

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{
    bowtie, build_family, complete, cycle, d_block, octahedron, random_chordal, random_clique_sum, random_graph,
    FamilySpec,
};
use crate::cone::{
    decompose_extremal, random_psd, subspace_split_2d, Field, Tolerance, TwoDecompositionProblem,
};
use crate::graph::Graph;
use crate::recognize::{atom_decompose, classify_order_with_cap, f_decompose, is_chordal, OrderClass};
use crate::witness::{scan_forbidden, Family, DEFAULT_CAP};

/// Largest exhaustive vertex count accepted.
pub const MAX_EXHAUSTIVE_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SelftestConfig {
    pub max_n: usize,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    /// First few failure descriptions, in sample order.
    pub examples: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestSummary {
    pub config: SelftestConfig,
    pub suites: Vec<SuiteResult>,
}

impl SelftestSummary {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.failures == 0)
    }
}

/// Generator for sample `index` of suite `suite`.
pub fn sample_rng(seed: u64, suite: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&suite.to_le_bytes());
    key[16..24].copy_from_slice(&index.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Disagreements between the recognizers and the forbidden-subgraph oracles
/// on one graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GraphCheck {
    /// `F` membership vs. no `P4` and no stable triple.
    pub f_class: Option<String>,
    /// All atoms in `F` vs. no long hole and no `D1`..`D4`.
    pub clique_sum_f: Option<String>,
    /// Order at most two vs. no long hole and no `D1`..`D6`; witnesses verified.
    pub order: Option<String>,
}

impl GraphCheck {
    pub fn failures(&self) -> impl Iterator<Item = &String> {
        self.f_class.iter().chain(&self.clique_sum_f).chain(&self.order)
    }
}

pub fn check_graph(g: &Graph) -> GraphCheck {
    let cap = g.n().max(DEFAULT_CAP);
    let mut out = GraphCheck::default();
    let label = crate::graph::graph6::encode(g);

    let member = f_decompose(g).is_member();
    let obstruction = scan_forbidden(g, Family::F, cap).expect("within cap").is_some();
    if member == obstruction {
        out.f_class = Some(format!("{label}: F member {member}, P4/coK3 present {obstruction}"));
    }

    let atoms = atom_decompose(g);
    let all_f = atoms.atoms.iter().all(|a| f_decompose(&g.induced_subgraph(a).expect("nonempty")).is_member());
    let obstruction = scan_forbidden(g, Family::CliqueSumF, cap).expect("within cap").is_some();
    if all_f == obstruction {
        out.clique_sum_f = Some(format!("{label}: all atoms in F {all_f}, hole/D1-D4 present {obstruction}"));
    }

    let obstruction = scan_forbidden(g, Family::Order2Complex, cap).expect("within cap").is_some();
    match classify_order_with_cap(g, cap) {
        Err(e) => out.order = Some(format!("{label}: classify failed: {e}")),
        Ok(v) => {
            let low = v.class <= OrderClass::AtMostTwo;
            let chordal = is_chordal(g).is_chordal();
            if low == obstruction {
                out.order = Some(format!("{label}: class {}, hole/D1-D6 present {obstruction}", v.class));
            } else if (v.class == OrderClass::One) != chordal {
                out.order = Some(format!("{label}: class {}, chordal {chordal}", v.class));
            } else if let Some(w) = &v.witness {
                if !w.verify(g) {
                    out.order = Some(format!("{label}: witness {} {:?} does not verify", w.pattern(), w.vertices()));
                }
            }
        }
    }
    out
}

/// Graph on `n` vertices whose edges are the set bits of `code` (pairs in
/// lexicographic order).
pub fn graph_from_code(n: usize, code: u64) -> Graph {
    let mut g = Graph::empty(n).expect("n >= 1");
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if code >> bit & 1 == 1 {
                g.add_edge(u, v);
            }
            bit += 1;
        }
    }
    g
}

/// Three per-criterion results over a graph population.
fn equivalence_suites(prefix: &str, checks: Vec<GraphCheck>) -> Vec<SuiteResult> {
    type Pick = fn(&GraphCheck) -> &Option<String>;
    let pick: [(&str, Pick); 3] = [
        ("f-class", |c| &c.f_class),
        ("clique-sum-f", |c| &c.clique_sum_f),
        ("order-two", |c| &c.order),
    ];
    pick.iter()
        .map(|(name, get)| {
            let fails: Vec<&String> = checks.iter().filter_map(|c| get(c).as_ref()).collect();
            SuiteResult {
                name: format!("{prefix}/{name}"),
                checked: checks.len(),
                failures: fails.len(),
                examples: fails.iter().take(5).map(|s| s.to_string()).collect(),
            }
        })
        .collect()
}

/// Every labeled graph on `n` vertices.
pub fn exhaustive_checks(n: usize) -> Vec<GraphCheck> {
    let pairs = n * (n - 1) / 2;
    (0..1u64 << pairs).into_par_iter().map(|code| check_graph(&graph_from_code(n, code))).collect()
}

/// `count` Erdős–Rényi graphs with `n` uniform in `lo..=hi` and edge density uniform in `[0.2, 0.9]`.
pub fn random_checks(count: usize, lo: usize, hi: usize, seed: u64, suite: u64) -> Vec<GraphCheck> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, suite, i);
            let n = rng.random_range(lo..=hi);
            let p = rng.random_range(0.2..0.9);
            check_graph(&random_graph(n, p, &mut rng))
        })
        .collect()
}

/// One subspace-splitting trial; `None` on success.
pub fn dim2subs_trial<T: Field>(p: usize, rng: &mut ChaCha8Rng, tol: &Tolerance) -> Option<String> {
    let prob = TwoDecompositionProblem::<T>::random(p, rng);
    match subspace_split_2d(&prob, tol) {
        Err(e) => Some(format!("{} p={p}: {e}", T::TAG)),
        Ok(cert) => {
            let r = cert.residuals(&prob, tol);
            (r.dim != 2 || r.worst() > 1e-10).then(|| format!("{} p={p}: {r:?}", T::TAG))
        }
    }
}

fn dim2subs_suite<T: Field>(samples: usize, seed: u64, suite: u64) -> SuiteResult {
    let tol = Tolerance::default();
    let fails: Vec<String> = (0..samples as u64)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = sample_rng(seed, suite, i);
            let p = rng.random_range(2..=12);
            dim2subs_trial::<T>(p, &mut rng, &tol)
        })
        .collect();
    SuiteResult { name: format!("dim2subs/{}", T::TAG), checked: samples, failures: fails.len(), examples: fails.into_iter().take(5).collect() }
}

/// Patterns of complex order at most two used by the decomposition suites,
/// with the rank bound for their extremals.
pub fn decomposition_patterns(rng: &mut ChaCha8Rng) -> Vec<(String, Graph, usize)> {
    let k2 = build_family(&FamilySpec::F { x: vec![2, 2], y: vec![2, 2], z: 0 }).expect("valid").graph;
    let k3 = build_family(&FamilySpec::K3 { z: 0 }).expect("valid").graph;
    let c4 = cycle(4).expect("valid");
    vec![
        ("chordal".into(), random_chordal(8, 4, rng), 1),
        ("C4".into(), c4.clone(), 2),
        ("K2 member (8 vertices)".into(), k2.clone(), 2),
        ("K3 cocktail".into(), k3.clone(), 2),
        ("clique-sum C4 + K3 + K2".into(), three_atom_sum(), 2),
    ]
}

/// `C4`, the cocktail-party graph and the 8-vertex `K_2` member glued along edges.
pub fn three_atom_sum() -> Graph {
    let k2 = build_family(&FamilySpec::F { x: vec![2, 2], y: vec![2, 2], z: 0 }).expect("valid").graph;
    let k3 = build_family(&FamilySpec::K3 { z: 0 }).expect("valid").graph;
    let c4 = cycle(4).expect("valid");
    // vertices 0,1 of C4 are adjacent; 0 and 2 of the cocktail graph are adjacent; 0 and 1 of k2 are adjacent
    let a = crate::catalog::clique_sum(&c4, &[0, 1], &k3, &[0, 2]);
    crate::catalog::clique_sum(&a, &[2, 3], &k2, &[0, 1])
}

/// Decomposes one random element; `None` when every summand is certified
/// extremal within the rank bound and the pieces reconstruct the input.
pub fn decomposition_trial<T: Field>(g: &Graph, bound: usize, rng: &mut ChaCha8Rng, tol: &Tolerance) -> Option<String> {
    let x = random_psd::<T, _>(g, rng);
    let summands = match decompose_extremal(&x, tol) {
        Ok(s) => s,
        Err(e) => return Some(format!("decomposition failed: {e}")),
    };
    let mut sum = nalgebra::DMatrix::<T>::zeros(x.n(), x.n());
    for s in &summands {
        sum += s.matrix.matrix();
        if s.dimension != 1 {
            return Some(format!("summand with perturbation dimension {}", s.dimension));
        }
        if s.rank > bound {
            return Some(format!("summand of rank {} above bound {bound}", s.rank));
        }
        let ev = s.matrix.eigenvalues();
        if ev[0] < -1e-8 * ev[ev.len() - 1].max(0.0) {
            return Some(format!("summand with eigenvalue {:.3e}", ev[0]));
        }
    }
    let residual = (sum - x.matrix()).norm() / x.norm();
    (residual > 1e-8).then(|| format!("reconstruction residual {residual:.3e}"))
}

fn decomposition_suite<T: Field>(samples: usize, seed: u64, suite: u64) -> Vec<SuiteResult> {
    let tol = Tolerance::default();
    let mut rng = sample_rng(seed, suite, u64::MAX >> 1);
    decomposition_patterns(&mut rng)
        .into_iter()
        .enumerate()
        .map(|(k, (name, g, bound))| {
            let fails: Vec<String> = (0..samples as u64)
                .into_par_iter()
                .filter_map(|i| {
                    let mut rng = sample_rng(seed, suite + 1 + k as u64, i);
                    decomposition_trial::<T>(&g, bound, &mut rng, &tol)
                })
                .collect();
            SuiteResult {
                name: format!("decompose/{}/{name}", T::TAG),
                checked: samples,
                failures: fails.len(),
                examples: fails.into_iter().take(5).collect(),
            }
        })
        .collect()
}

/// Catalog graphs with their expected class; negatives must be their own witness.
pub fn goldens(seed: u64) -> Vec<(String, Graph, OrderClass)> {
    let mut out: Vec<(String, Graph, OrderClass)> = vec![
        ("C5".into(), cycle(5).expect("valid"), OrderClass::GreaterThanTwo),
        ("C6".into(), cycle(6).expect("valid"), OrderClass::GreaterThanTwo),
    ];
    for j in 1..=6 {
        out.push((format!("D{j}"), d_block(j).expect("valid"), OrderClass::GreaterThanTwo));
    }
    for n in 1..=6 {
        out.push((format!("K{n}"), complete(n).expect("valid"), OrderClass::One));
    }
    out.push(("C4".into(), cycle(4).expect("valid"), OrderClass::AtMostTwo));
    out.push(("octahedron".into(), octahedron(), OrderClass::AtMostTwo));
    out.push(("bowtie".into(), bowtie(), OrderClass::One));
    let mut rng = sample_rng(seed, 90, 0);
    for i in 0..20 {
        let parts: Vec<Graph> = (0..rng.random_range(2..=4))
            .map(|_| {
                if rng.random_bool(0.5) {
                    crate::catalog::random_k2(2, 1, &mut rng).graph
                } else {
                    crate::catalog::random_k3(1, &mut rng).graph
                }
            })
            .collect();
        out.push((format!("clique-sum #{}", i + 1), random_clique_sum(&parts, 3, &mut rng), OrderClass::AtMostTwo));
    }
    out
}

/// `None` when `g` classifies as expected: negatives at most the expected
/// class bound with a witness spanning the whole graph.
pub fn golden_check(name: &str, g: &Graph, expected: OrderClass) -> Option<String> {
    let v = match classify_order_with_cap(g, g.n().max(DEFAULT_CAP)) {
        Ok(v) => v,
        Err(e) => return Some(format!("{name}: {e}")),
    };
    match expected {
        OrderClass::GreaterThanTwo => {
            if v.class != OrderClass::GreaterThanTwo {
                return Some(format!("{name}: classified {}", v.class));
            }
            let w = v.witness.as_ref().expect("negative verdicts carry a witness");
            if w.vertex_set().len() != g.n() || !w.verify(g) {
                return Some(format!("{name}: witness {} on {} is not the whole graph", w.pattern(), w.vertex_set()));
            }
            None
        }
        // positives: at most two, and exactly ONE for the chordal ones
        _ => (v.class > OrderClass::AtMostTwo || (expected == OrderClass::One && v.class != OrderClass::One))
            .then(|| format!("{name}: classified {}", v.class)),
    }
}

pub fn run(config: SelftestConfig) -> SelftestSummary {
    let SelftestConfig { max_n, samples, seed } = config;
    let mut suites = Vec::new();
    let mut exhaustive: Vec<GraphCheck> = Vec::new();
    for n in 1..=max_n.min(MAX_EXHAUSTIVE_N) {
        exhaustive.extend(exhaustive_checks(n));
    }
    suites.extend(equivalence_suites(&format!("exhaustive n<={max_n}"), exhaustive));
    suites.extend(equivalence_suites("random n=7..10", random_checks(samples, 7, 10, seed, 1)));
    suites.push(dim2subs_suite::<f64>(samples, seed, 2));
    suites.push(dim2subs_suite::<Complex<f64>>(samples, seed, 3));
    let per_pattern = samples.div_ceil(10);
    suites.extend(decomposition_suite::<f64>(per_pattern, seed, 10));
    suites.extend(decomposition_suite::<Complex<f64>>(per_pattern, seed, 20));
    let golden = goldens(seed);
    let fails: Vec<String> = golden.iter().filter_map(|(name, g, c)| golden_check(name, g, *c)).collect();
    suites.push(SuiteResult { name: "catalog goldens".into(), checked: golden.len(), failures: fails.len(), examples: fails });
    SelftestSummary { config, suites }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_enumeration_covers_all_graphs() {
        assert_eq!(graph_from_code(4, 0).edge_count(), 0);
        assert_eq!(graph_from_code(4, 63).edge_count(), 6);
        assert!(graph_from_code(3, 0b101).has_edge(0, 1));
        assert!(graph_from_code(3, 0b101).has_edge(1, 2));
    }

    #[test]
    fn three_atom_sum_has_three_atoms() {
        let g = three_atom_sum();
        assert_eq!(g.n(), 4 + 6 + 8 - 4);
        assert_eq!(atom_decompose(&g).atoms.len(), 3);
    }

    #[test]
    fn small_run_is_clean_and_deterministic() {
        let config = SelftestConfig { max_n: 4, samples: 20, seed: 5 };
        let a = run(config);
        assert!(a.passed(), "{a:#?}");
        assert_eq!(a, run(config));
    }

    #[test]
    fn goldens_pass() {
        for (name, g, c) in goldens(1) {
            assert_eq!(golden_check(&name, &g, c), None);
        }
    }
}
