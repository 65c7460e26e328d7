//! Acceptance suite: one PASS/FAIL line per criterion.

use std::time::Instant;

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use psd_sparsity::cli;
use psd_sparsity::cone::{
    normalize, parse_matrix, random_extremal, write_complex, write_real, AnyMatrix, ExtremalClass, Tolerance,
};
use psd_sparsity::graph::{edge_list, graph6};
use psd_sparsity::recognize::{atom_decompose, f_decompose};
use psd_sparsity::selftest::{
    decomposition_patterns, decomposition_trial, dim2subs_trial, exhaustive_checks, golden_check, goldens, random_checks,
    sample_rng, three_atom_sum, GraphCheck, SelftestConfig,
};

type C = Complex<f64>;

const SEED: u64 = 20240601;

struct Outcome {
    id: u32,
    name: &'static str,
    checked: usize,
    failures: Vec<String>,
    extra: String,
}

impl Outcome {
    fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    fn print(&self) {
        println!(
            "{} criterion {}: {} ({} checked, {} failures{})",
            if self.pass() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checked,
            self.failures.len(),
            self.extra
        );
        for f in self.failures.iter().take(5) {
            println!("    {f}");
        }
    }
}

fn population() -> Vec<GraphCheck> {
    let mut all = exhaustive_checks(6);
    assert_eq!(all.len(), 32768);
    all.extend(random_checks(10_000, 7, 10, SEED, 1));
    all
}

fn equivalence(id: u32, name: &'static str, checks: &[GraphCheck], get: fn(&GraphCheck) -> &Option<String>, secs: f64) -> Outcome {
    let mut failures: Vec<String> = checks.iter().filter_map(|c| get(c).clone()).collect();
    if secs > 120.0 {
        failures.push(format!("population run took {secs:.1} s, above 120 s"));
    }
    Outcome { id, name, checked: checks.len(), failures, extra: format!(", population built and checked in {secs:.1} s") }
}

fn criterion_4() -> Outcome {
    let golden = goldens(SEED);
    let failures = golden.iter().filter_map(|(name, g, c)| golden_check(name, g, *c)).collect();
    Outcome { id: 4, name: "catalog negatives and positives", checked: golden.len(), failures, extra: String::new() }
}

fn criterion_5() -> Outcome {
    let tol = Tolerance::default();
    let start = Instant::now();
    let mut failures = Vec::new();
    for i in 0..1000u64 {
        let mut rng = sample_rng(SEED, 5, i);
        let p = rng.random_range(2..=12);
        failures.extend(dim2subs_trial::<f64>(p, &mut rng, &tol));
        let mut rng = sample_rng(SEED, 6, i);
        let p = rng.random_range(2..=12);
        failures.extend(dim2subs_trial::<C>(p, &mut rng, &tol));
    }
    let secs = start.elapsed().as_secs_f64();
    if secs > 30.0 {
        failures.push(format!("took {secs:.1} s, above 30 s"));
    }
    Outcome { id: 5, name: "two-dimensional subspace splitting", checked: 2000, failures, extra: format!(", {secs:.2} s") }
}

fn criterion_6() -> Outcome {
    let tol = Tolerance::default();
    let mut failures = Vec::new();
    let atoms = atom_decompose(&three_atom_sum()).atoms.len();
    if atoms != 3 {
        failures.push(format!("clique-sum pattern has {atoms} atoms"));
    }
    let mut rng = sample_rng(SEED, 7, 0);
    let patterns = decomposition_patterns(&mut rng);
    let mut checked = 0;
    for (k, (name, g, bound)) in patterns.iter().enumerate() {
        for i in 0..100u64 {
            let mut rng = sample_rng(SEED, 100 + k as u64, i);
            if let Some(e) = decomposition_trial::<f64>(g, *bound, &mut rng, &tol) {
                failures.push(format!("real {name}: {e}"));
            }
            let mut rng = sample_rng(SEED, 200 + k as u64, i);
            if let Some(e) = decomposition_trial::<C>(g, *bound, &mut rng, &tol) {
                failures.push(format!("complex {name}: {e}"));
            }
            checked += 2;
        }
    }
    Outcome { id: 6, name: "extremal decomposition rank bound", checked, failures, extra: String::new() }
}

fn criterion_7() -> Outcome {
    let tol = Tolerance::default();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for side in [1, 2] {
        for seed in 0..500u64 {
            let tag = format!("side {side} seed {seed}");
            let r = match random_extremal::<C>(ExtremalClass::K2Unitary { side }, seed, &tol) {
                Ok(r) => r,
                Err(e) => {
                    failures.push(format!("{tag}: {e}"));
                    continue;
                }
            };
            let p = r.rank;
            let f = f_decompose(r.matrix.pattern()).decomposition().cloned().expect("K2 member");
            let (xhat, form) = match normalize(&r.matrix, &f, &tol) {
                Ok(v) => v,
                Err(e) => {
                    failures.push(format!("{tag}: {e}"));
                    continue;
                }
            };
            if form.sizes.iter().any(|s| s[0] != p / 2 || s[1] != p / 2) {
                failures.push(format!("{tag}: rank {p}, block sizes {:?}", form.sizes));
                continue;
            }
            let c = xhat.matrix().view((0, p), (p, p)).into_owned();
            let id = DMatrix::<C>::identity(p, p);
            let res = (c.adjoint() * &c - &id).norm().max((&c * c.adjoint() - &id).norm());
            worst = worst.max(res);
            if res > 1e-8 {
                failures.push(format!("{tag}: |C*C - I| = {res:.3e}"));
            }
        }
    }
    Outcome { id: 7, name: "normalized C is unitary", checked: 1000, failures, extra: format!(", worst residual {worst:.2e}") }
}

fn criterion_8() -> Outcome {
    let tol = Tolerance::default();
    let mut failures = Vec::new();
    let mut attempts = Vec::new();
    let classes = std::iter::once(("C5".to_string(), ExtremalClass::CycleRank3 { n: 5 }))
        .chain((1..=6).map(|j| (format!("D{j}"), ExtremalClass::DRank3 { j })));
    let mut checked = 0;
    for (name, class) in classes {
        checked += 1;
        match random_extremal::<C>(class, SEED, &tol) {
            Ok(r) if r.rank == 3 && r.dimension == 1 && r.attempts <= 1000 => attempts.push(format!("{name}:{}", r.attempts)),
            Ok(r) => failures.push(format!("{name}: rank {}, dimension {}", r.rank, r.dimension)),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    Outcome {
        id: 8,
        name: "rank-3 extremals on C5 and D1-D6 (complex field)",
        checked,
        failures,
        extra: format!(", attempts {}", attempts.join(" ")),
    }
}

fn run_cli(args: &[String]) -> (i32, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(args.iter().cloned(), &mut out, &mut err);
    (code, String::from_utf8(out).expect("utf-8"))
}

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for code in 0..1u64 << 15 {
        let g = psd_sparsity::selftest::graph_from_code(6, code);
        checked += 1;
        if graph6::decode_line(&graph6::encode(&g), 1).ok().as_ref() != Some(&g) {
            failures.push(format!("graph6 round trip failed for code {code}"));
        }
        if edge_list::parse(&edge_list::write(&g)).ok().as_ref() != Some(&g) {
            failures.push(format!("edge list round trip failed for code {code}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..200 {
        checked += 1;
        let n = rng.random_range(1..=9);
        let scale = 10f64.powi(rng.random_range(-20..20));
        let real = DMatrix::from_fn(n, n, |_, _| (rng.random::<f64>() - 0.5) * scale);
        let complex = DMatrix::from_fn(n, n, |_, _| C::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5).scale(scale));
        let bits = |a: &[f64], b: &[f64]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits());
        match parse_matrix(&write_real(&real)) {
            Ok(AnyMatrix::Real(back)) if bits(real.as_slice(), back.as_slice()) => {}
            _ => failures.push(format!("real matrix round trip failed (n = {n})")),
        }
        let flat = |m: &DMatrix<C>| m.iter().flat_map(|z| [z.re, z.im]).collect::<Vec<f64>>();
        match parse_matrix(&write_complex(&complex)) {
            Ok(AnyMatrix::Complex(back)) if bits(&flat(&complex), &flat(&back)) => {}
            _ => failures.push(format!("complex matrix round trip failed (n = {n})")),
        }
    }

    // identical seeds give identical reports
    let dir = tempfile::tempdir().expect("tempdir");
    let path = |name: &str| dir.path().join(name).display().to_string();
    let s = |v: &[&str]| v.iter().map(|a| a.to_string()).collect::<Vec<String>>();
    let steps: Vec<Vec<String>> = vec![
        s(&["gen", "--chordal", "n=9,clique=4", "--seed", "4", "--out", &path("g.g6")]),
        s(&["gen-extremal", "--class", "d2-rank3", "--seed", "9", "--out", &path("x.txt"), "--graph-out", &path("xg.g6")]),
        s(&["--json", "analyze", "--graph", &path("g.g6")]),
        s(&["decompose", "--graph", &path("xg.g6"), "--matrix", &path("x.txt")]),
        s(&["--json", "selftest", "--max-n", "4", "--samples", "30", "--seed", "2"]),
    ];
    for args in &steps {
        checked += 1;
        let (c1, o1) = run_cli(args);
        let (c2, o2) = run_cli(args);
        if c1 != 0 || c2 != 0 || o1 != o2 {
            failures.push(format!("`{}` not reproducible (exit {c1}/{c2})", args.join(" ")));
        }
    }
    let a = psd_sparsity::selftest::run(SelftestConfig { max_n: 5, samples: 50, seed: 8 });
    let b = psd_sparsity::selftest::run(SelftestConfig { max_n: 5, samples: 50, seed: 8 });
    checked += 1;
    if a != b {
        failures.push("selftest summaries differ for the same seed".into());
    }
    Outcome { id: 9, name: "round trips and determinism", checked, failures, extra: String::new() }
}

fn main() {
    let start = Instant::now();
    let pop = population();
    let secs = start.elapsed().as_secs_f64();
    let outcomes = [
        equivalence(1, "F membership vs. no induced P4 / stable triple", &pop, |c| &c.f_class, secs),
        equivalence(2, "atoms in F vs. no long hole / D1-D4", &pop, |c| &c.clique_sum_f, secs),
        equivalence(3, "order at most two vs. no long hole / D1-D6", &pop, |c| &c.order, secs),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ];
    for o in &outcomes {
        o.print();
    }
    let failed = outcomes.iter().filter(|o| !o.pass()).count();
    println!("acceptance: {} of {} criteria passed in {:.1} s", outcomes.len() - failed, outcomes.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
