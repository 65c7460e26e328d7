//! Browser bindings: graph analysis, random decompositions and the
//! two-dimensional subspace split, each returning a JSON string.

use psd_sparsity::catalog::build_named;
use psd_sparsity::cone::{decompose_extremal, random_psd, subspace_split_2d, Tolerance, TwoDecompositionProblem};
use psd_sparsity::graph::{edge_list, graph6, Graph};
use psd_sparsity::recognize::classify_order;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Edge-list text starts with an `n` header line; anything else is graph6.
fn parse_graph(text: &str) -> Result<Graph, String> {
    let text = text.trim();
    let parsed = if text.starts_with('n') { edge_list::parse(text) } else { graph6::decode_line(text, 1) };
    parsed.map_err(|e| e.to_string())
}

/// Order class, atoms, elimination ordering and witness of a graph.
pub fn analyze_json(text: &str) -> Result<String, String> {
    let g = parse_graph(text)?;
    let verdict = classify_order(&g).map_err(|e| e.to_string())?;
    serde_json::to_string(&verdict).map_err(|e| e.to_string())
}

/// Decomposes a seeded random real PSD matrix with the named pattern.
pub fn decompose_json(name: &str, seed: u64) -> Result<String, String> {
    let g = build_named(name, None).map_err(|e| e.to_string())?;
    let tol = Tolerance::default();
    let x = random_psd::<f64, _>(&g, &mut ChaCha8Rng::seed_from_u64(seed));
    let summands = decompose_extremal(&x, &tol).map_err(|e| e.to_string())?;
    let mut diff = x.matrix().clone();
    for s in &summands {
        diff -= s.matrix.matrix();
    }
    let ranks: Vec<usize> = summands.iter().map(|s| s.rank).collect();
    Ok(json!({
        "n": g.n(),
        "ranks": ranks,
        "max_rank": ranks.iter().copied().max().unwrap_or(0),
        "residual": diff.norm() / x.norm().max(f64::MIN_POSITIVE),
    })
    .to_string())
}

/// Finds a two-dimensional subspace split for two random real decompositions of `R^p`.
pub fn split_json(p: usize, seed: u64) -> Result<String, String> {
    let tol = Tolerance::default();
    let prob = TwoDecompositionProblem::<f64>::random(p, &mut ChaCha8Rng::seed_from_u64(seed));
    let cert = subspace_split_2d(&prob, &tol).map_err(|e| e.to_string())?;
    let res = cert.residuals(&prob, &tol);
    Ok(json!({
        "p": p,
        "exit": format!("{:?}", cert.exit),
        "peeled": cert.peeled.len(),
        "dim": res.dim,
        "worst_residual": res.worst(),
    })
    .to_string())
}

#[wasm_bindgen]
pub fn analyze(text: &str) -> Result<String, JsError> {
    analyze_json(text).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn decompose(name: &str, seed: u32) -> Result<String, JsError> {
    decompose_json(name, seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn split(p: u32, seed: u32) -> Result<String, JsError> {
    split_json(p as usize, seed.into()).map_err(|e| JsError::new(&e))
}
