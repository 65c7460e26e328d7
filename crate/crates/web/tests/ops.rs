use psd_sparsity_web::{analyze_json, decompose_json, split_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn analyze_cycle_and_clique() {
    let c5 = parse(analyze_json("n 5\n1 2\n2 3\n3 4\n4 5\n5 1\n").unwrap());
    assert_eq!(c5["class"], "GREATER_THAN_TWO");
    assert_eq!(c5["witness"]["pattern"], "C5");
    let k4 = parse(analyze_json("C~").unwrap());
    assert_eq!(k4["class"], "ONE");
    let mut peo: Vec<u64> = k4["peo"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    peo.sort();
    assert_eq!(peo, [1, 2, 3, 4]);
    let order = c5["atoms"]["elimination_order"].as_array().unwrap();
    assert!(order.iter().all(|v| (1..=5).contains(&v.as_u64().unwrap())));
    assert!(analyze_json("!!").is_err());
}

#[test]
fn decompose_c4_respects_rank_bound() {
    let v = parse(decompose_json("C4", 3).unwrap());
    assert!(v["max_rank"].as_u64().unwrap() <= 2);
    assert!(v["residual"].as_f64().unwrap() <= 1e-8);
    assert!(decompose_json("nope", 0).is_err());
}

#[test]
fn split_is_two_dimensional() {
    for seed in 0..20 {
        let v = parse(split_json(6, seed).unwrap());
        assert_eq!(v["dim"], 2);
        assert!(v["worst_residual"].as_f64().unwrap() <= 1e-8);
    }
    assert!(split_json(1, 0).is_err());
}
