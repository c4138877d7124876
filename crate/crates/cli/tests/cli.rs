use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omega-weights")).args(args).env_remove("OMEGA_WEIGHTS_SEED").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn value(o: &Output) -> String {
    json(o)["value"].as_str().unwrap().to_string()
}

#[test]
fn laws_exit_codes() {
    let ok = run(&["laws", "--instance", "minplus", "--suite", "conway-semiring"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(json(&ok)["failures"].as_array().unwrap().len(), 0);
    let bad = run(&["laws", "--instance", "liminf", "--suite", "omega-valuation"]);
    assert_eq!(code(&bad), 1);
    let laws: Vec<String> = json(&bad)["failures"].as_array().unwrap().iter().map(|f| f["law"].as_str().unwrap().to_string()).collect();
    assert!(laws.iter().any(|l| l == "infinitary associativity (alternating witness)"));
    assert_eq!(code(&run(&["laws", "--instance", "nosuch", "--suite", "conway-semiring"])), 2);
    assert_eq!(code(&run(&["laws", "--instance", "bool", "--suite", "nosuch"])), 2);
    assert_eq!(code(&run(&["laws", "--instance", "disc", "--suite", "omega-valuation", "--lambda", "0.5"])), 0);
    assert_eq!(code(&run(&["laws", "--instance", "disc", "--suite", "omega-valuation", "--lambda", "2"])), 2);
}

#[test]
fn coefficients() {
    let o = run(&["coeff", "--instance", "nat", "--expr", "(2a)^+", "--word", "aa"]);
    assert_eq!((code(&o), value(&o).as_str()), (0, "4"));
    let o = run(&["coeff", "--instance", "bool", "--expr", "(ab)^w", "--word", "(ab)^w"]);
    assert_eq!((code(&o), value(&o).as_str()), (0, "1"));
    let o = run(&["coeff", "--instance", "bool", "--expr", "(ab)^w", "--word", "b(ab)^w"]);
    assert_eq!(value(&o), "0");
    let o = run(&["coeff", "--instance", "disc", "--expr", "a(b)^w", "--word", "a(b)^w"]);
    assert!((value(&o).parse::<f64>().unwrap() - 2.0).abs() < 1e-9);
    assert_eq!(code(&run(&["coeff", "--instance", "bool", "--expr", "a^+", "--word", ""])), 2);
    assert_eq!(code(&run(&["coeff", "--instance", "bool", "--expr", "a +", "--word", "a"])), 2);
    assert_eq!(code(&run(&["coeff", "--instance", "nat", "--expr", "a^w", "--word", "(a)^w"])), 2);
}

#[test]
fn compile_then_behavior() {
    let o = run(&["compile", "--instance", "bool", "--expr", "(ab)^w"]);
    assert_eq!(code(&o), 0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("aut.json");
    std::fs::write(&path, &o.stdout).unwrap();
    let p = path.to_str().unwrap();
    for (word, expected) in [("(ab)^w", "1"), ("(a)^w", "0"), ("b(ab)^w", "0")] {
        let b = run(&["behavior", "--instance", "bool", "--aut", p, "--word", word]);
        assert_eq!((code(&b), value(&b)), (0, expected.to_string()), "{word}");
    }
    assert_eq!(code(&run(&["behavior", "--instance", "bool", "--aut", "/nonexistent.json", "--word", "a"])), 2);
}

#[test]
fn discounted_unit_loop() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("loop.json");
    let aut = r#"{"n":1,"k":1,"alphabet":["a"],"alpha":["1"],"beta":["1"],
        "transitions":[{"from":1,"to":1,"letter":"a","weight":"1"}]}"#;
    std::fs::write(&path, aut).unwrap();
    let o = run(&["behavior", "--aut", path.to_str().unwrap(), "--word", "a^w", "--instance", "disc", "--lambda", "0.5"]);
    assert_eq!(code(&o), 0);
    let v: f64 = value(&o).parse().unwrap();
    assert!((v - 2.0).abs() <= 1e-6, "{v}");
    let bound = json(&o)["error_bound"].as_f64().unwrap();
    assert!((v - 2.0).abs() <= bound + 1e-12);
    let o = run(&["behavior", "--aut", path.to_str().unwrap(), "--word", "aa", "--instance", "disc", "--lambda", "0.5"]);
    assert_eq!(value(&o), "1.5");
}

#[test]
fn group_checks() {
    assert_eq!(code(&run(&["group-check", "--group", "S3", "--instance", "minplus"])), 0);
    assert_eq!(code(&run(&["group-check", "--group", "V4", "--instance", "bool"])), 0);
    assert_eq!(code(&run(&["group-check", "--group", "Z5", "--instance", "lattice", "--samples", "50"])), 0);
    assert_eq!(code(&run(&["group-check", "--group", "Q8", "--instance", "minplus"])), 2);
    assert_eq!(code(&run(&["group-check", "--group", "S3", "--instance", "nat"])), 2);
}

/// `(Σ_{i≤k} nᵢ + n_{k+1}) / (2Σ_{i≤k} nᵢ + n_{k+1})` with `nᵢ = 4^i`.
fn power4_rhs(k: u32) -> f64 {
    let s: f64 = (1..=k).map(|i| 4f64.powi(i as i32)).sum();
    let next = 4f64.powi(k as i32 + 1);
    (s + next) / (2.0 * s + next)
}

#[test]
fn counterexamples() {
    let o = run(&["counterexample", "--name", "13.8c"]);
    assert_eq!(code(&o), 1);
    assert_eq!((json(&o)["first"].as_f64(), json(&o)["second"].as_f64()), (Some(0.0), Some(1.0)));
    let o = run(&["counterexample", "--name", "13.8e"]);
    assert_eq!(code(&o), 1);
    assert!((json(&o)["first"].as_f64().unwrap() - 2.0 / 3.0).abs() < 0.02);
    let o = run(&["counterexample", "--name", "13.10", "--depth", "8"]);
    assert_eq!(code(&o), 1);
    let t = json(&o);
    assert_eq!(t["first_label"], "(rs)^w");
    for p in t["points"].as_array().unwrap() {
        assert_eq!(p["first"].as_f64(), Some(0.5));
        let k = p["depth"].as_u64().unwrap() as u32;
        assert!((p["second"].as_f64().unwrap() - power4_rhs(k)).abs() < 1e-12);
    }
    let o = run(&["counterexample", "--name", "13.10", "--depth", "8", "--schedule", "superexponential"]);
    assert!(json(&o)["second"].as_f64().unwrap() > 0.99);
    assert_eq!(code(&run(&["counterexample", "--name", "13.10", "--depth", "2"])), 2);
    assert_eq!(code(&run(&["counterexample", "--name", "1.1"])), 2);
}

#[test]
fn seeds_are_deterministic() {
    let args = ["laws", "--instance", "liminf", "--suite", "omega-valuation", "--samples", "50"];
    let a = run(&[&args[..], &["--seed", "9"]].concat());
    let b = run(&[&args[..], &["--seed", "9"]].concat());
    assert_eq!(a.stdout, b.stdout);
    let c = run(&[&args[..], &["--seed", "10"]].concat());
    assert_ne!(a.stdout, c.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_omega-weights")).args(args).env("OMEGA_WEIGHTS_SEED", "9").output().unwrap();
    assert_eq!(env.stdout, a.stdout);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&run(&["bogus"])), 2);
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["--help"])), 0);
}
