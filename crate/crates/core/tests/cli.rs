use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use operadic::bm::{
    assignment_to_json, build_bm, induced_ainf_structure, universal_assignment,
    weight_truncated_target,
};
use operadic::scalar::Field;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_operadic"))
        .args(args)
        .env_remove("OPERADIC_BUDGET")
        .output()
        .expect("binary runs")
}

fn cert(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("certificate JSON on stdout")
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_vec(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn ainf_certify_passes_and_mutation_fails() {
    let out = run(&["ainf", "certify", "--max-arity", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let c = cert(&out);
    assert_eq!(c["ok"], true);
    assert_eq!(c["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(c["seed"], 0);
    assert_eq!(c["inputs_digest"].as_str().unwrap().len(), 64);
    assert!(c.get("timing").is_none());

    let out = run(&[
        "ainf",
        "certify",
        "--max-arity",
        "5",
        "--sign-rule",
        "mutated",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!cert(&out)["result"]["d_squared"]["violations"]
        .as_array()
        .unwrap()
        .is_empty());
}

#[test]
fn moduli_enumerate_counts() {
    let out = run(&["moduli", "enumerate", "--n", "1", "--q", "5", "--unital"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &cert(&out)["result"];
    assert_eq!(r["counts"]["assoc"], 5);
    assert_eq!(r["counts"]["unital"], 4);
    assert_eq!(r["points"].as_array().unwrap().len(), 4);
    assert_eq!(r["paths_agree"], true);
}

#[test]
fn moduli_orbits_and_ideal() {
    let out = run(&[
        "moduli",
        "enumerate",
        "--n",
        "2",
        "--q",
        "2",
        "--unital",
        "--orbits",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = &cert(&out)["result"];
    assert_eq!(r["orbits"]["group_order"], 6);
    let total: u64 = r["orbits"]["orbits"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["size"].as_u64().unwrap())
        .sum();
    assert_eq!(total, r["counts"]["unital"].as_u64().unwrap());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ideal.json");
    let out = run(&[
        "moduli",
        "ideal",
        "--n",
        "2",
        "--unital",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let c: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(c["result"]["variables"].as_array().unwrap().len(), 8 + 2);
}

#[test]
fn budget_and_usage_errors_exit_2() {
    let out = run(&["moduli", "enumerate", "--n", "3", "--q", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_operadic"))
        .args(["moduli", "enumerate", "--n", "2", "--q", "2"])
        .env("OPERADIC_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(
        run(&["moduli", "enumerate", "--n", "1", "--q", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["bm", "build", "--m", "0"]).status.code(), Some(2));
    assert_eq!(
        run(&["--budget", "0", "ainf", "certify"]).status.code(),
        Some(2)
    );
}

#[test]
fn bm_build_writes_generators() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    let out = run(&[
        "bm",
        "build",
        "--m",
        "-2",
        "--r",
        "8",
        "--certify",
        "--linear-part",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let c: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let degs: Vec<i64> = c["result"]["algebra"]["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["deg"].as_i64().unwrap())
        .collect();
    assert_eq!(degs, (2..=8).map(|n| -n).collect::<Vec<i64>>());
    assert_eq!(c["result"]["linear_part"]["differential_zero"], true);
    let out = run(&[
        "bm",
        "build",
        "--m",
        "0",
        "--r",
        "8",
        "--certify",
        "--sign",
        "drop-qi",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn point_check_and_stasheff_agree() {
    let dir = tempfile::tempdir().unwrap();
    let b = build_bm(0, 5).unwrap();
    let target = weight_truncated_target(&b, 4).unwrap();
    let t = write(dir.path(), "t.json", &target.to_json());
    let good = universal_assignment(&target, &Field::Rationals.from_i64(2), 5);
    let a = write(dir.path(), "a.json", &assignment_to_json(&target, &good));
    let out = run(&[
        "bm",
        "point-check",
        "--m",
        "0",
        "--r",
        "5",
        "--target",
        &t,
        "--assign",
        &a,
        "--stasheff",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(cert(&out)["result"]["verdicts_agree"], true);

    let mut bad = good.clone();
    bad.remove(&3);
    let a = write(dir.path(), "bad.json", &assignment_to_json(&target, &bad));
    let out = run(&[
        "bm",
        "point-check",
        "--m",
        "0",
        "--r",
        "5",
        "--target",
        &t,
        "--assign",
        &a,
        "--stasheff",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r = &cert(&out)["result"];
    assert_eq!(r["verdicts_agree"], true);
    assert_eq!(r["point"]["failing"], serde_json::json!([4]));

    let s = write(
        dir.path(),
        "s.json",
        &induced_ainf_structure(&b, &target, &good)
            .unwrap()
            .to_json(),
    );
    let out = run(&["ainf", "check", "--structure", &s, "--max-arity", "5"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn operad_checks() {
    for b in ["ass", "uass", "ainf"] {
        let out = run(&["operad", "check", "--builtin", b, "--max-arity", "4"]);
        assert_eq!(out.status.code(), Some(0), "{b}");
    }
    let out = run(&["operad", "check", "--random-end", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(cert(&out)["seed"], 5);
    assert_eq!(run(&["operad", "check"]).status.code(), Some(2));
}

#[test]
fn certificates_are_byte_deterministic() {
    let a = run(&[
        "moduli",
        "enumerate",
        "--n",
        "2",
        "--q",
        "2",
        "--orbits",
        "--workers",
        "1",
    ]);
    let b = run(&[
        "moduli",
        "enumerate",
        "--n",
        "2",
        "--q",
        "2",
        "--orbits",
        "--workers",
        "8",
    ]);
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    run(&[
        "moduli",
        "enumerate",
        "--n",
        "2",
        "--q",
        "2",
        "--orbits",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    let t = run(&["ainf", "certify", "--max-arity", "4", "--timing"]);
    assert!(cert(&t)["timing"]["seconds"].is_number());
}

#[test]
fn suite_subset_runs() {
    let out = run(&["suite", "--only", "4,9"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &cert(&out)["result"];
    assert_eq!(r["passed"], 2);
}
