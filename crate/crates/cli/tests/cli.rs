use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_degbound"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Runs with `--format json` and returns the exit code and parsed report.
fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&text).unwrap_or_else(|e| {
        panic!(
            "bad json ({e}): {text}\n{}",
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (out.status.code().unwrap(), v)
}

fn field<'a>(report: &'a Value, section: &str, key: &str) -> &'a Value {
    let s = report["sections"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["title"] == section)
        .unwrap_or_else(|| panic!("no section {section}"));
    let f = s["fields"]
        .as_array()
        .unwrap()
        .iter()
        .find(|f| f["key"] == key)
        .unwrap_or_else(|| panic!("no field {key} in {section}"));
    &f["value"]
}

fn ratio(report: &Value, section: &str, key: &str) -> String {
    let v = field(report, section, key);
    assert_eq!(v["kind"], "rational", "{key}: {v}");
    v["ratio"].as_str().unwrap().to_string()
}

fn float(report: &Value, section: &str, key: &str) -> f64 {
    field(report, section, key)["value"].as_f64().unwrap()
}

fn temp_file(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("degbound-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn single_edge_on_six_vertex_matching() {
    let (code, r) = json(&["bound", "single", "0", "1", &data("matching6_free.txt")]);
    assert_eq!(code, 0);
    assert_eq!(ratio(&r, "bound", "upper"), "1/5");
    assert_eq!(field(&r, "bound", "lower")["kind"], "undefined");
    assert_eq!(field(&r, "bound", "lower applicable")["value"], false);
}

#[test]
fn forbidden_edge_on_twenty_vertex_matching() {
    let (code, r) = json(&["bound", "forbidden", &data("matching20_forbid.txt")]);
    assert_eq!(code, 0);
    assert_eq!(ratio(&r, "bound", "lower"), "6/7");
    assert_eq!(ratio(&r, "bound", "upper"), "200/147");
    assert_eq!(ratio(&r, "bound", "upper (clamped)"), "1/1");
}

#[test]
fn bipartite_single_edge() {
    let (code, r) = json(&["bound", "single", "0", "0", &data("bip33.txt")]);
    assert_eq!(code, 0);
    assert_eq!(ratio(&r, "bound", "upper"), "1/2");
    assert_eq!(ratio(&r, "bound", "lower"), "1/10");
    assert_eq!(r["instance"]["mode"], "bipartite");
}

#[test]
fn subgraph_with_required_lines() {
    let f = temp_file("m8.txt", "degrees: 1 1 1 1 1 1 1 1\nrequire: 0 1\n");
    let (code, r) = json(&["bound", "subgraph", &f]);
    assert_eq!(code, 0);
    // Pi / f with f = 3/4, the same f that gives the single-edge value (1 + 8f)^-1 = 1/7.
    assert_eq!(ratio(&r, "bound", "Pi"), "1/8");
    assert_eq!(ratio(&r, "bound", "upper"), "1/6");
}

#[test]
fn exact_probabilities() {
    let (code, r) = json(&["exact", &data("matching6.txt")]);
    assert_eq!(code, 0);
    assert_eq!(ratio(&r, "exact", "probability"), "1/5");
    let f = temp_file(
        "m20.txt",
        "degrees: 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1\nrequire: 0 1\n",
    );
    let (_, r) = json(&["exact", &f]);
    assert_eq!(ratio(&r, "exact", "probability"), "1/19");
    let (_, r) = json(&["exact", &data("matching20_forbid.txt"), "--event", "avoid"]);
    assert_eq!(ratio(&r, "exact", "probability"), "18/19");
    let (_, r) = json(&["exact", &data("matching6_free.txt"), "--ratio", "0", "1"]);
    assert_eq!(ratio(&r, "exact", "|with| / |without|"), "1/4");
}

#[test]
fn census_totals_agree() {
    let (code, r) = json(&[
        "census",
        &data("matching6.txt"),
        "--arity",
        "2",
        "--direction",
        "both",
    ]);
    assert_eq!(code, 0);
    assert_eq!(field(&r, "census", "forward total")["value"], 12);
    assert_eq!(field(&r, "census", "backward total")["value"], 12);
    let (_, r) = json(&[
        "census",
        &data("matching6_free.txt"),
        "--arity",
        "3",
        "--edge",
        "2",
        "3",
    ]);
    assert_eq!(field(&r, "census", "totals agree")["value"], true);
}

#[test]
fn census_needs_an_edge() {
    let out = run(&["census", &data("matching6_free.txt")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_reports_zero_violations() {
    let out = run(&["verify", "--suite", "default"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text
        .lines()
        .find(|l| l.contains("claims checked:"))
        .expect("summary line");
    assert!(line.ends_with("violations: 0"), "{line}");
}

#[test]
fn sample_is_seed_reproducible() {
    let f = temp_file("m10.txt", "degrees: 1 1 1 1 1 1 1 1 1 1\nrequire: 0 1\n");
    let args = [
        "sample",
        f.as_str(),
        "--steps",
        "20000",
        "--burn-in",
        "100",
        "--batches",
        "20",
        "--seed",
        "11",
    ];
    let (c1, a) = json(&args);
    let (_, b) = json(&args);
    assert_eq!(c1, 0);
    assert_eq!(a["sections"], b["sections"]);
    assert_eq!(field(&a, "sample", "seed")["value"], 11);
    let est = float(&a, "sample", "estimate");
    assert!((est - 1.0 / 9.0).abs() < 0.03, "{est}");
}

#[test]
fn diagnose_matching() {
    let (code, r) = json(&[
        "diagnose",
        &data("matching20_forbid.txt"),
        "--event",
        "avoid",
    ]);
    assert_eq!(code, 0);
    assert_eq!(ratio(&r, "diagnostics", "Phi"), "20/21");
    assert_eq!(ratio(&r, "diagnostics", "rho (upper)"), "2/5");
    assert_eq!(ratio(&r, "diagnostics", "eta"), "2/1");
}

#[test]
fn example_one_at_a_million() {
    let (code, r) = json(&["examples", "ex1", "--n", "1000000"]);
    assert_eq!(code, 0);
    assert!(float(&r, "example", "upper / lower") <= 1.5);
    let lo = float(&r, "example", "lower / Pi");
    let up = float(&r, "example", "upper / Pi");
    assert!(
        (0.7..=1.1).contains(&lo) && (0.7..=1.1).contains(&up),
        "{lo} {up}"
    );
}

#[test]
fn example_two_stays_applicable() {
    let (code, r) = json(&["examples", "ex2", "--n", "1000000", "--r", "2"]);
    assert_eq!(code, 0);
    assert_eq!(field(&r, "example", "applicable")["value"], true);
    assert_eq!(field(&r, "example", "m(L)")["value"], 1_000_000);
}

#[test]
fn example_three_shows_kappa_stage() {
    let (code, r) = json(&["examples", "ex3", "--n", "10000"]);
    assert_eq!(code, 0);
    let k = field(&r, "refined upper (kappa stage)", "kappa");
    assert_eq!(k["kind"], "rational");
    assert!(float(&r, "refined upper (kappa stage)", "prod 1/f") >= 1.0);
}

#[test]
fn example_four_leading_factor() {
    let (code, r) = json(&["examples", "ex4", "--n", "1000000"]);
    assert_eq!(code, 0);
    let rel = float(&r, "example", "Phi / target");
    assert!((rel - 1.0).abs() <= 0.05, "{rel}");
}

#[test]
fn example_five_cap_exit_code() {
    let out = run(&["examples", "ex5", "--n", "1000000"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
    let (code, _) = json(&["examples", "ex5", "--n", "100000", "--non-hub"]);
    assert_eq!(code, 0);
}

#[test]
fn example_inapplicable_exit_code() {
    // At n = 16 the circulant L leaves some per-edge term nonpositive.
    let out = run(&["examples", "ex2", "--n", "16"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stdout).contains("applicable     : no"));
    assert_eq!(
        run(&["examples", "ex1", "--n", "10"]).status.code(),
        Some(2)
    );
}

#[test]
fn exit_codes() {
    let bad = temp_file("bad.txt", "degrees: 1 x\n");
    assert_eq!(run(&["exact", &bad]).status.code(), Some(2));
    assert_eq!(
        run(&["exact", "/nonexistent/problem.txt"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "bound",
            "single",
            "0",
            "1",
            &data("bip33.txt"),
            "--mode",
            "generic"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "bound",
            "subgraph",
            &data("matching6.txt"),
            "--order",
            "best-of:0"
        ])
        .status
        .code(),
        Some(2)
    );
    let k2 = temp_file("k2.txt", "degrees: 1 1\n");
    assert_eq!(
        run(&["bound", "single", "0", "1", &k2]).status.code(),
        Some(3)
    );
    let dense = temp_file("dense.txt", "degrees: 6 6 6 6 6 6 6 6 6 6 6 6\n");
    assert_eq!(
        run(&["exact", &dense, "--ratio", "0", "1", "--node-budget", "50"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn out_flag_writes_json_report() {
    let path = std::env::temp_dir().join(format!("degbound-cli-{}-out.json", std::process::id()));
    let p = path.display().to_string();
    let out = run(&[
        "bound",
        "single",
        "0",
        "0",
        &data("bip33.txt"),
        "--format",
        "json",
        "--out",
        &p,
        "--order",
        "best-of:3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["flags"]["order"], "best-of:3");
    assert_eq!(ratio(&v, "bound", "upper"), "1/2");
    let _ = std::fs::remove_file(path);
}
