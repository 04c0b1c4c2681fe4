use std::process::{Command, Output};

use serde_json::Value;

fn ordrefl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordrefl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn diagnostic(o: &Output) -> Value {
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    let last = err.lines().last().expect("a diagnostic line");
    serde_json::from_str(last).expect("diagnostic is JSON")
}

#[test]
fn downshift_is_provable() {
    let o = ordrefl(&["rc", "prove", "<1>T", "<0>T"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "true");
}

#[test]
fn upshift_is_refuted_with_a_countermodel() {
    let o = ordrefl(&["rc", "prove", "<0>T", "<1>T", "--certify", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["derivable"], false);
    assert_eq!(v["certificate"]["verdict"], "NOT_DERIVABLE");
    assert!(v["certificate"]["certificate"]["worlds"].as_u64().unwrap() >= 1);
}

#[test]
fn certified_proof_is_a_tree() {
    let o = ordrefl(&["--json", "rc", "prove", "[1,0]", "[0,0]", "--certify"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let proof = &v["certificate"]["certificate"];
    assert_eq!(proof["sequent"]["lhs"], "<1><0>T");
    assert!(proof["rule"].is_string() && proof["children"].is_array());
}

#[test]
fn worm_ordinal_and_comparison() {
    let o = ordrefl(&["worm", "ord", "[0,1]"]);
    assert_eq!(stdout(&o).trim(), "w + 1");
    let o = ordrefl(&["worm", "compare", "[1]", "[0,0,0]"]);
    assert_eq!(stdout(&o).trim(), "GT");
    let o = ordrefl(&["worm", "compare", "[1,0]", "[0,1]"]);
    assert_eq!(stdout(&o).trim(), "LT");
    let o = ordrefl(&["worm", "compare", "[2,0]", "[2,1]"]);
    assert_eq!(stdout(&o).trim(), "EQ");
}

#[test]
fn ordinal_arithmetic() {
    let cases: [(&[&str], &str); 5] = [
        (&["ord", "add", "1", "w"], "w"),
        (&["ord", "omega", "e(0)"], "e(0)"),
        (&["ord", "eps", "1"], "e(1)"),
        (&["ord", "tower", "2"], "w^(w)"),
        (&["ord", "compare", "w^(w)", "e(0)"], "LT"),
    ];
    for (args, expected) in cases {
        let o = ordrefl(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&o).trim(), expected, "{args:?}");
    }
}

#[test]
fn wo_of_one_iteration() {
    let o = ordrefl(&["theory", "wo", "R[Pi11, 1](ACA0)"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("e(1)"));
    assert!(lines.next().unwrap().contains("W1"));

    let o = ordrefl(&["--json", "theory", "wo", "R[Pi11, 1](ACA0)"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], "e(1)");
    assert_eq!(v["trace"].as_array().unwrap().len(), 1);
}

#[test]
fn reduce_and_rank() {
    let o = ordrefl(&["theory", "reduce", "ISigma1", "--target", "Pi1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("R[Pi1, w^(w)](EA+)"));

    let o = ordrefl(&["theory", "rank", "R[Pi11, w](ACA0)", "--base", "RCA0"]);
    assert_eq!(stdout(&o).lines().next(), Some("e(w)"));
}

#[test]
fn interp_reads_letters_as_classes() {
    let o = ordrefl(&["theory", "interp", "[1,0]"]);
    assert_eq!(stdout(&o).trim(), "ACA0 + RFN[Pi1_2](ACA0 + RFN[Pi1_1](ACA0))");
    let o = ordrefl(&["theory", "interp", "[1]", "--flavor", "rca0"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(diagnostic(&o)["code"], "UNSUPPORTED_LEVEL");
}

#[test]
fn exit_codes_and_diagnostics() {
    let o = ordrefl(&["rc", "prove", "<1", "T"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(diagnostic(&o)["code"], "PARSE_ERROR");

    let o = ordrefl(&["theory", "reduce", "R[Pi11, 1](ACA0)", "--target", "Pi2"]);
    assert_eq!(o.status.code(), Some(3));
    let d = diagnostic(&o);
    assert_eq!(d["code"], "NO_RULE_APPLIES");
    assert_eq!(d["exit"], 3);

    let o = ordrefl(&["theory", "wo", "R[Pi3, 1](EA)"]);
    assert_eq!(o.status.code(), Some(3));

    let o = ordrefl(&["theory", "wo", "R[Pi11, 1](EA)"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(diagnostic(&o)["code"], "CLASS_MISMATCH");

    let o = ordrefl(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(diagnostic(&o)["code"], "USAGE_ERROR");
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "output = json\nmax_len = 2\nmax_letter = 1\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let o = ordrefl(&["--config", cfg, "check", "--suite", "trichotomy"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["max_len"], 2);
    assert_eq!(v["suites"][0]["checked"], 28);

    let o = ordrefl(&["--config", cfg, "--max-len", "3", "check", "--suite", "trichotomy"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["max_len"], 3);

    std::fs::write(dir.path().join("bad.conf"), "max_worlds = 0\n").unwrap();
    let bad = dir.path().join("bad.conf");
    let o = ordrefl(&["--config", bad.to_str().unwrap(), "ord", "eps", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(diagnostic(&o)["code"], "CONFIG_ERROR");
}

#[test]
fn check_suites_are_deterministic_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("sequents.cache");
    let cache = cache.to_str().unwrap();
    let args = [
        "--json", "--max-len", "3", "--max-letter", "1", "--cache", cache, "check", "--suite", "axioms", "--suite",
        "iso", "--suite", "oracle-agreement", "--suite", "schmerl", "--max-size", "3",
    ];
    let first: Value = serde_json::from_str(&stdout(&ordrefl(&args))).unwrap();
    let text = std::fs::read_to_string(cache).unwrap();
    assert!(text.lines().any(|l| l.starts_with("version=")));
    let second: Value = serde_json::from_str(&stdout(&ordrefl(&args))).unwrap();
    assert_eq!(first["passed"], true);
    let strip = |v: &Value| {
        v["suites"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| (s["suite"].clone(), s["checked"].clone(), s["failed"].clone()))
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&first), strip(&second));
    let names: Vec<&str> = first["suites"].as_array().unwrap().iter().map(|s| s["suite"].as_str().unwrap()).collect();
    assert_eq!(names, ["axioms", "iso", "oracle-agreement", "certificates", "schmerl"]);
}
