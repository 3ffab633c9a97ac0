use serde_json::Value;
use std::process::Command;

fn holo(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_holo")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn report(args: &[&str]) -> (i32, Value) {
    let (code, text) = holo(args);
    (code, serde_json::from_str(&text).unwrap())
}

#[test]
fn verify_nonab_on_m27() {
    let (code, r) = report(&["verify-nonab", "--family", "1", "--p", "3", "--n", "3", "--no-meta"]);
    assert_eq!(code, 0);
    assert_eq!(r["theorem_holds"], true);
    assert_eq!(r["A"]["exponents"], serde_json::json!([2, 1]));
    assert_eq!(r["normalizer_order"], r["hol_order"]);
    assert!(r["hol_order"].is_string());
}

#[test]
fn search_finds_mixed_witness() {
    let target = r#"{"kind":"abelian","p":3,"exponents":[2,1,1]}"#;
    let (code, r) = report(&["search", "--p", "3", "--exponents", "1,1,1,1", "--target", target, "--no-meta"]);
    assert_eq!(code, 0);
    assert_eq!(r["realizable"], true);
    assert_eq!(r["witness"]["regular"], true);
    assert_eq!(r["certificate"]["pool_size"], 729);
}

#[test]
fn search_budget_exit_code() {
    let target = r#"{"kind":"abelian","p":3,"exponents":[2,1,1]}"#;
    let (code, r) = report(&["search", "--p", "3", "--exponents", "1,1,1,1", "--target", target, "--max-nodes", "3", "--no-meta"]);
    assert_eq!(code, 2);
    assert_eq!(r["realizable"], "unknown");
}

#[test]
fn remark_requires_long_running() {
    let (code, r) = report(&["verify-nonab", "--family", "6", "--p", "5", "--no-meta"]);
    assert_eq!(code, 2);
    assert!(r["error"].is_string());
}

#[test]
fn invalid_input_exit_code() {
    assert_eq!(holo(&["info", "--p", "4", "--exponents", "1"]).0, 3);
    assert_eq!(holo(&["info", "--p", "3"]).0, 3);
    assert_eq!(holo(&["frobnicate"]).0, 3);
    assert_eq!(holo(&["search", "--p", "3", "--exponents", "2", "--target", "{not json"]).0, 3);
    assert_eq!(holo(&["construct", "--family", "6", "--p", "3", "--n", "4"]).0, 3);
}

#[test]
fn no_meta_is_byte_identical() {
    let args = ["enumerate", "--p", "3", "--exponents", "2,1", "--no-meta"];
    let (a, first) = holo(&args);
    let (b, second) = holo(&args);
    assert_eq!((a, b), (0, 0));
    assert_eq!(first, second);
    let (_, with_meta) = report(&["info", "--p", "3", "--exponents", "2"]);
    assert!(with_meta["meta"]["timestamp"].is_number());
    let (_, without) = report(&["info", "--p", "3", "--exponents", "2", "--no-meta"]);
    assert!(without.get("meta").is_none());
}

#[test]
fn thread_count_does_not_change_reports() {
    let base = ["census", "--p", "3", "--n", "2", "--no-meta"];
    let one = holo(&[&base[..], &["--threads", "1"]].concat());
    let four = holo(&[&base[..], &["--threads", "4", "--seed", "9"]].concat());
    assert_eq!(one.0, 0);
    assert_eq!(one, four);
}

#[test]
fn info_serializes_large_orders_as_strings() {
    let (code, r) = report(&["info", "--p", "5", "--exponents", "2,1,1", "--no-meta"]);
    assert_eq!(code, 0);
    assert_eq!(r["aut_order"], "6000000");
    assert_eq!(r["hol_order"], "3750000000");
}

#[test]
fn json_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("holo-cli-test-{}.json", std::process::id()));
    let (code, stdout) = holo(&["info", "--family", "1", "--p", "3", "--n", "3", "--json", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(r["order"], 27);
}

#[test]
fn lemma_suite_runs() {
    let (code, r) = report(&["lemma-suite", "--seed", "5", "--samples", "20", "--no-meta"]);
    assert_eq!(code, 0);
    assert_eq!(r["passed"], true);
    assert_eq!(r["seed"], 5);
}
