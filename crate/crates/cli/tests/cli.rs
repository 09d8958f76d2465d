use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use proptest::prelude::*;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ulrich"));
    cmd.env_remove("ULRICH_N_MAX").current_dir(env!("CARGO_MANIFEST_DIR"));
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).stdin(Stdio::null()).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    use std::io::Write;
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    // the child may exit before reading everything
    let _ = child.stdin.take().unwrap().write_all(input);
    child.wait_with_output().unwrap()
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Compares stdout with a golden file; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, args: &[&str]) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let path = golden_dir().join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out.stdout).unwrap();
    }
    let want = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(
        out.stdout == want,
        "{name} differs:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn golden_spinor_chern_q10() {
    golden("spinor_chern_q10.json", &["spinor", "chern", "--n", "10", "--kind", "sprime", "--json"]);
}

#[test]
fn golden_spinor_chern_q4_ulrich() {
    golden(
        "spinor_chern_q4_ulrich.md",
        &["spinor", "chern", "--n", "4", "--kind", "sprime", "--ulrich-twist"],
    );
}

#[test]
fn golden_nu_table() {
    golden("nu_table.md", &["spinor", "nu-table"]);
}

#[test]
fn golden_classify_q4() {
    golden("classify_q4.md", &["quadric", "classify", "--n", "4"]);
}

#[test]
fn golden_classify_q2_truncated() {
    golden("classify_q2.json", &["quadric", "classify", "--n", "2", "--rmax", "3", "--format", "json"]);
    golden("classify_q2.md", &["quadric", "classify", "--n", "2", "--rmax", "3"]);
}

#[test]
fn golden_quadric_nu() {
    golden("quadric_nu_q4.json", &["quadric", "nu", "--n", "4", "--a", "1", "--b", "1", "--json"]);
}

#[test]
fn golden_ring_eval() {
    golden("ring_eval_q10.json", &["ring", "eval", "--quadric", "10", "b5*bp5", "--json"]);
    golden("ring_eval_p2p2.md", &["ring", "eval", "--multi", "2,2", "(t1+t2)^4"]);
}

#[test]
fn golden_bundle_ops() {
    let input = "tests/data/sprime_q4.json";
    golden("bundle_segre.md", &["bundle", "--input", input, "segre"]);
    golden("bundle_twist.json", &["bundle", "--input", input, "--json", "twist", "--by", "-h"]);
    golden(
        "bundle_certificate.json",
        &["bundle", "--input", input, "--json", "certificate", "--with", "tests/data/sdoubleprime_q4.json"],
    );
}

#[test]
fn golden_verify_suites() {
    golden("verify_chern_q10.md", &["verify", "chern-q10"]);
    golden("verify_nu_table.json", &["verify", "nu-table", "--json"]);
    golden("verify_thm4.md", &["verify", "thm4", "--rmax", "3"]);
    golden("verify_example_un.md", &["verify", "example-un", "--n", "4", "--r", "5"]);
    golden("verify_theorem2_cases.md", &["verify", "theorem2-cases"]);
    golden("verify_line_criterion.md", &["verify", "line-criterion", "--from", "3", "--to", "14"]);
}

#[test]
fn golden_output_is_stable() {
    let args = ["quadric", "classify", "--n", "6", "--all", "--json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn spinor_chern_q10_vector() {
    let out = run(&["spinor", "chern", "--n", "10", "--kind", "sprime", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let c = &v["chern"];
    let want = [-8, 32, -84, 160, 0, 528, -484, 352, -176];
    for (i, w) in (1..=9).zip(want) {
        if i == 5 {
            continue;
        }
        assert_eq!(c[format!("b{i}")].as_i64().unwrap_or(0), w, "c{i}");
    }
    let mut mid = [c["b5"].as_i64().unwrap(), c["bp5"].as_i64().unwrap()];
    mid.sort_unstable();
    assert_eq!(mid, [-244, -220]);
}

#[test]
fn quadric_nu_prints_six() {
    let out = run(&["quadric", "nu", "--n", "4", "--a", "1", "--b", "1"]);
    assert!(String::from_utf8_lossy(&out.stdout).trim_end().ends_with("= 6"));
}

#[test]
fn verify_suites_exit_zero() {
    for args in [
        &["verify", "table1", "--rmax", "8"][..],
        &["verify", "chern-q10"],
        &["verify", "nu-table"],
        &["verify", "thm4"],
        &["verify", "example-un"],
        &["verify", "theorem2-cases"],
        &["verify", "line-criterion"],
        &["spinor", "identities", "--n", "12"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn classify_against_table1() {
    for n in ["2", "3", "4", "6", "10"] {
        let out = run(&["quadric", "classify", "--n", n, "--rmax", "64", "--verify", "table1"]);
        assert_eq!(out.status.code(), Some(0), "n={n}");
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["frobnicate"][..],
        &["spinor", "chern", "--n", "4"],
        &["spinor", "chern", "--n", "5", "--kind", "sprime"],
        &["spinor", "chern", "--n", "40", "--kind", "s"],
        &["quadric", "nu", "--n", "5", "--a", "1", "--b", "1"],
        &["quadric", "classify", "--n", "1"],
        &["ring", "eval", "--quadric", "4", "b9"],
        &["ring", "eval", "--quadric", "4", "--multi", "2", "h"],
        &["verify", "line-criterion", "--from", "2"],
        &["verify", "thm4", "--rmin", "4", "--rmax", "2"],
        &["verify", "example-un", "--n", "4", "--r", "1"],
        &["bundle", "--input", "tests/data/missing.json", "chern"],
        &["bundle", "--input", "tests/data/sprime_q4.json", "twist", "--by", "h^2"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn bad_config_exits_two() {
    let dir = std::env::temp_dir().join(format!("ulrich-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, r#"{"n_max": 1}"#).unwrap();
    let out = run(&["--config", cfg.to_str().unwrap(), "spinor", "nu-table"]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(&cfg, r#"{"precision": 3}"#).unwrap();
    let out = run(&["--config", cfg.to_str().unwrap(), "spinor", "nu-table"]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(&cfg, r#"{"n_max": 8, "column_width": 6}"#).unwrap();
    let out = run(&["--config", cfg.to_str().unwrap(), "spinor", "nu-table", "--to", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("| n      |"));
    let out = run(&["--config", cfg.to_str().unwrap(), "verify", "chern-q10"]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn env_overrides_n_max() {
    let out = bin()
        .env("ULRICH_N_MAX", "6")
        .args(["spinor", "chern", "--n", "8", "--kind", "sprime"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn malformed_bundle_json_exits_two(junk in "[ -~]{0,40}") {
        prop_assume!(serde_json::from_str::<serde_json::Value>(&junk).is_err());
        let out = run_stdin(&["bundle", "chern"], junk.as_bytes());
        prop_assert_eq!(out.status.code(), Some(2));
    }

    #[test]
    fn wrong_shape_bundle_json_exits_two(rank in 0usize..4, key in "[a-z]{1,4}[0-9]{0,2}", n in 0usize..20) {
        let doc = format!(r#"{{"ring":{{"kind":"quadric","n":{n}}},"rank":{rank},"chern":{{"b0":1,"{key}":1}}}}"#);
        let out = run_stdin(&["bundle", "chern"], doc.as_bytes());
        // valid only when the ring exists and the key names a basis element within the rank
        let code = out.status.code();
        prop_assert!(code == Some(0) || code == Some(2));
        if code == Some(2) {
            prop_assert!(!out.stderr.is_empty());
        }
    }

    #[test]
    fn malformed_expressions_exit_two(expr in "[h()+*^0-9lp]{1,12}[+*^(]") {
        let out = run(&["ring", "eval", "--quadric", "6", &expr]);
        prop_assert_eq!(out.status.code(), Some(2));
    }

    #[test]
    fn out_of_range_spinor_exits_two(n in prop_oneof![0usize..2, 17usize..100]) {
        let out = run(&["spinor", "chern", "--n", &n.to_string(), "--kind", "s"]);
        prop_assert_eq!(out.status.code(), Some(2));
    }
}
