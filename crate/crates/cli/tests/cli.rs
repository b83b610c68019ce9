use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_tspp");

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn expand_f_matches_the_known_prefix() {
    let out = run(&["expand", "--seq", "f", "--order", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let values: Vec<String> = stdout(&out).lines().map(|l| l.split('\t').nth(1).unwrap().to_string()).collect();
    assert_eq!(values, ["1", "1", "0", "0", "1", "0", "0", "2"]);
    assert!(stdout(&out).ends_with("7\t2\n"));
}

#[test]
fn expand_g_and_g_alpha_p() {
    let out = run(&["expand", "--seq", "g", "--order", "0"]);
    assert_eq!(stdout(&out), "0\t1\n");
    let out = run(&["expand", "--seq", "gap", "--alpha", "3", "--p", "5", "--mod", "125", "--order", "1"]);
    assert_eq!(stdout(&out), "0\t1\n1\t2\n");
}

#[test]
fn expand_eta_quotient_from_spec() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("eta.toml");
    // (q^2;q^2)^3 / (q;q)^2 is g
    fs::write(&spec, "M = 2\nr = { 1 = -2, 2 = 3 }\n").unwrap();
    let eta = run(&["expand", "--seq", "eta", "--spec", spec.to_str().unwrap(), "--order", "40"]);
    let g = run(&["expand", "--seq", "g", "--order", "40"]);
    assert_eq!(eta.status.code(), Some(0));
    assert_eq!(stdout(&eta), stdout(&g));

    fs::write(&spec, "M = 2\nr = { 3 = 1 }\n").unwrap();
    assert_eq!(run(&["expand", "--seq", "eta", "--spec", spec.to_str().unwrap(), "--order", "4"]).status.code(), Some(2));
}

#[test]
fn expand_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.tsv");
    let status = run(&["expand", "--seq", "f", "--order", "100", "--mod", "5", "--out", out.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(0));
    let text = fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().count(), 101);
    assert!(text.lines().all(|l| l.split('\t').nth(1).unwrap().parse::<u64>().unwrap() < 5));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["expand", "--seq", "h", "--order", "3"],
        vec!["expand", "--seq", "f"],
        vec!["expand", "--seq", "f", "--order", "3", "--mod", "1"],
        vec!["expand", "--seq", "gap", "--order", "3", "--alpha", "1"],
        vec!["expand", "--seq", "eta", "--order", "3"],
        vec!["frobnicate"],
        vec!["prove", "--instance", "/nonexistent/file", "--out", "/tmp/x.json"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn prove_theorem1a() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let result = run(&["prove", "--instance", data("theorem1a.instance").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(0), "{}", String::from_utf8_lossy(&result.stderr));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["verdict"]["status"], "PROVED");
    assert_eq!(report["certificates"][0]["v_floor"], 84);
    assert_eq!(report["certificates"][0]["orbit"], serde_json::json!([229, 604]));
    assert!(stdout(&result).contains("PROVED"));

    // a second run writes the same bytes
    let again = dir.path().join("again.json");
    run(&["prove", "--instance", data("theorem1a.instance").to_str().unwrap(), "--out", again.to_str().unwrap()]);
    assert_eq!(fs::read(&out).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn prove_theorem2a() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let result = run(&["prove", "--instance", data("theorem2a.instance").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["certificates"][0]["v_floor"], 152);
    assert_eq!(report["certificates"][0]["expansion_order"], 210_054);
}

#[test]
fn corrupted_instances_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let base = fs::read_to_string(data("theorem1a.instance")).unwrap();
    let out = dir.path().join("report.json");
    for (name, text) in [
        ("t_equals_m", format!("{base}\n[overrides]\nm = 625\nt = 625\n")),
        ("unknown_field", format!("{base}\n[extra]\nkey = 1\n")),
        ("not_toml", "[claim\nsequence = f".to_string()),
        ("bad_divisor", base.replace("2 = 0", "3 = 0")),
    ] {
        let path = dir.path().join(format!("{name}.instance"));
        fs::write(&path, text).unwrap();
        let result = run(&["prove", "--instance", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(result.status.code(), Some(2), "{name}");
        assert!(!result.stderr.is_empty(), "{name} prints a diagnostic");
    }
    assert!(!out.exists());
}

#[test]
fn unprovable_claim_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.instance");
    // f(2n) has nonzero terms mod 2 and no reduction to g applies
    fs::write(&path, "[claim]\nsequence = \"f\"\nA = 6\nB = 4\nu = 5\n\n[hints]\nN = 10\nr_prime = { 1 = 13 }\n").unwrap();
    let out = dir.path().join("report.json");
    let result = run(&["prove", "--instance", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(3), "{}", String::from_utf8_lossy(&result.stderr));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_ne!(report["verdict"]["status"], "PROVED");
}

#[test]
fn regress_without_oracle_skips_rows() {
    let result = run(&["regress", "--oracle-max", "0", "--exact-max", "600", "--generator-max", "200"]);
    let table = stdout(&result);
    assert_eq!(result.status.code(), Some(0), "{table}");
    assert!(table.contains("skipped"));
    assert!(table.contains("prove theorem1a"));
}

#[test]
fn regress_reports_injected_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wrong.instance");
    // true for u = 5 but claimed modulo 7
    fs::write(&path, "[claim]\nsequence = \"f\"\nA = 10\nB = 5\nu = 7\n\n[oracle]\nmax_index = 2000\n").unwrap();
    let result = run(&[
        "regress",
        "--oracle-max",
        "2000",
        "--exact-max",
        "100",
        "--generator-max",
        "100",
        "--instance",
        path.to_str().unwrap(),
    ]);
    let table = stdout(&result);
    assert_eq!(result.status.code(), Some(1), "{table}");
    assert!(table.lines().any(|l| l.contains("prove wrong") && l.contains("FAIL")), "{table}");
}
