use std::process::Command;

use sunflower_core::constructions::sum_extremal;

fn sunflower(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sunflower"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn detect_on_extremal_file_is_free() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    sum_extremal(5, 3)
        .unwrap()
        .tuple
        .unwrap()
        .write_file(&path)
        .unwrap();
    let (code, out, _) = sunflower(&["detect", "--families", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("sunflower-free"));
}

#[test]
fn detect_reports_witness_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    std::fs::write(&path, "n=3\n1\n---\n2\n---\n3\n").unwrap();
    let (code, out, _) = sunflower(&["detect", "--families", path.to_str().unwrap(), "--json"]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["sunflower_free"], false);
    assert_eq!(v["sets"], serde_json::json!(["{1}", "{2}", "{3}"]));
}

#[test]
fn unreadable_file_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    std::fs::write(&path, "n=3\n1,2\n---\n1,x\n").unwrap();
    let (code, _, err) = sunflower(&["detect", "--families", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line 4"), "{err}");
    let (code, _, _) = sunflower(&[
        "detect",
        "--families",
        dir.path().join("missing").to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(sunflower(&["sum-bound"]).0, 1);
    assert_eq!(sunflower(&["sum-bound", "--n", "2"]).0, 1);
    assert_eq!(sunflower(&["optimize", "--tol", "0"]).0, 1);
}

#[test]
fn graphs_verify_reports_343() {
    let (code, out, _) = sunflower(&["graphs-verify", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["graphs_scanned"], 343);
    assert_eq!(v["max_stat"], 6);
    assert_eq!(v["schema"], 1);
}

#[test]
fn optimize_json() {
    let (code, out, _) = sunflower(&["optimize", "--tol", "1e-12", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["case_label"], "CASE3");
    assert!((v["value"].as_f64().unwrap() - 0.130748).abs() < 1e-6);
}

#[test]
fn search_and_bounds() {
    let (code, out, _) = sunflower(&["search-sum", "--n", "3", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["best_total"], 21);
    assert_eq!(v["proven_optimal"], true);
    let (code, out, _) = sunflower(&[
        "uniform-bound",
        "--n",
        "4",
        "--s",
        "2",
        "--c",
        "0",
        "--t",
        "2",
        "--search",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("best 9"), "{out}");
}

#[test]
fn construct_writes_a_readable_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    let (code, out, _) = sunflower(&[
        "construct",
        "--kind",
        "product",
        "--n",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("certified sunflower-free"));
    let (code, _, _) = sunflower(&["detect", "--families", path.to_str().unwrap()]);
    assert_eq!(code, 0);
}

#[test]
fn expectation_is_reproducible_and_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.txt");
    std::fs::write(&path, "n=3\n1\n1,2\n---\n2\n2,3\n---\n3\n1,3\n").unwrap();
    let p = path.to_str().unwrap();
    let a = sunflower(&[
        "expectation",
        "--families",
        p,
        "--samples",
        "3000",
        "--seed",
        "9",
        "--json",
    ]);
    let b = sunflower(&[
        "expectation",
        "--families",
        p,
        "--samples",
        "3000",
        "--seed",
        "9",
        "--json",
    ]);
    let c = sunflower(&[
        "expectation",
        "--families",
        p,
        "--samples",
        "3000",
        "--seed",
        "9",
        "--json",
        "--threads",
        "4",
    ]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    assert_eq!(a.1, c.1);
}

#[test]
fn report_csv_has_one_row_per_criterion() {
    let (code, out, _) = sunflower(&["report", "--csv", "--samples", "300"]);
    assert_eq!(code, 0, "{out}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "id,expected,observed,status,millis");
    assert_eq!(lines.len(), 10);
}
