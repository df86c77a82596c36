use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_affschubert"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn without_timing(path: &Path) -> serde_json::Value {
    let mut v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn enumerate_counts() {
    let o = run(&["enumerate", "--type", "A1", "--max-length", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 4);
    let o = run(&["enumerate", "--type", "A1", "--max-length", "0"]);
    assert_eq!(stdout(&o).lines().count(), 1);
    let o = run(&["enumerate", "--type", "A2", "--parabolic", "2", "--finite"]);
    assert_eq!(stdout(&o).lines().count(), 3);
    let o = run(&[
        "enumerate",
        "--type",
        "A",
        "--rank",
        "2",
        "--max-length",
        "2",
        "--json",
    ]);
    assert_eq!(json(&o).as_array().unwrap().len(), 4);
}

#[test]
fn gr_constants_table() {
    let o = run(&["gr", "constants", "--type", "A1", "--max-length", "2"]);
    assert!(o.status.success());
    let t = json(&o);
    assert_eq!(t["header"]["basis"], "xi");
    let rows = t["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["u"] == "w=s1;lam=-1"
        && r["v"] == "w=s1;lam=-1"
        && r["z"] == "w=e;lam=-1"
        && r["coeff"] == "1"));
    assert!(rows
        .iter()
        .any(|r| r["u"] == "w=s1;lam=-1" && r["z"] == "w=s1;lam=-2" && r["coeff"] == "a1"));
    let again = run(&["gr", "constants", "--type", "A1", "--max-length", "2"]);
    assert_eq!(o.stdout, again.stdout);
    let flat = run(&[
        "gr",
        "constants",
        "--type",
        "A1",
        "--max-length",
        "2",
        "--non-equivariant",
    ]);
    assert!(!stdout(&flat).contains("a1"));
}

#[test]
fn qh_products() {
    let o = run(&["qh", "product", "--type", "A1", "--u", "s1", "--v", "s1"]);
    assert!(o.status.success());
    let rows = json(&o)["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 2);
    assert!(rows
        .iter()
        .any(|r| r["w"] == "s1" && r["coeff"] == "a1" && r["beta"] == serde_json::json!([0])));
    assert!(rows
        .iter()
        .any(|r| r["w"] == "e" && r["coeff"] == "1" && r["beta"] == serde_json::json!([1])));

    let o = run(&[
        "qh",
        "product",
        "--type",
        "A2",
        "--parabolic",
        "2",
        "--u",
        "s1",
        "--v",
        "s1",
    ]);
    let rows = json(&o)["rows"].as_array().unwrap().clone();
    assert!(rows.iter().any(|r| r["w"] == "s2*s1" && r["coeff"] == "1"));
    assert!(rows.iter().any(|r| r["w"] == "s1" && r["coeff"] != "1"));

    let o = run(&["qh", "product", "--type", "A2", "--u", "s1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_runs() {
    let o = run(&["verify", "--type", "A1", "--max-length", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["pairs_checked"], 16);
    let o = run(&[
        "verify",
        "--type",
        "A1",
        "--max-length",
        "0",
        "--threads",
        "1",
    ]);
    assert_eq!(json(&o)["pairs_checked"], 1);
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("out.json");
    let o = run(&[
        "verify",
        "--type",
        "A2",
        "--parabolic",
        "2",
        "--max-length",
        "4",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(without_timing(&report)["failures"], serde_json::json!([]));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "--type", "X3"][..],
        &["verify", "--type", "A2", "--parabolic", "5"],
        &["verify", "--type", "A"],
        &["verify", "--type", "A1", "--max-length", "40"],
        &["enumerate"],
        &["qh", "product", "--type", "A1", "--u", "s2", "--v", "s1"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn cache_is_transparent_and_locked() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = |report: &Path| {
        vec![
            "verify".to_string(),
            "--type".into(),
            "C2".into(),
            "--parabolic".into(),
            "1".into(),
            "--max-length".into(),
            "3".into(),
            "--cache-dir".into(),
            cache.to_str().unwrap().into(),
            "--report".into(),
            report.to_str().unwrap().into(),
        ]
    };
    let (cold, warm) = (dir.path().join("cold.json"), dir.path().join("warm.json"));
    let o = Command::new(env!("CARGO_BIN_EXE_affschubert"))
        .args(args(&cold))
        .output()
        .unwrap();
    assert!(o.status.success());
    let cached: Vec<_> = fs::read_dir(&cache)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(cached.len(), 2, "{cached:?}");
    let o = Command::new(env!("CARGO_BIN_EXE_affschubert"))
        .args(args(&warm))
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(without_timing(&cold), without_timing(&warm));

    fs::write(cache.join("lock"), "1").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_affschubert"))
        .args(args(&warm))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    fs::remove_file(cache.join("lock")).unwrap();

    // A corrupted cached coefficient must surface as a verification failure.
    let gr = fs::read_dir(&cache)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.to_string_lossy().contains("-gr-"))
        .unwrap();
    let text = fs::read_to_string(&gr).unwrap();
    fs::write(
        &gr,
        text.replacen("\"coeff\": \"1\"", "\"coeff\": \"2\"", 1),
    )
    .unwrap();
    let bad = dir.path().join("bad.json");
    let o = Command::new(env!("CARGO_BIN_EXE_affschubert"))
        .args(args(&bad))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(!without_timing(&bad)["failures"]
        .as_array()
        .unwrap()
        .is_empty());
}
