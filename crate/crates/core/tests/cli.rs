use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bellrand(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellrand")).args(args).output().expect("spawn bellrand")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn validate_examples() {
    for (file, verdict) in [
        ("pr_box.json", "verdict: non-local, CHSH=4"),
        ("uniform.json", "verdict: local"),
        ("tsirelson.json", "verdict: non-local, CHSH=2.82842712"),
    ] {
        let o = bellrand(&["validate", data(file).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        let out = stdout(&o);
        assert!(out.contains(verdict), "{file}: {out}");
        assert_eq!(out.lines().filter(|l| l.starts_with("CHSH[")).count(), 8);
    }
}

#[test]
fn validate_failures() {
    let dir = tempfile::tempdir().unwrap();

    let signalling = dir.path().join("signalling.json");
    // Alice's marginal for setting 1 depends on Bob's setting
    std::fs::write(
        &signalling,
        r#"{"format":"behavior-2222/v1","p":[[1,0,0,0],[0,0,0,1],[0.25,0.25,0.25,0.25],[0.25,0.25,0.25,0.25]]}"#,
    )
    .unwrap();
    let o = bellrand(&["validate", signalling.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("no-signalling: FAILED"));

    let unnormalized = dir.path().join("unnormalized.json");
    std::fs::write(&unnormalized, r#"{"format":"behavior-2222/v1","p":[[0.5,0,0,0.4],[0.25,0.25,0.25,0.25],[0.25,0.25,0.25,0.25],[0.25,0.25,0.25,0.25]]}"#).unwrap();
    assert_eq!(bellrand(&["validate", unnormalized.to_str().unwrap()]).status.code(), Some(2));

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(bellrand(&["validate", garbage.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(bellrand(&["validate", "/nonexistent/file.json"]).status.code(), Some(1));
}

#[test]
fn bounds_examples() {
    let o = bellrand(&["bounds", "--alpha", "1", "--beta", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("local bound: 3.00000000"), "{out}");
    assert!(out.contains("quantum maximum: 3.16227766"), "{out}");

    let o = bellrand(&["bounds", "--alpha", "1", "--beta", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(bellrand(&["bounds", "--alpha", "1", "--beta", "-1"]).status.code(), Some(1));
    assert_eq!(bellrand(&["bounds"]).status.code(), Some(1));
}

#[test]
fn curve_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let o = bellrand(&["curve", "--alpha", "1", "--grid", "2:qmax:50", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("I,G_bound,min_entropy_bits"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 50);
    assert_eq!(rows[0][1], 1.0);
    assert_eq!(rows[49][1], 0.5);
    assert_eq!(rows[49][2], 1.0);

    // points above the quantum maximum are marked, not fatal
    let o = bellrand(&["curve", "--alpha", "1", "--grid", "2:3:3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().last().unwrap().ends_with(",NaN,NaN"));
}

#[test]
fn ns_curve_on_line() {
    let o = bellrand(&["ns-curve", "--grid", "2:4:21"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 21);
    for r in rows {
        assert!((r[1] - (1.5 - r[0] / 4.0)).abs() < 1e-8, "{r:?}");
    }
}

#[test]
fn doubled_report() {
    let o = bellrand(&["doubled", "--alpha", "1", "--beta", "1.9"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let corr = v["corr_a2_bp2"].as_f64().unwrap();
    let g = v["g_22p"].as_f64().unwrap();
    assert!((corr - 0.226381000581854).abs() < 1e-12);
    assert!((g - 0.306595250145464).abs() < 1e-12);
    assert!((v["hmin_bits"].as_f64().unwrap() - 1.705592748329894).abs() < 1e-12);
    assert_eq!(bellrand(&["doubled", "--alpha", "1", "--beta", "2"]).status.code(), Some(3));
}

#[test]
fn usage_errors() {
    assert_eq!(bellrand(&[]).status.code(), Some(1));
    assert_eq!(bellrand(&["--help"]).status.code(), Some(0));
    assert_eq!(bellrand(&["curve", "--grid", "2:3"]).status.code(), Some(1));
    assert_eq!(bellrand(&["repro", "--tol", "0"]).status.code(), Some(1));
}
