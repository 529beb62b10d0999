use std::fs;
use std::path::PathBuf;
use std::process::Command;

use tempfile::TempDir;

const UNIFORM: &str =
    r#"{"buyer":{"type":"uniform","lo":0,"hi":1},"seller":{"type":"uniform","lo":0,"hi":1}}"#;
const TEN_FOUR: &str = r#"{"buyer":{"type":"discrete","points":[[10,1]]},"seller":{"type":"discrete","points":[[4,1]]}}"#;
const MARKET: &str = r#"{"n":20,"m":20,"buyer":{"type":"uniform","lo":0,"hi":1},"seller":{"type":"uniform","lo":0,"hi":1}}"#;

fn file(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn fixprice(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fixprice"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn metric(csv: &str, name: &str) -> String {
    csv.lines()
        .find_map(|l| l.strip_prefix(&format!("{name},")))
        .and_then(|rest| rest.split(',').next())
        .unwrap_or_else(|| panic!("no {name} in\n{csv}"))
        .to_string()
}

#[test]
fn price_rules() {
    let dir = TempDir::new().unwrap();
    let u = file(&dir, "u.json", UNIFORM);
    let tf = file(&dir, "tf.json", TEN_FOUR);

    let (code, out, _) = fixprice(&[
        "price",
        "--instance",
        u.to_str().unwrap(),
        "--rule",
        "balanced",
    ]);
    assert_eq!(code, 0);
    assert!((metric(&out, "price").parse::<f64>().unwrap() - 0.5).abs() < 1e-9);
    assert!((metric(&out, "guaranteed_ratio").parse::<f64>().unwrap() - 2.0).abs() < 1e-8);

    let (code, out, _) = fixprice(&[
        "price",
        "--instance",
        tf.to_str().unwrap(),
        "--rule",
        "median",
    ]);
    assert_eq!(code, 0);
    assert_eq!(metric(&out, "price"), "7");

    let (code, _, err) = fixprice(&[
        "price",
        "--instance",
        tf.to_str().unwrap(),
        "--rule",
        "logrule",
    ]);
    assert_eq!(code, 3);
    assert!(err.contains("atomless required"), "{err}");

    let (code, out, _) = fixprice(&[
        "price",
        "--instance",
        tf.to_str().unwrap(),
        "--rule",
        "logrule",
        "--smoothing-width",
        "0.5",
    ]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn evaluate_metrics() {
    let dir = TempDir::new().unwrap();
    let u = file(&dir, "u.json", UNIFORM);
    let tf = file(&dir, "tf.json", TEN_FOUR);

    let (code, out, _) = fixprice(&[
        "evaluate",
        "--instance",
        tf.to_str().unwrap(),
        "--price",
        "7",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        (
            metric(&out, "opt"),
            metric(&out, "gft"),
            metric(&out, "ratio")
        ),
        ("6".into(), "6".into(), "1".into())
    );

    let (_, out, _) = fixprice(&[
        "evaluate",
        "--instance",
        u.to_str().unwrap(),
        "--price",
        "0.5",
    ]);
    assert_eq!(metric(&out, "gft"), "0.125");
    assert!((metric(&out, "ratio").parse::<f64>().unwrap() - 4.0 / 3.0).abs() < 1e-12);

    let (_, out, _) = fixprice(&[
        "evaluate",
        "--instance",
        u.to_str().unwrap(),
        "--price",
        "0",
    ]);
    assert_eq!(metric(&out, "ratio"), "inf");

    let (code, out, _) = fixprice(&[
        "--format",
        "json",
        "evaluate",
        "--instance",
        u.to_str().unwrap(),
        "--rule",
        "median",
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["metrics"]["price"], 0.5);

    let (code, _, _) = fixprice(&["evaluate", "--instance", u.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = file(
        &dir,
        "bad.json",
        "{\"buyer\": {\"type\": \"uniform\", \"lo\": 0,\n \"hi\": }}",
    );
    let (code, _, err) = fixprice(&[
        "price",
        "--instance",
        bad.to_str().unwrap(),
        "--rule",
        "balanced",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");

    let masses = file(
        &dir,
        "masses.json",
        r#"{"buyer":{"type":"discrete","points":[[1,0.3]]},"seller":{"type":"uniform","lo":0,"hi":1}}"#,
    );
    let (code, _, err) = fixprice(&[
        "price",
        "--instance",
        masses.to_str().unwrap(),
        "--rule",
        "balanced",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("buyer.points"), "{err}");

    let (code, _, _) = fixprice(&[
        "price",
        "--instance",
        "/nonexistent/x.json",
        "--rule",
        "balanced",
    ]);
    assert_eq!(code, 2);
    let (code, _, _) = fixprice(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn simulate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let m = file(&dir, "m.json", MARKET);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let (code, _, _) = fixprice(&[
            "simulate",
            "--instance",
            m.to_str().unwrap(),
            "--replicates",
            "2000",
            "--seed",
            "42",
            "--epsilon",
            "0.61",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert_eq!(metric(&text, "expected_trades"), "10");
    assert!((metric(&text, "event_floor").parse::<f64>().unwrap() - 0.6888).abs() < 1e-4);

    let (code, _, _) = fixprice(&[
        "simulate",
        "--instance",
        m.to_str().unwrap(),
        "--replicates",
        "0",
        "--seed",
        "1",
        "--epsilon",
        "0.5",
    ]);
    assert_eq!(code, 3);
}

#[test]
fn lowerbound_reports() {
    let (code, out, _) = fixprice(&["lowerbound", "--n", "2", "--eps", "0.1388888888888889"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("p,gft\n"));
    assert!((metric(&out, "ratio").parse::<f64>().unwrap() - 1.549).abs() < 1e-3);

    let (_, out, _) = fixprice(&["lowerbound", "--n", "1", "--eps", "0.5"]);
    assert_eq!(metric(&out, "opt"), "0.5");
    assert_eq!(metric(&out, "ratio"), "1");

    let (code, _, err) = fixprice(&["lowerbound", "--n", "16", "--eps", "0.5"]);
    assert_eq!(code, 3);
    assert!(err.contains("capped at 15"), "{err}");
    let (code, _, _) = fixprice(&["lowerbound", "--n", "3", "--eps", "0.1"]);
    assert_eq!(code, 3);
}

#[test]
fn verify_suites_pass() {
    for suite in ["bilateral", "da", "instances"] {
        let (code, out, _) = fixprice(&["verify", "--suite", suite, "--seed", "3"]);
        assert_eq!(code, 0, "{out}");
        assert!(!out.contains(",fail"), "{out}");
    }
}
