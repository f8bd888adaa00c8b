use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperred"))
}

/// Scratch directory unique to one test.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hyperred-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn analyze_reduce_certify_round_trip() {
    let dir = scratch("roundtrip");
    let a = write(&dir, "a.json", r#"["-3", "1"]"#);
    let b = write(&dir, "b.json", r#"["1", "1"]"#);
    let f = write(&dir, "f.json", r#"["0", "0", "0", "0", "0", "1"]"#);
    let (a, b, f) = (
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        f.to_str().unwrap(),
    );

    let o = run(&["analyze", "--a", a, "--b", b]);
    assert_eq!(o.status.code(), Some(0));
    let info: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(info["m0"], "3/1");
    assert_eq!(info["degenerate"], true);

    for extra in [&[][..], &["--oracle"][..]] {
        let mut args = vec!["reduce", "--a", a, "--b", b, "--f", f];
        args.extend_from_slice(extra);
        let o = run(&args);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        let cert = write(&dir, "cert.json", &stdout(&o));
        let o = run(&[
            "certify",
            "--a",
            a,
            "--b",
            b,
            "--f",
            f,
            "--cert",
            cert.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(report["pass"], true);
    }
}

#[test]
fn tampered_certificate_exits_2() {
    let dir = scratch("tamper");
    let a = write(&dir, "a.json", r#"["1", "2", "1"]"#);
    let b = write(&dir, "b.json", r#"["0", "0", "1"]"#);
    let f = write(&dir, "f.json", r#"["1", "0", "0", "1"]"#);
    let (a, b, f) = (
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        f.to_str().unwrap(),
    );
    let o = run(&["reduce", "--a", a, "--b", b, "--f", f]);
    assert_eq!(o.status.code(), Some(0));
    let mut cert: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let h = cert["h"].as_array_mut().unwrap();
    if h.is_empty() {
        h.push(Value::from("1/1"));
    } else {
        h[0] = Value::from("12345/1");
    }
    let path = write(&dir, "bad.json", &cert.to_string());
    let o = run(&[
        "certify",
        "--a",
        a,
        "--b",
        b,
        "--f",
        f,
        "--cert",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["pass"], false);
}

#[test]
fn half4_special_reduction() {
    let o = run(&[
        "reduce-symmetric",
        "--sign",
        "same",
        "--alpha",
        "1/2",
        "--r",
        "4",
        "--m",
        "11",
        "--special",
        "half4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["C"].to_string(), "120");
    assert_eq!(v["a_over_C"]["1"], "-10515/1");
}

#[test]
fn half4_with_wrong_term_is_a_hypothesis_error() {
    let o = run(&[
        "reduce-symmetric",
        "--sign",
        "alt",
        "--alpha",
        "1/2",
        "--r",
        "3",
        "--m",
        "5",
        "--special",
        "half4",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn same_sign_hypothesis_violation_exits_3() {
    // alpha*r + s vanishes at s = 2.
    let o = run(&[
        "reduce-symmetric",
        "--sign",
        "same",
        "--alpha",
        "-1",
        "--r",
        "2",
        "--m",
        "5",
    ]);
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn parse_errors_exit_4() {
    let o = run(&[
        "eval", "--sign", "alt", "--alpha", "0.5", "--r", "3", "--k", "1",
    ]);
    assert_eq!(o.status.code(), Some(4));
    let o = run(&[
        "analyze",
        "--a",
        "/nonexistent/a.json",
        "--b",
        "/nonexistent/b.json",
    ]);
    assert_eq!(o.status.code(), Some(4));
    let o = run(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn eval_and_sum_print_rationals() {
    let o = run(&[
        "eval", "--sign", "alt", "--alpha", "1/2", "--r", "3", "--k", "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "-1/8");

    let dir = scratch("sum");
    let f = write(&dir, "f.json", r#"["1", "4"]"#);
    let o = run(&[
        "sum",
        "--sign",
        "same",
        "--alpha",
        "1/2",
        "--r",
        "4",
        "--f",
        f.to_str().unwrap(),
        "--K",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "6105/4096");
}

#[test]
fn congruence_sweeps_pass() {
    for case in ["3", "4"] {
        let o = run(&[
            "congruence",
            "--case",
            case,
            "--m-max",
            "15",
            "--p-max",
            "97",
        ]);
        assert_eq!(o.status.code(), Some(0), "case {case}:\n{}", stdout(&o));
        assert!(!stdout(&o).contains("FAIL"));
    }
}

#[test]
fn json_output_is_deterministic() {
    let args = [
        "congruence",
        "--case",
        "4",
        "--m-max",
        "9",
        "--p-max",
        "41",
        "--json",
    ];
    let one = bin()
        .args(args)
        .env("HYPERRED_THREADS", "1")
        .output()
        .unwrap();
    let many = bin()
        .args(args)
        .env("HYPERRED_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
    let again = run(&["scan-integrality", "--m-max", "15", "--json"]);
    assert_eq!(
        again.stdout,
        run(&["scan-integrality", "--m-max", "15", "--json"]).stdout
    );
}
