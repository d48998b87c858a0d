use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn polysmooth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polysmooth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_error(out: &Output) -> (i32, String) {
    let code = out.status.code().expect("exit code");
    let v: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    (code, v["error"]["kind"].as_str().unwrap().to_string())
}

#[test]
fn smoothing_factor_reports_the_published_value() {
    let v = stdout_json(&polysmooth(&[
        "smoothing-factor",
        "--k",
        "2",
        "--family",
        "chebyshev",
        "--degree",
        "6",
    ]));
    let r = &v["result"];
    assert!((r["lambda0"].as_f64().unwrap() - 0.146).abs() < 1e-3);
    assert!((r["mu"].as_f64().unwrap() - 0.041).abs() < 2e-3);
}

#[test]
fn optimal_lambda0_is_found_from_the_command_line() {
    let v = stdout_json(&polysmooth(&[
        "smoothing-factor",
        "--k",
        "1",
        "--family",
        "ba1x",
        "--degree",
        "2",
        "--lambda0",
        "opt",
    ]));
    assert!((v["result"]["smoother"]["spec"]["lambda0"].as_f64().unwrap() - 0.598).abs() < 2e-3);
}

#[test]
fn rerun_reproduces_a_report_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    for (name, args) in [
        (
            "smoothing.json",
            vec!["smoothing-factor", "--k", "3", "--family", "sa", "--degree", "17"],
        ),
        (
            "twogrid.json",
            vec!["two-grid", "--k", "1", "--family", "chebyshev", "--degree", "2", "--samples", "32"],
        ),
        (
            "solve.json",
            vec!["solve", "--k", "1", "--n", "31", "--family", "ba1x", "--degree", "2", "--iterations", "30"],
        ),
    ] {
        let path = dir.path().join(name);
        let mut full = args.clone();
        full.extend(["--output", path.to_str().unwrap()]);
        assert!(polysmooth(&full).status.success());
        let first = std::fs::read_to_string(&path).unwrap();
        let again = polysmooth(&["rerun", "--report", path.to_str().unwrap()]);
        assert!(again.status.success());
        assert_eq!(String::from_utf8(again.stdout).unwrap().trim_end(), first.trim_end(), "{name}");
    }
}

#[test]
fn custom_stencil_file_matches_the_builtin_stencil() {
    let builtin = stdout_json(&polysmooth(&[
        "smoothing-factor",
        "--k",
        "1",
        "--family",
        "chebyshev",
        "--degree",
        "2",
    ]));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stencil.json");
    std::fs::write(&path, builtin["result"]["stencil"].to_string()).unwrap();
    let custom = stdout_json(&polysmooth(&[
        "smoothing-factor",
        "--stencil-file",
        path.to_str().unwrap(),
        "--k",
        "1",
        "--family",
        "chebyshev",
        "--degree",
        "2",
    ]));
    assert_eq!(builtin["result"]["mu"], custom["result"]["mu"]);
}

#[test]
fn failures_are_reported_as_json_with_nonzero_exit() {
    assert_eq!(
        stderr_error(&polysmooth(&["reproduce", "--table", "0"])),
        (1, "unknown_table".to_string())
    );
    assert_eq!(
        stderr_error(&polysmooth(&["smoothing-factor", "--family", "bogus", "--degree", "1"])),
        (2, "usage".to_string())
    );
    assert_eq!(
        stderr_error(&polysmooth(&[
            "smoothing-factor",
            "--k",
            "1",
            "--family",
            "ba1x",
            "--degree",
            "3",
            "--lambda0",
            "0.9",
            "--lambda1",
            "0.5",
        ]))
        .0,
        1
    );
    let missing = Path::new("/nonexistent/report.json");
    assert_eq!(
        stderr_error(&polysmooth(&["rerun", "--report", missing.to_str().unwrap()])),
        (1, "io".to_string())
    );
    // triangular stencils are analysis-only
    let tri = [
        "solve", "--k", "1", "--stencil", "tri", "--angles", "equilateral", "--family", "chebyshev", "--degree", "1",
    ];
    assert_eq!(stderr_error(&polysmooth(&tri)).0, 1);
}

#[test]
fn reproduce_writes_csv_and_a_diff_document() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t1.csv");
    let out = polysmooth(&["reproduce", "--table", "1", "--output", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("k,"), "{header}");
    assert_eq!(text.lines().count(), 4);
    let diff: Value = serde_json::from_str(&std::fs::read_to_string(csv.with_extension("json")).unwrap()).unwrap();
    let cells = diff["result"]["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 18);
}

#[test]
fn minimal_degree_objective() {
    let v = stdout_json(&polysmooth(&["optimize", "--objective", "degree", "--rho", "0.1", "--kappa", "50"]));
    assert_eq!(v["result"]["degree"], 20);
}
