use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_circbut"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn verify_accepts_the_real_order_four_row() {
    let out = run(&["verify"], "# n=4 l=4\n0,0,2,0\n");
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["hadamard"], true);
    assert_eq!(v["hermitian"], true);
    assert_eq!(v["rows"][0]["canonical"], serde_json::json!([0, 0, 0, 2]));
}

#[test]
fn verify_rejects_a_constant_row() {
    let out = run(&["verify"], "# n=4 l=4\n0,0,0,0\n");
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["hadamard"], false);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "--bogus"], "").status.code(), Some(2));
    assert_eq!(
        run(&["verify"], "# n=4 l=4\n0 0 2 0\n").status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["search", "--n", "0", "--l", "4"], "").status.code(),
        Some(2)
    );
    let help = run(&["--help"], "");
    assert_eq!(help.status.code(), Some(0));
    assert!(!help.stdout.is_empty());
}

#[test]
fn obstruct_reports_the_order_five_bound() {
    let v = json(&run(&["obstruct", "--n", "5", "--l", "12"], ""));
    assert_eq!(v["status"], "obstructed");
    assert_eq!(v["reason"], "Haagerup5");
    let v = json(&run(&["obstruct", "--n", "4", "--l", "6"], ""));
    assert_eq!(v["status"], "no_known_obstruction");
}

#[test]
fn search_output_is_byte_stable() {
    let a = run(&["search", "--n", "4", "--l", "6", "--workers", "1"], "");
    let b = run(&["search", "--n", "4", "--l", "6", "--workers", "3"], "");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["class_count"], 3);
}

#[test]
fn search_rows_feed_back_into_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.txt");
    let p = path.to_str().unwrap();
    let out = run(&["search", "--n", "6", "--l", "12", "--out", p], "");
    assert_eq!(out.status.code(), Some(0));
    let v = json(&run(&["verify", "--file", p], ""));
    assert_eq!(v["hadamard"], true);
    assert_eq!(
        v["rows"].as_array().unwrap().len(),
        json(&out)["class_count"].as_u64().unwrap() as usize
    );
    let d = json(&run(&["audit", "--determinant", "--file", p], ""));
    assert_eq!(d["holds"], true);
}

#[test]
fn budget_exhaustion_is_a_failure_not_a_usage_error() {
    let out = run(&["search", "--n", "9", "--l", "9", "--budget", "10"], "");
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn planar_audit_counts_quadratics() {
    let out = run(&["audit", "--planar", "--p", "5"], "");
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["planar_count"], 100);
    assert_eq!(v["all_quadratic"], true);
    assert_eq!(v["planar_iff_hadamard"], true);
}

#[test]
fn haagerup_bound_is_central_binomial() {
    let v = json(&run(&["audit", "--haagerup", "--p", "7"], ""));
    assert_eq!(v["bound"], 924);
}

#[test]
fn construct_prints_row_files() {
    let out = run(
        &[
            "construct",
            "quadratic",
            "--p",
            "5",
            "--a",
            "2",
            "--b",
            "1",
            "--c",
            "3",
        ],
        "",
    );
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "# n=5 l=5\n3,1,3,4,4\n"
    );
    let out = run(&["construct", "fourier", "--n", "7"], "");
    let v = json(&run(&["verify"], std::str::from_utf8(&out.stdout).unwrap()));
    assert_eq!(v["hadamard"], true);
    let v = json(&run(
        &["construct", "quadratic", "--p", "7", "--a", "3", "--reduce"],
        "",
    ));
    assert_eq!(v["fourier"][2][3], 6);
}

#[test]
fn dual_of_hadamard_row_is_unimodular() {
    let v = json(&run(&["dualize", "--json"], "# n=4 l=4\n0,0,2,0\n"));
    assert_eq!(v["rows"][0]["unimodular"], true);
    assert_eq!(v["rows"][0]["hermitian"], true);
    let v = json(&run(&["dualize", "--json"], "# n=4 l=4\n0,0,0,1\n"));
    assert_eq!(v["rows"][0]["unimodular"], false);
    // F* undoes F through the text format.
    let fwd = run(&["dualize"], "# n=3 l=3\n0,1,1\n");
    let back = json(&run(
        &["dualize", "--inverse", "--json"],
        std::str::from_utf8(&fwd.stdout).unwrap(),
    ));
    let want = [
        0.0,
        2.0 * std::f64::consts::PI / 3.0,
        2.0 * std::f64::consts::PI / 3.0,
    ];
    for (z, t) in back["rows"][0]["values"]
        .as_array()
        .unwrap()
        .iter()
        .zip(want)
    {
        assert!((z[0].as_f64().unwrap() - t.cos()).abs() < 1e-12);
        assert!((z[1].as_f64().unwrap() - t.sin()).abs() < 1e-12);
    }
}

#[test]
fn table_marks_prime_diagonal() {
    let out = run(&["table", "--n-max", "4", "--l-max", "6"], "");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("F_3"));
    assert!(text.contains("(F_3)"));
}
