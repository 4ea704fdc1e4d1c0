use std::process::{Command, Output};

use serde_json::Value;

fn hypfq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypfq"))
        .args(args)
        .env_remove("HYPFQ_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn hyp2f1_at_zero_is_exact_zero() {
    let out = hypfq(&["eval", "2f1", "--field", "13", "--a", "1", "--b", "2", "--c", "3", "--x", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["value"]["m"], 13 * 12);
    assert!(v["value"]["coeffs"].as_array().unwrap().iter().all(|c| c == "0/1"));
}

#[test]
fn even_characteristic_is_a_usage_error() {
    let out = hypfq(&["eval", "gauss", "--field", "4", "--a", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("even characteristic unsupported"));
    assert!(out.stdout.is_empty());
}

#[test]
fn bad_arguments_exit_two() {
    for args in [
        &["verify"][..],
        &["eval", "gauss", "--field", "13"],
        &["eval", "gauss", "--field", "13", "--a", "psi"],
        &["eval", "2f1", "--field", "13", "--a", "1", "--b", "1", "--c", "1", "--x", "13"],
        &["eval", "gauss", "--field", "7", "--a", "chi4"],
        &["verify", "--identity", "thm9", "--field", "5"],
        &["verify", "--identity", "thm2"],
        &["field-info", "--field", "15"],
    ] {
        assert_eq!(hypfq(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn gauss_of_trivial_character() {
    let out = hypfq(&["eval", "gauss", "--field", "3^2", "--a", "eps"]);
    let v = stdout_json(&out);
    assert_eq!(v["field"], "3^2");
    assert_eq!(v["value"]["coeffs"][0], "-1/1");
    assert_eq!(v["approx"]["re"], -1.0);
}

#[test]
fn float_and_exact_evaluations_agree() {
    let args = ["eval", "fstar", "--field", "13", "--c", "1", "--d", "2", "--x", "g^3"];
    let exact = stdout_json(&hypfq(&args));
    let mut float_args = args.to_vec();
    float_args.extend(["--backend", "float"]);
    let float = stdout_json(&hypfq(&float_args));
    for key in ["re", "im"] {
        let (e, f) = (exact["approx"][key].as_f64().unwrap(), float["value"][key].as_f64().unwrap());
        assert!((e - f).abs() < 1e-9);
    }
}

#[test]
fn csv_and_pretty_formats() {
    let out = hypfq(&["eval", "jacobi", "--field", "5", "--a", "1", "--b", "phi", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("function,field,backend,a,b,re,im,exact"));
    assert!(lines.next().unwrap().starts_with("jacobi,5,exact,1,2,"));
    let out = hypfq(&["eval", "binomial", "--field", "5", "--a", "1", "--b", "2", "--format", "pretty"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("(chi_1 over chi_2) over F_5 = "));
}

#[test]
fn verify_all_small_fields_passes() {
    let out = hypfq(&["verify", "--all", "--fields", "5,9,13", "--backend", "exact", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let reports = stdout_json(&out);
    let reports = reports.as_array().unwrap();
    // nine field sweeps per field plus the rational identity
    assert_eq!(reports.len(), 3 * 9 + 1);
    for r in reports {
        for key in ["identity", "field", "backend", "tested", "passed", "skipped", "failed", "witnesses", "millis"] {
            assert!(r.get(key).is_some(), "{key} missing");
        }
        assert_eq!(r["failed"], 0);
    }
}

#[test]
fn quartic_identity_runs_both_quartic_characters() {
    let out = hypfq(&["verify", "--identity", "thm3", "--field", "13", "--no-timing"]);
    let reports = stdout_json(&out);
    let names: Vec<&str> = reports.as_array().unwrap().iter().map(|r| r["identity"].as_str().unwrap()).collect();
    assert_eq!(names, ["thm3", "thm3bar"]);
}

#[test]
fn reports_are_identical_across_job_counts() {
    let base = ["verify", "--identity", "lemma1", "--field", "13", "--no-timing"];
    let one = hypfq(&[&base[..], &["--jobs", "1"]].concat());
    let eight = hypfq(&[&base[..], &["--jobs", "8"]].concat());
    assert_eq!(one.stdout, eight.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_hypfq")).args(base).env("HYPFQ_JOBS", "3").output().unwrap();
    assert_eq!(env.stdout, one.stdout);
}

#[test]
fn report_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = hypfq(&[
        "verify",
        "--identity",
        "stanton",
        "--n-max",
        "3",
        "--no-timing",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file, stdout_json(&out));
    assert_eq!(file[0]["tested"], 4);
}

#[test]
fn field_info_lists_tables() {
    let out = hypfq(&["field-info", "--field", "9", "--tables"]);
    let v = stdout_json(&out);
    assert_eq!(v["q"], 9);
    assert_eq!(v["power_codes"].as_array().unwrap().len(), 8);
    assert_eq!(v["trace_by_code"].as_array().unwrap().len(), 9);
}
