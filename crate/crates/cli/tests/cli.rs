use std::process::{Command, Output};

use serde_json::Value;

fn mpwright(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpwright"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn eval_tricomi_point() {
    let o = mpwright(&["eval", "--alpha", "1,1", "--nu", "1", "--z", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let re = v[0]["re"].as_f64().unwrap();
    assert!((re - 2.279585302336067).abs() < 1e-14, "{re}");
    assert_eq!(v[0]["im"].as_f64(), Some(0.0));
}

#[test]
fn eval_at_zero_is_one() {
    let o = mpwright(&["eval", "--alpha", "1,1", "--nu", "1", "--z", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)[0]["re"].as_f64(), Some(1.0));
}

#[test]
fn floats_have_seventeen_digits() {
    let o = mpwright(&["eval", "--alpha", "1,1", "--nu", "1", "--z", "1", "--format", "csv"]);
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[2], "2.2795853023360664e0");
    assert_eq!(row[0], "1.0000000000000000e0");
}

#[test]
fn csv_and_json_carry_identical_values() {
    let base = ["eval", "--params", r#"{"alpha":[0.7,0.5,0.9],"nu":[0.4,1.2]}"#, "--grid", "-2:3:11"];
    let j = json(&mpwright(&[&base[..], &["--format", "json"]].concat()));
    let c = stdout(&mpwright(&[&base[..], &["--format", "csv"]].concat()));
    let mut lines = c.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 11);
    for (i, line) in rows.iter().enumerate() {
        for (col, cell) in header.iter().zip(line.split(',')) {
            let jv = &j[i][*col];
            match jv {
                Value::Null => assert!(cell.is_empty()),
                Value::Number(n) => assert_eq!(cell.parse::<f64>().unwrap(), n.as_f64().unwrap()),
                other => panic!("unexpected {other}"),
            }
        }
    }
    // grid order
    assert_eq!(j[0]["z_re"].as_f64(), Some(-2.0));
    assert_eq!(j[10]["z_re"].as_f64(), Some(3.0));
}

#[test]
fn output_is_deterministic() {
    let args = ["eval", "--alpha", "0.5,0.5", "--nu", "0.5", "--grid", "0.1:40:64:log"];
    assert_eq!(mpwright(&args).stdout, mpwright(&args).stdout);
}

#[test]
fn params_file_matches_flags() {
    let dir = std::env::temp_dir().join(format!("mpwright-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p.json");
    std::fs::write(&path, r#"{"alpha": [0.5, 0.8], "nu": [0.6]}"#).unwrap();
    let a = mpwright(&["coeffs", "--params", path.to_str().unwrap(), "--count", "8"]);
    let b = mpwright(&["coeffs", "--alpha", "0.5,0.8", "--nu", "0.6", "--count", "8"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a).as_array().unwrap().len(), 8);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn complex_points_file() {
    let dir = std::env::temp_dir().join(format!("mpwright-pts-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z.json");
    std::fs::write(&path, r#"[0.5, [1, -1], {"re": 0, "im": 2}]"#).unwrap();
    let o = mpwright(&["eval", "--kind", "mittag-leffler2", "--args", "1,1", "--points", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    // E_{1,1}(iy) = e^{iy}
    assert!((v[2]["re"].as_f64().unwrap() - 2.0_f64.cos()).abs() < 1e-15);
    assert!((v[2]["im"].as_f64().unwrap() - 2.0_f64.sin()).abs() < 1e-15);
    assert_eq!(v[1]["z_im"].as_f64(), Some(-1.0));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn ratio_table_indices() {
    let v = json(&mpwright(&["ratio", "--alpha", "0.7,1,0.5", "--nu", "0.3,0.7", "--count", "5"]));
    let ks: Vec<u64> = v.as_array().unwrap().iter().map(|r| r["k"].as_u64().unwrap()).collect();
    assert_eq!(ks, vec![1, 2, 3, 4, 5]);
}

#[test]
fn usage_errors_exit_two_with_one_line() {
    for args in [
        &["eval", "--alpha", "1", "--nu", "1", "--z", "1"][..],
        &["eval", "--alpha", "1,1", "--nu", "1"],
        &["eval", "--alpha", "1,1", "--nu", "1", "--z", "1", "--eps", "2"],
        &["eval", "--alpha", "1,1", "--nu", "1", "--grid", "0:1:0"],
        &["eval", "--alpha", "1,-1", "--nu", "1", "--z", "1"],
        &["eval", "--kind", "nope", "--z", "1"],
        &["frobnicate"],
        &["verify-pde", "--alpha", "0.5,0.5,0.5", "--nu", "0.5,0.5"],
    ] {
        let o = mpwright(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn verify_eigen_report() {
    let o = mpwright(&["verify-eigen", "--alpha", "0.5,0.7", "--nu", "0.6", "--lambda", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["passed"], Value::Bool(true));
    assert_eq!(r["residuals"].as_array().unwrap().len(), 8);
    assert!(r["max_residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn verify_pde_phase_and_control() {
    let base = ["verify-pde", "--alpha", "0.5,0.6", "--nu", "0.7", "--omega", "2"];
    assert_eq!(mpwright(&base).status.code(), Some(0));
    let printed = mpwright(&[&base[..], &["--phase", "positive"]].concat());
    assert_eq!(printed.status.code(), Some(1));
    assert_eq!(json(&printed)["passed"], Value::Bool(false));
}

#[test]
fn verify_reduction_cases() {
    for args in [
        &["verify-reduction", "--case", "tricomi"][..],
        &["verify-reduction", "--case", "bessel-j0"],
        &["verify-reduction", "--case", "laguerre-exp", "--args", "2"],
        &["verify-reduction", "--case", "n-mittag-leffler", "--args", "2,0.5"],
        &["verify-reduction", "--case", "classical-wright", "--args", "0.5,1"],
    ] {
        let o = mpwright(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_eq!(json(&o)["residuals"].as_array().unwrap().len(), 25);
    }
}

#[test]
fn failing_check_exits_one() {
    // the first stage maps x^0.7 to x^-0.3, the weight then gives a constant
    // that the last Caputo stage annihilates
    let o = mpwright(&["verify-eigen", "--alpha", "1,0.7", "--nu", "0.3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn suite_passes_at_default_tolerances() {
    let o = mpwright(&["suite", "--tol-eigen", "1e-8"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["check_name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert!(names.len() >= 10);
}

#[test]
fn baseline_kind_rejects_operator_params() {
    let o = mpwright(&["eval", "--kind", "tricomi", "--alpha", "1,1", "--nu", "1", "--z", "1"]);
    assert_eq!(o.status.code(), Some(2));
}
