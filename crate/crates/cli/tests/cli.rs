use std::path::PathBuf;
use std::process::Command;

use chronon_lab::run;
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("chronon-lab").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ok_json(args: &[&str]) -> Value {
    let (code, out, err) = invoke(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {v}"))
}

#[test]
fn bell_conditional_entropy() {
    let (code, out, _) = invoke(&["entropy", "--state", &data("bell.json"), "--conditional", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "key,value\nconditional,-0.693147181\n");
    let v = ok_json(&["entropy", "--state", &data("bell.json"), "--conditional"]);
    assert!((num(&v, "nats") + std::f64::consts::LN_2).abs() < 1e-12);
}

#[test]
fn pure_state_reduction_and_measurement() {
    let v = ok_json(&[
        "entropy",
        "--state",
        &data("phi_plus.json"),
        "--reduce",
        "2,2",
        "--basis",
        &data("basis.json"),
        "--time",
        "2",
    ]);
    assert_eq!(v["quantity"], "reduced");
    let s = num(&v, "nats");
    assert!((s - std::f64::consts::LN_2).abs() < 1e-12);
    assert!((num(&v, "measurementProbability") - 1.0).abs() < 1e-12);
    assert!((num(&v, "stateCount") - 2.0 * 4.0 * s).abs() < 1e-12);
    assert!((num(&v, "timeQuantum") * num(&v, "processVelocity") - 1.0).abs() < 1e-12);

    let v = ok_json(&["entropy", "--state", &data("phi_plus.json"), "--reduce", "2,2", "--conditional"]);
    assert!((num(&v, "nats") + std::f64::consts::LN_2).abs() < 1e-9);
}

#[test]
fn cq_report_includes_dilation() {
    let v = ok_json(&["conditional", "--state", &data("cq.json")]);
    let cq = num(&v, "cqConditional");
    assert!((cq - 0.5 * std::f64::consts::LN_2).abs() < 1e-12);
    assert!((num(&v, "difference") - cq).abs() < 1e-8);
    assert!((num(&v, "logTrace") - cq).abs() < 1e-8);
    let d = &v["dilation"];
    assert!(d["conditional"].as_f64().unwrap() >= d["marginal"].as_f64().unwrap());
    assert!((d["conditional"].as_f64().unwrap() - 0.721_348).abs() < 1e-6);
}

#[test]
fn regularized_bell_trotter() {
    let v = ok_json(&["conditional", "--state", &data("bell.json"), "--trotter", "4096", "--epsilon", "1e-6"]);
    assert!(num(&v["trotter"], "distance") < 1e-3);
    assert!(num(&v, "antiqubitVelocity").abs() < 1e-9);
}

#[test]
fn singular_trotter_is_numerical_failure() {
    let (code, _, err) = invoke(&["conditional", "--state", &data("bell.json"), "--trotter", "8"]);
    assert_eq!(code, 2);
    assert!(err.contains("rank deficient"), "{err}");
}

#[test]
fn validation_failures_exit_one() {
    let (code, _, err) = invoke(&["entropy", "--state", &data("not_normalized.json")]);
    assert_eq!(code, 1);
    assert!(err.contains("trace"), "{err}");
    assert_eq!(invoke(&["entropy", "--state", "/nonexistent/state.json"]).0, 1);
    assert_eq!(invoke(&["lorentz", "--v", "1.5"]).0, 1);
    assert_eq!(invoke(&["simultaneity", "--theta1", "0", "--theta2", "1", "--v-max", "0"]).0, 1);
    assert_eq!(invoke(&["simultaneity", "--theta1", "0"]).0, 1);
    assert_eq!(invoke(&["conditional", "--state", &data("phi_plus.json")]).0, 1);
    assert_eq!(invoke(&["entropy", "--state", &data("bell.json"), "--reduce", "2,2"]).0, 1);
}

#[test]
fn mlcheck_reports_no_violations() {
    let v = ok_json(&["mlcheck", "--dim", "2", "--trials", "100", "--seed", "0"]);
    assert_eq!(v["trials"], 100);
    assert_eq!(v["violations"], 0);
    assert!(v["found"].as_u64().unwrap() >= 50);
    assert!(num(&v, "minSlack") >= -1e-9);
}

#[test]
fn gaussian_summary_lines() {
    let (code, out, _) = invoke(&["gaussian", "--grid", "1024"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "x,G,H");
    assert_eq!(lines[1], "0,0,0");
    assert_eq!(lines.iter().filter(|l| l.starts_with(|c: char| c.is_ascii_digit())).count(), 1024);
    let field = |key: &str| -> f64 {
        let line = lines.iter().find(|l| l.starts_with(&format!("{key},"))).unwrap();
        line.rsplit(',').next().unwrap().parse().unwrap()
    };
    assert!((field("max_G") - std::f64::consts::LN_2).abs() < 1e-6);
    assert!((field("max_H") - 0.4579).abs() < 5e-4);
    assert!((field("bound_classical_velocity") - 1.832).abs() < 2e-3);
    assert!(!out.contains('\r'));
}

#[test]
fn lorentz_report() {
    let v = ok_json(&["lorentz", "--v", "0.6", "--c", "1", "--temp-exponent", "-1", "--length-exponent", "-1"]);
    assert_eq!(v["pass"], true);
    assert!(num(&v, "relDiff") <= 1e-12);
    for key in ["restFrame", "boostedFrame"] {
        assert!(v[key].is_object());
    }
    assert!((num(&v["recovered"], "dtMin") - num(&v["restFrame"], "dtMin")).abs() < 1e-12);

    let v = ok_json(&["lorentz", "--v", "0.6", "--temp-exponent", "-0.5", "--length-exponent", "-1"]);
    assert_eq!(v["pass"], false);
}

#[test]
fn flow_csv_and_ratios() {
    let (code, out, _) = invoke(&["flow", "--config", &data("flow.json")]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "time,quantum,systemId");
    assert_eq!(lines[1], "0.18033688,0.18033688,b");
    assert_eq!(lines[2], "0.36067376,0.36067376,a");
    assert_eq!(lines[3], "0.36067376,0.18033688,b");
    assert!(!out.contains(",z\n"));

    let v = ok_json(&["flow", "--config", &data("flow.json"), "--format", "json"]);
    assert_eq!(v["clockRatios"][0]["ratio"], 2.0);
    assert_eq!(v["ticks"].as_array().unwrap().len(), 9);
}

#[test]
fn simultaneity_from_counts() {
    let v = ok_json(&["simultaneity", "--theta1", "0", "--theta2", "10", "--v-max", "2.772589"]);
    assert!((num(&v, "offset") - 3.606_738).abs() < 1e-6);
    let v = ok_json(&["simultaneity", "--s1", "1", "--t1", "1", "--s2", "1", "--t2", "3", "--v-max", "4"]);
    assert!((num(&v, "offset") - 2.0).abs() < 1e-12);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["mlcheck", "--trials", "30", "--seed", "7"],
        vec!["gaussian", "--grid", "64"],
        vec!["conditional", "--state", "BELL", "--trotter", "64", "--epsilon", "1e-3"],
    ] {
        let bell = data("bell.json");
        let args: Vec<&str> = args.iter().map(|a| if *a == "BELL" { bell.as_str() } else { a }).collect();
        let first = invoke(&args);
        assert_eq!(first.0, 0, "{}", first.2);
        assert_eq!(first, invoke(&args));
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    let (code, out, _) = invoke(&["gaussian", "--grid", "8", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), invoke(&["gaussian", "--grid", "8"]).1);
}

#[test]
fn binary_honours_dimension_cap() {
    let bin = env!("CARGO_BIN_EXE_chronon-lab");
    let bell = data("bell.json");
    let run = |cap: Option<&str>| {
        let mut cmd = Command::new(bin);
        cmd.args(["entropy", "--state", &bell, "--conditional", "--format", "csv"]);
        match cap {
            Some(c) => cmd.env("CHRONON_MAX_DIM", c),
            None => cmd.env_remove("CHRONON_MAX_DIM"),
        };
        cmd.output().unwrap()
    };
    let ok = run(None);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "key,value\nconditional,-0.693147181\n");
    let capped = run(Some("2"));
    assert_eq!(capped.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("exceeds cap"));
}
