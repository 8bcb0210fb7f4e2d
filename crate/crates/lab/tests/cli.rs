use std::process::{Command, Output};

use hermite_lab::report::{CSV_COLUMNS, SCHEMA};
use jsonschema::JSONSchema;
use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermite-lab"))
        .args(args)
        .env_remove("HERMITE_LAB_MAX_BITS")
        .output()
        .expect("binary runs")
}

fn schema() -> JSONSchema {
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    JSONSchema::compile(&schema).expect("schema compiles")
}

/// Parses stdout, validates it, and checks that it survives a serialize/parse round trip.
fn record(out: &Output) -> Value {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    if let Err(errors) = schema().validate(&v) {
        let msgs: Vec<String> = errors
            .map(|e| format!("{} at {}", e, e.instance_path))
            .collect();
        panic!("schema violations: {msgs:?}\n{text}");
    }
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);
    v
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn expand_json_and_csv() {
    let out = lab(&["expand", "--theta", "3/8", "--n", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = record(&out);
    assert_eq!(v["command"], "expand");
    assert_eq!(strings(&v["results"]["quotients"]), ["2", "1", "2"]);
    let last = v["results"]["convergents"]
        .as_array()
        .unwrap()
        .last()
        .unwrap()
        .clone();
    assert_eq!(
        (last["p"].as_str(), last["q"].as_str()),
        (Some("3"), Some("8"))
    );

    let v = record(&lab(&[
        "expand",
        "--theta",
        "(-3+1*sqrt(21))/6",
        "--n",
        "6",
    ]));
    assert_eq!(
        strings(&v["results"]["quotients"]),
        ["3", "1", "3", "1", "3", "1"]
    );
    assert_eq!(v["results"]["terminated"], false);

    let out = lab(&["expand", "--theta", "3/8", "--n", "10", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines,
        [
            "index,quotient,p,q",
            "0,,0,1",
            "1,2,1,2",
            "2,1,1,3",
            "3,2,3,8"
        ]
    );
}

#[test]
fn flags_verify() {
    let out = lab(&[
        "flags",
        "--theta",
        "(-3+1*sqrt(21))/6",
        "--n",
        "8",
        "--verify",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = record(&out);
    let flags: Vec<bool> = v["results"]["flags"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f.as_bool().unwrap())
        .collect();
    assert_eq!(flags, [true, true, false, true, false, true, false, true]);
    assert_eq!(strings(&v["results"]["hermite_q"]), ["1", "4", "19", "91"]);
    assert!(v["results"]["verification"]["mismatches"]
        .as_array()
        .unwrap()
        .is_empty());

    let out = lab(&[
        "flags",
        "--theta",
        "(1+1*sqrt(5))/2",
        "--n",
        "10",
        "--verify",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = record(&out);
    assert!(v["results"]["flags"]
        .as_array()
        .unwrap()
        .iter()
        .all(|f| f == true));
}

#[test]
fn orbit_and_measure() {
    let v = record(&lab(&[
        "orbit", "--x", "0.4", "--y", "0.333333", "--n", "1",
    ]));
    let p = &v["results"]["points"][1];
    assert_eq!(p["x"].as_f64(), Some(0.5));
    assert!((p["y"].as_f64().unwrap() - 0.428_571).abs() < 1e-6);

    let v = record(&lab(&["orbit", "--x", "1/2", "--y", "3/7", "--n", "-1"]));
    let p = &v["results"]["points"][1];
    assert_eq!(
        (
            p["step"].as_i64(),
            p["x_exact"].as_str(),
            p["y_exact"].as_str()
        ),
        (Some(-1), Some("2/5"), Some("1/3"))
    );

    let out = lab(&["measure", "--tol", "1e-8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = record(&out);
    assert!((v["results"]["mu_v"].as_f64().unwrap() - 0.207_518_75).abs() <= 1e-8);
}

#[test]
fn experiment_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    let out = lab(&[
        "experiment",
        "--samples",
        "10",
        "--depth",
        "500",
        "--seed",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert!(schema().is_valid(&v));
    let mean = v["results"]["proportion"]["mean"].as_f64().unwrap();
    assert!((mean - 0.79).abs() <= 0.03, "mean proportion {mean}");
    assert_eq!(v["results"]["rows"].as_array().unwrap().len(), 10);

    let mut reader = csv::Reader::from_path(path.with_extension("csv")).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, CSV_COLUMNS);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 10);
    assert_eq!(&rows[3][0], "3");
    assert_eq!(&rows[3][1], "500");
}

#[test]
fn experiment_to_stdout_with_checkpoints() {
    let out = lab(&[
        "experiment",
        "--samples",
        "3",
        "--depth",
        "60",
        "--seed",
        "7",
        "--checkpoints",
        "20,40,60",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = record(&out);
    let conv = v["results"]["convergence"].as_array().unwrap();
    assert_eq!(
        conv.iter()
            .map(|r| r["n"].as_u64().unwrap())
            .collect::<Vec<_>>(),
        [20, 40, 60]
    );
}

#[test]
fn floats_carry_fifteen_digits() {
    let text = String::from_utf8(lab(&["measure"]).stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let printed = v["results"]["mu_v"].to_string();
    let digits = printed
        .trim_start_matches("0.")
        .trim_start_matches('0')
        .len();
    assert!(digits <= 15, "{printed}");
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| lab(args).status.code();
    assert_eq!(code(&["expand", "--theta", "abc", "--n", "3"]), Some(2));
    assert_eq!(code(&["expand", "--theta", "5", "--n", "3"]), Some(2));
    assert_eq!(code(&["flags", "--theta", "3/8", "--n", "1"]), Some(2));
    assert_eq!(
        code(&["orbit", "--x", "3/8", "--y", "0", "--n", "3"]),
        Some(2)
    );
    assert_eq!(code(&["measure", "--tol", "0"]), Some(2));
    assert_eq!(
        code(&["experiment", "--samples", "0", "--depth", "100"]),
        Some(2)
    );
    assert_eq!(
        code(&["expand", "--theta", "0.1@64", "--n", "200"]),
        Some(3)
    );
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no/such/dir/out.json");
    assert_eq!(
        code(&[
            "experiment",
            "--samples",
            "1",
            "--depth",
            "20",
            "--out",
            missing.to_str().unwrap()
        ]),
        Some(1)
    );

    let capped = Command::new(env!("CARGO_BIN_EXE_hermite-lab"))
        .args(["measure"])
        .env("HERMITE_LAB_MAX_BITS", "12")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("HERMITE_LAB_MAX_BITS"));
}
