//! End-to-end tests against the compiled binary: artifact generation and
//! byte determinism, the verification battery, exit-code classes, and
//! schema validity of every JSON report.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use planegap::graph::{complete, cycle, tetrahedron};
use planegap::io;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_planegap"));
    c.env_remove("PLANEGAP_DENSE_CAP");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn assert_valid(schema_name: &str, instance: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(schema_name);
    let text = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let schema: Value = serde_json::from_str(&text).expect("schema parses");
    let compiled = JSONSchema::compile(&schema).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(instance) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| e.to_string()).collect(),
    };
    assert!(msgs.is_empty(), "{schema_name} rejected the report: {msgs:?}");
}

#[test]
fn gen_writes_deterministic_validated_artifacts() {
    let dir1 = tempfile::tempdir().unwrap();
    let dir2 = tempfile::tempdir().unwrap();
    for dir in [&dir1, &dir2] {
        let out = run(&[
            "gen",
            "--n",
            "8,10",
            "--alpha",
            "1",
            "--seed",
            "7",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    for name in [
        "y8.g",
        "y8.provenance.json",
        "x8.t",
        "x8.report.json",
        "y10.g",
        "y10.provenance.json",
        "x10.t",
        "x10.report.json",
    ] {
        let a = fs::read(dir1.path().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        let b = fs::read(dir2.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identically seeded runs");
    }
    let report: Value =
        serde_json::from_str(&fs::read_to_string(dir1.path().join("x8.report.json")).unwrap())
            .unwrap();
    assert_valid("pipeline_report.schema.json", &report);
    assert_eq!(report["n"], 8);
    assert_eq!(report["seed"], 7);
    assert_eq!(report["validator"]["pass"], true);
    let prov: Value =
        serde_json::from_str(&fs::read_to_string(dir1.path().join("y8.provenance.json")).unwrap())
            .unwrap();
    assert_valid("provenance.schema.json", &prov);
    assert_eq!(prov["base_n"], 8);
}

#[test]
fn gen_rejects_odd_n() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["gen", "--n", "9", "--seed", "1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(!out.stderr.is_empty());
}

#[test]
fn family_verify_passes_and_report_validates() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "gen",
        "--n",
        "8,10,12",
        "--seed",
        "7",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let report_path = dir.path().join("verify.json");
    let verify_args = [
        "verify",
        "--in",
        dir.path().to_str().unwrap(),
        "--n",
        "8,10,12",
        "--out",
        report_path.to_str().unwrap(),
    ];
    let out = run(&verify_args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let first = fs::read(&report_path).unwrap();

    let report: Value = serde_json::from_slice(&first).unwrap();
    assert_valid("verify_report.schema.json", &report);
    assert_eq!(report["mode"], "family");
    assert_eq!(report["pass"], true);
    assert_eq!(report["members"].as_array().unwrap().len(), 3);
    assert!(report["nobc"].is_object(), "three members must produce trend data");
    for band in report["bands"].as_array().unwrap() {
        assert_eq!(band["pass"], true, "band {band}");
    }

    // Same artifacts, same report bytes.
    let out = run(&verify_args);
    assert_eq!(code(&out), 0);
    assert_eq!(first, fs::read(&report_path).unwrap());

    // The triangulation file is readable by the single-graph commands.
    let x8 = dir.path().join("x8.t");
    let out = run(&["spectrum", "--in", x8.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let spec = stdout_json(&out);
    assert_valid("spectrum.schema.json", &spec);
    let recorded = report["members"][0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["name"] == "report_consistency" && c["pass"] == true);
    assert!(recorded);
    assert!(spec["lambda1"].as_f64().unwrap() > 0.0);
}

#[test]
fn verify_missing_artifacts_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "--in", dir.path().to_str().unwrap(), "--n", "8"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn verify_without_inputs_is_a_config_error() {
    let out = run(&["verify"]);
    assert_eq!(code(&out), 1);
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "--in", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1, "--in without --n must be rejected");
    let out = run(&[
        "verify",
        "--in",
        dir.path().to_str().unwrap(),
        "--n",
        "8",
        "--graphs",
        "x.g",
    ]);
    assert_eq!(code(&out), 1, "mixed modes must be rejected");
}

#[test]
fn control_k8_fails_the_math_check() {
    let dir = tempfile::tempdir().unwrap();
    let k8 = dir.path().join("k8.g");
    fs::write(&k8, io::write_edge_list(&complete(8))).unwrap();
    let out = run(&["verify", "--graphs", k8.to_str().unwrap()]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_valid("verify_report.schema.json", &report);
    assert_eq!(report["mode"], "controls");
    assert_eq!(report["pass"], false);
}

#[test]
fn control_cycles_pass_and_their_trend_grows() {
    let dir = tempfile::tempdir().unwrap();
    let mut args: Vec<String> = vec!["verify".into(), "--graphs".into()];
    let mut paths = Vec::new();
    for k in [32usize, 64, 96] {
        let p = dir.path().join(format!("c{k}.g"));
        fs::write(&p, io::write_edge_list(&cycle(k))).unwrap();
        paths.push(p.to_str().unwrap().to_string());
    }
    args.push(paths.join(","));
    let out = bin().args(&args).output().unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_valid("verify_report.schema.json", &report);
    assert_eq!(report["pass"], true);
    let stats: Vec<f64> = report["nobc"]["stats"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(stats.len(), 3);
    assert!(stats[0] < stats[1] && stats[1] < stats[2], "cycle trend must grow: {stats:?}");
}

#[test]
fn spectrum_matches_the_cycle_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let c32 = dir.path().join("cycle32.g");
    fs::write(&c32, io::write_edge_list(&cycle(32))).unwrap();
    let expected = 2.0 * (1.0 - (2.0 * std::f64::consts::PI / 32.0).cos());

    let out = run(&["spectrum", "--in", c32.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert_valid("spectrum.schema.json", &report);
    assert!((report["lambda1"].as_f64().unwrap() - expected).abs() < 1e-10);
    assert_eq!(report["method"], "dense");
    assert_eq!(report["vertices"], 32);

    let out = run(&["spectrum", "--in", c32.to_str().unwrap(), "--method", "iterative"]);
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert!((report["lambda1"].as_f64().unwrap() - expected).abs() < 1e-8);
    assert_eq!(report["method"], "iterative");

    let out = run(&["spectrum", "--in", c32.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda1,method,iterations,residual,vertices,edges"));
    let row = lines.next().unwrap();
    let lambda: f64 = row.split(',').next().unwrap().parse().unwrap();
    assert!((lambda - expected).abs() < 1e-10);
}

#[test]
fn spectrum_reads_triangulation_files() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("tet.t");
    fs::write(&t, io::write_triangulation(&tetrahedron())).unwrap();
    let out = run(&["spectrum", "--in", t.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    // The tetrahedron skeleton is complete on 4 vertices, whose gap is 4.
    assert!((report["lambda1"].as_f64().unwrap() - 4.0).abs() < 1e-10);
}

#[test]
fn spectrum_honors_the_dense_cap_env_var() {
    let dir = tempfile::tempdir().unwrap();
    let c32 = dir.path().join("cycle32.g");
    fs::write(&c32, io::write_edge_list(&cycle(32))).unwrap();
    let out = bin()
        .env("PLANEGAP_DENSE_CAP", "20")
        .args(["spectrum", "--in", c32.to_str().unwrap(), "--method", "dense"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
}

#[test]
fn spectrum_missing_file_is_an_io_error() {
    let out = run(&["spectrum", "--in", "/nonexistent/g.g"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn mixing_k8_settles_within_three_steps() {
    let dir = tempfile::tempdir().unwrap();
    let k8 = dir.path().join("k8.g");
    fs::write(&k8, io::write_edge_list(&complete(8))).unwrap();
    let out = run(&["mixing", "--in", k8.to_str().unwrap(), "--policy", "worst_exact"]);
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert_valid("mixing.schema.json", &report);
    assert!(report["tau"].as_u64().unwrap() <= 3);

    let out = run(&["mixing", "--in", k8.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("t,tv\n"));

    let out = run(&[
        "mixing",
        "--in",
        k8.to_str().unwrap(),
        "--policy",
        "worst_exact",
        "--starts",
        "0",
    ]);
    assert_eq!(code(&out), 1, "--starts with worst_exact must be rejected");
}

#[test]
fn density_integral_equals_edge_count() {
    let dir = tempfile::tempdir().unwrap();
    let rooted = dir.path().join("c5.g");
    fs::write(&rooted, io::write_rooted(&cycle(5), 0)).unwrap();
    let out = run(&["density", "--in", rooted.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert_valid("density.schema.json", &report);
    assert_eq!(report["integral"], 5);
    assert_eq!(report["edges"], 5);
    assert_eq!(report["root"], 0);

    let out = run(&["density", "--in", rooted.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("t_start,t_end,value\n"));

    let plain = dir.path().join("k8.g");
    fs::write(&plain, io::write_edge_list(&complete(8))).unwrap();
    let out = run(&["density", "--in", plain.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "plain edge list without --root must be rejected");
    let out = run(&["density", "--in", plain.to_str().unwrap(), "--root", "99"]);
    assert_eq!(code(&out), 1, "out-of-range root is a config error");
    let out = run(&["density", "--in", plain.to_str().unwrap(), "--root", "0", "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["integral"], 28);
}

#[test]
fn help_and_flag_errors_use_expected_codes() {
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    let out = run(&["spectrum", "--bogus"]);
    assert_eq!(code(&out), 1);
    let out = run(&[]);
    assert_eq!(code(&out), 1);
}
