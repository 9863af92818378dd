use std::path::PathBuf;
use std::process::{Command, Output};

fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snc-smooth"))
        .args(args)
        .env_remove("SNC_SMOOTH_SEED")
        .output()
        .expect("run cli")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("snc-smooth-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn list_names_every_scenario_and_family() {
    let o = run_cli(&["list"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    for name in snc_smooth::scenario_names() {
        assert!(out.contains(&name), "{name}");
    }
    assert!(out.contains("fujita-general"));
    assert!(out.contains("k=0 [0..3]"));
}

#[test]
fn check_tetra_blown_is_k3() {
    let o = run_cli(&["check", "tetra-blown"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("d-semistable: yes"));
    assert!(out.contains("fiber euler: 24"));
    assert!(out.contains("classification: K3"));
}

#[test]
fn check_quadric_naive_is_rejected() {
    let o = run_cli(&["check", "quadric-naive", "--format", "json"]);
    assert_eq!(code(&o), 3);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "mismatch");
    let curves: Vec<&str> = v["mismatches"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["curve"].as_str().unwrap())
        .collect();
    assert!(curves.contains(&"C3"), "{curves:?}");
    assert!(curves.contains(&"C1"), "{curves:?}");
}

#[test]
fn check_fujita_with_parameter() {
    let o = run_cli(&["check", "fujita", "--param", "k=2", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["report"]["residue_ok"], false);
    assert_eq!(v["report"]["h0_dim"], 0);
}

#[test]
fn batch_exit_code_is_first_failure_in_input_order() {
    let o = run_cli(&["check", "tetrahedron", "quadric-naive", "tetra-blown"]);
    assert_eq!(code(&o), 3);
    let out = stdout(&o);
    let a = out.find("tetrahedron:").unwrap();
    let b = out.find("quadric-naive:").unwrap();
    let c = out.find("tetra-blown:").unwrap();
    assert!(a < b && b < c);
}

#[test]
fn failed_expectation_exits_4() {
    let text = std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/tetra-blown.json"),
    )
    .unwrap();
    let path = temp_file(
        "wrong.json",
        &text.replace("\"chi_fiber\": 24", "\"chi_fiber\": 20"),
    );
    let o = run_cli(&["check", path.to_str().unwrap()]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("expectation failed: chi_fiber"));
}

#[test]
fn unreadable_inputs_exit_2() {
    let path = temp_file("empty.json", "");
    let o = run_cli(&["check", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
    assert_eq!(code(&run_cli(&["check", "no-such-scenario"])), 2);
    assert_eq!(code(&run_cli(&["check", "fujita", "--param", "k=9"])), 2);
    assert_eq!(
        code(&run_cli(&["check", "tetrahedron", "--param", "k=1"])),
        2
    );
}

#[test]
fn plan_outputs() {
    let o = run_cli(&["plan", "tetrahedron", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summary"]["points"], 12);
    for step in v["steps"].as_array().unwrap() {
        assert_eq!(step["mode"], "both_sides");
        assert_eq!(step["points"].as_array().unwrap().len(), 2);
    }

    let o = run_cli(&["plan", "tetra-blown"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("empty plan"));

    let o = run_cli(&["plan", "quadric-initial", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let inc = |c: &str| v["summary"]["by_curve"][c]["incidences"].as_u64().unwrap();
    assert_eq!((inc("C1"), inc("C2"), inc("C3")), (8, 8, 4));
}

#[test]
fn infeasible_plan_exits_6() {
    let file = r#"{
      "schema_version": 1,
      "name": "negative",
      "components": [
        {"id": "A", "kind": "declared", "class_basis": ["E"], "canonical_class": [-1], "euler_char": 3, "form": [[-1]]},
        {"id": "B", "kind": "declared", "class_basis": ["E"], "canonical_class": [-1], "euler_char": 3, "form": [[-1]]}
      ],
      "double_curves": [
        {"id": "L", "geometry": {"genus": 0},
         "sides": [
           {"component": "A", "curve_class": [1], "normal": {"degree": -1}},
           {"component": "B", "curve_class": [1], "normal": {"degree": -1}}
         ],
         "twist": ["-1", "0"]}
      ]
    }"#;
    let path = temp_file("negative.json", file);
    let o = run_cli(&["plan", path.to_str().unwrap()]);
    assert_eq!(code(&o), 6);
    assert!(stdout(&o).contains("infeasible"));
    assert!(stdout(&o).contains("on L"));
}

#[test]
fn describe_round_trips_through_check() {
    let o = run_cli(&[
        "describe",
        "torus-chain",
        "--param",
        "N=4",
        "--param",
        "d=2",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let path = temp_file("chain.json", &stdout(&o));
    let o = run_cli(&["check", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("classification: PrimaryKodaira"));
    let o = run_cli(&["describe", "fujita"]);
    assert!(stdout(&o).contains("param k"));
}

#[test]
fn charts_default_run_passes() {
    let o = run_cli(&["charts"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("all identities passed"));
}

#[test]
fn charts_below_float_precision_fail_with_residuals() {
    let o = run_cli(&["charts", "--tolerance", "1e-15", "--format", "json"]);
    assert_eq!(code(&o), 5);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let failed: Vec<_> = v["identities"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|i| i["passed"] == false)
        .collect();
    assert!(!failed.is_empty());
    for i in failed {
        assert!(i["max_residual"].as_f64().unwrap() > 1e-15);
    }
}

#[test]
fn charts_without_samples_warn() {
    let o = run_cli(&["charts", "--samples", "0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("warning"));
}

#[test]
fn seed_flag_overrides_environment() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_snc-smooth"))
        .args(["charts", "--samples", "3", "--format", "json"])
        .env("SNC_SMOOTH_SEED", "42")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&with_env.stdout).unwrap();
    assert_eq!(v["seed"], 42);
    let with_flag = Command::new(env!("CARGO_BIN_EXE_snc-smooth"))
        .args([
            "charts",
            "--samples",
            "3",
            "--seed",
            "7",
            "--format",
            "json",
        ])
        .env("SNC_SMOOTH_SEED", "42")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&with_flag.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    let default = run_cli(&["charts", "--samples", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&default.stdout).unwrap();
    assert_eq!(v["seed"], 1729);
}

#[test]
fn json_output_is_byte_identical() {
    let a = run_cli(&["charts", "--samples", "5", "--format", "json"]);
    let b = run_cli(&["charts", "--samples", "5", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run_cli(&[
        "check",
        "quadric-pipeline",
        "k3-double-d2",
        "--format",
        "json",
    ]);
    let b = run_cli(&[
        "check",
        "quadric-pipeline",
        "k3-double-d2",
        "--format",
        "json",
    ]);
    assert_eq!(a.stdout, b.stdout);
}
