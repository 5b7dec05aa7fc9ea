use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn qi(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qi")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, stdout, stderr) = qi(args);
    assert_eq!(code, 0, "{stderr}");
    serde_json::from_str(&stdout).expect("valid JSON")
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("qi-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

#[test]
fn check_lists_three_violations() {
    let v = json(&["check", "--kind", "sparsity", "--plant", &data("gI.txt"), "--controller", &data("I4.txt")]);
    assert_eq!(v["is_qi"], false);
    let quads: Vec<[u64; 4]> = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|q| ["k", "i", "j", "l"].map(|f| q[f].as_u64().unwrap()))
        .collect();
    assert_eq!(quads, vec![[2, 2, 1, 1], [3, 3, 2, 2], [3, 3, 4, 4]]);
    assert_eq!(v["inputs"][0]["shape"], serde_json::json!([4, 4]));
}

#[test]
fn superset_report_fields() {
    let plant = data("gII.txt");
    let ctrl = data("I4.txt");
    let v = json(&["closest", "--kind", "sparsity", "--mode", "superset", "--plant", &plant, "--controller", &ctrl, "--trace"]);
    assert_eq!(v["hamming_distance"], 6);
    assert_eq!(v["iterations"], 2);
    assert_eq!(v["result"], serde_json::json!([[1, 0, 0, 0], [1, 1, 0, 0], [1, 1, 1, 0], [1, 1, 1, 1]]));
    assert_eq!(v["added_links"][0], serde_json::json!([2, 1]));
    assert_eq!(v["iterates"].as_array().unwrap().len(), 3);
}

#[test]
fn delay_superset_objective() {
    let v = json(&[
        "closest", "--kind", "delay", "--mode", "superset", "--norm", "1",
        "--plant", &data("p_tilde.txt"), "--controller", &data("t_tilde.txt"),
    ]);
    assert!((v["objective"].as_f64().unwrap() - 11.0).abs() < 1e-6);
    assert_eq!(v["delta"][2][0].as_f64().unwrap(), -4.0);
}

#[test]
fn minplus_solver_and_plain_output() {
    let args = [
        "closest", "--kind", "delay", "--mode", "superset", "--solver", "minplus",
        "--plant", &data("p_tilde.txt"), "--controller", &data("t_tilde.txt"), "--plain",
    ];
    let (code, stdout, _) = qi(&args);
    assert_eq!(code, 0);
    assert_eq!(stdout, "2 3 4 5\n4 2 2 7\n5 6 0 0\n7 9 8 5\n");
}

#[test]
fn subset_heuristic_flags() {
    let plant = scratch("ones.txt", "1 1\n1 1\n");
    let ctrl = scratch("k.txt", "1 1\n1 0\n");
    for method in ["weights", "relaxed-lp"] {
        for schedule in ["step", "pass"] {
            let v = json(&[
                "closest", "--kind", "sparsity", "--mode", "subset", "--method", method, "--schedule", schedule,
                "--plant", &plant, "--controller", &ctrl,
            ]);
            assert_eq!(v["hamming_distance"], 1, "{method}/{schedule}");
            assert_eq!(v["removed_links"].as_array().unwrap().len(), 1);
        }
    }
}

#[test]
fn reproduce_commands() {
    let v = json(&["reproduce", "sparsity-example"]);
    assert_eq!(v["plant_one"]["result"], serde_json::json!([[1, 0, 0, 0], [1, 1, 0, 0], [1, 1, 1, 1], [0, 0, 0, 1]]));
    let v = json(&["reproduce", "delay-table"]);
    assert_eq!(v["cells"].as_array().unwrap().len(), 9);
}

#[test]
fn oracle_commands() {
    let v = json(&["oracle", "superset", "--plant", &data("gI.txt"), "--controller", &data("I4.txt")]);
    assert_eq!(v["hamming_distance"], 4);
    let v = json(&[
        "oracle", "lp", "--mode", "set", "--norm", "inf",
        "--plant", &data("p_tilde.txt"), "--controller", &data("t_tilde.txt"),
    ]);
    assert_eq!(v["objective_exact"], "4/3");
}

#[test]
fn output_is_deterministic_apart_from_timing() {
    let args = ["closest", "--kind", "delay", "--mode", "set", "--norm", "2", "--plant", &data("p_tilde.txt"), "--controller", &data("t_tilde.txt")];
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing_ms");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(json(&args)), strip(json(&args)));
    let (_, raw, _) = qi(&args);
    let keys: Vec<&str> = raw.lines().filter(|l| l.starts_with("  \"")).map(|l| l.trim()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn exit_codes() {
    let (code, _, stderr) = qi(&["check", "--bogus"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("Usage"));

    let bad = scratch("bad.txt", "1 0\n0 x\n");
    let (code, _, stderr) = qi(&["check", "--kind", "sparsity", "--plant", &bad, "--controller", &bad]);
    assert_eq!(code, 2);
    assert!(stderr.contains("line 2"), "{stderr}");

    let ragged = scratch("ragged.txt", "1 0\n0\n");
    assert_eq!(qi(&["check", "--kind", "delay", "--plant", &ragged, "--controller", &ragged]).0, 2);

    let t = scratch("tri.txt", "0 5 1\n1 0 1\n1 1 0\n");
    let (code, _, stderr) = qi(&["check", "--kind", "delay", "--reduced", "--plant", &t, "--controller", &t]);
    assert_eq!(code, 2);
    assert!(stderr.contains("triangle"), "{stderr}");

    let missing = data("does-not-exist.txt");
    assert_eq!(qi(&["check", "--kind", "sparsity", "--plant", &missing, "--controller", &missing]).0, 2);
}

#[test]
fn infinite_targets_are_unsupported_by_lp() {
    let p = scratch("p_inf.txt", "0 1\n1 0\n");
    let t = scratch("t_inf.txt", "0 inf\n2 0\n");
    let (code, _, _) = qi(&["closest", "--kind", "delay", "--mode", "set", "--plant", &p, "--controller", &t, "--as-delay"]);
    assert_eq!(code, 2);
    let v = json(&["closest", "--kind", "delay", "--mode", "superset", "--solver", "minplus", "--plant", &p, "--controller", &t]);
    // t_11 + p_12 + t_22 = 0 + 1 + 0
    assert_eq!(v["result"][0][1], 1.0);
}

#[test]
fn tolerance_env_override() {
    let args = ["closest", "--kind", "delay", "--mode", "set", "--norm", "2", "--plant", &data("p_tilde.txt"), "--controller", &data("t_tilde.txt")];
    let out = Command::new(env!("CARGO_BIN_EXE_qi")).args(args).env("QI_TOLERANCE", "1").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_qi")).args(args).env("QI_TOLERANCE", "1e-7").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn in_process_run_matches_binary() {
    let args = ["qi", "check", "--kind", "sparsity", "--plant", &data("gII.txt"), "--controller", &data("I4.txt")];
    let out = qi_core::cli::run(args);
    assert_eq!(out.code, 0);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["violations"].as_array().unwrap().len(), 3);
}
