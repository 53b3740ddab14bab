use std::process::{Command, Output};

use serde_json::Value;

fn fatplane(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fatplane"))
        .args(args)
        .env_remove("FATPLANE_P")
        .env_remove("FATPLANE_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = fatplane(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn bound_json() {
    let v = json(&["bound", "-r", "5", "-d", "20,30", "--format", "json"]);
    assert_eq!(v["conjecture_n"], 200);
    assert_eq!(v["elv_n"], 1800260);
    assert_eq!(v["best_n"], 363009);
    assert_eq!(v["strategy"], serde_json::json!(["small", "small", "base"]));
}

#[test]
fn rho_of_the_quadric_case() {
    let v = json(&[
        "rho", "-n", "3", "-r", "1", "-t", "2", "-d", "2", "--format", "json",
    ]);
    assert_eq!(v["rho"], 0);
    let out = fatplane(&["rho", "-n", "3", "-r", "1", "-t", "2", "-d", "2"]);
    assert!(String::from_utf8_lossy(&out.stdout)
        .lines()
        .any(|l| l.split_whitespace().eq(["rho", "0"])));
}

#[test]
fn quadric_passes() {
    let out = fatplane(&["verify", "quadric"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&["verify", "quadric", "--format", "json"]);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["successes"], 100);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["bound", "-r", "1", "-d", "3,2"][..],
        &["bound", "-r", "1", "-d", "1,3"],
        &["bound", "-r", "1", "-d", "3", "--bogus"],
        &["rho", "-n", "2", "-r", "2", "-t", "2", "-d", "2"],
        &[
            "verify",
            "maxrank",
            "-r",
            "1",
            "-d",
            "3,3",
            "--p-count",
            "4",
        ],
        &["verify", "quadric", "--p", "9"],
        &["verify", "quadric", "--trials", "0"],
        &[
            "verify", "tangent", "-n", "5", "-r", "1", "-t", "3", "-d", "3", "--p", "3",
        ],
    ] {
        assert_eq!(fatplane(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn failed_verdict_exits_one() {
    // full rank is not generic enough over GF(5) for 50 straight successes
    let out = fatplane(&[
        "verify",
        "maxrank",
        "-r",
        "1",
        "-d",
        "3",
        "--p-count",
        "3",
        "--p",
        "5",
        "--trials",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn below_threshold_is_inconclusive() {
    let v = json(&[
        "verify",
        "maxrank",
        "-r",
        "1",
        "-d",
        "3",
        "--p-count",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(v["successes"], 0);
    assert_eq!(v["verdict"], "inconclusive");
}

#[test]
fn output_is_deterministic() {
    for args in [
        &[
            "verify", "tangent", "-n", "5", "-r", "1", "-t", "3", "-d", "3", "--format", "json",
        ][..],
        &["verify", "fatpoint", "-n", "6", "-d", "2,3"],
        &["report", "paper-examples"],
        &["verify", "codim", "--grid"],
    ] {
        assert_eq!(fatplane(args).stdout, fatplane(args).stdout, "{args:?}");
    }
}

#[test]
fn environment_overrides_and_flag_precedence() {
    let run = |env: &[(&str, &str)], extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_fatplane"));
        cmd.args(["verify", "quadric", "--trials", "3", "--format", "json"])
            .args(extra);
        for (k, v) in env {
            cmd.env(k, v);
        }
        let v: Value = serde_json::from_slice(&cmd.output().unwrap().stdout).unwrap();
        (v["seed"].clone(), v["params"]["p"].clone())
    };
    assert_eq!(
        run(&[("FATPLANE_SEED", "5"), ("FATPLANE_P", "101")], &[]),
        (5.into(), 101.into())
    );
    assert_eq!(
        run(
            &[("FATPLANE_SEED", "5"), ("FATPLANE_P", "101")],
            &["--seed", "9", "--p", "103"]
        ),
        (9.into(), 103.into())
    );
}

#[test]
fn fat_point_defaults_to_seven() {
    let v = json(&[
        "verify", "fatpoint", "-n", "6", "-d", "2,3", "--format", "json",
    ]);
    assert_eq!(v["params"]["p"], 7);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["metrics"]["condition_count"], 2);
}

#[test]
fn codim_single_and_grid() {
    let v = json(&[
        "verify", "codim", "-n", "3", "-r", "1", "-t", "2", "-d", "2", "--format", "json",
    ]);
    assert_eq!(v["metrics"]["kernel_dim"], 5);
    let grid = json(&["verify", "codim", "--grid", "--format", "json"]);
    let rows = grid.as_array().unwrap();
    assert_eq!(rows.len(), 72);
    assert!(rows.iter().all(|r| r["verdict"] == "pass"));
}

#[test]
fn paper_examples_json_rows() {
    let v = json(&["report", "paper-examples", "--format", "json"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["computed"]["best_n"], 363009);
    for key in ["conjecture_n", "elv_n", "small_step_n"] {
        assert_eq!(rows[1]["computed"][key], 6);
    }
    assert!(rows.iter().all(|r| r.get("paper_claim").is_some()));
    let off = json(&[
        "report",
        "paper-examples",
        "-r",
        "0",
        "-d",
        "3,4",
        "--format",
        "json",
    ]);
    assert_eq!(off["rows"][2]["computed"]["displayed_second_term"], 5);
    assert_eq!(off["rows"][2]["computed"]["derived_second_term"], 6);
}
