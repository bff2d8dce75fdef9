use std::process::{Command, Output};

fn disclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_disclab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn fa_scan_table_and_verdict() {
    let o = disclab(&[
        "fa-scan",
        "--s",
        "1.0",
        "--alphas",
        "0.2,0.1,0.05",
        "--delta",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "s,alpha,f_alpha,abs_err,truncated");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("1,0.05,8.27884"));
    assert!(stderr(&o).contains("vanishing"));
}

#[test]
fn attach_rejects_coarse_grid() {
    let o = disclab(&[
        "attach",
        "--s",
        "1",
        "--alpha",
        "0.1",
        "--n",
        "16384",
        "--eps-window",
        "1.5",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("need n >= 262144"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn attach_writes_disc_trace() {
    let o = disclab(&["attach", "--s", "1", "--alpha", "0.1", "--n", "1024"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("theta,re_phi,im_phi,u,v\n"));
    assert_eq!(text.lines().count(), 1025);
}

#[test]
fn selftest_passes() {
    let o = disclab(&["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn input_errors_exit_one() {
    assert_eq!(disclab(&["fa-scan", "--s", "0.4"]).status.code(), Some(1));
    assert_eq!(
        disclab(&["fa-scan", "--alphas", "0.1,0.2,0.05"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(disclab(&["propagate", "--eta", "2"]).status.code(), Some(1));
    assert_eq!(disclab(&["attach", "--n", "1000"]).status.code(), Some(1));
    assert_eq!(disclab(&["flatness", "--n", "64"]).status.code(), Some(1));
    assert_eq!(disclab(&["disc", "--unknown"]).status.code(), Some(1));
}

#[test]
fn numerical_failure_is_reported() {
    let o = disclab(&[
        "propagate",
        "--alpha",
        "0.1",
        "--max-iter",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["error"].as_str().unwrap().contains("did not converge"));
    assert_eq!(v["settings"]["max_iter"], 1);

    let o = disclab(&[
        "propagate",
        "--s",
        "0.6",
        "--alphas",
        "0.2,0.1,0.05",
        "--eta",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_sits_between_defaults_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"alpha": 0.2, "eta": 0.5, "format": "json"}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let o = disclab(&["propagate", "--config", c, "--alpha", "0.1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["alpha"], 0.1);
    assert_eq!(v["config"]["eta_grid"][0], 0.5);
    assert_eq!(v["config"]["delta"], 0.2);
    assert_eq!(v["points_down"], true);

    std::fs::write(&cfg, r#"{"alpah": 0.2}"#).unwrap();
    assert_eq!(disclab(&["disc", "--config", c]).status.code(), Some(1));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("disc.csv");
    let o = disclab(&[
        "disc",
        "--alpha",
        "0.1",
        "--n",
        "9",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("theta,re_phi,im_phi,"));
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn repeated_runs_are_identical() {
    for args in [
        &["flatness", "--s", "1,0.4", "--format", "json"][..],
        &["propagate", "--etas", "-1,1", "--seed", "3"][..],
        &["attach", "--n", "2048", "--seed", "3", "--format", "json"][..],
    ] {
        let a = disclab(args);
        let b = disclab(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}
