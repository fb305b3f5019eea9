use std::path::Path;
use std::process::{Command, Output};

fn edgecloud(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edgecloud"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("scenario.toml");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn validate_accepts_empty_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let out = edgecloud(&["validate", "--config", &cfg]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("ok: N=10 "));
}

#[test]
fn validate_rejects_inverted_update_range() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "m_min = 23e6\nm_max = 230e3\n");
    let out = edgecloud(&["validate", "--config", &cfg]);
    assert!(!out.status.success());
    let err = stderr(&out);
    assert!(
        err.starts_with("error: ") && err.contains("m_min") && err.contains("m_max"),
        "{err}"
    );
}

#[test]
fn plan_modes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "oracle_beta_steps = 21\noracle_b_up_steps = 21\noracle_m_steps = 11\n",
    );
    for (mode, beta) in [("cloud-only", "1.000000"), ("edge-only", "0.000000")] {
        let out = edgecloud(&["plan", "--config", &cfg, "--mode", mode]);
        assert!(out.status.success(), "{}", stderr(&out));
        assert!(
            stdout(&out).contains(&format!("beta               {beta}")),
            "{}",
            stdout(&out)
        );
    }
    for mode in ["solve", "oracle"] {
        let out = edgecloud(&["plan", "--config", &cfg, "--mode", mode]);
        assert!(out.status.success(), "{}", stderr(&out));
        assert!(stdout(&out).contains("map_joint"));
    }
}

#[test]
fn plan_cloud_only_reports_infeasible_band() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bandwidth = 1000\n");
    let out = edgecloud(&["plan", "--config", &cfg, "--mode", "cloud-only"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("feature stream"));
}

#[test]
fn sweep_writes_csv_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let csv = dir.path().join("out.csv");
    let svg = dir.path().join("out.svg");
    let out = edgecloud(&[
        "sweep",
        "--config",
        &cfg,
        "--axis",
        "frames_per_second",
        "--values",
        "5,10,15,20",
        "--out",
        csv.to_str().unwrap(),
        "--plot",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("axis,map_joint,map_cloud_only,map_edge_only,map_oracle,beta,"));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn sweep_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = edgecloud(&[
            "sweep",
            "--config",
            &cfg,
            "--axis",
            "bandwidth",
            "--values",
            "1e6,5e6,20e6",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        std::fs::read(path).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn sweep_with_oracle_fills_the_column() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "oracle_beta_steps = 41\noracle_b_up_steps = 41\n",
    );
    let csv = dir.path().join("o.csv");
    let out = edgecloud(&[
        "sweep",
        "--config",
        &cfg,
        "--axis",
        "se_down",
        "--values",
        "2,5",
        "--oracle",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&csv).unwrap();
    for row in text.lines().skip(1) {
        assert!(!row.split(',').nth(4).unwrap().is_empty(), "{row}");
    }
}

#[test]
fn sweep_point_failure_is_nonzero_but_csv_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let csv = dir.path().join("f.csv");
    let out = edgecloud(&[
        "sweep",
        "--config",
        &cfg,
        "--axis",
        "se_up",
        "--values=-1,2.55",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("se_up=-1"));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 3);
}

#[test]
fn bad_arguments_fail_with_a_message() {
    let out = edgecloud(&[
        "sweep", "--config", "x.toml", "--axis", "altitude", "--values", "1", "--out", "o.csv",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("altitude"));
    let out = edgecloud(&["plan", "--config", "/nonexistent.toml"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: /nonexistent.toml"));
}

#[test]
fn model_config_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "model_cloud_ceiling = [0.92, 0.95]\nmodel_edge_max = [0.85, 0.88]\n",
    );
    let csv = dir.path().join("m.csv");
    let out = edgecloud(&[
        "sweep",
        "--config",
        &cfg,
        "--axis",
        "model_config",
        "--values",
        "0,1",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = edgecloud::experiment::read_csv(&csv).unwrap();
    let joint = |i: usize| {
        rows[i]
            .get(edgecloud::experiment::Output::MapJoint)
            .unwrap()
    };
    assert!(joint(1) > joint(0));
}
