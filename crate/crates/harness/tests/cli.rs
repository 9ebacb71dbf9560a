use std::process::{Command, Output};

fn hardy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardy")).args(args).output().expect("hardy runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn config_errors_exit_2_before_any_check() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    let out = dir.path().join("report.json");
    std::fs::write(&cfg, "[quad]\nrel_tol = -1\n").unwrap();
    let o = hardy(&["verify", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(!out.exists());

    std::fs::write(&cfg, "[quad]\nunknown = 1\n").unwrap();
    assert_eq!(hardy(&["verify", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(hardy(&["verify", "--rule", "gk99"]).status.code(), Some(2));
    assert_eq!(hardy(&["verify", "--claims", "nothing.*"]).status.code(), Some(2));
    assert_eq!(hardy(&["verify", "--config", "/nonexistent.toml"]).status.code(), Some(2));
}

#[test]
fn claim_filter_and_csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = hardy(&[
        "verify",
        "--claims",
        "cont.avg.*",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<_> = text.lines().skip(1).filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 4, "{text}");
    assert!(rows.iter().all(|r| r.starts_with("cont.avg.")));
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn failing_claim_exits_1() {
    let o = hardy(&["verify", "--claims", "cont.mean_zero.fe"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["claims"][0]["verdict"], "FAIL");
    assert_eq!(v["summary"]["total"], 1);
}

#[test]
fn eval_and_reports() {
    let o = hardy(&["cont", "eval", "--fn", "f0", "--x", "2.5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["qf"].as_f64().unwrap() - 2f64.ln() / 2.5).abs() < 1e-15);

    let o = hardy(&["cont", "report", "--fn", "theta"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["weighted_norm"]["value"], 2.0);

    let o = hardy(&["disc", "report", "--seq", "em(m=3)"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["l1_mod"]["exact"], "7/6");

    let o = hardy(&["disc", "hardy-ratio", "--seq", "powcut(alpha=0.5,N=1000)", "--p", "2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["ratio"].as_f64().unwrap() < 4.0);

    assert_eq!(hardy(&["cont", "eval", "--fn", "nope", "--x", "1"]).status.code(), Some(2));
}

#[test]
fn sweeps_carry_a_footer() {
    let o = hardy(&["disc", "sweep", "--family", "em", "--m", "1:50", "--emit", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let footer = text.lines().last().unwrap();
    assert!(footer.starts_with("# footer: points=50 errors=0 ratio_min="), "{footer}");
    assert!(footer.contains("argmax=em(m=1)"), "{footer}");

    let o = hardy(&["sweep", "--family", "power_tail", "--param", "beta=2:3:0.5", "--emit", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn empty_grid_is_a_config_error() {
    let o = hardy(&["cont", "sweep", "--family", "power_tail", "--param", "beta=3:2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("empty"), "{}", stderr(&o));
}

#[test]
fn sequence_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("a.txt");
    std::fs::write(&f, "1\n-1/2\n# note\n-1/2\n").unwrap();
    let spec = format!("file:{}", f.display());
    let o = hardy(&["disc", "report", "--seq", &spec]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["sum"]["exact"], "0");
}
