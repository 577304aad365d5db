use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn instance(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("instances").join(name)
}

fn riskbook(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riskbook"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("riskbook-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn check_passes_on_bundled_instances() {
    for name in [
        "av_pedestrian.json",
        "av_pedestrian_cautious.json",
        "av_pedestrian_lane_tolerant.json",
        "av_pedestrian_worst_case.json",
    ] {
        let path = instance(name);
        let o = riskbook(&["check", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
    }
}

#[test]
fn rank_json_reports_optimal_set() {
    let path = instance("av_pedestrian_worst_case.json");
    let o = riskbook(&["--json", "rank", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["optimal"], serde_json::json!(["t2"]));
}

#[test]
fn overrides_change_the_regime() {
    let path = instance("av_pedestrian.json");
    let o = riskbook(&[
        "--json", "rank", path.to_str().unwrap(), "--rule", "r1", "--measure", "var", "--alpha", "0.9995",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["optimal"], serde_json::json!(["t3"]));
}

#[test]
fn explain_names_the_winner() {
    let path = instance("av_pedestrian_worst_case.json");
    let o = riskbook(&["explain", path.to_str().unwrap(), "t1", "t2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("t2 strictly less risky than t1"), "{}", stdout(&o));
}

#[test]
fn risk_table_json_has_expected_column() {
    let path = instance("av_pedestrian.json");
    let o = riskbook(&["--json", "risk", path.to_str().unwrap(), "--rule", "r1", "--alphas", "0.9,1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!((rows[0]["expected"].as_f64().unwrap() - 0.225).abs() < 1e-9);
    assert!((rows[1]["worst_case"].as_f64().unwrap() - 175.0).abs() < 1e-9);
}

#[test]
fn output_is_deterministic() {
    let path = instance("av_pedestrian.json");
    let p = path.to_str().unwrap();
    for args in [vec!["rank", p], vec!["--json", "rank", p], vec!["check", p]] {
        let a = riskbook(&args);
        let b = riskbook(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn malformed_json_exits_2() {
    let p = scratch("truncated.json", "{\"scenarios\": [");
    assert_eq!(riskbook(&["rank", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn missing_file_exits_2() {
    assert_eq!(riskbook(&["rank", "/no/such/instance.json"]).status.code(), Some(2));
}

#[test]
fn invalid_instance_exits_1() {
    let text = std::fs::read_to_string(instance("av_pedestrian.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["scenarios"][0]["prob"] = serde_json::json!(0.5);
    let p = scratch("bad_probs.json", &v.to_string());
    let o = riskbook(&["rank", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sum"));
}

#[test]
fn unknown_trajectory_exits_1() {
    let path = instance("av_pedestrian.json");
    let o = riskbook(&["explain", path.to_str().unwrap(), "t1", "t9"]);
    assert_eq!(o.status.code(), Some(1));
}
