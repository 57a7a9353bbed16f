use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmtlab"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn torus_mass_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["gen", "torus", "--n", "2", "--mesh", "32", "--out", "t"]);
    assert_eq!(out.status.code(), Some(0));
    for f in ["descriptor", "complex", "chain", "ambient"] {
        assert!(dir.path().join(format!("t/{f}.json")).exists(), "{f}");
    }
    let out = run(dir.path(), &["mass", "--complex", "t/complex.json", "--chain", "t/chain.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let mass = v["values"]["mass"].as_f64().unwrap();
    let closed = 2.0 * std::f64::consts::PI.powi(2);
    assert!((mass - closed).abs() / closed < 0.01, "{mass}");
    assert_eq!(v["provenance"]["tool"], "gmtlab");
    assert_eq!(v["provenance"]["config"]["complex"], "t/complex.json");

    let out = run(dir.path(), &["boundary", "--complex", "t/complex.json", "--chain", "t/chain.json"]);
    assert_eq!(json(&out)["values"]["is_cycle"], true);
}

#[test]
fn empty_chain_has_zero_flat_norm() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "sphere", "--mesh", "0", "--out", "s"]);
    std::fs::write(dir.path().join("empty.json"), r#"{"dim": 1, "terms": []}"#).unwrap();
    let out = run(dir.path(), &["flatnorm", "--complex", "s/complex.json", "--chain", "empty.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["values"]["value_exact"], "0");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(run(p, &["verify", "ultrametric-lemma"]).status.code(), Some(0));
    // Missing family, unknown flag, unknown check, unreadable input.
    assert_eq!(run(p, &["verify", "cancellation"]).status.code(), Some(1));
    assert_eq!(run(p, &["mass", "--bogus", "1"]).status.code(), Some(1));
    assert_eq!(run(p, &["verify", "nothing"]).status.code(), Some(1));
    assert_eq!(run(p, &["mass", "--complex", "no.json", "--chain", "no.json"]).status.code(), Some(1));
    // The sphere control family stays stable.
    let out = run(p, &["verify", "cancellation", "--family", "sphere", "--ratio", "0.2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(run(p, &["--help"]).status.code(), Some(0));
}

#[test]
fn failing_check_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    // A density constant far above calibration breaks the lower bound.
    let out = run(dir.path(), &["verify", "density", "--c", "1e6"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["verdict"], "fail");
    // A torus that never shrinks is stable, not the expected collapse.
    let out = run(dir.path(), &["verify", "cancellation", "--family", "torus", "--ns", "1,1,1", "--mesh", "16"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["values"]["classification"], "stable");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    std::fs::write(p.join("run.cfg"), "# lemma settings\nN = 3\nm=2\ndepth=2\n").unwrap();
    let out = run(p, &["verify", "ultrametric-lemma", "--config", "run.cfg", "--depth", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["provenance"]["config"]["N"], 3);
    assert_eq!(v["provenance"]["config"]["depth"], 3);
    assert!(v["provenance"]["regenerate"].as_str().unwrap().contains("--N 3"));

    std::fs::write(p.join("bad.cfg"), "meshh=3\n").unwrap();
    let out = run(p, &["verify", "ultrametric-lemma", "--config", "bad.cfg"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("meshh"));
}

#[test]
fn artifacts_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let out = run(p, &["verify", "tower-geometry", "--out", "o", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(p.join("o/tower-geometry.csv")).unwrap();
    assert!(text.starts_with("# gmtlab "));
    assert!(text.contains("# regenerate: gmtlab verify tower-geometry --format csv --seed 0"));
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let hash = text.lines().find_map(|l| l.strip_prefix("# content_sha256: ")).unwrap();
    use sha2::Digest;
    assert_eq!(hex::encode(sha2::Sha256::digest(body.as_bytes())), hash);
}

#[test]
fn regeneration_command_reproduces_the_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let first = run(p, &["verify", "ultrametric-covering", "--N", "3", "--depth", "2"]);
    let v = json(&first);
    let regen: Vec<String> = v["provenance"]["regenerate"].as_str().unwrap().split(' ').map(String::from).collect();
    assert_eq!(regen[0], "gmtlab");
    let args: Vec<&str> = regen[1..].iter().map(String::as_str).collect();
    let second = run(p, &args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn bad_worker_count_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_gmtlab"))
        .current_dir(dir.path())
        .args(["suite", "--out", "o"])
        .env("GMTLAB_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("GMTLAB_WORKERS"));
}
