use std::path::Path;

use stochastic_pendulum::cli::run;

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("cfg.json");
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn stochpend(args: &[&str]) -> i32 {
    run(std::iter::once("stochpend").chain(args.iter().copied()))
}

#[test]
fn simulate_classical_pendulum() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), r#"{"noise": {"sigma1": 0, "sigma2": 0}, "grid": {"horizon_periods": 2}}"#);
    let out = tmp.path().join("out");
    assert_eq!(stochpend(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]), 0);
    let text = std::fs::read_to_string(out.join("trajectory.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,theta,p,H"));
    let energies: Vec<f64> = lines.map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(energies.len(), 2001);
    assert!(energies.iter().all(|e| (e - energies[0]).abs() < 1e-10));
    for f in ["paths.csv", "embedding.csv", "manifest.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
    assert!(!out.join(".staging").exists());
}

#[test]
fn incommensurate_step_with_sections_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), r#"{"grid": {"h": 0.3}, "poincare": {}}"#);
    let out = tmp.path().join("out");
    assert_eq!(stochpend(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]), 2);
    assert!(!out.join("paths.csv").exists());
    assert!(!out.join(".staging").exists());

    let cfg = write_config(tmp.path(), r#"{"grid": {"h": 0.3}}"#);
    assert_eq!(stochpend(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]), 0);
}

#[test]
fn config_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let out = out.to_str().unwrap();
    let cfg = write_config(tmp.path(), r#"{"verify": {"sigma_levels": [0.1]}}"#);
    assert_eq!(stochpend(&["verify", "--config", &cfg, "--out", out]), 2);
    let cfg = write_config(tmp.path(), r#"{"pendulum": {"l": -1}}"#);
    assert_eq!(stochpend(&["portrait", "--config", &cfg, "--out", out]), 2);
    let cfg = write_config(tmp.path(), r#"{"unknown_block": {}}"#);
    assert_eq!(stochpend(&["atlas", "--config", &cfg, "--out", out]), 2);
    assert_eq!(stochpend(&["nonsense"]), 2);
}

#[test]
fn blow_up_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"noise": {"channel1": {"tau": 1, "alpha": 5000, "beta": 1, "forcing_amp": 0},
                      "channel2": {"tau": 1, "alpha": 1, "beta": 1, "forcing_amp": 0}}}"#,
    );
    let out = tmp.path().join("out");
    assert_eq!(stochpend(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]), 3);
    assert!(!out.join("paths.csv").exists());
}

#[test]
fn atlas_contains_cusp_and_ray() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), r#"{"atlas": {"samples": 64, "step": 0.1}}"#);
    let out = tmp.path().join("out");
    assert_eq!(stochpend(&["atlas", "--config", &cfg, "--out", out.to_str().unwrap()]), 0);
    let atlas: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("atlas.json")).unwrap()).unwrap();
    assert_eq!(atlas["gamma2"]["min_lambda1"], 0.25);
    let pts = atlas["gamma1"].as_array().unwrap();
    assert_eq!(pts.len(), 64);
    let cusp = &pts[32];
    assert!((cusp[0].as_f64().unwrap() - 0.25).abs() < 1e-12 && cusp[1].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn average_on_ou_oracle() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"noise": {"channel1": {"tau": 1, "alpha": 1, "beta": 1.4142135623730951, "forcing_amp": 0},
                      "channel2": {"tau": 1, "alpha": 1, "beta": 1.4142135623730951, "forcing_amp": 0},
                      "driver": "independent"},
            "stats": {"avg_periods": 4000, "batches": 20}}"#,
    );
    let out = tmp.path().join("out");
    assert_eq!(stochpend(&["average", "--config", &cfg, "--out", out.to_str().unwrap(), "--seed", "4"]), 0);
    let st: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("stats.json")).unwrap()).unwrap();
    let (c1, se) = (st["c1"].as_f64().unwrap(), st["se_c1"].as_f64().unwrap());
    assert!((c1 - 1.0).abs() <= 3.0 * se, "c1 = {c1} +- {se}");
}

#[test]
fn manifest_echoes_effective_config_and_seed_override() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    assert_eq!(stochpend(&["portrait", "--out", out.to_str().unwrap(), "--seed", "42"]), 0);
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "portrait");
    assert_eq!(m["config"]["seeds"]["master_seed"], 42);
    assert_eq!(m["config"]["grid"]["h"], 0.001);
    assert_eq!(m["files"], serde_json::json!(["portrait.csv", "portrait.json"]));
}
