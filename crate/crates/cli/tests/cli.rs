use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use herald_core::synth::read_trace_file;
use serde_json::{json, Value};

fn herald(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_herald"))
        .args(args)
        .env("RUST_LOG", "warn")
        .env_remove("HERALD_THREADS")
        .output()
        .expect("spawn herald")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_config(dir: &Path, cfg: &Value) -> PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    path
}

fn small_config() -> Value {
    json!({
        "seed": 42,
        "acquisition": { "n_events": 3000, "vacuum_events": 500, "n_samples": 300 },
        "extraction": { "scan": { "start": 50e6, "stop": 70e6, "step": 10e6 } },
        "tomography": { "n_max": 4, "bootstrap_resamples": 20 },
        "correction": { "eta": 0.85 },
        "report": { "wigner_resolution": 11 }
    })
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn budget_reports_reference_arithmetic() {
    let dir = tempfile::tempdir().unwrap();
    let out = herald(&["budget", "--out", s(dir.path())]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v, read_json(&dir.path().join("budget.json")));
    let e = &v["efficiencies"];
    assert!((e["eta_tot"].as_f64().unwrap() - 0.8496).abs() < 1e-4);
    assert!((e["eta_opo"].as_f64().unwrap() - 0.9615).abs() < 1e-4);
    assert!((e["expected_vacuum"].as_f64().unwrap() - 0.184).abs() < 1e-3);
    assert_eq!(v["heralding"]["brightness"].as_f64(), Some(400.0));
    let note = v["heralding"]["note"].as_str().unwrap();
    assert!(note.contains("1.07 MHz") && note.contains("750 kHz"), "{note}");
    assert!(v["filters"]["note"].as_str().unwrap().contains("0.3%"));
    assert!(v["version"].as_str().unwrap().starts_with(env!("CARGO_PKG_VERSION")));
    assert_eq!(v["seed"].as_u64(), Some(1));
}

#[test]
fn unity_budget_has_no_expected_vacuum() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &json!({
            "opo": { "t_out": 0.1, "l_intra": 0.0, "gamma": 60e6, "delta_fsr": 4.3e9, "pump_ratio": 0.0125 },
            "budget": { "eta_noise": 1.0, "eta_phot": 1.0, "eta_prop": 1.0, "visibility": 1.0 }
        }),
    );
    let out = herald(&["budget", "--config", s(&cfg), "--out", s(dir.path())]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["efficiencies"]["expected_vacuum"].as_f64(), Some(0.0));
    // 20 dB of electronic noise does not fit in a unity noise budget
    assert!(v["source"].is_null());
    assert!(v["source_error"].as_str().unwrap().contains("eta_noise"));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(code(&herald(&["budget", "--config", s(&missing)])), 2);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&herald(&["budget", "--config", s(&bad)])), 2);

    let unknown = write_config(dir.path(), &json!({ "acquisition": { "n_event": 5 } }));
    assert_eq!(code(&herald(&["simulate", "--config", s(&unknown), "--out", s(dir.path())])), 2);

    let above = write_config(
        dir.path(),
        &json!({ "opo": { "t_out": 0.1, "l_intra": 0.004, "gamma": 60e6, "delta_fsr": 4.3e9, "pump_ratio": 1.5 } }),
    );
    assert_eq!(code(&herald(&["budget", "--config", s(&above)])), 2);

    assert_eq!(code(&herald(&["frobnicate"])), 2);
    assert_eq!(code(&herald(&["extract", "--scan", "1:2"])), 2);
}

#[test]
fn empty_simulation_writes_empty_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = herald(&["simulate", "--events", "0", "--vacuum-events", "0", "--out", s(dir.path())]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let set = read_trace_file(&dir.path().join("traces.htrc")).unwrap();
    assert!(set.is_empty());
    assert!(!dir.path().join("vacuum.htrc").exists());
    let m = read_json(&dir.path().join("manifest.json"));
    assert_eq!(m["signal"]["n_events"].as_u64(), Some(0));
    assert!(m["vacuum"].is_null());
}

#[test]
fn simulation_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small_config());
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(code(&herald(&["simulate", "--config", s(&cfg), "--out", s(&a), "--threads", "1"])), 0);
    let out = Command::new(env!("CARGO_BIN_EXE_herald"))
        .args(["simulate", "--config", s(&cfg), "--out", s(&b)])
        .env("HERALD_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    for f in ["traces.htrc", "vacuum.htrc", "manifest.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let c = dir.path().join("c");
    assert_eq!(code(&herald(&["simulate", "--config", s(&cfg), "--out", s(&c), "--seed", "43"])), 0);
    assert_ne!(std::fs::read(a.join("traces.htrc")).unwrap(), std::fs::read(c.join("traces.htrc")).unwrap());
    assert_eq!(read_json(&c.join("manifest.json"))["seed"].as_u64(), Some(43));
}

#[test]
fn extract_then_reconstruct() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small_config());
    let d = dir.path();
    assert_eq!(code(&herald(&["simulate", "--config", s(&cfg), "--out", s(d)])), 0);

    let out = herald(&["extract", "--config", s(&cfg), "--out", s(d), "--gamma", "65e6"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(d.join("quadratures.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,theta"));
    assert_eq!(lines.count(), 3000);
    let summary = read_json(&d.join("extract.json"));
    assert_eq!(summary["gamma"].as_f64(), Some(65e6));
    assert!((summary["calibration"].as_f64().unwrap() - 1.0).abs() < 0.05);
    assert!(summary["scan"].is_null());

    let out = herald(&["reconstruct", "--config", s(&cfg), "--out", s(d), "--correct-eta", "0.85", "--wigner"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(&d.join("reconstruct.json"));
    let pops = report["populations"].as_array().unwrap();
    assert_eq!(pops.len(), 5);
    let rho11 = pops[1].as_f64().unwrap();
    assert!((0.7..0.9).contains(&rho11), "{rho11}");
    let corrected = &report["corrected"];
    assert_eq!(corrected["eta"].as_f64(), Some(0.85));
    assert!(corrected["fidelity"].as_f64().unwrap() > rho11);
    assert_eq!(corrected["renormalized"].as_array().unwrap().len(), 3);
    assert!(corrected["inversion"]["status"].is_string());
    assert!(report["std_errors"].as_array().unwrap().iter().all(|e| e.as_f64().unwrap() >= 0.0));
    assert!(read_json(&d.join("errors.json"))["std_errors"].is_array());
    let rho = read_json(&d.join("rho.json"));
    assert_eq!(rho["n_max"].as_u64(), Some(4));
    let loglik = std::fs::read_to_string(d.join("loglik.csv")).unwrap();
    assert!(loglik.starts_with("iteration,loglik\n"));
    let wigner = std::fs::read_to_string(d.join("wigner.csv")).unwrap();
    assert_eq!(wigner.lines().count(), 12);
}

#[test]
fn extract_scan_writes_curve() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small_config());
    let d = dir.path();
    assert_eq!(code(&herald(&["simulate", "--config", s(&cfg), "--out", s(d)])), 0);
    let out = herald(&["extract", "--config", s(&cfg), "--out", s(d), "--scan", "50e6:70e6:5e6"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let scan = read_json(&d.join("scan.json"));
    assert_eq!(scan["points"].as_array().unwrap().len(), 5);
    assert!(scan["note"].as_str().unwrap().contains("not modeled"));
    let g = scan["gamma_star"].as_f64().unwrap();
    assert_eq!(read_json(&d.join("extract.json"))["gamma"].as_f64(), Some(g));
}

#[test]
fn extract_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small_config());
    let d = dir.path();
    assert_eq!(code(&herald(&["extract", "--config", s(&cfg), "--out", s(d), "--gamma", "65e6"])), 3);

    assert_eq!(code(&herald(&["simulate", "--config", s(&cfg), "--out", s(d), "--events", "200"])), 0);
    let out = herald(&["extract", "--config", s(&cfg), "--out", s(d), "--gamma", "65e6", "--dt", "0.1e-9"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("dt"));

    std::fs::write(d.join("traces.htrc"), b"HTRCgarbage").unwrap();
    assert_eq!(code(&herald(&["extract", "--config", s(&cfg), "--out", s(d), "--gamma", "65e6"])), 3);

    std::fs::write(d.join("q.csv"), "x,theta\n0.1,abc\n").unwrap();
    let q = d.join("q.csv");
    assert_eq!(code(&herald(&["reconstruct", "--config", s(&cfg), "--out", s(d), "--quadratures", s(&q)])), 3);
}

#[test]
fn pipeline_checks_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_config();
    cfg["expected"] = json!({ "rho11": [0.6, 0.95], "wigner_origin": [-0.3184, -0.05] });
    let path = write_config(dir.path(), &cfg);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let out = herald(&["pipeline", "--config", s(&path), "--out", s(&a)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS pipeline"));
    assert_eq!(code(&herald(&["pipeline", "--config", s(&path), "--out", s(&b)])), 0);
    assert_eq!(std::fs::read(a.join("pipeline.json")).unwrap(), std::fs::read(b.join("pipeline.json")).unwrap());
    let report = read_json(&a.join("pipeline.json"));
    assert_eq!(report["checks"].as_array().unwrap().len(), 2);
    assert_eq!(report["config"]["acquisition"]["n_events"].as_u64(), Some(3000));

    cfg["expected"] = json!({ "rho11": [0.99, 1.0] });
    let path = write_config(dir.path(), &cfg);
    let out = herald(&["pipeline", "--config", s(&path), "--out", s(&a)]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL rho11"));
}

#[test]
fn lower_propagation_efficiency_raises_vacuum() {
    let dir = tempfile::tempdir().unwrap();
    let run = |eta_prop: f64, name: &str| {
        let mut cfg = small_config();
        cfg["budget"] = json!({ "eta_noise": 0.96, "eta_phot": 0.97, "eta_prop": eta_prop, "visibility": 0.98 });
        cfg["tomography"]["bootstrap_resamples"] = json!(0);
        let path = dir.path().join(format!("{name}.json"));
        std::fs::write(&path, cfg.to_string()).unwrap();
        let out_dir = dir.path().join(name);
        assert_eq!(code(&herald(&["pipeline", "--config", s(&path), "--out", s(&out_dir)])), 0);
        read_json(&out_dir.join("pipeline.json"))
    };
    let base = run(0.95, "base");
    let lossy = run(0.80, "lossy");
    let ev = |r: &Value| r["budget"]["efficiencies"]["expected_vacuum"].as_f64().unwrap();
    let rho00 = |r: &Value| r["state"]["populations"][0].as_f64().unwrap();
    assert!(ev(&lossy) > ev(&base) + 0.1);
    assert!(rho00(&lossy) > rho00(&base) + 0.08, "{} vs {}", rho00(&lossy), rho00(&base));
}
