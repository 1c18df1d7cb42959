use std::fs;
use std::path::Path;
use std::process::Command;

use qtorus_cli::emit::{to_csv, to_json};
use qtorus_cli::{emit, run, ExperimentConfig, Filters, Format, Task};
use qtorus_core::cache::cache_paths;
use qtorus_core::TorusSpec;
use serde_json::Value;

fn config(task: Task, specs: &[&str]) -> ExperimentConfig {
    ExperimentConfig {
        task,
        specs: specs.iter().map(|s| s.to_string()).collect(),
        ..Default::default()
    }
}

fn qtorus(cache: &Path, args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qtorus"))
        .args(args)
        .env("QTORUS_CACHE_DIR", cache)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn verify_golden_instances() {
    let report = run(&config(Task::Verify, &["T(3,4,1)", "T(4,4,2)", "T(4,4,4)"])).unwrap();
    assert!(report.passed(), "{:?}", report.failures());
    for inst in &report.instances {
        let golden = inst.checks.iter().find(|c| c.claim == "golden-counts").unwrap();
        assert!(golden.passed, "{}", golden.detail);
        assert!(inst.checks.iter().any(|c| c.claim == "flux-ladder-criterion" && c.passed));
    }
}

#[test]
fn empty_target_list_is_an_empty_passing_report() {
    let report = run(&ExperimentConfig::default()).unwrap();
    assert!(report.instances.is_empty() && report.passed());
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, _) = qtorus(dir.path(), &["verify"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["instances"], Value::Array(vec![]));
    assert_eq!(v["schema"], "qtorus-report/1");
}

#[test]
fn non_bipartite_sweep_has_two_isomorphic_components() {
    let cfg = ExperimentConfig {
        sweep: Some("n=1..6 m=2..6 r=*".parse().unwrap()),
        filters: Filters { non_bipartite: true, simple_only: true, ..Default::default() },
        spectrum_limit: 0,
        ..Default::default()
    };
    let report = run(&cfg).unwrap();
    assert!(report.instances.len() > 40);
    assert!(report.passed(), "{:?}", report.failures());
    for inst in &report.instances {
        assert_eq!(inst.components.as_ref().unwrap().components, 2, "{}", inst.spec);
        assert!(inst.checks.iter().any(|c| c.claim == "two-isomorphic-components"));
    }
}

#[test]
fn csv_layouts() {
    let report = run(&config(Task::Components, &["T(3,4,1)"])).unwrap();
    assert_eq!(
        to_csv(&report).unwrap(),
        "spec,tilings,components,singletons,largest_component\n\"T(3,4,1)\",80,12,8,24\n"
    );

    let report = run(&config(Task::Spectrum, &["T(3,10,1)"])).unwrap();
    let csv = to_csv(&report).unwrap();
    let row = csv.lines().nth(1).unwrap();
    assert!(row.contains(",3;5;6;7;8,4"), "{row}");

    let report = run(&config(Task::FluxHistogram, &["T(4,4,4)"])).unwrap();
    let csv = to_csv(&report).unwrap();
    for class in ["1,0", "-1,0", "0,1", "0,-1"] {
        assert!(csv.contains(&format!("\"T(4,4,4)\",{class},32,1")), "{class}\n{csv}");
    }
    assert!(csv.contains("\"T(4,4,4)\",0,0,132,1"), "{csv}");
}

#[test]
fn bad_instances_are_reported_without_aborting() {
    let mut cfg = config(Task::Components, &["T(3,4,1)", "T(3,4,9)", "nonsense", "T(4,10,10)"]);
    cfg.cap = 1000;
    let report = run(&cfg).unwrap();
    let errors: Vec<bool> = report.instances.iter().map(|i| i.error.is_some()).collect();
    assert_eq!(errors, [false, true, true, true]);
    assert!(report.instances[3].error.as_ref().unwrap().contains("cap of 1000"));
    assert!(!report.passed());
}

#[test]
fn warm_and_repaired_caches_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let cfg = ExperimentConfig {
        cache_dir: Some(cache.clone()),
        ..config(Task::Verify, &["T(4,4,4)", "T(3,6,1)"])
    };
    let write = |name: &str| -> (Vec<u8>, Vec<u8>) {
        let report = run(&cfg).unwrap();
        let paths = emit(&report, Format::Both, &dir.path().join(name)).unwrap();
        (fs::read(&paths[0]).unwrap(), fs::read(&paths[1]).unwrap())
    };
    let cold = write("cold");
    let warm = write("warm");
    assert_eq!(cold, warm);

    let (bin, _) = cache_paths(&cache, TorusSpec::new(4, 4, 4).unwrap());
    let mut bytes = fs::read(&bin).unwrap();
    bytes[10] ^= 1;
    fs::write(&bin, bytes).unwrap();
    let report = run(&cfg).unwrap();
    assert_eq!(report.instances[0].cache, Some(qtorus_core::CacheStatus::Regenerated));
    assert_eq!(to_json(&report).into_bytes(), cold.0);
}

#[test]
fn single_instance_commands() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path();

    let (code, out, _) = qtorus(cache, &["enumerate", "T(3,4,1)"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["tilings"], 80);
    assert!(cache.join("T_3_4_1.bin").exists() && cache.join("T_3_4_1.json").exists());

    let dot = dir.path().join("g.dot");
    let (code, out, _) = qtorus(cache, &["components", "T(4,4,2)", "--dot", dot.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["components"].as_u64(), v["singletons"].as_u64()), (Some(11), Some(4)));
    assert!(fs::read_to_string(&dot).unwrap().starts_with("graph"));

    let (code, out, _) = qtorus(cache, &["families", "T(4,4,4)"]);
    assert_eq!(code, 0);
    let families: Vec<Value> = serde_json::from_str(&out).unwrap();
    let named = |name: &str| families.iter().find(|f| f["name"] == name).unwrap().clone();
    assert_eq!(named("t_plus")["flux"], serde_json::json!({"a": 0, "b": 0}));

    let hex = named("t'_0")["hex"].as_str().unwrap().to_string();
    let (code, out, _) = qtorus(cache, &["flux", "T(4,4,4)", "--tiling", &hex]);
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap(), serde_json::json!({"a": 1, "b": 0}));

    let (code, out, _) = qtorus(cache, &["forcing", "T(4,4,4)", "--tiling", &hex]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["witness"].as_array().unwrap().len() as u64, v["forcing_number"].as_u64().unwrap());

    let (code, _, err) = qtorus(cache, &["flux", "T(4,4,4)", "--tiling", "ff"]);
    assert_eq!(code, 2, "{err}");

    let (code, out, _) = qtorus(cache, &["torus", "T(2,3,1)"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["edges"].as_array().unwrap().len(), 12);

    let (code, out, _) = qtorus(cache, &["spectrum", "T(3,4,1)"]);
    assert_eq!(code, 0);
    assert!(serde_json::from_str::<Value>(&out).unwrap()["spectrum"].is_array());
}

#[test]
fn config_file_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("exp.json");
    fs::write(&cfg_path, r#"{"task": "components", "sweep": {"n": {"lo": 3, "hi": 3}, "m": {"lo": 4, "hi": 4}, "r": null}}"#).unwrap();
    let out = dir.path().join("report.csv");
    let (code, _, err) = qtorus(
        dir.path(),
        &["run", "--config", cfg_path.to_str().unwrap(), "-o", out.to_str().unwrap(), "--format", "csv"],
    );
    assert_eq!(code, 0, "{err}");
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 5);

    let (code, _, err) = qtorus(dir.path(), &["verify", "T(3,4,1)", "T(3,4,9)"]);
    assert_eq!(code, 1);
    assert!(err.contains("T(3,4,9): error"), "{err}");
}
