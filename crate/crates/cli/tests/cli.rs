use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use morphoevo_core::runner::PRESET_NAMES;
use serde_json::Value;

fn morphoevo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morphoevo"))
        .args(args)
        .env_remove("MORPHOEVO_SEED")
        .output()
        .expect("binary runs")
}

fn small_config(dir: &Path) -> String {
    let path = dir.join("small.json");
    let cfg = r#"{
  "lexicon": {"num_lexemes": 20, "num_cells": 4, "inventory_sizes": [3]},
  "step": {"num_pivots": 2, "evidence_fraction": 0.5},
  "total_cycles": 400,
  "snapshot_count": 3,
  "runs": 3,
  "master_seed": 11
}"#;
    fs::write(&path, cfg).unwrap();
    path.to_string_lossy().into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn help_lists_every_preset() {
    for args in [&["--help"][..], &["batch", "--help"][..]] {
        let out = morphoevo(args);
        assert_eq!(code(&out), 0);
        let text = String::from_utf8(out.stdout).unwrap();
        for name in PRESET_NAMES {
            assert!(text.contains(name), "{args:?} help lacks {name}");
        }
    }
}

#[test]
fn oracle_table() {
    let out = morphoevo(&["oracle", "--max-mn", "4"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,n,k,N,p_i,p_j,p_0,oracle_match"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.contains(&"3,3,3,2,0,0,1/2,true"));
    assert!(rows.contains(&"3,3,4,20,1/4,1/4,1/2,true"));
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn batch_then_render() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out_dir = tmp.path().join("batch");
    let out_s = out_dir.to_str().unwrap();
    let out = morphoevo(&["batch", "--config", &cfg, "--set", "step.alpha=0.25", "--out", out_s]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let echoed = read_json(&out_dir.join("config.json"));
    assert_eq!(echoed["step"]["alpha"], 0.25);
    assert_eq!(echoed["lexicon"]["inventory_sizes"], serde_json::json!([3, 3, 3, 3]));
    assert_eq!(echoed["metric_interval"], 1);
    let metrics = fs::read_to_string(out_dir.join("metrics.csv")).unwrap();
    assert!(metrics.starts_with("run_id,cycle,"));
    assert_eq!(metrics.lines().count(), 1 + 3 * 401);
    assert!(fs::read_to_string(out_dir.join("aggregate.csv")).unwrap().starts_with("cycle,metric,mean,p5,p95\n"));
    for run in 0..3 {
        for cycle in [0, 200, 400] {
            assert!(out_dir.join(format!("snapshots/run{run}_cycle{cycle}.csv")).is_file());
        }
    }

    let render = || {
        let out = morphoevo(&["render", out_s]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let mut files = Vec::new();
        for sub in ["charts", "snapshots"] {
            let mut names: Vec<_> = fs::read_dir(out_dir.join("render").join(sub))
                .unwrap()
                .map(|e| e.unwrap().path())
                .collect();
            names.sort();
            files.extend(names.into_iter().map(|p| (p.clone(), fs::read(p).unwrap())));
        }
        files
    };
    let first = render();
    assert_eq!(first.len(), 8 + 9);
    assert!(first.iter().any(|(p, _)| p.ends_with("charts/classes.svg")));
    assert_eq!(first, render());
}

#[test]
fn single_run_and_seed_variable() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out_dir = tmp.path().join("run");
    let out = Command::new(env!("CARGO_BIN_EXE_morphoevo"))
        .args(["run", "--config", &cfg, "--run-id", "4", "--out", out_dir.to_str().unwrap()])
        .env("MORPHOEVO_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let echoed = read_json(&out_dir.join("config.json"));
    assert_eq!(echoed["master_seed"], 99);
    assert_eq!(echoed["runs"], 1);
    let metrics = fs::read_to_string(out_dir.join("metrics.csv")).unwrap();
    assert!(metrics.lines().skip(1).all(|l| l.starts_with("4,")));
}

#[test]
fn repeated_batches_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let mut outputs = Vec::new();
    for name in ["a", "b"] {
        let dir = tmp.path().join(name);
        let out = morphoevo(&["batch", "--config", &cfg, "--threads", "2", "--out", dir.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        outputs.push((
            fs::read(dir.join("metrics.csv")).unwrap(),
            fs::read(dir.join("aggregate.csv")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn sweep_writes_one_batch_per_value() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let dir = tmp.path().join("sweep");
    let out = morphoevo(&["sweep-alpha", "--config", &cfg, "--values", "0.1,0.5", "--out", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let summary = fs::read_to_string(dir.join("sweep.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
    for a in ["alpha_0.1", "alpha_0.5"] {
        assert!(dir.join(a).join("metrics.csv").is_file());
    }
    assert_eq!(read_json(&dir.join("alpha_0.5/config.json"))["step"]["alpha"], 0.5);
}

#[test]
fn error_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out_dir = tmp.path().join("never");
    let out_s = out_dir.to_str().unwrap();

    let missing = morphoevo(&["batch", "--config", "/nonexistent/c.json", "--out", out_s]);
    assert_eq!(code(&missing), 3);

    let typo = morphoevo(&["batch", "--config", &cfg, "--set", "step.alpah=0.5", "--out", out_s]);
    assert_eq!(code(&typo), 4);

    let bad_json = tmp.path().join("bad.json");
    fs::write(&bad_json, "{\"lexicon\": ").unwrap();
    let broken = morphoevo(&["batch", "--config", bad_json.to_str().unwrap(), "--out", out_s]);
    assert_eq!(code(&broken), 4);

    let pivots = morphoevo(&["batch", "--preset", "am_no_tidy", "--set", "step.num_pivots=9", "--out", out_s]);
    assert_eq!(code(&pivots), 5);
    assert!(!out_dir.exists());

    let batch = tmp.path().join("corrupt");
    fs::create_dir_all(batch.join("snapshots")).unwrap();
    fs::write(batch.join("aggregate.csv"), "cycle,metric,mean,p5,p95\n0,classes,1,1,1\n").unwrap();
    fs::write(batch.join("snapshots/run0_cycle0.csv"), "cell_0,cell_1\n0,x\n").unwrap();
    let render = morphoevo(&["render", batch.to_str().unwrap()]);
    assert_eq!(code(&render), 6);
    assert!(!batch.join("render").exists());
    let leftovers: Vec<_> = fs::read_dir(&batch)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.contains("partial"))
        .collect();
    assert!(leftovers.is_empty(), "{leftovers:?}");
}
