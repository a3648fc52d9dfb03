use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn quakeopt(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quakeopt"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn generate(dir: &Path, name: &str, seed: &str) {
    let o = quakeopt(
        &["generate", "--nodes", "4", "--types", "2", "--seed", seed, "--out", name],
        dir,
    );
    assert!(o.status.success(), "{}", stderr(&o));
}

fn optimize(dir: &Path, out: &str, seed: &str) -> Output {
    quakeopt(
        &[
            "optimize", "--spec", "spec.json", "--seed", seed, "--active-dims", "0,1,2,3",
            "--generations", "40", "--out", out,
        ],
        dir,
    )
}

#[test]
fn generate_is_deterministic_and_loadable() {
    let tmp = TempDir::new().unwrap();
    generate(tmp.path(), "a.json", "9");
    generate(tmp.path(), "b.json", "9");
    let a = fs::read(tmp.path().join("a.json")).unwrap();
    assert_eq!(a, fs::read(tmp.path().join("b.json")).unwrap());
    quakeopt::problem::load_network_spec(tmp.path().join("a.json")).unwrap();
}

#[test]
fn generate_rejects_zero_nodes() {
    let tmp = TempDir::new().unwrap();
    let o = quakeopt(&["generate", "--nodes", "0", "--out", "x.json"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(!tmp.path().join("x.json").exists());
}

#[test]
fn optimize_missing_spec_names_path() {
    let tmp = TempDir::new().unwrap();
    let o = quakeopt(&["optimize", "--spec", "absent.json", "--out", "run"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("absent.json"), "{}", stderr(&o));
    assert!(!tmp.path().join("run").exists());
}

#[test]
fn optimize_rejects_bad_config() {
    let tmp = TempDir::new().unwrap();
    generate(tmp.path(), "spec.json", "7");
    fs::write(tmp.path().join("cfg.json"), r#"{"p_cross": 2.0}"#).unwrap();
    let o = quakeopt(
        &["optimize", "--spec", "spec.json", "--config", "cfg.json", "--out", "run"],
        tmp.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("p_cross"), "{}", stderr(&o));
    assert!(!tmp.path().join("run").exists());
}

#[test]
fn optimize_writes_outputs_deterministically() {
    let tmp = TempDir::new().unwrap();
    generate(tmp.path(), "spec.json", "7");
    for out in ["r1", "r2", "r3"] {
        let seed = if out == "r3" { "2" } else { "1" };
        let o = optimize(tmp.path(), out, seed);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let read = |p: &str| fs::read(tmp.path().join(p)).unwrap();
    assert_eq!(read("r1/archive.csv"), read("r2/archive.csv"));
    assert_ne!(read("r1/archive.csv"), read("r3/archive.csv"));

    let header = String::from_utf8(read("r1/archive.csv")).unwrap();
    assert!(header.starts_with(
        "solution_id,x_0,x_1,x_2,x_3,x_4,x_5,x_6,x_7,G,F1,F2,h1,h2,h3,penalty\n"
    ));
    let manifest: serde_json::Value = serde_json::from_slice(&read("r1/manifest.json")).unwrap();
    assert_eq!(manifest["seed"], 1);
    let run: serde_json::Value = serde_json::from_slice(&read("r1/run.json")).unwrap();
    assert_eq!(run["best_per_generation"].as_array().unwrap().len(), 40);
    assert_eq!(run["config"]["seed"], 1);
    let trace = String::from_utf8(read("r1/magnitudes.csv")).unwrap();
    assert!(trace.starts_with("generation,epicenter,magnitude\n"));
}

#[test]
fn selection_flag_changes_run() {
    let tmp = TempDir::new().unwrap();
    generate(tmp.path(), "spec.json", "7");
    let o = quakeopt(
        &[
            "optimize", "--spec", "spec.json", "--selection", "literal", "--generations", "10",
            "--out", "lit",
        ],
        tmp.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let run: serde_json::Value =
        serde_json::from_slice(&fs::read(tmp.path().join("lit/run.json")).unwrap()).unwrap();
    assert_eq!(run["config"]["selection"], "literal");
}

#[test]
fn analyze_reports_all_sections() {
    let tmp = TempDir::new().unwrap();
    generate(tmp.path(), "spec.json", "7");
    assert!(optimize(tmp.path(), "run", "4").status.success());
    let o = quakeopt(&["analyze", "--run", "run"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let a: serde_json::Value =
        serde_json::from_slice(&fs::read(tmp.path().join("run/analysis.json")).unwrap()).unwrap();
    assert!(a["histogram"]["counts"].is_array());
    assert!(a["gr_fit"]["b"].is_number());
    assert!(a["poisson"]["mean_variance_ratio"].is_number());
    let csv = fs::read_to_string(tmp.path().join("run/histogram.csv")).unwrap();
    assert!(csv.starts_with("bin_low,bin_high,midpoint,count,fitted\n"));
    assert_eq!(csv.lines().count(), 11);

    let o = quakeopt(&["analyze", "--run", "run", "--gr-fit", "--out", "gr"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let a: serde_json::Value =
        serde_json::from_slice(&fs::read(tmp.path().join("gr/analysis.json")).unwrap()).unwrap();
    assert!(a["poisson"].is_null());
}

#[test]
fn analyze_recovers_exact_power_law() {
    let tmp = TempDir::new().unwrap();
    let run = tmp.path().join("synthetic");
    fs::create_dir(&run).unwrap();
    // Counts 10^(5 - M) at magnitudes 1..5; the bins span [1, 5].
    let mut trace = String::from("generation,epicenter,magnitude\n");
    for m in 1..=5u32 {
        for _ in 0..10u64.pow(5 - m) {
            trace.push_str(&format!("1,0,{m}\n"));
        }
    }
    fs::write(run.join("magnitudes.csv"), trace).unwrap();
    let o = quakeopt(&["analyze", "--run", "synthetic", "--gr-fit", "--bins", "4"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let a: serde_json::Value =
        serde_json::from_slice(&fs::read(run.join("analysis.json")).unwrap()).unwrap();
    // four bins of width 1 with midpoints 1.5..4.5; the last bin holds M = 4 and 5
    let counts: Vec<u64> = a["histogram"]["counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(counts, vec![10_000, 1_000, 100, 11]);
    assert!(a["gr_fit"]["b"].as_f64().unwrap() > 0.9);
}

#[test]
fn analyze_empty_trace_leaves_no_files() {
    let tmp = TempDir::new().unwrap();
    let run = tmp.path().join("empty");
    fs::create_dir(&run).unwrap();
    fs::write(run.join("magnitudes.csv"), "generation,epicenter,magnitude\n").unwrap();
    let o = quakeopt(&["analyze", "--run", "empty"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("empty"));
    assert!(!run.join("analysis.json").exists());
    assert!(!run.join("histogram.csv").exists());

    let o = quakeopt(&["analyze", "--run", "nowhere"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("magnitudes.csv"));
}

#[test]
fn hypervolume_examples() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("front.csv"), "f1,f2\n1,3\n2,2\n3,1\n").unwrap();
    let o = quakeopt(
        &["hypervolume", "--front", "front.csv", "--ref", "4,4", "--out", "hv.json"],
        tmp.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("hypervolume: 6"));
    let hv: serde_json::Value =
        serde_json::from_slice(&fs::read(tmp.path().join("hv.json")).unwrap()).unwrap();
    assert_eq!(hv["hypervolume"], 6.0);
    assert_eq!(hv["points"][1]["contribution"], 1.0);

    fs::write(tmp.path().join("one.csv"), "1,1\n").unwrap();
    let o = quakeopt(&["hypervolume", "--front", "one.csv", "--ref", "2,2"], tmp.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("hypervolume: 1\n"));
}

#[test]
fn hypervolume_rejects_bad_input() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("front.csv"), "1,3\n2,2\n3,1\n").unwrap();
    let o = quakeopt(&["hypervolume", "--front", "front.csv", "--ref", "2.5,4"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("[3.0, 1.0]"), "{}", stderr(&o));

    fs::write(tmp.path().join("bad.csv"), "1,2,3\n").unwrap();
    let o = quakeopt(&["hypervolume", "--front", "bad.csv", "--ref", "4,4"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("expected 2 columns"));

    fs::write(tmp.path().join("junk.csv"), "x,y\n1,oops\n").unwrap();
    let o = quakeopt(&["hypervolume", "--front", "junk.csv", "--ref", "4,4"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
}
