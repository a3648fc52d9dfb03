use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use csv::Writer;
use quakeopt::engine::{run_network, EngineConfig, SelectionMode};
use quakeopt::problem::load_network_spec;
use serde::Serialize;

use crate::failure::{CliResult, Failure, OrInput};
use crate::output::{json_bytes, write_atomic};

pub struct Args {
    pub spec: PathBuf,
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub selection: Option<SelectionMode>,
    pub active_dims: Option<Vec<usize>>,
    pub generations: Option<usize>,
    pub out: PathBuf,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    spec_path: &'a PathBuf,
    config_path: Option<&'a PathBuf>,
    seed: u64,
    output_dir: &'a PathBuf,
    tool_version: &'static str,
    timestamp: String,
}

pub fn run(args: Args) -> CliResult {
    let spec = load_network_spec(&args.spec).or_input()?;
    let mut config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read config `{}`", path.display()))
                .or_input()?;
            EngineConfig::from_json(&text)
                .with_context(|| format!("in `{}`", path.display()))
                .or_input()?
        }
        None => EngineConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(mode) = args.selection {
        config.selection = mode;
    }
    if let Some(active) = args.active_dims {
        config.active_dims = Some(active);
    }
    if let Some(g) = args.generations {
        config.max_generations = g;
    }
    config.validate().or_input()?;

    let report = run_network(&spec, &config).map_err(|e| {
        if e.is_input() {
            Failure::input(e)
        } else {
            Failure::run(e)
        }
    })?;

    fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create `{}`", args.out.display()))
        .or_input()?;
    let manifest = RunManifest {
        spec_path: &args.spec,
        config_path: args.config.as_ref(),
        seed: config.seed,
        output_dir: &args.out,
        tool_version: env!("CARGO_PKG_VERSION"),
        timestamp: chrono::Utc::now().to_rfc3339(),
    };
    let write = |name: &str, bytes: &[u8]| write_atomic(&args.out.join(name), bytes).or_input();
    write("manifest.json", &json_bytes(&manifest).or_input()?)?;
    write("archive.csv", report.archive_csv().as_bytes())?;
    write("run.json", &json_bytes(&report.run_json()).or_input()?)?;

    let mut trace = Writer::from_writer(Vec::new());
    for m in &report.magnitudes {
        trace.serialize(m).or_input()?;
    }
    let trace = trace.into_inner().map_err(|e| Failure::run(e.into_error()))?;
    write("magnitudes.csv", &trace)?;

    let best = report
        .best
        .as_ref()
        .map_or_else(|| "none".to_string(), |b| format!("{}", -b.objectives[0]));
    println!(
        "{} generations, {} archive members, best G = {best}; wrote {}",
        report.generations.len(),
        report.archive.len(),
        args.out.display()
    );
    Ok(())
}
