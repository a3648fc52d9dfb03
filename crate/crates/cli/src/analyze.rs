use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use quakeopt::analysis::{
    gutenberg_richter_fit, magnitude_histogram, poisson_aggregate_check, AnalysisReport,
};
use quakeopt::engine::MagnitudeRecord;
use quakeopt::RngStream;

use crate::failure::{CliResult, Failure, OrInput};
use crate::output::{json_bytes, write_atomic};

pub struct Args {
    pub run: PathBuf,
    pub gr_fit: bool,
    pub poisson_check: bool,
    pub bins: usize,
    pub log_midpoints: bool,
    pub iterations: usize,
    pub samples_per_iteration: usize,
    pub seed: u64,
    pub out: PathBuf,
}

pub fn run(args: Args) -> CliResult {
    let path = args.run.join("magnitudes.csv");
    let mut reader = csv::Reader::from_path(&path)
        .with_context(|| format!("cannot read magnitude trace `{}`", path.display()))
        .or_input()?;
    let records: Vec<MagnitudeRecord> = reader
        .deserialize()
        .collect::<Result<_, _>>()
        .with_context(|| format!("malformed magnitude trace `{}`", path.display()))
        .or_input()?;
    if records.is_empty() {
        return Err(Failure::input(anyhow!(
            "magnitude trace `{}` is empty",
            path.display()
        )));
    }
    let (gr, poisson) = if args.gr_fit || args.poisson_check {
        (args.gr_fit, args.poisson_check)
    } else {
        (true, true)
    };

    let values: Vec<f64> = records.iter().map(|r| r.magnitude).collect();
    let histogram = magnitude_histogram(&values, args.bins).or_input()?;
    let gr_fit = if gr {
        Some(gutenberg_richter_fit(&histogram, args.log_midpoints).map_err(Failure::run)?)
    } else {
        None
    };
    let poisson = if poisson {
        // Per-generation mean count of each occupied magnitude range.
        let generations = records
            .iter()
            .map(|r| r.generation)
            .collect::<BTreeSet<_>>()
            .len() as f64;
        let lambdas: Vec<f64> = histogram
            .counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| c as f64 / generations)
            .collect();
        let mut rng = RngStream::new(args.seed);
        Some(
            poisson_aggregate_check(&lambdas, args.samples_per_iteration, args.iterations, &mut rng)
                .or_input()?,
        )
    } else {
        None
    };
    let report = AnalysisReport {
        histogram,
        gr_fit,
        poisson,
    };

    let json = json_bytes(&report).or_input()?;
    fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create `{}`", args.out.display()))
        .or_input()?;
    write_atomic(&args.out.join("analysis.json"), &json).or_input()?;
    write_atomic(&args.out.join("histogram.csv"), report.histogram_csv().as_bytes()).or_input()?;

    if let Some(f) = &report.gr_fit {
        println!("gutenberg-richter: a = {}, b = {}, residual = {}", f.a, f.b, f.residual);
    }
    if let Some(p) = &report.poisson {
        println!(
            "poisson: lambda(q) = {}, mean = {}, variance = {}, ratio = {}, gaussian = {}",
            p.lambda_total, p.sample_mean, p.sample_variance, p.mean_variance_ratio, p.gaussian
        );
    }
    println!("wrote {}", args.out.display());
    Ok(())
}
