use std::path::Path;

use anyhow::{anyhow, Context};
use quakeopt::engine::{hypervolume_2d, hypervolume_contribution};
use serde::Serialize;

use crate::failure::{CliResult, Failure, OrInput};
use crate::output::{json_bytes, write_atomic};

#[derive(Serialize)]
struct PointReport {
    point: [f64; 2],
    contribution: f64,
}

#[derive(Serialize)]
struct HypervolumeReport {
    hypervolume: f64,
    reference: [f64; 2],
    points: Vec<PointReport>,
}

/// Reads a two-column front; a first row that does not parse as numbers is
/// taken as a header.
fn read_front(path: &Path) -> anyhow::Result<Vec<[f64; 2]>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot read front `{}`", path.display()))?;
    let mut front = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("malformed CSV `{}`", path.display()))?;
        if record.len() != 2 {
            return Err(anyhow!(
                "`{}` line {}: expected 2 columns, found {}",
                path.display(),
                row + 1,
                record.len()
            ));
        }
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) => front.push([v[0], v[1]]),
            Err(_) if row == 0 => continue,
            Err(e) => {
                return Err(anyhow!("`{}` line {}: {e}", path.display(), row + 1));
            }
        }
    }
    Ok(front)
}

pub fn run(front_path: &Path, reference: &[f64], out: Option<&Path>) -> CliResult {
    if reference.len() != 2 {
        return Err(Failure::input(anyhow!(
            "--ref needs two coordinates, got {}",
            reference.len()
        )));
    }
    let reference = [reference[0], reference[1]];
    let front = read_front(front_path).or_input()?;
    let hypervolume = hypervolume_2d(&front, reference).or_input()?;
    let points = (0..front.len())
        .map(|i| {
            Ok(PointReport {
                point: front[i],
                contribution: hypervolume_contribution(&front, i, reference)?,
            })
        })
        .collect::<quakeopt::Result<Vec<_>>>()
        .or_input()?;
    let report = HypervolumeReport {
        hypervolume,
        reference,
        points,
    };

    println!("hypervolume: {hypervolume}");
    for p in &report.points {
        println!("contribution ({}, {}): {}", p.point[0], p.point[1], p.contribution);
    }
    let json = json_bytes(&report).or_input()?;
    match out {
        Some(path) => write_atomic(path, &json).or_input()?,
        None => print!("{}", String::from_utf8_lossy(&json)),
    }
    Ok(())
}
