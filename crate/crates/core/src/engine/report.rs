use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::problem::ViolationRecord;

use super::{EngineConfig, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    GenerationCap,
    Stagnation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    /// Running minimum of the penalized first objective.
    pub best_penalized: f64,
    pub archive_size: usize,
    pub hypervolume: f64,
    pub locations: usize,
    pub mean_magnitude: f64,
    pub radius: f64,
    pub de_accepted: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagnitudeRecord {
    pub generation: usize,
    pub epicenter: usize,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveEntry {
    pub solution_id: u64,
    /// Full decision vector.
    pub x: Vec<f64>,
    pub objectives: Vec<f64>,
    pub violations: ViolationRecord,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub seed: u64,
    pub config: EngineConfig,
    pub objective_count: usize,
    pub archive: Vec<ArchiveEntry>,
    pub best: Option<ArchiveEntry>,
    pub generations: Vec<GenerationRecord>,
    pub hypervolume_reference: [f64; 2],
    /// Objective indices spanning the hypervolume plane.
    pub hypervolume_axes: [usize; 2],
    pub magnitudes: Vec<MagnitudeRecord>,
    pub evaluations: u64,
    pub stop_reason: StopReason,
    pub wall_time_secs: f64,
}

impl RunReport {
    pub(crate) fn entry<E: super::Evaluator + ?Sized>(problem: &E, s: &Solution) -> ArchiveEntry {
        ArchiveEntry {
            solution_id: s.id,
            x: problem.expand(&s.position),
            objectives: s.objectives.clone(),
            violations: s.violations,
        }
    }

    pub fn best_per_generation(&self) -> Vec<f64> {
        self.generations.iter().map(|g| g.best_penalized).collect()
    }

    pub fn hypervolume_trajectory(&self) -> Vec<f64> {
        self.generations.iter().map(|g| g.hypervolume).collect()
    }

    pub fn magnitude_values(&self) -> Vec<f64> {
        self.magnitudes.iter().map(|m| m.magnitude).collect()
    }

    /// Archive as CSV. Three-objective runs use the network column names,
    /// with `G` reported un-negated.
    pub fn archive_csv(&self) -> String {
        let width = self.archive.first().map_or(0, |e| e.x.len());
        let mut out = String::from("solution_id");
        for k in 0..width {
            let _ = write!(out, ",x_{k}");
        }
        let network = self.objective_count == 3;
        if network {
            out.push_str(",G,F1,F2");
        } else {
            for k in 0..self.objective_count {
                let _ = write!(out, ",obj_{k}");
            }
        }
        out.push_str(",h1,h2,h3,penalty\n");
        for e in &self.archive {
            let _ = write!(out, "{}", e.solution_id);
            for v in &e.x {
                let _ = write!(out, ",{v}");
            }
            for (k, v) in e.objectives.iter().enumerate() {
                let v = if network && k == 0 { -v } else { *v };
                let _ = write!(out, ",{v}");
            }
            let h = &e.violations;
            let _ = writeln!(out, ",{},{},{},{}", h.h1, h.h2, h.h3, h.penalty);
        }
        out
    }

    /// Run summary without the archive and magnitude trace.
    pub fn run_json(&self) -> serde_json::Value {
        serde_json::json!({
            "seed": self.seed,
            "config": self.config,
            "objective_count": self.objective_count,
            "stop_reason": self.stop_reason,
            "generations_run": self.generations.len(),
            "evaluations": self.evaluations,
            "wall_time_secs": self.wall_time_secs,
            "archive_size": self.archive.len(),
            "best": self.best,
            "best_per_generation": self.best_per_generation(),
            "hypervolume_reference": self.hypervolume_reference,
            "hypervolume_axes": self.hypervolume_axes,
            "hypervolume_trajectory": self.hypervolume_trajectory(),
            "generations": self.generations,
        })
    }
}
