//! Multiobjective engine: dominance, strength/density fitness, the
//! non-dominated archive, selection, differential-evolution variation, the
//! 2-D hypervolume and the seismic main loop.

mod archive;
mod config;
mod de;
mod dominance;
mod fitness;
mod hypervolume;
mod report;
mod run;
mod selection;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::problem::ViolationRecord;
use crate::space::Bounds;

pub use archive::ParetoArchive;
pub use config::EngineConfig;
pub use de::{de_mutant, de_trial, de_variation, DeOutcome, DeSettings};
pub use dominance::{dominates, dominates_unchecked};
pub use fitness::{
    density_neighbor_rank, fitness_assignment, fitness_assignment_with_k, FitnessContext,
    FitnessScore, DENSITY_EPSILON,
};
pub use hypervolume::{hypervolume_2d, hypervolume_contribution};
pub use report::{ArchiveEntry, GenerationRecord, MagnitudeRecord, RunReport, StopReason};
pub use run::{run_network, run_optimizer};
pub use selection::{select, selection_probabilities, SelectionMode};

/// Objective values and constraint record of one search position.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub objectives: Vec<f64>,
    pub violations: ViolationRecord,
}

/// A minimization problem over a box.
pub trait Evaluator: Sync {
    fn bounds(&self) -> &Bounds;

    fn objective_count(&self) -> usize;

    fn evaluate(&self, position: &[f64]) -> Evaluation;

    /// Full decision vector for reporting. Defaults to the search position.
    fn expand(&self, position: &[f64]) -> Vec<f64> {
        position.to_vec()
    }
}

/// A scored point of the search space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub id: u64,
    pub position: Vec<f64>,
    pub objectives: Vec<f64>,
    pub violations: ViolationRecord,
    /// Strength-based raw fitness `α`, with the penalty folded in.
    pub raw_fitness: f64,
    /// Density `ρ = 1 / d_g`.
    pub density: f64,
    /// `f̃ = α + ρ`; smaller is better.
    pub fitness: f64,
}

impl Solution {
    pub fn new(id: u64, position: Vec<f64>, evaluation: Evaluation) -> Self {
        Self {
            id,
            position,
            objectives: evaluation.objectives,
            violations: evaluation.violations,
            raw_fitness: 0.0,
            density: 0.0,
            fitness: 0.0,
        }
    }

    /// Unevaluated point with the given objectives and no violations.
    pub fn from_objectives(id: u64, objectives: Vec<f64>) -> Self {
        Self::new(
            id,
            Vec::new(),
            Evaluation {
                objectives,
                violations: ViolationRecord::none(),
            },
        )
    }

    pub fn is_feasible(&self) -> bool {
        self.violations.is_feasible()
    }

    pub fn penalty(&self) -> f64 {
        self.violations.penalty
    }

    pub(crate) fn set_score(&mut self, score: FitnessScore) {
        self.raw_fitness = score.raw;
        self.density = score.density;
        self.fitness = score.fitness;
    }
}

/// Evaluates positions in parallel and assigns ids in input order.
pub(crate) fn evaluate_all<E: Evaluator + ?Sized>(
    problem: &E,
    positions: Vec<Vec<f64>>,
    next_id: &mut u64,
) -> Vec<Solution> {
    let evals: Vec<Evaluation> = positions.par_iter().map(|p| problem.evaluate(p)).collect();
    positions
        .into_iter()
        .zip(evals)
        .map(|(p, e)| {
            let s = Solution::new(*next_id, p, e);
            *next_id += 1;
            s
        })
        .collect()
}
