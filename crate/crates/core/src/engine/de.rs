//! Differential-evolution mutation, binomial crossover and greedy replacement.

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::seismic::normalize_coordinate;
use crate::space::Bounds;

use super::fitness::FitnessContext;
use super::{evaluate_all, Evaluator, Solution};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeSettings {
    pub p_cross: f64,
    pub vartheta: f64,
}

/// `a + ϑ (b − c)`.
pub fn de_mutant(a: &[f64], b: &[f64], c: &[f64], vartheta: f64) -> Vec<f64> {
    a.iter()
        .zip(b.iter().zip(c))
        .map(|(a, (b, c))| a + vartheta * (b - c))
        .collect()
}

/// Binomial crossover of `target` with `mutant`, with one forced mutant
/// coordinate, wrapped into `bounds`.
pub fn de_trial(
    target: &[f64],
    mutant: &[f64],
    bounds: &Bounds,
    p_cross: f64,
    rng: &mut RngStream,
) -> Vec<f64> {
    let forced = rng.int_range(0, target.len() - 1);
    (0..target.len())
        .map(|j| {
            let v = if rng.uniform(0.0, 1.0) < p_cross || j == forced {
                mutant[j]
            } else {
                target[j]
            };
            normalize_coordinate(v, bounds.low[j], bounds.up[j])
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct DeOutcome {
    /// The trial if it was accepted, otherwise the original target.
    pub survivor: Solution,
    /// The evaluated trial, whether or not it was accepted.
    pub trial: Solution,
    pub accepted: bool,
}

/// One trial per target. Donors come from `pool`, excluding the target itself;
/// a trial replaces its target when its fitness against `ctx` is no worse.
pub fn de_variation<E: Evaluator + ?Sized>(
    problem: &E,
    targets: &[Solution],
    pool: &[&[f64]],
    pool_ids: &[u64],
    ctx: &FitnessContext,
    settings: DeSettings,
    next_id: &mut u64,
    rng: &mut RngStream,
) -> Result<Vec<DeOutcome>> {
    let bounds = problem.bounds();
    let mut positions = Vec::with_capacity(targets.len());
    for t in targets {
        let eligible: Vec<usize> = (0..pool.len()).filter(|&i| pool_ids[i] != t.id).collect();
        if eligible.len() < 3 {
            return Err(Error::PoolTooSmall {
                needed: 4,
                found: eligible.len() + 1,
            });
        }
        let pick = rng.distinct_indices(eligible.len(), 3);
        let (a, b, c) = (
            pool[eligible[pick[0]]],
            pool[eligible[pick[1]]],
            pool[eligible[pick[2]]],
        );
        let mutant = de_mutant(a, b, c, settings.vartheta);
        positions.push(de_trial(&t.position, &mutant, bounds, settings.p_cross, rng));
    }
    let trials = evaluate_all(problem, positions, next_id);
    Ok(targets
        .iter()
        .zip(trials)
        .map(|(t, mut trial)| {
            trial.set_score(ctx.score_solution(&trial));
            let accepted = trial.fitness <= t.fitness;
            DeOutcome {
                survivor: if accepted { trial.clone() } else { t.clone() },
                trial,
                accepted,
            }
        })
        .collect())
}
