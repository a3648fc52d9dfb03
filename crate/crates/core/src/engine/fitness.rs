//! Strength, raw fitness and density over a solution pool.

use crate::error::{Error, Result};
use crate::space::euclidean;

use super::dominance::dominates_unchecked;
use super::Solution;

/// Stand-in for a zero neighbor distance in the density term.
pub const DENSITY_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitnessScore {
    pub raw: f64,
    pub density: f64,
    pub fitness: f64,
}

/// Neighbor rank `g = max(1, round(√n))` for a sample of `n` points, capped at
/// the `n − 1` available neighbors.
pub fn density_neighbor_rank(n: usize) -> usize {
    let g = ((n as f64).sqrt().round() as usize).max(1);
    g.min(n.saturating_sub(1)).max(1)
}

/// Assigns `α`, `ρ` and `f̃` to every member of `pool` in place.
pub fn fitness_assignment(pool: &mut [Solution]) -> Result<()> {
    let g = density_neighbor_rank(pool.len());
    fitness_assignment_with_k(pool, g)
}

/// As [`fitness_assignment`] with an explicit neighbor rank `k`.
pub fn fitness_assignment_with_k(pool: &mut [Solution], k: usize) -> Result<()> {
    if pool.is_empty() {
        return Err(Error::Empty("fitness pool"));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("neighbor rank must be at least 1".into()));
    }
    let n = pool.len();
    let strength = strengths(pool.iter().map(|s| s.objectives.as_slice()));
    let mut scores = Vec::with_capacity(n);
    let mut dist = Vec::with_capacity(n);
    for i in 0..n {
        let oi = &pool[i].objectives;
        let raw: f64 = (0..n)
            .filter(|&j| j != i && dominates_unchecked(&pool[j].objectives, oi))
            .map(|j| strength[j])
            .sum::<f64>()
            + pool[i].penalty();
        dist.clear();
        dist.extend(
            (0..n)
                .filter(|&j| j != i)
                .map(|j| euclidean(oi, &pool[j].objectives)),
        );
        let density = density_from(&mut dist, k);
        scores.push(FitnessScore {
            raw,
            density,
            fitness: raw + density,
        });
    }
    for (s, score) in pool.iter_mut().zip(scores) {
        s.set_score(score);
    }
    Ok(())
}

fn strengths<'a>(objs: impl Iterator<Item = &'a [f64]> + Clone) -> Vec<f64> {
    let all: Vec<&[f64]> = objs.collect();
    all.iter()
        .map(|a| all.iter().filter(|b| dominates_unchecked(a, b)).count() as f64)
        .collect()
}

/// `1 / d_k` where `d_k` is the `k`-th smallest entry of `dist` (the largest if
/// fewer are available).
fn density_from(dist: &mut [f64], k: usize) -> f64 {
    let d = if dist.is_empty() {
        0.0
    } else {
        let idx = (k - 1).min(dist.len() - 1);
        *dist
            .select_nth_unstable_by(idx, |a, b| a.total_cmp(b))
            .1
    };
    1.0 / if d > 0.0 { d } else { DENSITY_EPSILON }
}

/// Frozen pool statistics for scoring points that are not pool members.
#[derive(Debug, Clone)]
pub struct FitnessContext {
    objectives: Vec<Vec<f64>>,
    strength: Vec<f64>,
    rank: usize,
}

impl FitnessContext {
    pub fn from_pool(pool: &[Solution]) -> Result<Self> {
        if pool.is_empty() {
            return Err(Error::Empty("fitness pool"));
        }
        let objectives: Vec<Vec<f64>> = pool.iter().map(|s| s.objectives.clone()).collect();
        let strength = strengths(objectives.iter().map(Vec::as_slice));
        let rank = density_neighbor_rank(pool.len() + 1);
        Ok(Self {
            objectives,
            strength,
            rank,
        })
    }

    /// Fitness the point would receive against the frozen pool.
    pub fn score(&self, objectives: &[f64], penalty: f64) -> FitnessScore {
        let raw: f64 = self
            .objectives
            .iter()
            .zip(&self.strength)
            .filter(|(o, _)| dominates_unchecked(o, objectives))
            .map(|(_, s)| s)
            .sum::<f64>()
            + penalty;
        let mut dist: Vec<f64> = self
            .objectives
            .iter()
            .map(|o| euclidean(o, objectives))
            .collect();
        let density = density_from(&mut dist, self.rank);
        FitnessScore {
            raw,
            density,
            fitness: raw + density,
        }
    }

    pub fn score_solution(&self, s: &Solution) -> FitnessScore {
        self.score(&s.objectives, s.penalty())
    }
}
