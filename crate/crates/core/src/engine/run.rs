//! The seismic main loop.

use std::collections::HashSet;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::problem::{NetworkProblem, NetworkSpec};
use crate::rng::RngStream;
use crate::seismic::{
    cumulative_magnitudes, dispersion_counts, displacement_dim_count, ellipse_distance,
    hypocentral_displace, magnitude_from_power, normalize_coordinate, peak_power,
    poisson_location, radius_from_mean, seismic_power, spawn_epicenter, PhiTracker,
    SeismicParams, SpawnContext,
};
use crate::space::Bounds;

use super::de::{de_variation, DeSettings};
use super::fitness::{fitness_assignment, FitnessContext};
use super::hypervolume::hypervolume_2d;
use super::report::{GenerationRecord, MagnitudeRecord, RunReport, StopReason};
use super::selection::select;
use super::{evaluate_all, EngineConfig, Evaluator, ParetoArchive, Solution};

const CONTROL_STREAM_BASE: u64 = 1 << 62;
const INIT_STREAM: u64 = 1 << 63;
/// Floor on the normalized epicenter-to-location distance.
const MIN_LOCATION_DISTANCE: f64 = 1e-9;

/// Optimizes a network spec, restricted to `config.active_dims` when set.
pub fn run_network(spec: &NetworkSpec, config: &EngineConfig) -> Result<RunReport> {
    let problem = match &config.active_dims {
        Some(active) => NetworkProblem::with_active_dims(spec.clone(), active.clone())?,
        None => NetworkProblem::new(spec.clone())?,
    };
    run_optimizer(&problem, config)
}

pub fn run_optimizer<E: Evaluator + ?Sized>(problem: &E, config: &EngineConfig) -> Result<RunReport> {
    config.validate()?;
    let start = Instant::now();
    let bounds = problem.bounds().clone();
    let dim = bounds.dim();
    let d = problem.objective_count();
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least two objectives, got {d}"
        )));
    }
    let n_pop = config.population_size;
    let params = &config.seismic;
    let seed = config.seed;
    let mut next_id = 0u64;

    let axes = if d >= 3 { [d - 2, d - 1] } else { [0, 1] };
    let corner = problem.evaluate(&bounds.up);
    let pad = |v: f64| v + 0.01 * v.abs() + 1e-9;
    let reference = [pad(corner.objectives[axes[0]]), pad(corner.objectives[axes[1]])];

    let mut init_rng = RngStream::derive(seed, INIT_STREAM);
    let initial: Vec<Vec<f64>> = (0..n_pop)
        .map(|_| {
            (0..dim)
                .map(|k| init_rng.uniform(bounds.low[k], bounds.up[k]))
                .collect()
        })
        .collect();
    let mut population = evaluate_all(problem, initial, &mut next_id);
    let mut archive = ParetoArchive::new();
    archive.update(population.iter().cloned());
    archive.truncate(config.archive_capacity);

    let mut prev_peak = vec![1.0; n_pop];
    let mut prev_share = vec![1.0; n_pop];
    let mut prev_mean = 1.0;
    let mut best_so_far = f64::INFINITY;
    let mut stall = 0;
    let mut stop_reason = StopReason::GenerationCap;
    let mut generations = Vec::new();
    let mut magnitudes = Vec::new();

    for gen in 0..config.max_generations {
        let before = member_ids(&archive);

        // fitness over population and archive
        let mut pool = merge(&[&population, archive.members()]);
        fitness_assignment(&mut pool)?;
        let ctx = FitnessContext::from_pool(&pool)?;
        for (s, scored) in population.iter_mut().zip(&pool) {
            s.raw_fitness = scored.raw_fitness;
            s.density = scored.density;
            s.fitness = scored.fitness;
        }
        let fit: Vec<f64> = population.iter().map(|s| s.fitness).collect();
        let dispersion = dispersion_counts(&fit, params)?;

        // hypocentral locations, one independent stream per epicenter
        let per_epicenter: Vec<Vec<Vec<f64>>> = (0..n_pop)
            .into_par_iter()
            .map(|i| {
                let mut rng = RngStream::derive(seed, (gen * n_pop + i) as u64);
                (0..dispersion.counts[i])
                    .map(|_| {
                        hypocentral_location(
                            &population[i].position,
                            &bounds,
                            config.hypocentral_scale * prev_share[i] / prev_mean,
                            prev_peak[i],
                            &mut rng,
                        )
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let counts: Vec<usize> = per_epicenter.iter().map(Vec::len).collect();
        let mut locations =
            evaluate_all(problem, per_epicenter.into_iter().flatten().collect(), &mut next_id);
        for l in &mut locations {
            l.set_score(ctx.score_solution(l));
        }

        // magnitudes and powers
        let mut powers = Vec::with_capacity(n_pop);
        let mut dists = Vec::with_capacity(n_pop);
        let mut offset = 0;
        for i in 0..n_pop {
            let locs = &locations[offset..offset + counts[i]];
            offset += counts[i];
            let gains: Vec<f64> = locs.iter().map(|l| (fit[i] - l.fitness).max(0.0)).collect();
            let mean_gain = gains.iter().sum::<f64>() / gains.len() as f64;
            let mut ps = Vec::with_capacity(locs.len());
            let mut ds = Vec::with_capacity(locs.len());
            for (l, g) in locs.iter().zip(&gains) {
                let m = if mean_gain > 0.0 { 1.0 + g / mean_gain } else { 1.0 };
                let dist = projected_distance(&population[i].position, &l.position, &bounds, params);
                ps.push(seismic_power(dist, m, params)?);
                ds.push(dist);
                magnitudes.push(MagnitudeRecord {
                    generation: gen + 1,
                    epicenter: i,
                    magnitude: m,
                });
            }
            powers.push(ps);
            dists.push(ds);
        }
        let peak = peak_power(&powers)?;
        let peak_mags = (0..n_pop)
            .map(|i| {
                magnitude_from_power(
                    peak.per_epicenter[i],
                    dists[i][peak.argmax_location[i]],
                    params,
                )
            })
            .collect::<Result<Vec<f64>>>()?;
        let shares = cumulative_magnitudes(&fit, &peak_mags, params)?;
        let mean_mag = peak_mags.iter().sum::<f64>() / n_pop as f64;
        let radius = radius_from_mean(mean_mag, params) * bounds.diagonal();

        archive.update(population.iter().chain(&locations).cloned());

        // spawn new epicenters toward reference pairs
        let mut ctl = RngStream::derive(seed, CONTROL_STREAM_BASE + gen as u64);
        let refs: Vec<&[f64]> = population
            .iter()
            .chain(&locations)
            .map(|s| s.position.as_slice())
            .collect();
        let spawn_ctx = SpawnContext {
            bounds: &bounds,
            radius,
            mean_magnitude: mean_mag,
        };
        let mut tracker = PhiTracker::new();
        let mut spawned_pos = Vec::with_capacity(n_pop);
        for e in &population {
            let picked: Vec<Vec<f64>> = ctl
                .distinct_indices(refs.len(), params.n_ref.min(refs.len()))
                .into_iter()
                .map(|j| refs[j].to_vec())
                .collect();
            let s = spawn_epicenter(&e.position, &picked, &spawn_ctx, params, &mut tracker, &mut ctl)?;
            spawned_pos.push(s.position);
        }
        let spawned = evaluate_all(problem, spawned_pos, &mut next_id);
        archive.update(spawned.iter().cloned());

        // selection, exploration and differential evolution
        let mut working = merge(&[&population, &locations, &spawned, archive.members()]);
        fitness_assignment(&mut working)?;
        let wctx = FitnessContext::from_pool(&working)?;
        let wfit: Vec<f64> = working.iter().map(|s| s.fitness).collect();
        let p = config.selection_count().min(working.len());
        let chosen = select(&wfit, p, config.selection, &mut ctl)?;
        let targets: Vec<Solution> = chosen.iter().map(|&j| working[j].clone()).collect();

        let explored_pos: Vec<Vec<f64>> = targets
            .iter()
            .map(|t| {
                let mut x = t.position.clone();
                let y = displacement_dim_count(dim, &mut ctl);
                for k in ctl.distinct_indices(dim, y) {
                    let off = poisson_location(x[k] - bounds.low[k], 0.0, bounds.width(k), params, &mut ctl);
                    x[k] = normalize_coordinate(off + bounds.low[k], bounds.low[k], bounds.up[k]);
                }
                x
            })
            .collect();
        let explored = evaluate_all(problem, explored_pos, &mut next_id);
        archive.update(explored.iter().cloned());

        let donors: Vec<&[f64]> = working
            .iter()
            .chain(&explored)
            .map(|s| s.position.as_slice())
            .collect();
        let donor_ids: Vec<u64> = working.iter().chain(&explored).map(|s| s.id).collect();
        let settings = DeSettings {
            p_cross: config.p_cross,
            vartheta: config.vartheta_de,
        };
        let outcomes = de_variation(
            problem, &targets, &donors, &donor_ids, &wctx, settings, &mut next_id, &mut ctl,
        )?;
        let mut de_accepted = 0;
        for o in &outcomes {
            if o.accepted {
                de_accepted += 1;
                archive.insert(o.trial.clone());
            }
        }

        // refill: best survivor plus fitness-proportional draws
        let mut candidates = working;
        for (&j, o) in chosen.iter().zip(outcomes) {
            candidates[j] = o.survivor;
        }
        let best = (0..candidates.len())
            .min_by(|&a, &b| candidates[a].fitness.total_cmp(&candidates[b].fitness))
            .expect("candidate pool is nonempty");
        let rest: Vec<usize> = (0..candidates.len()).filter(|&j| j != best).collect();
        let rest_fit: Vec<f64> = rest.iter().map(|&j| candidates[j].fitness).collect();
        let drawn = select(&rest_fit, (n_pop - 1).min(rest.len()), config.selection, &mut ctl)?;
        let mut next = Vec::with_capacity(n_pop);
        next.push(candidates[best].clone());
        next.extend(drawn.into_iter().map(|k| candidates[rest[k]].clone()));
        population = next;

        archive.truncate(config.archive_capacity);

        let gen_best = archive
            .members()
            .iter()
            .map(|s| s.objectives[0])
            .chain(population.iter().map(|s| s.objectives[0] + s.penalty()))
            .fold(f64::INFINITY, f64::min);
        best_so_far = best_so_far.min(gen_best);
        let front: Vec<[f64; 2]> = archive
            .members()
            .iter()
            .map(|s| [s.objectives[axes[0]], s.objectives[axes[1]]])
            .filter(|p| p[0] <= reference[0] && p[1] <= reference[1])
            .collect();
        generations.push(GenerationRecord {
            generation: gen + 1,
            best_penalized: best_so_far,
            archive_size: archive.len(),
            hypervolume: hypervolume_2d(&front, reference)?,
            locations: dispersion.total,
            mean_magnitude: mean_mag,
            radius,
            de_accepted,
        });

        prev_peak = peak_mags;
        prev_share = shares.values;
        prev_mean = mean_mag;

        if member_ids(&archive) == before {
            stall += 1;
            if stall >= config.stall_gens {
                stop_reason = StopReason::Stagnation;
                break;
            }
        } else {
            stall = 0;
        }
    }

    let best = archive
        .members()
        .iter()
        .min_by(|a, b| a.objectives[0].total_cmp(&b.objectives[0]))
        .map(|s| RunReport::entry(problem, s));
    Ok(RunReport {
        seed,
        config: config.clone(),
        objective_count: d,
        archive: archive
            .members()
            .iter()
            .map(|s| RunReport::entry(problem, s))
            .collect(),
        best,
        generations,
        hypervolume_reference: reference,
        hypervolume_axes: axes,
        magnitudes,
        evaluations: next_id,
        stop_reason,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

/// Location around epicenter `e`: a random subset of coordinates is displaced
/// hypocentrally, measured from the lower bound, then wrapped into the box.
fn hypocentral_location(
    e: &[f64],
    bounds: &Bounds,
    relative_range: f64,
    magnitude: f64,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    let dim = e.len();
    let mut x = e.to_vec();
    let y = displacement_dim_count(dim, rng);
    for k in rng.distinct_indices(dim, y) {
        let c_val = relative_range * bounds.width(k);
        let v = hypocentral_displace(e[k] - bounds.low[k], c_val, magnitude, rng)?;
        x[k] = normalize_coordinate(v + bounds.low[k], bounds.low[k], bounds.up[k]);
    }
    Ok(x)
}

/// Width-normalized distance from epicenter to location, stretched by the
/// ellipse factor along the first two displaced coordinates.
fn projected_distance(e: &[f64], l: &[f64], bounds: &Bounds, params: &SeismicParams) -> f64 {
    let delta: Vec<f64> = (0..e.len())
        .map(|k| (l[k] - e[k]) / bounds.width(k))
        .collect();
    let norm = delta.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut moved = delta.iter().copied().filter(|v| *v != 0.0);
    let tan = match (moved.next(), moved.next()) {
        (Some(a), Some(b)) => b / a,
        _ => 0.0,
    };
    norm.max(MIN_LOCATION_DISTANCE) * ellipse_distance(params, tan)
}

fn merge(parts: &[&[Solution]]) -> Vec<Solution> {
    let mut seen = HashSet::new();
    parts
        .iter()
        .flat_map(|p| p.iter())
        .filter(|s| seen.insert(s.id))
        .cloned()
        .collect()
}

fn member_ids(archive: &ParetoArchive) -> Vec<u64> {
    archive.members().iter().map(|s| s.id).collect()
}
