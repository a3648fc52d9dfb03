//! Synthetic instance generator.

use rand::seq::SliceRandom;

use super::model::{constraint_terms, cost_f1, ThroughputMatrix};
use super::spec::NetworkSpec;
use crate::rng::RngStream;

/// Critical fidelity used by generated instances.
pub const GENERATED_F_STAR: f64 = 0.8;

/// Penalty weight written into generated instances. Large enough that the
/// penalized optimum of a generated instance is feasible.
pub const GENERATED_PENALTY_WEIGHT: f64 = 20.0;

/// Seed of the small benchmark instance.
pub const REFERENCE_SEED: u64 = 7;

/// Throughput entries searched on the benchmark instance: both types at the
/// first two nodes.
pub const REFERENCE_ACTIVE_DIMS: [usize; 4] = [0, 1, 2, 3];

/// The N = 4, T = 2 benchmark instance and its searched dimensions.
pub fn reference_instance() -> (NetworkSpec, Vec<usize>) {
    (
        generate_network(4, 2, REFERENCE_SEED),
        REFERENCE_ACTIVE_DIMS.to_vec(),
    )
}

/// Draws a synthetic instance over the unit throughput box.
///
/// Regression coefficients are nonnegative, with quadratic terms scaled by
/// `1/T^2` and linear terms by `1/T`, so both surrogates stay O(1) on the
/// unit box. Half the nodes (rounded up) receive fidelities in `[F*, 1)` and
/// the rest in `[0.5, F*)`, so both classes are populated once `N >= 2`.
/// Constraint thresholds are calibrated so the uniform allocation at 0.25
/// is feasible while the cost cap binds well inside the box.
pub fn generate_network(nodes: usize, types: usize, seed: u64) -> NetworkSpec {
    assert!(nodes >= 1 && types >= 1, "generator needs N, T >= 1");
    let mut rng = RngStream::new(seed);
    let t2 = (types * types) as f64;
    let t1 = types as f64;

    let mut order: Vec<usize> = (0..nodes).collect();
    order.shuffle(&mut rng);
    let n_high = nodes.div_ceil(2);
    let mut high = vec![false; nodes];
    for &i in &order[..n_high] {
        high[i] = true;
    }
    let fidelities = (0..nodes)
        .map(|i| {
            (0..types)
                .map(|_| {
                    if high[i] {
                        rng.uniform(GENERATED_F_STAR, 1.0)
                    } else {
                        rng.uniform(0.5, GENERATED_F_STAR)
                    }
                })
                .collect()
        })
        .collect();

    let cube = |rng: &mut RngStream| -> Vec<Vec<Vec<f64>>> {
        (0..nodes)
            .map(|_| {
                (0..types)
                    .map(|_| (0..types).map(|_| rng.uniform(0.0, 1.0) / t2).collect())
                    .collect()
            })
            .collect()
    };
    let a = cube(&mut rng);
    let a_star = cube(&mut rng);
    let matrix = |rng: &mut RngStream, lo: f64, hi: f64, scale: f64| -> Vec<Vec<f64>> {
        (0..nodes)
            .map(|_| (0..types).map(|_| rng.uniform(lo, hi) * scale).collect())
            .collect()
    };
    let r = matrix(&mut rng, 0.0, 1.0, 1.0 / t1);
    let r_star = matrix(&mut rng, 0.0, 1.0, 1.0 / t1);
    let init_throughput = matrix(&mut rng, 0.0, 0.1, 1.0);
    let c: Vec<f64> = (0..nodes).map(|_| rng.uniform(0.05, 0.15)).collect();
    let c_star: Vec<f64> = (0..nodes).map(|_| rng.uniform(0.05, 0.15)).collect();
    let f_costs: Vec<f64> = (0..types).map(|_| rng.uniform(0.5, 1.5)).collect();
    let eta: Vec<f64> = (0..types).map(|_| rng.uniform(0.2, 1.0)).collect();
    let kappa: Vec<f64> = (0..types).map(|_| rng.uniform(0.1, 0.5)).collect();
    let upsilon: Vec<f64> = (0..nodes).map(|_| rng.uniform(1.0, 2.0)).collect();

    let mut spec = NetworkSpec {
        nodes,
        types,
        fidelities,
        f_star: GENERATED_F_STAR,
        a,
        r,
        c,
        a_star,
        r_star,
        c_star,
        init_throughput,
        f_costs,
        eta,
        kappa,
        lambda_mem: 1.0,
        upsilon,
        alpha: None,
        alpha_low: 1.0,
        alpha_high: 0.5,
        b_low: vec![vec![0.0; types]; nodes],
        b_up: vec![vec![1.0; types]; nodes],
        gamma: 0.0,
        lambda_bound: 0.0,
        pi_bound: 0.0,
        penalty_weights: [GENERATED_PENALTY_WEIGHT; 3],
    };

    let uniform = |v: f64| ThroughputMatrix::new_unchecked(nodes, types, vec![v; nodes * types]);
    let (zeta_lo, _, nu_lo) = constraint_terms(&spec, &uniform(0.25));
    spec.gamma = zeta_lo;
    spec.lambda_bound = cost_f1(&spec, &uniform(0.6));
    spec.pi_bound = nu_lo + 0.05 * (nodes * types) as f64;
    spec
}
