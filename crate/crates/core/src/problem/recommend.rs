//! Throughput sensitivities and the class-based allocation recommendation.

use serde::{Deserialize, Serialize};

use super::model::{
    classify_nodes, node_fidelity_objective, node_relent_objective, NodeClass, ThroughputMatrix,
};
use super::spec::NetworkSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// High-class node: more throughput buys fidelity.
    IncreaseThroughput,
    /// Low-class node: fidelity gains are marginal, favour relative entropy.
    PrioritizeRelativeEntropy,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::IncreaseThroughput => "increase throughput to maximize fidelity",
            Strategy::PrioritizeRelativeEntropy => "prioritize relative entropy of entanglement",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub node: usize,
    pub class: NodeClass,
    /// d F_i / d b for a uniform throughput increment across all types.
    pub fidelity_sensitivity: f64,
    /// d E(D_i) / d b for the same increment.
    pub relent_sensitivity: f64,
    pub strategy: Strategy,
}

fn shifted(x: &ThroughputMatrix, node: usize, by: f64) -> ThroughputMatrix {
    let mut entries = x.as_slice().to_vec();
    let t = x.types();
    for v in &mut entries[node * t..(node + 1) * t] {
        *v += by;
    }
    ThroughputMatrix::new_unchecked(x.nodes(), t, entries)
}

/// Central-difference sensitivities of node `node`'s surrogates to a uniform
/// throughput increment `delta`, and the strategy implied by its class.
pub fn recommend_strategy(
    spec: &NetworkSpec,
    x: &ThroughputMatrix,
    node: usize,
    delta: f64,
) -> Result<Recommendation> {
    if node >= spec.nodes {
        return Err(Error::IndexOutOfRange {
            what: "node",
            index: node,
            len: spec.nodes,
        });
    }
    let scale = x
        .row(node)
        .iter()
        .zip(&spec.init_throughput[node])
        .map(|(b, b0)| (b + b0).abs())
        .fold(1.0, f64::max);
    let min = f64::EPSILON.sqrt() * scale;
    if !(delta >= min) {
        return Err(Error::StepUnderflow { delta, min });
    }

    let up = shifted(x, node, delta);
    let down = shifted(x, node, -delta);
    let fidelity_sensitivity = (node_fidelity_objective(spec, &up, node)?
        - node_fidelity_objective(spec, &down, node)?)
        / (2.0 * delta);
    let relent_sensitivity = (node_relent_objective(spec, &up, node)?
        - node_relent_objective(spec, &down, node)?)
        / (2.0 * delta);

    let class = classify_nodes(spec).class_of(node);
    let strategy = match class {
        NodeClass::High => Strategy::IncreaseThroughput,
        NodeClass::Low => Strategy::PrioritizeRelativeEntropy,
    };
    Ok(Recommendation {
        node,
        class,
        fidelity_sensitivity,
        relent_sensitivity,
        strategy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::model::effective_throughput;
    use crate::problem::spec::fixtures::zeros;
    use crate::rng::RngStream;

    /// Directional derivative of `sum A b b + sum R b + c` along the all-ones vector.
    fn analytic(a: &[Vec<f64>], r: &[f64], bt: &[f64]) -> f64 {
        let t = bt.len();
        let mut d = r.iter().sum::<f64>();
        for j in 0..t {
            for k in 0..t {
                d += (a[j][k] + a[k][j]) * bt[k];
            }
        }
        d
    }

    #[test]
    fn zero_model_has_zero_sensitivity() {
        let spec = zeros(2, 2);
        let x = ThroughputMatrix::new(&spec, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let rec = recommend_strategy(&spec, &x, 1, 1e-3).unwrap();
        assert_eq!(rec.fidelity_sensitivity, 0.0);
        assert_eq!(rec.relent_sensitivity, 0.0);
    }

    #[test]
    fn linear_model_sensitivity_is_row_sum() {
        let mut spec = zeros(1, 3);
        spec.r[0] = vec![0.5, 1.0, 2.0];
        for entries in [vec![0.0, 0.0, 0.0], vec![5.0, 1.0, 9.0]] {
            let x = ThroughputMatrix::new(&spec, entries).unwrap();
            let rec = recommend_strategy(&spec, &x, 0, 1e-2).unwrap();
            assert!((rec.fidelity_sensitivity - 3.5).abs() < 1e-9);
        }
    }

    #[test]
    fn quadratic_matches_analytic_gradient() {
        let mut rng = RngStream::new(11);
        for _ in 0..50 {
            let t = rng.int_range(1, 4);
            let mut spec = zeros(2, t);
            for i in 0..2 {
                for j in 0..t {
                    spec.r[i][j] = rng.uniform(0.0, 2.0);
                    spec.r_star[i][j] = rng.uniform(0.0, 2.0);
                    spec.init_throughput[i][j] = rng.uniform(0.0, 1.0);
                    for k in 0..t {
                        spec.a[i][j][k] = rng.uniform(0.0, 1.0);
                        spec.a_star[i][j][k] = rng.uniform(0.0, 1.0);
                    }
                }
            }
            let entries: Vec<f64> = (0..2 * t).map(|_| rng.uniform(0.0, 10.0)).collect();
            let x = ThroughputMatrix::new(&spec, entries).unwrap();
            let rec = recommend_strategy(&spec, &x, 1, 1e-3).unwrap();
            let bt = effective_throughput(&spec, &x, 1);
            let df = analytic(&spec.a[1], &spec.r[1], &bt);
            let dd = analytic(&spec.a_star[1], &spec.r_star[1], &bt);
            assert!((rec.fidelity_sensitivity - df).abs() <= 1e-6 * df.abs().max(1.0));
            assert!((rec.relent_sensitivity - dd).abs() <= 1e-6 * dd.abs().max(1.0));
        }
    }

    #[test]
    fn strategy_follows_class() {
        let mut spec = zeros(2, 1);
        spec.f_star = 0.9;
        spec.fidelities = vec![vec![0.95], vec![0.3]];
        let x = ThroughputMatrix::zeros(&spec);
        let hi = recommend_strategy(&spec, &x, 0, 0.1).unwrap();
        let lo = recommend_strategy(&spec, &x, 1, 0.1).unwrap();
        assert_eq!(hi.strategy, Strategy::IncreaseThroughput);
        assert_eq!(lo.strategy, Strategy::PrioritizeRelativeEntropy);
        assert_eq!(hi.strategy.to_string(), "increase throughput to maximize fidelity");
    }

    #[test]
    fn tiny_step_rejected() {
        let spec = zeros(1, 1);
        let x = ThroughputMatrix::new(&spec, vec![5.0]).unwrap();
        assert!(matches!(
            recommend_strategy(&spec, &x, 0, 1e-12),
            Err(Error::StepUnderflow { .. })
        ));
        assert!(recommend_strategy(&spec, &x, 0, -1.0).is_err());
        assert!(recommend_strategy(&spec, &x, 3, 1.0).is_err());
    }
}
