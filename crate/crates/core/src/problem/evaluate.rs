use super::model::{
    classify_nodes, constraint_violations, objective_vector_with, NodePartition, ThroughputMatrix,
};
use super::spec::NetworkSpec;
use crate::engine::{Evaluation, Evaluator};
use crate::error::{Error, Result};
use crate::space::Bounds;

/// Adapts a [`NetworkSpec`] to the optimizer.
///
/// The search position covers the `active` entries of the flattened
/// throughput matrix; the remaining entries are held at their lower bound.
#[derive(Debug, Clone)]
pub struct NetworkProblem {
    spec: NetworkSpec,
    partition: NodePartition,
    active: Vec<usize>,
    bounds: Bounds,
}

impl NetworkProblem {
    pub fn new(spec: NetworkSpec) -> Result<Self> {
        let all = (0..spec.dim()).collect();
        Self::with_active_dims(spec, all)
    }

    pub fn with_active_dims(spec: NetworkSpec, active: Vec<usize>) -> Result<Self> {
        spec.validate()?;
        if active.is_empty() {
            return Err(Error::InfeasibleConfig("no active dimensions".into()));
        }
        let mut seen = vec![false; spec.dim()];
        for &k in &active {
            if k >= spec.dim() {
                return Err(Error::IndexOutOfRange {
                    what: "active dimension",
                    index: k,
                    len: spec.dim(),
                });
            }
            if std::mem::replace(&mut seen[k], true) {
                return Err(Error::InvalidArgument(format!("active dimension {k} repeated")));
            }
        }
        let full = spec.bounds();
        let bounds = Bounds::new(
            active.iter().map(|&k| full.low[k]).collect(),
            active.iter().map(|&k| full.up[k]).collect(),
        )?;
        let partition = classify_nodes(&spec);
        Ok(Self {
            spec,
            partition,
            active,
            bounds,
        })
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn partition(&self) -> &NodePartition {
        &self.partition
    }

    pub fn active_dims(&self) -> &[usize] {
        &self.active
    }

    /// Full node-major throughput entries for a search position.
    pub fn expand(&self, position: &[f64]) -> Vec<f64> {
        let mut full: Vec<f64> = self.spec.b_low.iter().flatten().copied().collect();
        for (&k, &v) in self.active.iter().zip(position) {
            full[k] = v;
        }
        full
    }

    pub fn matrix(&self, position: &[f64]) -> ThroughputMatrix {
        ThroughputMatrix::new_unchecked(self.spec.nodes, self.spec.types, self.expand(position))
    }
}

impl Evaluator for NetworkProblem {
    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn objective_count(&self) -> usize {
        3
    }

    fn evaluate(&self, position: &[f64]) -> Evaluation {
        let x = self.matrix(position);
        Evaluation {
            objectives: objective_vector_with(&self.spec, &x, &self.partition).to_vec(),
            violations: constraint_violations(&self.spec, &x, self.spec.penalty_weights),
        }
    }

    fn expand(&self, position: &[f64]) -> Vec<f64> {
        NetworkProblem::expand(self, position)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::generate::generate_network;
    use crate::problem::model::objective_vector;

    #[test]
    fn inactive_dims_pinned_to_lower_bound() {
        let spec = generate_network(4, 2, 7);
        let p = NetworkProblem::with_active_dims(spec.clone(), vec![0, 1, 2, 3]).unwrap();
        assert_eq!(p.bounds().dim(), 4);
        let full = p.expand(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(full, vec![0.1, 0.2, 0.3, 0.4, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(Evaluator::expand(&p, &[0.1, 0.2, 0.3, 0.4]), full);
        let e = p.evaluate(&[0.1, 0.2, 0.3, 0.4]);
        let x = ThroughputMatrix::new(&spec, full).unwrap();
        assert_eq!(e.objectives, objective_vector(&spec, &x).to_vec());
    }

    #[test]
    fn bad_active_dims_rejected() {
        let spec = generate_network(2, 2, 1);
        assert!(NetworkProblem::with_active_dims(spec.clone(), vec![]).is_err());
        assert!(NetworkProblem::with_active_dims(spec.clone(), vec![4]).is_err());
        assert!(NetworkProblem::with_active_dims(spec, vec![1, 1]).is_err());
    }
}
