//! Objectives, costs, node classification and constraint violations of the
//! entanglement-allocation problem. Every function here is a pure function of
//! a [`NetworkSpec`] and a [`ThroughputMatrix`].

use serde::{Deserialize, Serialize};

use super::spec::NetworkSpec;
use crate::error::{Error, Result};

/// The `N x T` decision matrix of received throughputs, stored node-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputMatrix {
    nodes: usize,
    types: usize,
    entries: Vec<f64>,
}

impl ThroughputMatrix {
    /// Builds a matrix and checks it against the spec's shape and box.
    pub fn new(spec: &NetworkSpec, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != spec.dim() {
            return Err(Error::DimensionMismatch {
                expected: spec.dim(),
                found: entries.len(),
            });
        }
        for i in 0..spec.nodes {
            for j in 0..spec.types {
                let v = entries[i * spec.types + j];
                if !(v >= spec.b_low[i][j] && v <= spec.b_up[i][j]) {
                    return Err(Error::validation(
                        format!("X[{i}][{j}]"),
                        format!("{v} outside [{}, {}]", spec.b_low[i][j], spec.b_up[i][j]),
                    ));
                }
            }
        }
        Ok(Self::new_unchecked(spec.nodes, spec.types, entries))
    }

    pub fn from_rows(spec: &NetworkSpec, rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(spec, rows.iter().flatten().copied().collect())
    }

    /// Skips the box check. Used for finite differences that step outside it.
    pub fn new_unchecked(nodes: usize, types: usize, entries: Vec<f64>) -> Self {
        assert_eq!(entries.len(), nodes * types, "matrix shape mismatch");
        Self {
            nodes,
            types,
            entries,
        }
    }

    pub fn zeros(spec: &NetworkSpec) -> Self {
        Self::new_unchecked(spec.nodes, spec.types, vec![0.0; spec.dim()])
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn types(&self) -> usize {
        self.types
    }

    pub fn get(&self, node: usize, ty: usize) -> f64 {
        self.entries[node * self.types + ty]
    }

    pub fn row(&self, node: usize) -> &[f64] {
        &self.entries[node * self.types..(node + 1) * self.types]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new_unchecked(
            self.nodes,
            self.types,
            self.entries.iter().map(|v| v * factor).collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeClass {
    Low,
    High,
}

/// Split of the node set by received fidelity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodePartition {
    pub low: Vec<usize>,
    pub high: Vec<usize>,
}

impl NodePartition {
    pub fn class_of(&self, node: usize) -> NodeClass {
        if self.high.binary_search(&node).is_ok() {
            NodeClass::High
        } else {
            NodeClass::Low
        }
    }
}

/// Degrees of constraint violation and the weighted penalty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
    pub penalty: f64,
    pub weights: [f64; 3],
}

impl ViolationRecord {
    pub fn none() -> Self {
        Self {
            h1: 0.0,
            h2: 0.0,
            h3: 0.0,
            penalty: 0.0,
            weights: [1.0; 3],
        }
    }

    pub fn from_degrees(h: [f64; 3], weights: [f64; 3]) -> Self {
        let penalty = weights[0] * h[0] + weights[1] * h[1] + weights[2] * h[2];
        Self {
            h1: h[0],
            h2: h[1],
            h3: h[2],
            penalty,
            weights,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.h1 == 0.0 && self.h2 == 0.0 && self.h3 == 0.0
    }
}

impl Default for ViolationRecord {
    fn default() -> Self {
        Self::none()
    }
}

/// Minimization-form objectives: negated main objective and the two costs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector {
    pub g_neg: f64,
    pub f1: f64,
    pub f2: f64,
}

impl ObjectiveVector {
    pub fn g(&self) -> f64 {
        -self.g_neg
    }

    pub fn to_vec(self) -> Vec<f64> {
        vec![self.g_neg, self.f1, self.f2]
    }
}

/// Main objective split by node class, plus the combined and diagnostic forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassObjectives {
    pub g_low: f64,
    pub g_high: f64,
    /// High-class products weighted by received systems, plus low-class
    /// products weighted by received systems and the total cost.
    pub combined: f64,
    /// Product of total cost and total memory cost (diagnostic only).
    pub cost_product: f64,
    /// Sum of per-node memory costs (diagnostic only).
    pub memory_total: f64,
}

fn check_node(spec: &NetworkSpec, i: usize) -> Result<()> {
    if i < spec.nodes {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange {
            what: "node",
            index: i,
            len: spec.nodes,
        })
    }
}

/// Throughput plus its initialization offset, per type, for node `i`.
pub fn effective_throughput(spec: &NetworkSpec, x: &ThroughputMatrix, i: usize) -> Vec<f64> {
    x.row(i)
        .iter()
        .zip(&spec.init_throughput[i])
        .map(|(b, b0)| b + b0)
        .collect()
}

fn quadratic_surrogate(a: &[Vec<f64>], r: &[f64], c: f64, bt: &[f64]) -> f64 {
    let mut acc = c;
    for (j, bj) in bt.iter().enumerate() {
        acc += r[j] * bj;
        for (k, bk) in bt.iter().enumerate() {
            acc += a[j][k] * bj * bk;
        }
    }
    acc
}

/// Cumulative entanglement fidelity surrogate of node `i`.
pub fn node_fidelity_objective(spec: &NetworkSpec, x: &ThroughputMatrix, i: usize) -> Result<f64> {
    check_node(spec, i)?;
    let bt = effective_throughput(spec, x, i);
    Ok(quadratic_surrogate(&spec.a[i], &spec.r[i], spec.c[i], &bt))
}

/// Expected cumulative relative entropy of entanglement surrogate of node `i`.
pub fn node_relent_objective(spec: &NetworkSpec, x: &ThroughputMatrix, i: usize) -> Result<f64> {
    check_node(spec, i)?;
    let bt = effective_throughput(spec, x, i);
    Ok(quadratic_surrogate(&spec.a_star[i], &spec.r_star[i], spec.c_star[i], &bt))
}

fn node_products(spec: &NetworkSpec, x: &ThroughputMatrix) -> Vec<(f64, f64)> {
    (0..spec.nodes)
        .map(|i| {
            (
                node_fidelity_objective(spec, x, i).expect("node index in range"),
                node_relent_objective(spec, x, i).expect("node index in range"),
            )
        })
        .collect()
}

/// Nodes whose every fidelity reaches `F*` are high; all others, including
/// nodes straddling `F*`, are low.
pub fn classify_nodes(spec: &NetworkSpec) -> NodePartition {
    let mut partition = NodePartition {
        low: Vec::new(),
        high: Vec::new(),
    };
    for (i, row) in spec.fidelities.iter().enumerate() {
        let min = row.iter().copied().fold(f64::INFINITY, f64::min);
        if min >= spec.f_star {
            partition.high.push(i);
        } else {
            partition.low.push(i);
        }
    }
    partition
}

/// Per-node quality coefficients: explicit overrides, else by class.
pub fn quality_coefficients(spec: &NetworkSpec, partition: &NodePartition) -> Vec<f64> {
    match &spec.alpha {
        Some(alpha) => alpha.clone(),
        None => (0..spec.nodes)
            .map(|i| match partition.class_of(i) {
                NodeClass::Low => spec.alpha_low,
                NodeClass::High => spec.alpha_high,
            })
            .collect(),
    }
}

/// Total purification and error-correction cost.
pub fn cost_f1(spec: &NetworkSpec, x: &ThroughputMatrix) -> f64 {
    (0..spec.nodes)
        .map(|i| {
            x.row(i)
                .iter()
                .zip(&spec.f_costs)
                .map(|(b, f)| f * b)
                .sum::<f64>()
        })
        .sum()
}

/// Quantum memory coefficient of type `j` at node `i`.
pub fn memory_coefficient(spec: &NetworkSpec, x: &ThroughputMatrix, i: usize, j: usize) -> f64 {
    spec.eta[j] * x.get(i, j) + spec.kappa[j] * spec.init_throughput[i][j]
}

/// Memory-usage cost of a single node.
pub fn node_memory_cost(spec: &NetworkSpec, x: &ThroughputMatrix, alpha: &[f64], i: usize) -> f64 {
    let total: f64 = x.row(i).iter().sum();
    spec.lambda_mem * alpha[i] * total / spec.upsilon[i]
}

/// Total memory-usage cost.
pub fn cost_f2(spec: &NetworkSpec, x: &ThroughputMatrix, partition: &NodePartition) -> f64 {
    let alpha = quality_coefficients(spec, partition);
    (0..spec.nodes)
        .map(|i| node_memory_cost(spec, x, &alpha, i))
        .sum()
}

/// Sum over nodes of fidelity times relative entropy.
pub fn main_objective(spec: &NetworkSpec, x: &ThroughputMatrix) -> f64 {
    node_products(spec, x).iter().map(|(f, d)| f * d).sum()
}

pub fn class_objectives(
    spec: &NetworkSpec,
    x: &ThroughputMatrix,
    partition: &NodePartition,
) -> ClassObjectives {
    let products = node_products(spec, x);
    let cost = cost_f1(spec, x);
    let memory = cost_f2(spec, x, partition);
    let received = |i: usize| x.row(i).iter().sum::<f64>();

    let mut out = ClassObjectives {
        g_low: 0.0,
        g_high: 0.0,
        combined: 0.0,
        cost_product: cost * memory,
        memory_total: memory,
    };
    for &i in &partition.high {
        let p = products[i].0 * products[i].1;
        out.g_high += p;
        out.combined += received(i) * p;
    }
    for &i in &partition.low {
        let p = products[i].0 * products[i].1;
        out.g_low += p;
        out.combined += received(i) * p * cost;
    }
    out
}

/// Summed fidelity surrogate, cost total and storage dispersion, in that order.
pub fn constraint_terms(spec: &NetworkSpec, x: &ThroughputMatrix) -> (f64, f64, f64) {
    let zeta: f64 = (0..spec.nodes)
        .map(|i| node_fidelity_objective(spec, x, i).expect("node index in range"))
        .sum();
    let chi = cost_f1(spec, x);
    let n = spec.nodes as f64;
    let nu = (0..spec.types)
        .map(|j| {
            let w: Vec<f64> = (0..spec.nodes).map(|i| memory_coefficient(spec, x, i, j)).collect();
            let mean = w.iter().sum::<f64>() / n;
            w.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
        })
        .sum();
    (zeta, chi, nu)
}

pub fn constraint_violations(
    spec: &NetworkSpec,
    x: &ThroughputMatrix,
    weights: [f64; 3],
) -> ViolationRecord {
    let (zeta, chi, nu) = constraint_terms(spec, x);
    let h = [
        (spec.gamma - zeta).max(0.0),
        (chi - spec.lambda_bound).max(0.0),
        (nu - spec.pi_bound).max(0.0),
    ];
    ViolationRecord::from_degrees(h, weights)
}

pub fn objective_vector(spec: &NetworkSpec, x: &ThroughputMatrix) -> ObjectiveVector {
    objective_vector_with(spec, x, &classify_nodes(spec))
}

pub fn objective_vector_with(
    spec: &NetworkSpec,
    x: &ThroughputMatrix,
    partition: &NodePartition,
) -> ObjectiveVector {
    ObjectiveVector {
        g_neg: -main_objective(spec, x),
        f1: cost_f1(spec, x),
        f2: cost_f2(spec, x, partition),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::spec::fixtures::zeros;

    fn x(spec: &NetworkSpec, entries: Vec<f64>) -> ThroughputMatrix {
        ThroughputMatrix::new(spec, entries).unwrap()
    }

    #[test]
    fn fidelity_constant_term_only() {
        let mut spec = zeros(1, 2);
        spec.c[0] = 0.7;
        let m = x(&spec, vec![3.0, 1.0]);
        assert_eq!(node_fidelity_objective(&spec, &m, 0).unwrap(), 0.7);
    }

    #[test]
    fn fidelity_linear_hand_value() {
        let mut spec = zeros(1, 1);
        spec.r[0][0] = 1.0;
        spec.init_throughput[0][0] = 1.0;
        let m = x(&spec, vec![2.0]);
        assert_eq!(node_fidelity_objective(&spec, &m, 0).unwrap(), 3.0);
    }

    #[test]
    fn fidelity_quadratic_hand_value() {
        let mut spec = zeros(1, 1);
        spec.a[0][0][0] = 0.1;
        let m = x(&spec, vec![3.0]);
        let v = node_fidelity_objective(&spec, &m, 0).unwrap();
        assert!((v - 0.9).abs() < 1e-12, "{v}");
    }

    #[test]
    fn node_index_out_of_range() {
        let spec = zeros(2, 1);
        let m = ThroughputMatrix::zeros(&spec);
        assert!(matches!(
            node_fidelity_objective(&spec, &m, 2),
            Err(Error::IndexOutOfRange { index: 2, len: 2, .. })
        ));
        assert!(node_relent_objective(&spec, &m, 5).is_err());
    }

    #[test]
    fn relent_zero_and_symmetry() {
        let mut spec = zeros(2, 2);
        let m = x(&spec, vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(node_relent_objective(&spec, &m, 1).unwrap(), 0.0);

        spec.a = vec![vec![vec![0.1, 0.2], vec![0.3, 0.4]]; 2];
        spec.r = vec![vec![0.5, 0.6]; 2];
        spec.c = vec![0.7, 0.8];
        spec.a_star = spec.a.clone();
        spec.r_star = spec.r.clone();
        spec.c_star = spec.c.clone();
        for i in 0..2 {
            assert_eq!(
                node_relent_objective(&spec, &m, i).unwrap(),
                node_fidelity_objective(&spec, &m, i).unwrap()
            );
        }
    }

    #[test]
    fn relent_linear_hand_value() {
        let mut spec = zeros(1, 2);
        spec.r_star[0] = vec![1.0, 2.0];
        spec.c_star[0] = 0.5;
        let m = x(&spec, vec![1.0, 1.0]);
        assert_eq!(node_relent_objective(&spec, &m, 0).unwrap(), 3.5);
    }

    #[test]
    fn classification_rule_table() {
        let mut spec = zeros(3, 2);
        spec.f_star = 0.9;
        spec.fidelities = vec![vec![0.95, 0.92], vec![0.7, 0.85], vec![0.85, 0.95]];
        let p = classify_nodes(&spec);
        assert_eq!(p.high, vec![0]);
        assert_eq!(p.low, vec![1, 2]);
        assert_eq!(p.class_of(0), NodeClass::High);
        assert_eq!(p.class_of(2), NodeClass::Low);
    }

    #[test]
    fn f1_hand_value_and_linearity() {
        let mut spec = zeros(1, 1);
        spec.f_costs = vec![2.0];
        assert_eq!(cost_f1(&spec, &x(&spec, vec![3.0])), 6.0);
        assert_eq!(cost_f1(&spec, &ThroughputMatrix::zeros(&spec)), 0.0);

        let mut spec = zeros(2, 3);
        spec.f_costs = vec![0.5, 1.5, 2.5];
        let m = x(&spec, vec![1.0, 2.0, 3.0, 0.5, 0.25, 4.0]);
        assert_eq!(cost_f1(&spec, &m.scaled(2.0)), 2.0 * cost_f1(&spec, &m));
    }

    #[test]
    fn f2_hand_value_and_memory_coefficient() {
        let mut spec = zeros(1, 1);
        spec.lambda_mem = 1.0;
        spec.alpha = Some(vec![1.0]);
        spec.upsilon = vec![2.0];
        let m = x(&spec, vec![4.0]);
        let p = classify_nodes(&spec);
        assert_eq!(cost_f2(&spec, &m, &p), 2.0);
        assert_eq!(cost_f2(&spec, &ThroughputMatrix::zeros(&spec), &p), 0.0);

        spec.eta = vec![0.5];
        spec.kappa = vec![0.25];
        spec.init_throughput = vec![vec![2.0]];
        assert_eq!(memory_coefficient(&spec, &m, 0, 0), 2.5);
    }

    #[test]
    fn alpha_follows_class_by_default() {
        let mut spec = zeros(2, 1);
        spec.f_star = 0.9;
        spec.fidelities = vec![vec![0.95], vec![0.5]];
        let p = classify_nodes(&spec);
        assert_eq!(quality_coefficients(&spec, &p), vec![0.5, 1.0]);
    }

    #[test]
    fn main_objective_products() {
        let mut spec = zeros(1, 1);
        spec.c = vec![2.0];
        spec.c_star = vec![3.0];
        let m = ThroughputMatrix::zeros(&spec);
        assert_eq!(main_objective(&spec, &m), 6.0);

        let mut spec = zeros(2, 1);
        spec.c = vec![2.0, 0.0];
        spec.c_star = vec![3.0, 7.0];
        assert_eq!(main_objective(&spec, &ThroughputMatrix::zeros(&spec)), 6.0);

        spec.c = vec![2.0, 0.5];
        spec.c_star = vec![3.0, 3.0];
        assert_eq!(main_objective(&spec, &ThroughputMatrix::zeros(&spec)), 7.5);
    }

    #[test]
    fn class_objectives_split() {
        let mut spec = zeros(2, 1);
        spec.f_star = 0.9;
        spec.fidelities = vec![vec![0.5], vec![0.95]];
        spec.c = vec![1.0, 1.0];
        spec.c_star = vec![2.0, 5.0];
        let m = ThroughputMatrix::zeros(&spec);
        let p = classify_nodes(&spec);
        let co = class_objectives(&spec, &m, &p);
        assert_eq!((co.g_low, co.g_high), (2.0, 5.0));
        assert_eq!(co.g_low + co.g_high, main_objective(&spec, &m));

        spec.fidelities = vec![vec![0.95], vec![0.95]];
        let p = classify_nodes(&spec);
        assert_eq!(class_objectives(&spec, &m, &p).g_low, 0.0);
    }

    #[test]
    fn violation_degrees() {
        let mut spec = zeros(1, 1);
        spec.c = vec![8.0];
        spec.gamma = 10.0;
        let m = ThroughputMatrix::zeros(&spec);
        let v = constraint_violations(&spec, &m, [1.0; 3]);
        assert_eq!(v.h1, 2.0);
        assert_eq!(v.penalty, 2.0);

        spec.gamma = 8.0;
        let v = constraint_violations(&spec, &m, [1.0; 3]);
        assert_eq!(v.h1, 0.0);
        assert!(v.is_feasible());
    }

    #[test]
    fn cost_and_storage_violations() {
        let mut spec = zeros(2, 1);
        spec.f_costs = vec![1.0];
        spec.lambda_bound = 3.0;
        spec.eta = vec![1.0];
        spec.pi_bound = 0.5;
        let m = x(&spec, vec![1.0, 3.0]);
        let v = constraint_violations(&spec, &m, [1.0, 2.0, 3.0]);
        assert_eq!(v.h2, 1.0);
        // w = {1, 3}, mean 2, squared deviations sum to 2
        assert_eq!(v.h3, 1.5);
        assert_eq!(v.penalty, 2.0 + 4.5);

        let even = x(&spec, vec![1.0, 1.0]);
        let v = constraint_violations(&spec, &even, [1.0; 3]);
        assert_eq!(v.h3, 0.0);
    }

    #[test]
    fn objective_vector_sign() {
        let mut spec = zeros(1, 1);
        spec.c = vec![2.0];
        spec.c_star = vec![3.0];
        spec.f_costs = vec![1.0];
        spec.alpha = Some(vec![1.0]);
        let m = x(&spec, vec![2.0]);
        let ov = objective_vector(&spec, &m);
        assert_eq!(ov.g_neg, -6.0);
        assert_eq!(ov.f1, 2.0);
        assert_eq!(ov.f2, 2.0);
        assert_eq!(ov.g(), 6.0);

        let z = zeros(2, 2);
        let ov = objective_vector(&z, &ThroughputMatrix::zeros(&z));
        assert_eq!(ov.to_vec(), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn matrix_rejects_out_of_box() {
        let spec = zeros(1, 2);
        let err = ThroughputMatrix::new(&spec, vec![1.0, -0.5]).unwrap_err();
        assert!(err.to_string().contains("X[0][1]"), "{err}");
        assert!(ThroughputMatrix::new(&spec, vec![1.0]).is_err());
    }
}
