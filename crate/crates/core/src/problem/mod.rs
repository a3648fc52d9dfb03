//! The quantum-network entanglement-allocation problem.

mod evaluate;
mod generate;
mod model;
mod recommend;
mod spec;

pub use evaluate::NetworkProblem;
pub use generate::{
    generate_network, reference_instance, GENERATED_F_STAR, GENERATED_PENALTY_WEIGHT,
    REFERENCE_ACTIVE_DIMS, REFERENCE_SEED,
};
pub use model::{
    class_objectives, classify_nodes, constraint_terms, constraint_violations, cost_f1, cost_f2,
    effective_throughput, main_objective, memory_coefficient, node_fidelity_objective,
    node_memory_cost, node_relent_objective, objective_vector, objective_vector_with,
    quality_coefficients, ClassObjectives, NodeClass, NodePartition, ObjectiveVector,
    ThroughputMatrix, ViolationRecord,
};
pub use recommend::{recommend_strategy, Recommendation, Strategy};
pub use spec::{load_network_spec, save_network_spec, NetworkSpec};
