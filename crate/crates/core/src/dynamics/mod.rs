//! Voter model with zealots as an executable chain.
//!
//! At each step one free voter, chosen uniformly, copies the opinion of a
//! uniformly chosen neighbour. Zealots are never updated. On the complete
//! graph the neighbour is drawn by index arithmetic over the three node
//! blocks, so no adjacency is stored.

mod edge_list;
mod graph;
mod sim;

pub use edge_list::EdgeList;
pub use graph::{build_network, Graph, NetworkSpec, NodeKind, SparseGraph};
pub use sim::{
    advance, estimate_accuracy, relaxation_steps, replica_rng, run_to_stationarity, step, AccuracyEstimate,
    SamplingPlan, SimRng, SimState, SimulationConfig, SimulationReport,
};
