//! Light cones of shallow Boolean circuits and the hard grid instances on
//! which they lose the triangle game.

pub mod circuit;
pub mod family;
pub mod grid;
pub mod search;

pub use circuit::{
    random_layered_circuit, tree_circuit, BooleanCircuit, ConeIndex, Gate, OutputBit,
};
pub use family::{generate_hard_instances, path_offset, HardFamily};
pub use grid::{
    box_side, cycle_through, partition_neighborhoods, Grid, GridInstance, NeighborhoodPartition,
};
pub use search::{
    broadcast_circuit, check_failure, check_failure_indexed, evaluate_family,
    find_failing_instance, local_circuit, perfect_nonlocal_circuit, FailureReport, SearchOutcome,
    SearchReport, SearchStats, Witness,
};
