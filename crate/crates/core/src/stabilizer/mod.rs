//! Pauli algebra, stabilizer tableaux and the cluster-ring strategy.

pub mod pauli;
pub mod strategy;
pub mod tableau;

pub use pauli::PauliString;
pub use strategy::{
    build_contexts, cluster_contexts, global_checks, play_round, play_round_traced, play_rounds,
    string_operator, twisted_string_operator, ContextPair, GlobalCheck, MeasurementContext,
    Orientation, SiteOperators, TraceEntry,
};
pub use tableau::{cluster_generator, cluster_state, StabilizerTableau};
