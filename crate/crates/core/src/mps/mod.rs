//! Uniform matrix product states: transfer matrices, boundary operators,
//! string order parameters and a dense contraction oracle.

pub mod boundary;
pub mod builtin;
pub mod dense;
pub mod order;
pub mod tensor;
pub mod transfer;

pub use boundary::{boundary_operators, left_inverse, range_projector, BoundaryOperatorPair};
pub use builtin::{builtin_tensor, Builtin, SymmetryData};
pub use dense::{dense_expectation, dense_state, DEFAULT_DENSE_CAP};
pub use order::{
    expectation_chain, string_order, twisted_string_order, win_probability_bound, Normalization,
    SiteOperator,
};
pub use tensor::MpsTensor;
pub use transfer::{correlation_length, fixed_point_transfer, transfer_matrix};
