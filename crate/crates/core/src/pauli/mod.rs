//! Pauli strings, weighted sums of them, and the rewriting engine.

mod matrix;
mod phase;
mod string;
mod sum;
pub mod text;
pub mod transform;

pub use matrix::DEFAULT_MATRIX_CAP;
pub use phase::Phase;
pub use string::{BasisMasks, Pauli, PauliString, MAX_SITES};
pub use sum::{OperatorSum, Term};
pub use text::parse;
pub use transform::{
    default_search_depth, kw_dualize, kw_dualize_inverse, reduce_to_single, rotate_x, rotate_x_inverse, Reduction,
    Transform, TransformChain,
};
