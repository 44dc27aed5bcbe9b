//! Pointwise multilinear algebra for covariant p-tensors stored in an
//! orthonormal frame, so the metric is the identity and indices never need
//! raising or lowering.

mod eigen;
mod skew;
mod tensor;

pub use eigen::{eigen_decompose_symmetric, SymmetricEigen};
pub use skew::{lambda2_pairs, skew_action, SkewEndomorphism};
pub use tensor::{
    class_basis, class_dimension, inner_product, project_symmetry, trace_g, CovariantTensor,
    MultiIndexIter, SymmetryClass,
};

use thiserror::Error;

/// Largest supported fiber dimension.
pub const MAX_DIM: usize = 8;
/// Largest supported covariant order.
pub const MAX_ORDER: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TensorError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("order error: {0}")]
    Order(String),
    #[error("slot index {slot} out of range for order {p}")]
    Index { slot: usize, p: usize },
    #[error("symmetry violation: {0}")]
    Symmetry(String),
    #[error("size limit exceeded: n={n}, p={p} (n <= {MAX_DIM}, p <= {MAX_ORDER})")]
    Limit { n: usize, p: usize },
}

pub type Result<T> = std::result::Result<T, TensorError>;

pub(crate) fn check_limits(n: usize, p: usize) -> Result<()> {
    if n < 1 || n > MAX_DIM || p > MAX_ORDER {
        return Err(TensorError::Limit { n, p });
    }
    Ok(())
}
