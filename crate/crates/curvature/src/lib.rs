//! Pointwise curvature of model spaces: Riemann, Ricci and scalar curvature in an
//! orthonormal frame, the curvature operator on 2-forms, the curvature operator of
//! the second kind on symmetric 2-tensors, and sectional curvature extremes.
//!
//! Convention: R_ijkl = ⟨R(e_k, e_l) e_j, e_i⟩, so a space form of curvature κ has
//! R_ijkl = κ(δ_ik δ_jl − δ_il δ_jk) and R_ijij = κ.

mod data;
mod model;
mod sectional;

pub use data::{random_algebraic_curvature, random_orthogonal, space_form_curvature, product_curvature, CurvatureData};
pub use model::{Factor, ModelKind, ModelSpace, Topology};
pub use sectional::{a0_estimate, sec_extremes, sec_extremes_seeded, sectional_curvature};

use tensor_core::TensorError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurvatureError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("degenerate plane: X and Y are linearly dependent")]
    DegeneratePlane,
    #[error("curvature symmetry violated: {0}")]
    Symmetry(String),
    #[error("cannot parse space '{0}': {1}")]
    Parse(String, String),
    #[error("unsupported: {0}")]
    Capability(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

pub type Result<T> = std::result::Result<T, CurvatureError>;
