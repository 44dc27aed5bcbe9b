//! Tensor fields on a flat torus (Fourier collocation) and on the round 2-sphere
//! (latitude–longitude grid with half-cell pole offset), their covariant
//! derivative and adjoint, assembled Laplace-type operators and spectra.
//!
//! Field components are stored per node in an orthonormal frame: the coordinate
//! axes on the torus and (e_θ, e_φ) on the sphere.

mod derivative;
mod field;
mod fourier;
mod grid;
mod identities;
mod operator;
mod sector;
mod spectrum;

pub use derivative::{adjoint_derivative, covariant_derivative};
pub use field::TensorField;
pub use grid::{Grid, MAX_FIELD_ORDER, MAX_SPHERE_PHI, MAX_SPHERE_THETA, MAX_TORUS_NODES};
pub use identities::{bochner_residual, kato_gap, trace_commutation_residual, tt_check, TtDiagnostics};
pub use operator::{assemble, AssembledOperator, OperatorKind};
pub use sector::{fitted_sector_profile, wigner_d, SectorProfile};
pub use spectrum::{default_kernel_tol, smallest_eigenpairs, spectrum, EigenPairs, SpectralReport};

use curvature::CurvatureError;
use tensor_core::TensorError;
use thiserror::Error;
use weitzenboeck::WeitzenboeckError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("unsupported: {0}")]
    Capability(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("eigensolver did not converge after {iterations} iterations (worst residual {worst:e})")]
    NonConvergence { iterations: usize, worst: f64, residuals: Vec<f64> },
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Weitzenboeck(#[from] WeitzenboeckError),
}

pub type Result<T> = std::result::Result<T, FieldError>;
