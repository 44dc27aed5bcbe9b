use crate::field::TensorField;
use crate::grid::Grid;
use crate::operator::{assemble, AssembledOperator, OperatorKind};
use crate::{FieldError, Result};
use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use tensor_core::{eigen_decompose_symmetric, SymmetryClass};

const MAX_ITERATIONS: usize = 500;
const EXTRA_VECTORS: usize = 10;
/// Iterations between block enlargements while unconverged.
const GROW_EVERY: usize = 40;

/// Smallest eigenpairs in spectral coordinates, ascending.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// ‖A v − λ v‖ per pair.
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct SpectralReport {
    /// The k smallest eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub kernel_dim: usize,
    /// Quadrature-orthonormal fields spanning the computed kernel.
    pub kernel_basis: Vec<TensorField>,
    pub residuals: Vec<f64>,
    pub kernel_tol: f64,
    pub iterations: usize,
    /// ‖A‖_∞ of the assembled matrix.
    pub matrix_norm: f64,
}

fn apply_block(op: &AssembledOperator, x: &Mat<f64>) -> Mat<f64> {
    let cols: Vec<Vec<f64>> = (0..x.ncols())
        .into_par_iter()
        .map(|j| op.matvec(&(0..x.nrows()).map(|i| x[(i, j)]).collect::<Vec<_>>()))
        .collect();
    Mat::from_fn(x.nrows(), x.ncols(), |i, j| cols[j][i])
}

/// Block shift-invert subspace iteration with Rayleigh–Ritz extraction. The
/// shifted matrix is factored by sparse Cholesky.
pub fn smallest_eigenpairs(op: &AssembledOperator, k: usize) -> Result<EigenPairs> {
    let n = op.dim();
    if k == 0 || k >= n {
        return Err(FieldError::Shape(format!("need 1 <= k < {n}, got {k}")));
    }
    let mut b = (k + EXTRA_VECTORS).min(n);
    let (lo, norm) = op.gershgorin();
    // Smallest shift of the ladder 1, 2, 4, … whose shifted matrix factors; the
    // Gershgorin shift always does.
    let floor = 1.0 - lo.min(0.0);
    let mut sigma = 1.0f64;
    let llt = loop {
        let s = sigma.min(floor);
        match op.shifted_lower(s)?.sp_cholesky(Side::Lower) {
            Ok(l) => break l,
            Err(e) if s >= floor => return Err(FieldError::Degenerate(format!("shifted matrix is not positive definite: {e:?}"))),
            Err(_) => sigma *= 2.0,
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0x1ac);
    let mut x = Mat::<f64>::from_fn(n, b, |_, _| rng.random::<f64>() - 0.5);
    let mut values: Vec<f64>;
    let mut residuals = vec![f64::INFINITY; k];
    for iter in 1..=MAX_ITERATIONS {
        // A cluster straddling the block edge converges slowly; widen the block.
        if iter % GROW_EVERY == 0 && b < n {
            let nb = (2 * b).min(n);
            let old = x;
            x = Mat::<f64>::from_fn(n, nb, |i, j| if j < b { old[(i, j)] } else { rng.random::<f64>() - 0.5 });
            b = nb;
        }
        llt.solve_in_place(x.as_mut());
        let q = x.qr().compute_thin_Q();
        let aq = apply_block(op, &q);
        let h = q.transpose() * &aq;
        let hv: Vec<f64> = (0..b * b).map(|t| 0.5 * (h[(t / b, t % b)] + h[(t % b, t / b)])).collect();
        let eig = eigen_decompose_symmetric(&hv, b)?;
        let ritz = Mat::<f64>::from_fn(b, b, |i, j| eig.vectors[b - 1 - j][i]);
        values = eig.values.iter().rev().copied().collect();
        x = &q * &ritz;
        let ax = &aq * &ritz;
        residuals = (0..k)
            .map(|j| (0..n).map(|i| (ax[(i, j)] - values[j] * x[(i, j)]).powi(2)).sum::<f64>().sqrt())
            .collect();
        let done = (0..k).all(|j| residuals[j] <= 1e-11 * values[j].abs().max(1.0) + 1e-14 * norm);
        if done {
            return Ok(EigenPairs {
                values: values[..k].to_vec(),
                vectors: (0..k).map(|j| (0..n).map(|i| x[(i, j)]).collect()).collect(),
                residuals,
                iterations: iter,
            });
        }
    }
    let worst = residuals.iter().fold(0.0f64, |m, r| m.max(*r));
    Err(FieldError::NonConvergence { iterations: MAX_ITERATIONS, worst, residuals })
}

/// Kernel tolerance at the operator's resolution. Torus: 1e−8 times the largest
/// computed eigenvalue (at least 1e−8). Sphere: 1e−3 times the first nonzero
/// eigenvalue of the scalar rough Laplacian on the same grid.
pub fn default_kernel_tol(op: &AssembledOperator, eigenvalues: &[f64]) -> Result<f64> {
    match op.grid() {
        Grid::Torus { .. } => {
            let top = eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            Ok(1e-8 * top.max(1.0))
        }
        Grid::Sphere { .. } => {
            let scalar = assemble(&op.grid().space(), 0, SymmetryClass::General, OperatorKind::Rough, &op.grid().resolution())?;
            let pairs = smallest_eigenpairs(&scalar, 2)?;
            Ok(1e-3 * pairs.values[1])
        }
    }
}

/// The k smallest eigenvalues with kernel extraction. `kernel_tol` defaults to
/// `default_kernel_tol`.
pub fn spectrum(op: &AssembledOperator, k: usize, kernel_tol: Option<f64>) -> Result<SpectralReport> {
    let pairs = smallest_eigenpairs(op, k)?;
    let kernel_tol = match kernel_tol {
        Some(t) => t,
        None => default_kernel_tol(op, &pairs.values)?,
    };
    let mut kernel_basis = Vec::new();
    for (v, vec) in pairs.values.iter().zip(&pairs.vectors) {
        if v.abs() < kernel_tol {
            kernel_basis.push(op.from_spectral(vec)?);
        }
    }
    Ok(SpectralReport {
        eigenvalues: pairs.values,
        kernel_dim: kernel_basis.len(),
        kernel_basis,
        residuals: pairs.residuals,
        kernel_tol,
        iterations: pairs.iterations,
        matrix_norm: op.norm_inf(),
    })
}
