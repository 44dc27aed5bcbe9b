use crate::{Result, TensorError};
use faer::{Mat, Side};

/// Eigenpairs of a real symmetric matrix, eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

/// Diagonalizes a symmetric `dim × dim` matrix given in row-major order.
pub fn eigen_decompose_symmetric(m: &[f64], dim: usize) -> Result<SymmetricEigen> {
    if m.len() != dim * dim {
        return Err(TensorError::Shape(format!("expected {dim}×{dim} matrix")));
    }
    if dim == 0 {
        return Ok(SymmetricEigen { values: vec![], vectors: vec![] });
    }
    let scale = m.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
    for i in 0..dim {
        for j in i + 1..dim {
            if (m[i * dim + j] - m[j * dim + i]).abs() > 1e-10 * scale {
                return Err(TensorError::Symmetry(format!("matrix not symmetric at ({i},{j})")));
            }
        }
    }
    let a = Mat::<f64>::from_fn(dim, dim, |i, j| 0.5 * (m[i * dim + j] + m[j * dim + i]));
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| TensorError::Symmetry(format!("eigendecomposition failed: {e:?}")))?;
    let s = evd.S();
    let u = evd.U();
    let mut values = Vec::with_capacity(dim);
    let mut vectors = Vec::with_capacity(dim);
    for k in (0..dim).rev() {
        values.push(s[k]);
        vectors.push((0..dim).map(|i| u[(i, k)]).collect());
    }
    Ok(SymmetricEigen { values, vectors })
}
