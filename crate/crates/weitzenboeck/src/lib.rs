//! The Weitzenböck curvature term ℜ_p of the Lichnerowicz Laplacian Δ̄ + c·ℜ_p,
//! in index form, commutator form and curvature-operator eigenframe form, with
//! the symmetric 2-tensor specializations and the Einstein-operator shift.

use curvature::{sectional_curvature, CurvatureData};
use tensor_core::{
    class_basis, eigen_decompose_symmetric, inner_product, skew_action, CovariantTensor, SkewEndomorphism,
    SymmetryClass, TensorError,
};
use thiserror::Error;

/// Multiplies Σ Λ_α‖Ξ_α(T)‖² in the eigenframe form. Calibrated against the
/// index form for 1-tensors on space forms, where Σ_{i<j}(T_i² + T_j²) = (n−1)|T|².
pub const EIGENFRAME_NORMALIZATION: f64 = 1.0;

const SYMMETRIC_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeitzenboeckError {
    #[error("dimension mismatch: curvature n={curvature}, tensor n={tensor}")]
    Dimension { curvature: usize, tensor: usize },
    #[error("symmetry violation: {0}")]
    Symmetry(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

pub type Result<T> = std::result::Result<T, WeitzenboeckError>;

fn check_dims(c: &CurvatureData, t: &CovariantTensor) -> Result<()> {
    if c.n() != t.n() {
        return Err(WeitzenboeckError::Dimension { curvature: c.n(), tensor: t.n() });
    }
    Ok(())
}

fn strides(n: usize, p: usize) -> Vec<usize> {
    (0..p).map(|s| n.pow((p - 1 - s) as u32)).collect()
}

/// Index form:
/// (ℜT)_I = Σ_a Σ_j Ric_{i_a j} T_{I[a→j]} − 2 Σ_{a<b} Σ_{j,k} R_{j i_a k i_b} T_{I[a→j, b→k]}.
pub fn weitzenboeck_apply(c: &CurvatureData, t: &CovariantTensor) -> Result<CovariantTensor> {
    check_dims(c, t)?;
    let (n, p) = (t.n(), t.p());
    if p == 0 {
        return Ok(CovariantTensor::zeros(n, 0)?);
    }
    let src = t.components();
    let ric = c.ricci();
    let st = strides(n, p);
    let mut out = vec![0.0; src.len()];
    for (flat, idx) in t.multi_indices().enumerate() {
        let mut acc = 0.0;
        for a in 0..p {
            let base = flat - idx[a] * st[a];
            for j in 0..n {
                acc += ric[idx[a] * n + j] * src[base + j * st[a]];
            }
        }
        for a in 0..p {
            for b in a + 1..p {
                let base = flat - idx[a] * st[a] - idx[b] * st[b];
                let mut pair = 0.0;
                for j in 0..n {
                    for k in 0..n {
                        pair += c.r(j, idx[a], k, idx[b]) * src[base + j * st[a] + k * st[b]];
                    }
                }
                acc -= 2.0 * pair;
            }
        }
        out[flat] = acc;
    }
    Ok(CovariantTensor::from_components(n, p, out)?)
}

/// The curvature endomorphism R(e_y, e_z) as a skew matrix: entry (i, k) is R_ikyz.
pub fn curvature_endomorphism(c: &CurvatureData, y: usize, z: usize) -> SkewEndomorphism {
    let n = c.n();
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            m[i * n + k] = c.r(i, k, y, z);
        }
    }
    SkewEndomorphism::new(n, m).expect("curvature endomorphisms are skew")
}

/// Commutator form: (ℜT)(X_1, …, X_p) = Σ_a Σ_j (R(e_j, X_a)·T)(X_1, …, e_j, …, X_p),
/// with e_j in slot a and R(·,·) acting on T as a derivation.
pub fn weitzenboeck_apply_commutator_form(c: &CurvatureData, t: &CovariantTensor) -> Result<CovariantTensor> {
    check_dims(c, t)?;
    let (n, p) = (t.n(), t.p());
    if p == 0 {
        return Ok(CovariantTensor::zeros(n, 0)?);
    }
    // acted[j * n + z] = R(e_j, e_z)·T
    let mut acted = Vec::with_capacity(n * n);
    for j in 0..n {
        for z in 0..n {
            acted.push(skew_action(&curvature_endomorphism(c, j, z), t)?);
        }
    }
    let st = strides(n, p);
    let mut out = vec![0.0; t.components().len()];
    for (flat, idx) in t.multi_indices().enumerate() {
        let mut acc = 0.0;
        for a in 0..p {
            let base = flat - idx[a] * st[a];
            for j in 0..n {
                acc += acted[j * n + idx[a]].components()[base + j * st[a]];
            }
        }
        out[flat] = acc;
    }
    Ok(CovariantTensor::from_components(n, p, out)?)
}

/// g(ℜ_p T, T).
pub fn weitzenboeck_quadratic(c: &CurvatureData, t: &CovariantTensor) -> Result<f64> {
    Ok(inner_product(&weitzenboeck_apply(c, t)?, t)?)
}

/// Σ_α Λ_α ‖Ξ_α(T)‖² over an orthonormal eigenframe {Ξ_α} of the curvature operator.
pub fn weitzenboeck_quadratic_eigenframe(c: &CurvatureData, t: &CovariantTensor) -> Result<f64> {
    check_dims(c, t)?;
    let n = c.n();
    let eig = eigen_decompose_symmetric(c.lambda2_matrix(), n * (n - 1) / 2)?;
    let mut acc = 0.0;
    for (lam, v) in eig.values.iter().zip(&eig.vectors) {
        let xi = SkewEndomorphism::from_lambda2(n, v)?;
        acc += lam * skew_action(&xi, t)?.norm_sq();
    }
    Ok(EIGENFRAME_NORMALIZATION * acc)
}

fn require_symmetric2(phi: &CovariantTensor) -> Result<()> {
    if phi.p() != 2 {
        return Err(WeitzenboeckError::Symmetry(format!("expected a 2-tensor, got order {}", phi.p())));
    }
    let n = phi.n();
    let scale = phi.components().iter().fold(1.0f64, |m, x| m.max(x.abs()));
    for i in 0..n {
        for j in i + 1..n {
            if (phi.get(&[i, j]) - phi.get(&[j, i])).abs() > SYMMETRIC_TOL * scale {
                return Err(WeitzenboeckError::Symmetry(format!("φ not symmetric at ({i},{j})")));
            }
        }
    }
    Ok(())
}

/// (ℜ₂φ)_ij = R_ik φ_kj + R_jk φ_ki − 2 R_ikjl φ_kl for symmetric φ.
pub fn r2_apply(c: &CurvatureData, phi: &CovariantTensor) -> Result<CovariantTensor> {
    check_dims(c, phi)?;
    require_symmetric2(phi)?;
    let n = phi.n();
    let ric = c.ricci();
    let f = phi.components();
    let rphi = c.second_kind_apply(f).map_err(|e| WeitzenboeckError::Symmetry(e.to_string()))?;
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let mut v = -2.0 * rphi[i * n + j];
            for k in 0..n {
                v += ric[i * n + k] * f[k * n + j] + ric[j * n + k] * f[k * n + i];
            }
            out[i * n + j] = v;
            out[j * n + i] = v;
        }
    }
    Ok(CovariantTensor::from_components(n, 2, out)?)
}

/// 2 Σ_{i<j} sec(e_i ∧ e_j)(μ_i − μ_j)² in an eigenframe φ = Σ μ_i e_i ⊗ e_i.
pub fn r2_quadratic_eigenframe(c: &CurvatureData, phi: &CovariantTensor) -> Result<f64> {
    check_dims(c, phi)?;
    require_symmetric2(phi)?;
    let n = phi.n();
    let eig = eigen_decompose_symmetric(phi.components(), n)?;
    let mut acc = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let d = eig.values[i] - eig.values[j];
            if d == 0.0 {
                continue;
            }
            let sec = sectional_curvature(c, &eig.vectors[i], &eig.vectors[j])
                .map_err(|e| WeitzenboeckError::Symmetry(e.to_string()))?;
            acc += sec * d * d;
        }
    }
    Ok(2.0 * acc)
}

/// 2s/n: the shift between the Lichnerowicz (c = 1) and Einstein operators.
pub fn einstein_shift(s: f64, n: usize) -> f64 {
    2.0 * s / n as f64
}

/// Matrix of ℜ_p restricted to a symmetry class, in the orthonormal basis
/// returned by `class_basis` (row-major, dimension = basis length).
pub fn weitzenboeck_class_matrix(c: &CurvatureData, p: usize, class: SymmetryClass) -> Result<Vec<f64>> {
    let n = c.n();
    let basis = class_basis(n, p, class)?;
    let d = basis.len();
    let mut m = vec![0.0; d * d];
    for (b, vb) in basis.iter().enumerate() {
        let img = weitzenboeck_apply(c, &CovariantTensor::from_components(n, p, vb.clone())?)?;
        for (a, va) in basis.iter().enumerate() {
            m[a * d + b] = va.iter().zip(img.components()).map(|(x, y)| x * y).sum();
        }
    }
    for a in 0..d {
        for b in a + 1..d {
            let v = 0.5 * (m[a * d + b] + m[b * d + a]);
            m[a * d + b] = v;
            m[b * d + a] = v;
        }
    }
    Ok(m)
}
