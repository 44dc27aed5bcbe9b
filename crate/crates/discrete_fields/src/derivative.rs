use crate::field::TensorField;
use crate::fourier::derivative_matrix;
use crate::grid::Grid;
use crate::{FieldError, Result};
use rayon::prelude::*;
use std::f64::consts::PI;
use tensor_core::{skew_action, CovariantTensor, SkewEndomorphism, SymmetryClass};

const STENCIL: [(isize, f64); 4] = [(-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0)];

/// Matrix of T ↦ Ω·T on order-p frame components, where Ω rotates e_θ toward e_φ.
/// Along a parallel, ∇_{∂φ} e_θ = cosθ e_φ and ∇_{∂φ} e_φ = −cosθ e_θ.
pub(crate) fn rotation_action_matrix(p: usize) -> Vec<f64> {
    let omega = SkewEndomorphism::rotation_generator(2, 0, 1).expect("valid generator");
    let f = 2usize.pow(p as u32);
    let mut m = vec![0.0; f * f];
    for col in 0..f {
        let mut e = vec![0.0; f];
        e[col] = 1.0;
        let img = skew_action(&omega, &CovariantTensor::from_components(2, p, e).expect("shape")).expect("n = 2");
        for (row, v) in img.components().iter().enumerate() {
            m[row * f + col] = *v;
        }
    }
    m
}

/// Row/column of a θ-stencil point, continuing meridians through the poles. Across
/// a pole both frame vectors flip sign, so order-p components pick up (−1)^p.
fn pole_ghost(i: isize, j: usize, n_theta: usize, n_phi: usize, sign: f64) -> (usize, usize, f64) {
    let nt = n_theta as isize;
    if i < 0 {
        ((-1 - i) as usize, (j + n_phi / 2) % n_phi, sign)
    } else if i >= nt {
        ((2 * nt - 1 - i) as usize, (j + n_phi / 2) % n_phi, sign)
    } else {
        (i as usize, j, 1.0)
    }
}

/// DF(Y, X_1, …, X_p) = (∇_Y F)(X_1, …, X_p); the derivative slot comes first.
/// Torus: Fourier differentiation per axis. Sphere: fourth-order centered
/// differences in θ and spectral differentiation in φ, plus the frame connection.
pub fn covariant_derivative(f: &TensorField) -> Result<TensorField> {
    let grid = f.grid().clone();
    let n = grid.dim();
    let fiber = f.fiber_len();
    let src = f.values();
    let mut out = vec![0.0; src.len() * n];
    match &grid {
        Grid::Torus { periods, sizes } => {
            let mats: Vec<Vec<f64>> = periods.iter().zip(sizes).map(|(l, &s)| derivative_matrix(s, *l)).collect();
            let strides: Vec<usize> = (0..n).map(|a| sizes[a + 1..].iter().product()).collect();
            out.par_chunks_mut(n * fiber).enumerate().for_each(|(node, chunk)| {
                let idx = grid.node_index(node);
                for a in 0..n {
                    let na = sizes[a];
                    let base = node - idx[a] * strides[a];
                    let row = &mats[a][idx[a] * na..(idx[a] + 1) * na];
                    for (l, &d) in row.iter().enumerate() {
                        if d == 0.0 {
                            continue;
                        }
                        let s = &src[(base + l * strides[a]) * fiber..][..fiber];
                        for c in 0..fiber {
                            chunk[a * fiber + c] += d * s[c];
                        }
                    }
                }
            });
        }
        Grid::Sphere { radius, n_theta, n_phi } => {
            let (nt, np) = (*n_theta, *n_phi);
            let h = PI / nt as f64;
            let dphi = derivative_matrix(np, 2.0 * PI);
            let rot = rotation_action_matrix(f.p());
            let sign = if f.p() % 2 == 0 { 1.0 } else { -1.0 };
            out.par_chunks_mut(2 * fiber).enumerate().for_each(|(node, chunk)| {
                let (i, j) = (node / np, node % np);
                let theta = (i as f64 + 0.5) * h;
                let (st, ct) = theta.sin_cos();
                for &(o, coef) in &STENCIL {
                    let (si, sj, sg) = pole_ghost(i as isize + o, j, nt, np, sign);
                    let s = &src[(si * np + sj) * fiber..][..fiber];
                    let w = coef * sg / (12.0 * h * radius);
                    for c in 0..fiber {
                        chunk[c] += w * s[c];
                    }
                }
                let row = &dphi[j * np..(j + 1) * np];
                let scale = 1.0 / (radius * st);
                for (l, &d) in row.iter().enumerate() {
                    if d == 0.0 {
                        continue;
                    }
                    let s = &src[(i * np + l) * fiber..][..fiber];
                    for c in 0..fiber {
                        chunk[fiber + c] += scale * d * s[c];
                    }
                }
                let here = &src[node * fiber..][..fiber];
                for a in 0..fiber {
                    let acc: f64 = (0..fiber).map(|b| rot[a * fiber + b] * here[b]).sum();
                    chunk[fiber + a] += scale * ct * acc;
                }
            });
        }
    }
    TensorField::from_values(grid, f.p() + 1, SymmetryClass::General, out)
}

/// The adjoint of `covariant_derivative` under the quadrature inner product,
/// D*G = −Σ_i (∇_{e_i} G)(e_i, …) in the continuum.
pub fn adjoint_derivative(g: &TensorField) -> Result<TensorField> {
    if g.p() == 0 {
        return Err(FieldError::Shape("adjoint derivative needs order >= 1".into()));
    }
    let grid = g.grid().clone();
    let n = grid.dim();
    let p = g.p() - 1;
    let fiber = n.pow(p as u32);
    let src = g.values();
    let nodes = grid.num_nodes();
    let mut out = vec![0.0; nodes * fiber];
    match &grid {
        Grid::Torus { periods, sizes } => {
            // Each per-axis derivative matrix is antisymmetric and the weights are uniform.
            let mats: Vec<Vec<f64>> = periods.iter().zip(sizes).map(|(l, &s)| derivative_matrix(s, *l)).collect();
            let strides: Vec<usize> = (0..n).map(|a| sizes[a + 1..].iter().product()).collect();
            out.par_chunks_mut(fiber).enumerate().for_each(|(node, chunk)| {
                let idx = grid.node_index(node);
                for a in 0..n {
                    let na = sizes[a];
                    let base = node - idx[a] * strides[a];
                    let row = &mats[a][idx[a] * na..(idx[a] + 1) * na];
                    for (l, &d) in row.iter().enumerate() {
                        if d == 0.0 {
                            continue;
                        }
                        let s = &src[((base + l * strides[a]) * n + a) * fiber..][..fiber];
                        for c in 0..fiber {
                            chunk[c] -= d * s[c];
                        }
                    }
                }
            });
        }
        Grid::Sphere { radius, n_theta, n_phi } => {
            let (nt, np) = (*n_theta, *n_phi);
            let h = PI / nt as f64;
            let w = grid.weights();
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            // θ part: transpose of the stencil, scattered, under the weights.
            for node in 0..nodes {
                let (i, j) = (node / np, node % np);
                let s = &src[node * 2 * fiber..][..fiber];
                for &(o, coef) in &STENCIL {
                    let (ti, tj, sg) = pole_ghost(i as isize + o, j, nt, np, sign);
                    let target = ti * np + tj;
                    let factor = coef * sg / (12.0 * h * radius) * w[node] / w[target];
                    for c in 0..fiber {
                        out[target * fiber + c] += factor * s[c];
                    }
                }
            }
            // φ part: −(1/(r sinθ))(∂_φ + cosθ Ω·) on the second derivative slot.
            let dphi = derivative_matrix(np, 2.0 * PI);
            let rot = rotation_action_matrix(p);
            out.par_chunks_mut(fiber).enumerate().for_each(|(node, chunk)| {
                let (i, j) = (node / np, node % np);
                let theta = (i as f64 + 0.5) * h;
                let (st, ct) = theta.sin_cos();
                let scale = 1.0 / (radius * st);
                let row = &dphi[j * np..(j + 1) * np];
                for (l, &d) in row.iter().enumerate() {
                    if d == 0.0 {
                        continue;
                    }
                    let s = &src[((i * np + l) * 2 + 1) * fiber..][..fiber];
                    for c in 0..fiber {
                        chunk[c] -= scale * d * s[c];
                    }
                }
                let here = &src[(node * 2 + 1) * fiber..][..fiber];
                for a in 0..fiber {
                    let acc: f64 = (0..fiber).map(|b| rot[a * fiber + b] * here[b]).sum();
                    chunk[a] -= scale * ct * acc;
                }
            });
        }
    }
    TensorField::from_values(grid, p, SymmetryClass::General, out)
}
