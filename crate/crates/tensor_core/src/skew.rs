use crate::tensor::CovariantTensor;
use crate::{Result, TensorError};

const SKEW_TOL: f64 = 1e-12;

/// Lexicographic pairs (i, j), i < j, indexing the unit-norm basis e_i ∧ e_j of Λ².
pub fn lambda2_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

/// Antisymmetric n×n matrix acting on vectors by X ↦ A X (row-major storage).
#[derive(Debug, Clone, PartialEq)]
pub struct SkewEndomorphism {
    n: usize,
    matrix: Vec<f64>,
}

impl SkewEndomorphism {
    pub fn new(n: usize, matrix: Vec<f64>) -> Result<Self> {
        if matrix.len() != n * n {
            return Err(TensorError::Shape(format!("skew matrix needs {} entries", n * n)));
        }
        let scale = matrix.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        for i in 0..n {
            for j in 0..n {
                if (matrix[i * n + j] + matrix[j * n + i]).abs() > SKEW_TOL * scale {
                    return Err(TensorError::Symmetry(format!("matrix not antisymmetric at ({i},{j})")));
                }
            }
        }
        Ok(SkewEndomorphism { n, matrix })
    }

    /// The skew matrix of a 2-form given by its coordinates in the unit-norm
    /// lexicographic Λ² basis: A_ij = v_(ij), A_ji = −v_(ij).
    pub fn from_lambda2(n: usize, coords: &[f64]) -> Result<Self> {
        let pairs = lambda2_pairs(n);
        if coords.len() != pairs.len() {
            return Err(TensorError::Shape(format!("expected {} Λ² coordinates", pairs.len())));
        }
        let mut m = vec![0.0; n * n];
        for (&(i, j), &v) in pairs.iter().zip(coords) {
            m[i * n + j] = v;
            m[j * n + i] = -v;
        }
        Ok(SkewEndomorphism { n, matrix: m })
    }

    /// Infinitesimal rotation taking e_i toward e_j: e_i ↦ e_j, e_j ↦ −e_i.
    pub fn rotation_generator(n: usize, i: usize, j: usize) -> Result<Self> {
        let mut m = vec![0.0; n * n];
        m[j * n + i] = 1.0;
        m[i * n + j] = -1.0;
        Self::new(n, m)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.matrix[row * self.n + col]
    }

    /// Matrix commutator [A, B] = AB − BA.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(TensorError::Shape("commutator of different dimensions".into()));
        }
        let n = self.n;
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += self.entry(i, k) * other.entry(k, j) - other.entry(i, k) * self.entry(k, j);
                }
                m[i * n + j] = acc;
            }
        }
        Ok(SkewEndomorphism { n, matrix: m })
    }
}

/// Derivation action (A·T)(X_1, …, X_p) = −Σ_a T(X_1, …, A X_a, …, X_p).
pub fn skew_action(a: &SkewEndomorphism, t: &CovariantTensor) -> Result<CovariantTensor> {
    let n = t.n();
    if a.n != n {
        return Err(TensorError::Shape(format!("skew endomorphism n={} vs tensor n={n}", a.n)));
    }
    let p = t.p();
    let src = t.components();
    let mut out = vec![0.0; src.len()];
    let stride: Vec<usize> = (0..p).map(|s| n.pow((p - 1 - s) as u32)).collect();
    for (k, idx) in t.multi_indices().enumerate() {
        let mut acc = 0.0;
        for slot in 0..p {
            let base = k - idx[slot] * stride[slot];
            for m in 0..n {
                let coef = a.entry(m, idx[slot]);
                if coef != 0.0 {
                    acc -= coef * src[base + m * stride[slot]];
                }
            }
        }
        out[k] = acc;
    }
    CovariantTensor::from_components(n, p, out)
}
