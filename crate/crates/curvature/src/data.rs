use crate::{CurvatureError, Result};
use rand::Rng;
use tensor_core::{eigen_decompose_symmetric, lambda2_pairs};

const SYM_TOL: f64 = 1e-12;

/// Pointwise curvature in an orthonormal frame plus the derived operator matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureData {
    n: usize,
    riemann: Vec<f64>,
    ricci: Vec<f64>,
    scalar: f64,
    lambda2_matrix: Vec<f64>,
    second_kind_matrix: Vec<f64>,
    /// Orthogonal block decomposition (dimension, sectional curvature) when the
    /// tensor is known to be a product of space forms in this frame.
    blocks: Option<Vec<(usize, f64)>>,
}

#[inline]
fn idx4(n: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * n + j) * n + k) * n + l
}

/// Orthonormal basis of symmetric 2-tensors: E_ii, then (E_ij + E_ji)/√2 for i < j,
/// interleaved in lexicographic (i ≤ j) order. Each entry is a row-major n×n matrix.
pub(crate) fn s2_basis(n: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        for j in i..n {
            let mut m = vec![0.0; n * n];
            if i == j {
                m[i * n + i] = 1.0;
            } else {
                m[i * n + j] = h;
                m[j * n + i] = h;
            }
            out.push(m);
        }
    }
    out
}

impl CurvatureData {
    /// Builds curvature data from a full Riemann array, checking the algebraic
    /// symmetries and first Bianchi identity.
    pub fn from_riemann(n: usize, riemann: Vec<f64>) -> Result<Self> {
        Self::build(n, riemann, None)
    }

    fn build(n: usize, riemann: Vec<f64>, blocks: Option<Vec<(usize, f64)>>) -> Result<Self> {
        if n < 2 {
            return Err(CurvatureError::Dimension(format!("n = {n}, need n >= 2")));
        }
        if riemann.len() != n.pow(4) {
            return Err(CurvatureError::Dimension(format!("riemann needs {} entries", n.pow(4))));
        }
        check_symmetries(n, &riemann)?;

        let mut ricci = vec![0.0; n * n];
        for k in 0..n {
            for l in 0..n {
                ricci[k * n + l] = (0..n).map(|i| riemann[idx4(n, i, k, i, l)]).sum();
            }
        }
        let scalar = (0..n).map(|i| ricci[i * n + i]).sum();

        let pairs = lambda2_pairs(n);
        let np = pairs.len();
        let mut lambda2_matrix = vec![0.0; np * np];
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for (b, &(k, l)) in pairs.iter().enumerate() {
                lambda2_matrix[a * np + b] = riemann[idx4(n, i, j, k, l)];
            }
        }

        let basis = s2_basis(n);
        let ns = basis.len();
        let images: Vec<Vec<f64>> = basis.iter().map(|e| second_kind_apply_raw(n, &riemann, e)).collect();
        let mut second_kind_matrix = vec![0.0; ns * ns];
        for a in 0..ns {
            for b in 0..ns {
                second_kind_matrix[a * ns + b] =
                    basis[a].iter().zip(&images[b]).map(|(x, y)| x * y).sum();
            }
        }
        // Exact symmetry in floating point; the analytic operators are symmetric.
        symmetrize(&mut lambda2_matrix, np);
        symmetrize(&mut second_kind_matrix, ns);

        Ok(CurvatureData { n, riemann, ricci, scalar, lambda2_matrix, second_kind_matrix, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn riemann(&self) -> &[f64] {
        &self.riemann
    }
    pub fn r(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.riemann[idx4(self.n, i, j, k, l)]
    }
    /// Row-major n×n Ricci matrix.
    pub fn ricci(&self) -> &[f64] {
        &self.ricci
    }
    pub fn scalar(&self) -> f64 {
        self.scalar
    }
    /// Curvature operator on 2-forms in the unit-norm lexicographic basis.
    pub fn lambda2_matrix(&self) -> &[f64] {
        &self.lambda2_matrix
    }
    /// Curvature operator of the second kind in the orthonormal S² basis.
    pub fn second_kind_matrix(&self) -> &[f64] {
        &self.second_kind_matrix
    }
    pub fn blocks(&self) -> Option<&[(usize, f64)]> {
        self.blocks.as_deref()
    }

    /// Eigenvalues of the curvature operator, descending.
    pub fn lambda2_eigenvalues(&self) -> Vec<f64> {
        let np = self.n * (self.n - 1) / 2;
        eigen_decompose_symmetric(&self.lambda2_matrix, np).map(|e| e.values).unwrap_or_default()
    }

    /// Applies the second-kind operator (R̊φ)_ij = R_ikjl φ_kl to a row-major matrix.
    pub fn second_kind_apply(&self, phi: &[f64]) -> Result<Vec<f64>> {
        if phi.len() != self.n * self.n {
            return Err(CurvatureError::Dimension("φ must be n×n".into()));
        }
        Ok(second_kind_apply_raw(self.n, &self.riemann, phi))
    }

    /// True when Ricci = (s/n)·g within `tol`.
    pub fn is_einstein(&self, tol: f64) -> bool {
        let n = self.n;
        let lam = self.scalar / n as f64;
        (0..n).all(|i| (0..n).all(|j| {
            let target = if i == j { lam } else { 0.0 };
            (self.ricci[i * n + j] - target).abs() <= tol
        }))
    }

    /// The same curvature expressed in the frame e'_i = Σ_a q_ai e_a, where `q` is
    /// a row-major orthogonal matrix. Block structure is dropped.
    pub fn rotated(&self, q: &[f64]) -> Result<Self> {
        let n = self.n;
        if q.len() != n * n {
            return Err(CurvatureError::Dimension("rotation must be n×n".into()));
        }
        let mut cur = self.riemann.clone();
        for slot in 0..4 {
            let stride = n.pow(3 - slot as u32);
            let mut next = vec![0.0; cur.len()];
            for (flat, out) in next.iter_mut().enumerate() {
                let i_new = (flat / stride) % n;
                let base = flat - i_new * stride;
                *out = (0..n).map(|a| q[a * n + i_new] * cur[base + a * stride]).sum();
            }
            cur = next;
        }
        Self::build(n, cur, None)
    }
}

fn symmetrize(m: &mut [f64], d: usize) {
    for i in 0..d {
        for j in i + 1..d {
            let v = 0.5 * (m[i * d + j] + m[j * d + i]);
            m[i * d + j] = v;
            m[j * d + i] = v;
        }
    }
}

fn second_kind_apply_raw(n: usize, r: &[f64], phi: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                for l in 0..n {
                    acc += r[idx4(n, i, k, j, l)] * phi[k * n + l];
                }
            }
            out[i * n + j] = acc;
        }
    }
    out
}

fn check_symmetries(n: usize, r: &[f64]) -> Result<()> {
    let scale = r.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let tol = SYM_TOL * scale;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = r[idx4(n, i, j, k, l)];
                    let checks = [
                        ("R_ijkl = -R_jikl", v + r[idx4(n, j, i, k, l)]),
                        ("R_ijkl = -R_ijlk", v + r[idx4(n, i, j, l, k)]),
                        ("R_ijkl = R_klij", v - r[idx4(n, k, l, i, j)]),
                        ("first Bianchi", v + r[idx4(n, i, k, l, j)] + r[idx4(n, i, l, j, k)]),
                    ];
                    for (name, resid) in checks {
                        if resid.abs() > tol {
                            return Err(CurvatureError::Symmetry(format!(
                                "{name} fails at ({i},{j},{k},{l}) by {resid:e}"
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Constant curvature κ: R_ijkl = κ(δ_ik δ_jl − δ_il δ_jk).
pub fn space_form_curvature(n: usize, kappa: f64) -> Result<CurvatureData> {
    if n < 2 {
        return Err(CurvatureError::Dimension(format!("space form needs n >= 2, got {n}")));
    }
    let mut r = vec![0.0; n.pow(4)];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                r[idx4(n, i, j, i, j)] = kappa;
                r[idx4(n, i, j, j, i)] = -kappa;
            }
        }
    }
    CurvatureData::build(n, r, Some(vec![(n, kappa)]))
}

/// Riemannian product: block-diagonal Riemann tensor, mixed components zero.
/// Flat one-dimensional factors are added through `ModelSpace::product`.
pub fn product_curvature(factors: &[CurvatureData]) -> Result<CurvatureData> {
    let parts: Vec<FactorPart> = factors.iter().map(FactorPart::Curved).collect();
    product_of_parts(&parts)
}

pub(crate) enum FactorPart<'a> {
    Curved(&'a CurvatureData),
    Flat1,
}

pub(crate) fn product_of_parts(parts: &[FactorPart<'_>]) -> Result<CurvatureData> {
    if parts.len() < 2 {
        return Err(CurvatureError::Dimension("a product needs at least two factors".into()));
    }
    let n: usize = parts
        .iter()
        .map(|p| match p {
            FactorPart::Curved(c) => c.n,
            FactorPart::Flat1 => 1,
        })
        .sum();
    let mut r = vec![0.0; n.pow(4)];
    let mut blocks = Some(Vec::new());
    let mut off = 0;
    for part in parts {
        match part {
            FactorPart::Flat1 => {
                if let Some(b) = blocks.as_mut() {
                    b.push((1, 0.0));
                }
                off += 1;
            }
            FactorPart::Curved(c) => {
                let m = c.n;
                for i in 0..m {
                    for j in 0..m {
                        for k in 0..m {
                            for l in 0..m {
                                r[idx4(n, off + i, off + j, off + k, off + l)] = c.r(i, j, k, l);
                            }
                        }
                    }
                }
                match (blocks.as_mut(), c.blocks.as_ref()) {
                    (Some(b), Some(cb)) => b.extend(cb.iter().copied()),
                    _ => blocks = None,
                }
                off += m;
            }
        }
    }
    CurvatureData::build(n, r, blocks)
}

/// Kulkarni–Nomizu product of two symmetric n×n matrices.
pub(crate) fn kulkarni_nomizu(n: usize, h: &[f64], k: &[f64]) -> Vec<f64> {
    let mut r = vec![0.0; n.pow(4)];
    for i in 0..n {
        for j in 0..n {
            for a in 0..n {
                for b in 0..n {
                    r[idx4(n, i, j, a, b)] = h[i * n + a] * k[j * n + b] + h[j * n + b] * k[i * n + a]
                        - h[i * n + b] * k[j * n + a]
                        - h[j * n + a] * k[i * n + b];
                }
            }
        }
    }
    r
}

fn random_symmetric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(-1.0..1.0);
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }
    m
}

/// A random algebraic curvature tensor: a sum of Kulkarni–Nomizu products of
/// random symmetric matrices. Every such sum has the Riemann symmetries.
pub fn random_algebraic_curvature<R: Rng + ?Sized>(n: usize, terms: usize, rng: &mut R) -> Result<CurvatureData> {
    let mut r = vec![0.0; n.pow(4)];
    for _ in 0..terms.max(1) {
        let h = random_symmetric(n, rng);
        let k = random_symmetric(n, rng);
        for (acc, v) in r.iter_mut().zip(kulkarni_nomizu(n, &h, &k)) {
            *acc += 0.5 * v;
        }
    }
    CurvatureData::from_riemann(n, r)
}

/// A random orthogonal n×n matrix (row-major) from Gram–Schmidt on uniform entries.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        for c in &cols {
            let d: f64 = c.iter().zip(&v).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(c).for_each(|(x, y)| *x -= d * y);
        }
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nv > 1e-6 {
            cols.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    let mut q = vec![0.0; n * n];
    for (j, c) in cols.iter().enumerate() {
        for i in 0..n {
            q[i * n + j] = c[i];
        }
    }
    q
}
