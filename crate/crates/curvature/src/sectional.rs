use crate::{CurvatureData, CurvatureError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tensor_core::{class_basis, eigen_decompose_symmetric, SymmetryClass};

const DEFAULT_SEED: u64 = 0x5ec;
const STEP_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 500;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rxyxy(c: &CurvatureData, x: &[f64], y: &[f64]) -> f64 {
    let n = c.n();
    let r = c.riemann();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let xy = x[i] * y[j];
            if xy == 0.0 {
                continue;
            }
            for k in 0..n {
                let base = ((i * n + j) * n + k) * n;
                let inner: f64 = (0..n).map(|l| r[base + l] * y[l]).sum();
                acc += xy * x[k] * inner;
            }
        }
    }
    acc
}

/// Sectional curvature of span{X, Y}: R(X,Y,X,Y)/(|X|²|Y|² − ⟨X,Y⟩²).
pub fn sectional_curvature(c: &CurvatureData, x: &[f64], y: &[f64]) -> Result<f64> {
    let n = c.n();
    if x.len() != n || y.len() != n {
        return Err(CurvatureError::Dimension(format!("vectors must have length {n}")));
    }
    let (xx, yy, xy) = (dot(x, x), dot(y, y), dot(x, y));
    let area = xx * yy - xy * xy;
    if area <= 1e-14 * (xx * yy).max(f64::MIN_POSITIVE) {
        return Err(CurvatureError::DegeneratePlane);
    }
    Ok(rxyxy(c, x, y) / area)
}

/// (K_min, K_max) with the default seed.
pub fn sec_extremes(c: &CurvatureData, budget: usize) -> (f64, f64) {
    sec_extremes_seeded(c, budget, DEFAULT_SEED)
}

/// Sectional curvature extremes. Exact from the block structure for space forms
/// and their products; otherwise the best of `budget` random starts refined on
/// the Grassmannian of 2-planes.
pub fn sec_extremes_seeded(c: &CurvatureData, budget: usize, seed: u64) -> (f64, f64) {
    if let Some(blocks) = c.blocks() {
        let curved: Vec<f64> = blocks.iter().filter(|(d, _)| *d >= 2).map(|(_, k)| *k).collect();
        if blocks.len() == 1 {
            return (blocks[0].1, blocks[0].1);
        }
        // Mixed planes between factors are flat.
        let lo = curved.iter().fold(0.0f64, |a, &k| a.min(k));
        let hi = curved.iter().fold(0.0f64, |a, &k| a.max(k));
        return (lo, hi);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for _ in 0..budget.max(1) {
        let (x, y) = random_plane(c.n(), &mut rng);
        hi = hi.max(refine(c, x.clone(), y.clone(), 1.0));
        lo = lo.min(-refine(c, x, y, -1.0));
    }
    (lo.min(hi), hi)
}

fn random_plane(n: usize, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    loop {
        let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut y: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let nx = dot(&x, &x).sqrt();
        if nx < 1e-3 {
            continue;
        }
        x.iter_mut().for_each(|v| *v /= nx);
        let d = dot(&x, &y);
        y.iter_mut().zip(&x).for_each(|(v, u)| *v -= d * u);
        let ny = dot(&y, &y).sqrt();
        if ny < 1e-3 {
            continue;
        }
        y.iter_mut().for_each(|v| *v /= ny);
        return (x, y);
    }
}

/// Maximizes sign·K over orthonormal pairs. Each half-step holds one vector fixed
/// and moves the other to the top eigenvector of the sectional quadratic form
/// restricted to the orthogonal complement, which is the exact solution of the
/// projected ascent subproblem. Stops when the value changes by < 1e−10.
fn refine(c: &CurvatureData, mut x: Vec<f64>, mut y: Vec<f64>, sign: f64) -> f64 {
    let mut val = sign * rxyxy(c, &x, &y);
    for _ in 0..MAX_SWEEPS {
        x = best_partner(c, &y, sign);
        y = best_partner(c, &x, sign);
        let next = sign * rxyxy(c, &x, &y);
        let change = (next - val).abs();
        val = next;
        if change < STEP_TOL {
            break;
        }
    }
    val
}

fn best_partner(c: &CurvatureData, y: &[f64], sign: f64) -> Vec<f64> {
    let n = c.n();
    // Q_ik = R(e_i, Y, e_k, Y), then compress to the complement of Y.
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                for l in 0..n {
                    acc += c.r(i, j, k, l) * y[j] * y[l];
                }
            }
            q[i * n + k] = sign * acc;
        }
    }
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
    for e in 0..n {
        let mut v = vec![0.0; n];
        v[e] = 1.0;
        let d = dot(&v, y);
        v.iter_mut().zip(y).for_each(|(a, b)| *a -= d * b);
        for b in &basis {
            let d = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(a, c)| *a -= d * c);
        }
        let nv = dot(&v, &v).sqrt();
        if nv > 1e-8 && basis.len() < n - 1 {
            basis.push(v.into_iter().map(|a| a / nv).collect());
        }
    }
    let m = basis.len();
    let mut small = vec![0.0; m * m];
    for a in 0..m {
        let qa: Vec<f64> = (0..n).map(|i| (0..n).map(|k| q[i * n + k] * basis[a][k]).sum()).collect();
        for b in 0..m {
            small[b * m + a] = dot(&basis[b], &qa);
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            let v = 0.5 * (small[a * m + b] + small[b * m + a]);
            small[a * m + b] = v;
            small[b * m + a] = v;
        }
    }
    let eig = eigen_decompose_symmetric(&small, m).expect("compressed form is symmetric");
    let top = &eig.vectors[0];
    let mut x = vec![0.0; n];
    for (a, b) in basis.iter().enumerate() {
        x.iter_mut().zip(b).for_each(|(xi, bi)| *xi += top[a] * bi);
    }
    x
}

/// a₀: the largest eigenvalue of the second-kind operator on trace-free
/// symmetric 2-tensors.
pub fn a0_estimate(c: &CurvatureData) -> f64 {
    let n = c.n();
    let basis = class_basis(n, 2, SymmetryClass::SymmetricTraceless).expect("n within limits");
    let m = basis.len();
    let mut small = vec![0.0; m * m];
    let images: Vec<Vec<f64>> = basis.iter().map(|b| c.second_kind_apply(b).expect("n×n input")).collect();
    for a in 0..m {
        for b in 0..m {
            small[a * m + b] = dot(&basis[a], &images[b]);
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            let v = 0.5 * (small[a * m + b] + small[b * m + a]);
            small[a * m + b] = v;
            small[b * m + a] = v;
        }
    }
    eigen_decompose_symmetric(&small, m).expect("symmetric").values[0]
}
