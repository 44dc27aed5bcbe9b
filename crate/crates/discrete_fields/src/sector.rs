//! Latitudinal operators for the sphere. Along each parallel the rough Laplacian
//! decouples into Fourier sectors; within a sector on a spin-weight-s fiber
//! direction it is the ordinary differential operator
//!     −(1/sinθ)(sinθ a′)′ + (m − σ cosθ)²/sin²θ · a,   σ = ±s,
//! whose eigenfunctions are Wigner d-functions d^l_{mσ}(θ) with eigenvalue
//! l(l+1) − σ². It is discretized by finite volumes on the offset grid. In
//! sectors whose eigenfunctions vanish to odd order at the poles, the face and
//! potential coefficients are corrected so the two lowest d-functions are
//! reproduced exactly, which restores second-order accuracy at the poles.

use crate::fourier::{Mode, RealFourier};
use crate::{FieldError, Result};
use faer::Mat;
use std::f64::consts::PI;
use tensor_core::eigen_decompose_symmetric;

/// Face coefficients (between rows i and i+1) and cell potentials of one sector,
/// on the unit sphere and per unit of longitude.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorProfile {
    pub faces: Vec<f64>,
    pub potential: Vec<f64>,
    pub fitted: bool,
}

fn cell_measures(n_theta: usize) -> Vec<f64> {
    let h = PI / n_theta as f64;
    (0..n_theta).map(|i| 2.0 * ((i as f64 + 0.5) * h).sin() * (0.5 * h).sin()).collect()
}

fn default_faces(n_theta: usize) -> Vec<f64> {
    let h = PI / n_theta as f64;
    (1..n_theta).map(|f| (f as f64 * h).sin() / h).collect()
}

fn thetas(n_theta: usize) -> Vec<f64> {
    let h = PI / n_theta as f64;
    (0..n_theta).map(|i| (i as f64 + 0.5) * h).collect()
}

fn needs_fit(m: i64, sigma: i64) -> bool {
    (m + sigma).rem_euclid(2) == 1 && (m - sigma).abs().min((m + sigma).abs()) <= 3
}

/// Profile for the sector with Fourier wavenumber m and signed spin σ, with pole
/// correction where the eigenfunctions have odd order at a pole.
pub fn fitted_sector_profile(n_theta: usize, m: i64, sigma: i64) -> SectorProfile {
    let th = thetas(n_theta);
    let potential: Vec<f64> = th.iter().map(|t| (m as f64 - sigma as f64 * t.cos()).powi(2) / t.sin().powi(2)).collect();
    let faces = default_faces(n_theta);
    if !needs_fit(m, sigma) {
        return SectorProfile { faces, potential, fitted: false };
    }
    let v = cell_measures(n_theta);
    let nt = n_theta;
    let l0 = m.abs().max(sigma.abs());
    let nrows = 2 * nt;
    let ncols = 2 * nt - 1;
    let mut mat = Mat::<f64>::zeros(nrows, ncols);
    let mut rhs = vec![0.0; nrows];
    for (block, l) in (l0..l0 + 2).enumerate() {
        let a: Vec<f64> = th.iter().map(|&t| wigner_d(l, m, sigma, t)).collect();
        let lam = (l * (l + 1) - sigma * sigma) as f64;
        for i in 0..nt {
            let r = block * nt + i;
            if i + 1 < nt {
                mat[(r, i)] = -(a[i + 1] - a[i]) / v[i];
            }
            if i > 0 {
                mat[(r, i - 1)] = (a[i] - a[i - 1]) / v[i];
            }
            mat[(r, nt - 1 + i)] = a[i];
            rhs[r] = lam * a[i];
        }
    }
    let x0: Vec<f64> = faces.iter().chain(potential.iter()).copied().collect();
    let resid: Vec<f64> = (0..nrows).map(|r| rhs[r] - (0..ncols).map(|c| mat[(r, c)] * x0[c]).sum::<f64>()).collect();
    let dx = min_norm_lstsq(&mat, &resid);
    let x: Vec<f64> = x0.iter().zip(&dx).map(|(a, b)| a + b).collect();
    SectorProfile { faces: x[..nt - 1].to_vec(), potential: x[nt - 1..].to_vec(), fitted: true }
}

/// Minimum-norm least-squares solution through a truncated SVD.
fn min_norm_lstsq(a: &Mat<f64>, b: &[f64]) -> Vec<f64> {
    let svd = a.thin_svd().expect("svd of a finite matrix");
    let (u, s, v) = (svd.U(), svd.S().column_vector(), svd.V());
    let k = s.nrows();
    let smax = (0..k).map(|i| s[i]).fold(0.0f64, f64::max);
    let cutoff = f64::EPSILON * a.nrows().max(a.ncols()) as f64 * smax;
    let mut x = vec![0.0; a.ncols()];
    for i in 0..k {
        if s[i] <= cutoff {
            continue;
        }
        let coef: f64 = (0..a.nrows()).map(|r| u[(r, i)] * b[r]).sum::<f64>() / s[i];
        for (c, xc) in x.iter_mut().enumerate() {
            *xc += coef * v[(c, i)];
        }
    }
    x
}

/// Profile for the Nyquist sector. The spectral φ-derivative vanishes there, so
/// no connection cross term appears and no pole correction is applied.
fn nyquist_profile(n_theta: usize, half_n: usize, s: usize) -> SectorProfile {
    let potential = thetas(n_theta)
        .iter()
        .map(|t| ((half_n * half_n) as f64 + (s * s) as f64 * t.cos().powi(2)) / t.sin().powi(2))
        .collect();
    SectorProfile { faces: default_faces(n_theta), potential, fitted: false }
}

/// Symmetric tridiagonal form V^{-1/2}(stiffness + diag(V K))V^{-1/2}/r² acting on
/// weight-scaled values: (diagonal, off-diagonal).
fn symmetric_tridiagonal(profile: &SectorProfile, radius: f64) -> (Vec<f64>, Vec<f64>) {
    let nt = profile.potential.len();
    let v = cell_measures(nt);
    let r2 = radius * radius;
    let mut diag: Vec<f64> = (0..nt).map(|i| profile.potential[i] * v[i]).collect();
    let mut off = vec![0.0; nt - 1];
    for (f, &c) in profile.faces.iter().enumerate() {
        diag[f] += c;
        diag[f + 1] += c;
        off[f] = -c;
    }
    for i in 0..nt {
        diag[i] /= v[i] * r2;
    }
    for f in 0..nt - 1 {
        off[f] /= (v[f] * v[f + 1]).sqrt() * r2;
    }
    (diag, off)
}

fn factorial(k: i64) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// Jacobi polynomial P_k^{(a,b)}(x) by the three-term recurrence.
fn jacobi(k: i64, a: f64, b: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut p0 = 1.0;
    let mut p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    for n in 2..=k {
        let n = n as f64;
        let c = 2.0 * n + a + b;
        let lhs = 2.0 * n * (n + a + b) * (c - 2.0);
        let p2 = ((c - 1.0) * (c * (c - 2.0) * x + a * a - b * b) * p1 - 2.0 * (n + a - 1.0) * (n + b - 1.0) * c * p0) / lhs;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Wigner small-d function d^l_{m′m}(β).
pub fn wigner_d(l: i64, mp: i64, m: i64, beta: f64) -> f64 {
    if mp.abs() > l || m.abs() > l {
        return 0.0;
    }
    let (mut mp, mut m) = (mp, m);
    let mut sign = 1.0;
    if m.abs() > mp.abs() {
        std::mem::swap(&mut mp, &mut m);
        if (mp - m).rem_euclid(2) == 1 {
            sign = -sign;
        }
    }
    if mp < 0 {
        mp = -mp;
        m = -m;
        if (mp - m).rem_euclid(2) == 1 {
            sign = -sign;
        }
    }
    let k = l - mp;
    let (a, b) = (mp - m, mp + m);
    if a % 2 == 1 {
        sign = -sign;
    }
    let pref = (factorial(l + mp) * factorial(l - mp) / (factorial(l + m) * factorial(l - m))).sqrt();
    sign * pref * (beta / 2.0).sin().powi(a as i32) * (beta / 2.0).cos().powi(b as i32) * jacobi(k, a as f64, b as f64, beta.cos())
}

/// A fiber direction of definite spin weight and curvature eigenvalue. Pairs
/// satisfy A q1 = s q2, A q2 = −s q1 for the frame-rotation generator A.
#[derive(Debug, Clone)]
pub(crate) enum FiberGroup {
    Single { q: Vec<f64>, rho: f64 },
    Pair { q1: Vec<f64>, q2: Vec<f64>, s: usize, rho: f64 },
}

fn matvec(m: &[f64], x: &[f64]) -> Vec<f64> {
    let d = x.len();
    (0..d).map(|i| (0..d).map(|j| m[i * d + j] * x[j]).sum()).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cluster(values: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (k, &v) in values.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if (values[*g.last().unwrap()] - v).abs() <= tol => g.push(k),
            _ => groups.push(vec![k]),
        }
    }
    groups
}

/// Joint decomposition of the fiber (class coordinates) under the rotation
/// generator `a` (skew) and the curvature term `r` (symmetric, commuting with `a`).
pub(crate) fn fiber_groups(a: &[f64], r: &[f64], d: usize) -> Result<Vec<FiberGroup>> {
    let mut neg_a2 = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            neg_a2[i * d + j] = -(0..d).map(|k| a[i * d + k] * a[k * d + j]).sum::<f64>();
        }
    }
    for i in 0..d {
        for j in i + 1..d {
            let v = 0.5 * (neg_a2[i * d + j] + neg_a2[j * d + i]);
            neg_a2[i * d + j] = v;
            neg_a2[j * d + i] = v;
        }
    }
    let eig = eigen_decompose_symmetric(&neg_a2, d)?;
    let rscale = r.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let mut out = Vec::new();
    for group in cluster(&eig.values, 1e-8) {
        let ev = eig.values[group[0]];
        let s = ev.max(0.0).sqrt().round() as usize;
        if (ev - (s * s) as f64).abs() > 1e-8 {
            return Err(FieldError::Capability(format!("fiber rotation eigenvalue {ev} is not a square integer")));
        }
        let basis: Vec<&Vec<f64>> = group.iter().map(|&k| &eig.vectors[k]).collect();
        let k = basis.len();
        let mut rc = vec![0.0; k * k];
        for x in 0..k {
            let rx = matvec(r, basis[x]);
            for y in 0..k {
                rc[y * k + x] = dot(basis[y], &rx);
            }
        }
        for x in 0..k {
            for y in x + 1..k {
                let v = 0.5 * (rc[x * k + y] + rc[y * k + x]);
                rc[x * k + y] = v;
                rc[y * k + x] = v;
            }
        }
        let reig = eigen_decompose_symmetric(&rc, k)?;
        for rgroup in cluster(&reig.values, 1e-9 * rscale) {
            let rho = rgroup.iter().map(|&g| reig.values[g]).sum::<f64>() / rgroup.len() as f64;
            let mut space: Vec<Vec<f64>> = rgroup
                .iter()
                .map(|&g| {
                    let c = &reig.vectors[g];
                    (0..d).map(|i| (0..k).map(|x| c[x] * basis[x][i]).sum()).collect()
                })
                .collect();
            if s == 0 {
                out.extend(space.into_iter().map(|q| FiberGroup::Single { q, rho }));
                continue;
            }
            while let Some(first) = space.first().cloned() {
                let n1 = dot(&first, &first).sqrt();
                let q1: Vec<f64> = first.iter().map(|x| x / n1).collect();
                let q2: Vec<f64> = matvec(a, &q1).iter().map(|x| x / s as f64).collect();
                let mut rest = Vec::new();
                for mut w in space.into_iter().skip(1) {
                    for q in [&q1, &q2].into_iter().chain(rest.iter()) {
                        let c = dot(&w, q);
                        w.iter_mut().zip(q.iter()).for_each(|(x, y)| *x -= c * y);
                    }
                    let nw = dot(&w, &w).sqrt();
                    if nw > 1e-6 {
                        rest.push(w.into_iter().map(|x| x / nw).collect());
                    }
                }
                out.push(FiberGroup::Pair { q1, q2, s, rho });
                space = rest;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum SectorKey {
    Regular { m: i64, sigma: i64 },
    Nyquist { s: usize },
}

/// One real sector vector on a ring (index j·d + a) with its latitudinal operator.
pub(crate) struct RingSector {
    pub vector: Vec<f64>,
    pub key: SectorKey,
    pub rho: f64,
}

/// Orthonormal basis of ring data (N longitudes × d fiber coordinates) in which
/// the φ-part of the rough Laplacian is diagonal.
pub(crate) fn ring_sectors(n_phi: usize, groups: &[FiberGroup], d: usize) -> Vec<RingSector> {
    let four = RealFourier::new(n_phi);
    let row = |mode: Mode| -> &[f64] {
        let r = four.modes.iter().position(|&m| m == mode).expect("mode present");
        &four.basis[r * n_phi..(r + 1) * n_phi]
    };
    let tensor = |terms: &[(f64, &[f64], &[f64])]| -> Vec<f64> {
        let mut v = vec![0.0; n_phi * d];
        for &(c, f, q) in terms {
            for j in 0..n_phi {
                for a in 0..d {
                    v[j * d + a] += c * f[j] * q[a];
                }
            }
        }
        v
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n_phi * d);
    for g in groups {
        match g {
            FiberGroup::Single { q, rho } => {
                for &mode in &four.modes {
                    let key = match mode {
                        Mode::Nyquist => SectorKey::Nyquist { s: 0 },
                        other => SectorKey::Regular { m: other.wavenumber(n_phi) as i64, sigma: 0 },
                    };
                    out.push(RingSector { vector: tensor(&[(1.0, row(mode), q)]), key, rho: *rho });
                }
            }
            FiberGroup::Pair { q1, q2, s, rho } => {
                let si = *s as i64;
                let c0 = row(Mode::Constant);
                for q in [q1, q2] {
                    out.push(RingSector { vector: tensor(&[(1.0, c0, q)]), key: SectorKey::Regular { m: 0, sigma: si }, rho: *rho });
                }
                for k in 1..n_phi / 2 {
                    let (c, sn) = (row(Mode::Cos(k)), row(Mode::Sin(k)));
                    let m = k as i64;
                    // (m + s cosθ)² on c⊗q1 + s⊗q2 and c⊗q2 − s⊗q1; (m − s cosθ)² on the others.
                    let plus = SectorKey::Regular { m, sigma: -si };
                    let minus = SectorKey::Regular { m, sigma: si };
                    out.push(RingSector { vector: tensor(&[(h, c, q1), (h, sn, q2)]), key: plus, rho: *rho });
                    out.push(RingSector { vector: tensor(&[(h, c, q2), (-h, sn, q1)]), key: plus, rho: *rho });
                    out.push(RingSector { vector: tensor(&[(h, c, q1), (-h, sn, q2)]), key: minus, rho: *rho });
                    out.push(RingSector { vector: tensor(&[(h, c, q2), (h, sn, q1)]), key: minus, rho: *rho });
                }
                let ny = row(Mode::Nyquist);
                for q in [q1, q2] {
                    out.push(RingSector { vector: tensor(&[(1.0, ny, q)]), key: SectorKey::Nyquist { s: *s }, rho: *rho });
                }
            }
        }
    }
    out
}

/// Latitudinal operator of a sector, symmetric in weight-scaled values.
pub(crate) fn sector_tridiagonal(n_theta: usize, n_phi: usize, key: SectorKey, radius: f64) -> (Vec<f64>, Vec<f64>) {
    let profile = match key {
        SectorKey::Regular { m, sigma } => fitted_sector_profile(n_theta, m, sigma),
        SectorKey::Nyquist { s } => nyquist_profile(n_theta, n_phi / 2, s),
    };
    symmetric_tridiagonal(&profile, radius)
}
