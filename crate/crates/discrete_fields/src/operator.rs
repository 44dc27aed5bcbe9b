use crate::derivative::rotation_action_matrix;
use crate::field::TensorField;
use crate::fourier::RealFourier;
use crate::grid::Grid;
use crate::sector::{fiber_groups, ring_sectors, sector_tridiagonal, SectorKey};
use crate::{FieldError, Result};
use curvature::{CurvatureData, ModelSpace};
use faer::sparse::{SparseColMat, Triplet};
use rayon::prelude::*;
use std::collections::HashMap;
use std::f64::consts::PI;
use tensor_core::{class_basis, SymmetryClass};
use weitzenboeck::{einstein_shift, weitzenboeck_class_matrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorKind {
    /// Δ̄ alone.
    Rough,
    /// Δ̄ + c ℜ_p.
    Lichnerowicz { c: f64 },
    /// c = 1 on forms.
    Hodge,
    /// c = −1 on symmetric tensors.
    Sampson,
    /// The c = 1 operator minus 2s/n; Einstein spaces only.
    Einstein,
}

impl OperatorKind {
    /// The Weitzenböck coupling in front of ℜ_p.
    pub fn coupling(self) -> f64 {
        match self {
            OperatorKind::Rough => 0.0,
            OperatorKind::Lichnerowicz { c } => c,
            OperatorKind::Hodge | OperatorKind::Einstein => 1.0,
            OperatorKind::Sampson => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::Rough => "rough",
            OperatorKind::Lichnerowicz { .. } => "lichnerowicz",
            OperatorKind::Hodge => "hodge",
            OperatorKind::Sampson => "sampson",
            OperatorKind::Einstein => "einstein",
        }
    }
}

/// One symmetric tridiagonal block of the spectral matrix.
#[derive(Debug, Clone)]
struct Block {
    start: usize,
    diag: Vec<f64>,
    off: Vec<f64>,
}

#[derive(Debug, Clone)]
enum Transform {
    /// Real Fourier basis per axis.
    Torus { bases: Vec<RealFourier> },
    /// Per latitude ring, rows are the sector vectors over (longitude, fiber).
    Sphere { ring: Vec<f64>, ring_len: usize, n_sectors: usize },
}

/// A Laplace-type operator on one symmetry class of p-tensor fields.
///
/// The matrix acts on weight-scaled class coordinates u = √w·x written in an
/// orthonormal spectral basis: Fourier modes on the torus, longitudinal sectors
/// times latitude rows on the sphere. In that basis it is block tridiagonal
/// (diagonal on the torus), and it is symmetric for the quadrature inner product
/// on fields.
#[derive(Debug, Clone)]
pub struct AssembledOperator {
    grid: Grid,
    p: usize,
    class: SymmetryClass,
    kind: OperatorKind,
    coupling: f64,
    shift: f64,
    fiber_basis: Vec<Vec<f64>>,
    weights: Vec<f64>,
    blocks: Vec<Block>,
    transform: Transform,
    curvature: CurvatureData,
}

fn check_kind(kind: OperatorKind, p: usize, class: SymmetryClass, space: &ModelSpace) -> Result<()> {
    match kind {
        OperatorKind::Hodge if p > 1 && class != SymmetryClass::Alternating => {
            Err(FieldError::Capability("the Hodge Laplacian acts on alternating tensors".into()))
        }
        OperatorKind::Sampson
            if p > 1 && !matches!(class, SymmetryClass::Symmetric | SymmetryClass::SymmetricTraceless) =>
        {
            Err(FieldError::Capability("the Sampson Laplacian acts on symmetric tensors".into()))
        }
        OperatorKind::Einstein if !space.is_einstein() => {
            Err(FieldError::Capability(format!("{space} is not an Einstein space")))
        }
        _ => Ok(()),
    }
}

fn compress(basis: &[Vec<f64>], full: &[f64]) -> Vec<f64> {
    let d = basis.len();
    let f = basis.first().map_or(0, Vec::len);
    let mut out = vec![0.0; d * d];
    for b in 0..d {
        let img: Vec<f64> = (0..f).map(|i| (0..f).map(|j| full[i * f + j] * basis[b][j]).sum()).collect();
        for a in 0..d {
            out[a * d + b] = basis[a].iter().zip(&img).map(|(x, y)| x * y).sum();
        }
    }
    out
}

/// Assemble Δ̄ + c ℜ_p (or a preset) on `class` p-tensors over a torus or the round 2-sphere.
pub fn assemble(space: &ModelSpace, p: usize, class: SymmetryClass, kind: OperatorKind, resolution: &[usize]) -> Result<AssembledOperator> {
    let grid = Grid::new(space, resolution)?;
    grid.check_order(p)?;
    check_kind(kind, p, class, space)?;
    let n = grid.dim();
    let curvature = space.curvature()?;
    let fiber_basis = class_basis(n, p, class)?;
    let d = fiber_basis.len();
    let coupling = kind.coupling();
    let shift = if kind == OperatorKind::Einstein { einstein_shift(curvature.scalar(), n) } else { 0.0 };
    let r_class = weitzenboeck_class_matrix(&curvature, p, class)?;
    let (blocks, transform) = match &grid {
        Grid::Torus { periods, sizes } => {
            if r_class.iter().any(|x| x.abs() > 1e-14) {
                return Err(FieldError::Degenerate("flat torus with nonzero curvature term".into()));
            }
            let bases: Vec<RealFourier> = sizes.iter().map(|&s| RealFourier::new(s)).collect();
            let nodes = grid.num_nodes();
            let mut blocks = Vec::with_capacity(nodes * d);
            for node in 0..nodes {
                let idx = grid.node_index(node);
                let ev: f64 = (0..n)
                    .map(|a| {
                        let k = bases[a].modes[idx[a]].wavenumber(sizes[a]) as f64;
                        (2.0 * PI * k / periods[a]).powi(2)
                    })
                    .sum();
                for a in 0..d {
                    blocks.push(Block { start: node * d + a, diag: vec![ev - shift], off: vec![] });
                }
            }
            (blocks, Transform::Torus { bases })
        }
        Grid::Sphere { radius, n_theta, n_phi } => {
            let (nt, np) = (*n_theta, *n_phi);
            let a_class = compress(&fiber_basis, &rotation_action_matrix(p));
            let groups = fiber_groups(&a_class, &r_class, d)?;
            let sectors = ring_sectors(np, &groups, d);
            debug_assert_eq!(sectors.len(), np * d);
            let mut cache: HashMap<SectorKey, (Vec<f64>, Vec<f64>)> = HashMap::new();
            let mut blocks = Vec::with_capacity(sectors.len());
            let mut ring = Vec::with_capacity(sectors.len() * np * d);
            for (k, sec) in sectors.iter().enumerate() {
                let (diag, off) = cache.entry(sec.key).or_insert_with(|| sector_tridiagonal(nt, np, sec.key, *radius)).clone();
                let diag = diag.iter().map(|x| (x + coupling * sec.rho) - shift).collect();
                blocks.push(Block { start: k * nt, diag, off });
                ring.extend_from_slice(&sec.vector);
            }
            (blocks, Transform::Sphere { ring, ring_len: np * d, n_sectors: sectors.len() })
        }
    };
    Ok(AssembledOperator {
        weights: grid.weights(),
        grid,
        p,
        class,
        kind,
        coupling,
        shift,
        fiber_basis,
        blocks,
        transform,
        curvature,
    })
}

/// Applies `mat` (rows = output modes) along one axis of node-major data with d
/// components per node.
fn axis_transform(data: &[f64], sizes: &[usize], d: usize, axis: usize, mat: &[f64], transpose: bool) -> Vec<f64> {
    let na = sizes[axis];
    let inner: usize = sizes[axis + 1..].iter().product::<usize>() * d;
    let outer: usize = sizes[..axis].iter().product();
    let mut out = vec![0.0; data.len()];
    out.par_chunks_mut(na * inner).enumerate().for_each(|(o, chunk)| {
        let src = &data[o * na * inner..(o + 1) * na * inner];
        for k in 0..na {
            let dst = &mut chunk[k * inner..(k + 1) * inner];
            for j in 0..na {
                let m = if transpose { mat[j * na + k] } else { mat[k * na + j] };
                if m == 0.0 {
                    continue;
                }
                let s = &src[j * inner..(j + 1) * inner];
                for (x, y) in dst.iter_mut().zip(s) {
                    *x += m * y;
                }
            }
        }
    });
    debug_assert_eq!(out.len(), outer * na * inner);
    out
}

impl AssembledOperator {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn p(&self) -> usize {
        self.p
    }
    pub fn class(&self) -> SymmetryClass {
        self.class
    }
    pub fn kind(&self) -> OperatorKind {
        self.kind
    }
    /// Effective coupling c in front of ℜ_p.
    pub fn coupling(&self) -> f64 {
        self.coupling
    }
    /// Constant subtracted from the diagonal (2s/n for the Einstein kind, else 0).
    pub fn shift(&self) -> f64 {
        self.shift
    }
    pub fn curvature(&self) -> &CurvatureData {
        &self.curvature
    }
    pub fn quadrature_weights(&self) -> &[f64] {
        &self.weights
    }
    /// Orthonormal basis of the class subspace of one fiber.
    pub fn fiber_basis(&self) -> &[Vec<f64>] {
        &self.fiber_basis
    }
    pub fn fiber_dim(&self) -> usize {
        self.fiber_basis.len()
    }
    pub fn dim(&self) -> usize {
        self.grid.num_nodes() * self.fiber_dim()
    }

    /// Upper and lower triangle entries (row, col, value) of the spectral matrix.
    pub fn entries(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(3 * self.dim());
        for b in &self.blocks {
            for (i, &v) in b.diag.iter().enumerate() {
                out.push((b.start + i, b.start + i, v));
            }
            for (i, &v) in b.off.iter().enumerate() {
                out.push((b.start + i, b.start + i + 1, v));
                out.push((b.start + i + 1, b.start + i, v));
            }
        }
        out
    }

    /// Diagonal of the spectral matrix.
    pub fn diagonal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for b in &self.blocks {
            out[b.start..b.start + b.diag.len()].copy_from_slice(&b.diag);
        }
        out
    }

    pub fn sparse_matrix(&self) -> Result<SparseColMat<usize, f64>> {
        let trip: Vec<Triplet<usize, usize, f64>> = self.entries().into_iter().map(|(r, c, v)| Triplet::new(r, c, v)).collect();
        SparseColMat::try_new_from_triplets(self.dim(), self.dim(), &trip)
            .map_err(|e| FieldError::Shape(format!("sparse assembly failed: {e:?}")))
    }

    /// Spectral matrix plus `sigma`·I, lower triangle only.
    pub(crate) fn shifted_lower(&self, sigma: f64) -> Result<SparseColMat<usize, f64>> {
        let trip: Vec<Triplet<usize, usize, f64>> = self
            .entries()
            .into_iter()
            .filter(|(r, c, _)| r >= c)
            .map(|(r, c, v)| Triplet::new(r, c, if r == c { v + sigma } else { v }))
            .collect();
        SparseColMat::try_new_from_triplets(self.dim(), self.dim(), &trip)
            .map_err(|e| FieldError::Shape(format!("sparse assembly failed: {e:?}")))
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.gershgorin().1
    }

    /// (lower bound on the spectrum, largest absolute row sum).
    pub(crate) fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut norm = 0.0f64;
        for b in &self.blocks {
            let m = b.diag.len();
            for i in 0..m {
                let mut r = 0.0;
                if i > 0 {
                    r += b.off[i - 1].abs();
                }
                if i + 1 < m {
                    r += b.off[i].abs();
                }
                lo = lo.min(b.diag[i] - r);
                norm = norm.max(b.diag[i].abs() + r);
            }
        }
        (lo, norm)
    }

    /// y = A x in spectral coordinates.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; x.len()];
        for b in &self.blocks {
            let s = b.start;
            for (i, &dv) in b.diag.iter().enumerate() {
                y[s + i] += dv * x[s + i];
            }
            for (i, &o) in b.off.iter().enumerate() {
                y[s + i] += o * x[s + i + 1];
                y[s + i + 1] += o * x[s + i];
            }
        }
        y
    }

    fn check_field(&self, f: &TensorField) -> Result<()> {
        if f.grid() != &self.grid || f.p() != self.p {
            return Err(FieldError::Shape(format!(
                "operator acts on order {} fields on {}, got order {} on {}",
                self.p,
                self.grid.label(),
                f.p(),
                f.grid().label()
            )));
        }
        Ok(())
    }

    /// Spectral coordinates of the class projection of `f`.
    pub fn to_spectral(&self, f: &TensorField) -> Result<Vec<f64>> {
        self.check_field(f)?;
        let d = self.fiber_dim();
        let mut u = vec![0.0; self.dim()];
        for (node, w) in self.weights.iter().enumerate() {
            let comps = f.node(node);
            let sw = w.sqrt();
            for (a, c) in self.fiber_basis.iter().enumerate() {
                u[node * d + a] = sw * c.iter().zip(comps).map(|(x, y)| x * y).sum::<f64>();
            }
        }
        Ok(self.forward(&u))
    }

    /// Field whose spectral coordinates are `s`.
    pub fn from_spectral(&self, s: &[f64]) -> Result<TensorField> {
        if s.len() != self.dim() {
            return Err(FieldError::Shape(format!("expected {} spectral coordinates", self.dim())));
        }
        let u = self.backward(s);
        let d = self.fiber_dim();
        let fiber = self.grid.dim().pow(self.p as u32);
        let mut values = vec![0.0; self.grid.num_nodes() * fiber];
        for (node, w) in self.weights.iter().enumerate() {
            let sw = w.sqrt();
            let out = &mut values[node * fiber..(node + 1) * fiber];
            for (a, c) in self.fiber_basis.iter().enumerate() {
                let x = u[node * d + a] / sw;
                for (o, ci) in out.iter_mut().zip(c) {
                    *o += x * ci;
                }
            }
        }
        TensorField::from_values(self.grid.clone(), self.p, self.class, values)
    }

    fn forward(&self, u: &[f64]) -> Vec<f64> {
        let d = self.fiber_dim();
        match &self.transform {
            Transform::Torus { bases } => {
                let sizes = self.grid.resolution();
                let mut cur = u.to_vec();
                for (a, b) in bases.iter().enumerate() {
                    cur = axis_transform(&cur, &sizes, d, a, &b.basis, false);
                }
                cur
            }
            Transform::Sphere { ring, ring_len, n_sectors } => {
                let nt = self.grid.resolution()[0];
                let rows: Vec<Vec<f64>> = (0..nt)
                    .into_par_iter()
                    .map(|i| {
                        let r = &u[i * ring_len..(i + 1) * ring_len];
                        (0..*n_sectors).map(|k| ring[k * ring_len..(k + 1) * ring_len].iter().zip(r).map(|(x, y)| x * y).sum()).collect()
                    })
                    .collect();
                let mut out = vec![0.0; u.len()];
                for (i, row) in rows.iter().enumerate() {
                    for (k, v) in row.iter().enumerate() {
                        out[k * nt + i] = *v;
                    }
                }
                out
            }
        }
    }

    fn backward(&self, s: &[f64]) -> Vec<f64> {
        let d = self.fiber_dim();
        match &self.transform {
            Transform::Torus { bases } => {
                let sizes = self.grid.resolution();
                let mut cur = s.to_vec();
                for (a, b) in bases.iter().enumerate() {
                    cur = axis_transform(&cur, &sizes, d, a, &b.basis, true);
                }
                cur
            }
            Transform::Sphere { ring, ring_len, n_sectors } => {
                let nt = self.grid.resolution()[0];
                let mut out = vec![0.0; s.len()];
                out.par_chunks_mut(*ring_len).enumerate().for_each(|(i, r)| {
                    for k in 0..*n_sectors {
                        let c = s[k * nt + i];
                        if c == 0.0 {
                            continue;
                        }
                        for (o, v) in r.iter_mut().zip(&ring[k * ring_len..(k + 1) * ring_len]) {
                            *o += c * v;
                        }
                    }
                });
                out
            }
        }
    }

    /// The operator applied to the class projection of `f`.
    pub fn apply(&self, f: &TensorField) -> Result<TensorField> {
        let s = self.to_spectral(f)?;
        self.from_spectral(&self.matvec(&s))
    }
}
