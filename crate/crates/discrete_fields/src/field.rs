use crate::grid::Grid;
use crate::{FieldError, Result};
use rand::Rng;
use std::f64::consts::PI;
use std::io::{BufRead, Write};
use tensor_core::{project_symmetry, CovariantTensor, SymmetryClass};

/// A covariant p-tensor field sampled at grid nodes, components in the
/// orthonormal frame, stored node-major with n^p components per node.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorField {
    grid: Grid,
    p: usize,
    class: SymmetryClass,
    values: Vec<f64>,
}

impl TensorField {
    pub fn from_values(grid: Grid, p: usize, class: SymmetryClass, values: Vec<f64>) -> Result<Self> {
        let fiber = grid.dim().pow(p as u32);
        if values.len() != grid.num_nodes() * fiber {
            return Err(FieldError::Shape(format!(
                "expected {} values for order {p}, got {}",
                grid.num_nodes() * fiber,
                values.len()
            )));
        }
        Ok(TensorField { grid, p, class, values })
    }

    pub fn zeros(grid: Grid, p: usize, class: SymmetryClass) -> Self {
        let len = grid.num_nodes() * grid.dim().pow(p as u32);
        TensorField { grid, p, class, values: vec![0.0; len] }
    }

    /// Field whose node tensor is `f(node coordinates)`.
    pub fn from_fn(grid: Grid, p: usize, class: SymmetryClass, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self> {
        let fiber = grid.dim().pow(p as u32);
        let mut values = Vec::with_capacity(grid.num_nodes() * fiber);
        for node in 0..grid.num_nodes() {
            let v = f(&grid.node_coords(node));
            if v.len() != fiber {
                return Err(FieldError::Shape(format!("node tensor needs {fiber} components")));
            }
            values.extend(v);
        }
        Self::from_values(grid, p, class, values)
    }

    /// The same frame components at every node.
    pub fn constant(grid: Grid, t: &CovariantTensor, class: SymmetryClass) -> Result<Self> {
        if t.n() != grid.dim() {
            return Err(FieldError::Shape("tensor dimension differs from the manifold".into()));
        }
        let comps = t.components().to_vec();
        Self::from_fn(grid, t.p(), class, |_| comps.clone())
    }

    pub fn metric(grid: Grid) -> Self {
        let g = CovariantTensor::metric(grid.dim()).expect("dimension within limits");
        Self::constant(grid, &g, SymmetryClass::Symmetric).expect("matching dimension")
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn p(&self) -> usize {
        self.p
    }
    pub fn n(&self) -> usize {
        self.grid.dim()
    }
    pub fn class(&self) -> SymmetryClass {
        self.class
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
    pub fn fiber_len(&self) -> usize {
        self.n().pow(self.p as u32)
    }
    pub fn node(&self, node: usize) -> &[f64] {
        let f = self.fiber_len();
        &self.values[node * f..(node + 1) * f]
    }
    pub fn node_tensor(&self, node: usize) -> CovariantTensor {
        CovariantTensor::from_components(self.n(), self.p, self.node(node).to_vec()).expect("consistent shape")
    }

    pub fn with_class(mut self, class: SymmetryClass) -> Self {
        self.class = class;
        self
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid || self.p != other.p {
            return Err(FieldError::Shape("fields live on different grids or orders".into()));
        }
        Ok(())
    }

    /// Quadrature inner product Σ_nodes w Σ_I F_I G_I.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        let w = self.grid.weights();
        let f = self.fiber_len();
        Ok(w.iter()
            .enumerate()
            .map(|(k, wk)| wk * self.values[k * f..(k + 1) * f].iter().zip(&other.values[k * f..(k + 1) * f]).map(|(a, b)| a * b).sum::<f64>())
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).expect("same field").sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn add_scaled(&self, s: f64, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + s * b).collect();
        Ok(TensorField { values, ..self.clone() })
    }

    pub fn scaled(&self, s: f64) -> Self {
        TensorField { values: self.values.iter().map(|x| s * x).collect(), ..self.clone() }
    }

    /// Pointwise projection onto a symmetry class.
    pub fn project(&self, class: SymmetryClass) -> Result<Self> {
        let mut values = Vec::with_capacity(self.values.len());
        for node in 0..self.grid.num_nodes() {
            values.extend(project_symmetry(&self.node_tensor(node), class)?.into_components());
        }
        Ok(TensorField { values, class, ..self.clone() })
    }

    /// Pointwise map to another order.
    pub fn map_nodes(&self, p_out: usize, class: SymmetryClass, f: impl Fn(&CovariantTensor) -> Result<CovariantTensor>) -> Result<Self> {
        let mut values = Vec::new();
        for node in 0..self.grid.num_nodes() {
            let t = f(&self.node_tensor(node))?;
            if t.p() != p_out {
                return Err(FieldError::Shape("map produced the wrong order".into()));
            }
            values.extend(t.into_components());
        }
        Self::from_values(self.grid.clone(), p_out, class, values)
    }

    /// A random smooth field projected onto `class`. On the torus it is a
    /// trigonometric polynomial with wavenumbers |k_a| ≤ band; on the sphere the
    /// frame components of a random polynomial ambient tensor of degree ≤ band.
    pub fn random_smooth<R: Rng + ?Sized>(grid: &Grid, p: usize, class: SymmetryClass, band: usize, rng: &mut R) -> Result<Self> {
        grid.check_order(p)?;
        let n = grid.dim();
        let fiber = n.pow(p as u32);
        let raw = match grid {
            Grid::Torus { periods, .. } => {
                let modes = torus_modes(n, band);
                let coef: Vec<(f64, f64)> = (0..modes.len() * fiber)
                    .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect();
                let periods = periods.clone();
                TensorField::from_fn(grid.clone(), p, SymmetryClass::General, move |x| {
                    let mut out = vec![0.0; fiber];
                    for (mi, k) in modes.iter().enumerate() {
                        let phase: f64 = (0..n).map(|a| 2.0 * PI * k[a] as f64 * x[a] / periods[a]).sum();
                        let (s, c) = phase.sin_cos();
                        for (comp, o) in out.iter_mut().enumerate() {
                            let (a, b) = coef[mi * fiber + comp];
                            *o += a * c + b * s;
                        }
                    }
                    out
                })?
            }
            Grid::Sphere { .. } => {
                let monos = monomials(band);
                let amb = 3usize.pow(p as u32);
                let coef: Vec<f64> = (0..monos.len() * amb).map(|_| rng.random_range(-1.0..1.0)).collect();
                TensorField::from_fn(grid.clone(), p, SymmetryClass::General, move |x| {
                    let (theta, phi) = (x[0], x[1]);
                    let (st, ct) = theta.sin_cos();
                    let (sp, cp) = phi.sin_cos();
                    let pos = [st * cp, st * sp, ct];
                    let frame = [[ct * cp, ct * sp, -st], [-sp, cp, 0.0]];
                    let mono_vals: Vec<f64> = monos.iter().map(|e| pos[0].powi(e[0]) * pos[1].powi(e[1]) * pos[2].powi(e[2])).collect();
                    let ambient: Vec<f64> = (0..amb)
                        .map(|c| mono_vals.iter().enumerate().map(|(m, v)| coef[m * amb + c] * v).sum())
                        .collect();
                    let mut out = vec![0.0; fiber];
                    for (fi, o) in out.iter_mut().enumerate() {
                        let fidx = digits(fi, 2, p);
                        let mut acc = 0.0;
                        for (ai, amb_v) in ambient.iter().enumerate() {
                            let aidx = digits(ai, 3, p);
                            let w: f64 = (0..p).map(|s| frame[fidx[s]][aidx[s]]).product();
                            acc += w * amb_v;
                        }
                        *o = acc;
                    }
                    out
                })?
            }
        };
        if class == SymmetryClass::General {
            Ok(raw)
        } else {
            raw.project(class)
        }
    }

    /// Text export: one header line, then one node per line with the grid
    /// multi-index and components in 17-significant-digit scientific notation.
    pub fn export(&self, out: &mut impl Write) -> std::io::Result<()> {
        let res: Vec<String> = self.grid.resolution().iter().map(|x| x.to_string()).collect();
        writeln!(
            out,
            "# space={} p={} class={} resolution={} frame=orthonormal",
            self.grid.space(),
            self.p,
            self.class,
            res.join("x")
        )?;
        let f = self.fiber_len();
        for node in 0..self.grid.num_nodes() {
            let idx: Vec<String> = self.grid.node_index(node).iter().map(|x| x.to_string()).collect();
            let comps: Vec<String> = self.values[node * f..(node + 1) * f].iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(out, "{} {}", idx.join(" "), comps.join(" "))?;
        }
        Ok(())
    }

    /// Reads the export format back.
    pub fn import(input: impl BufRead) -> Result<Self> {
        let perr = |m: &str| FieldError::Shape(format!("import: {m}"));
        let mut lines = input.lines();
        let header = lines.next().ok_or_else(|| perr("empty input"))?.map_err(|e| perr(&e.to_string()))?;
        let mut space = None;
        let mut p = None;
        let mut class = None;
        let mut res = None;
        for tok in header.trim_start_matches('#').split_whitespace() {
            match tok.split_once('=') {
                Some(("space", v)) => space = Some(v.parse::<curvature::ModelSpace>().map_err(|e| perr(&e.to_string()))?),
                Some(("p", v)) => p = Some(v.parse::<usize>().map_err(|_| perr("bad p"))?),
                Some(("class", v)) => class = Some(v.parse::<SymmetryClass>()?),
                Some(("resolution", v)) => {
                    res = Some(v.split('x').map(|s| s.parse::<usize>().map_err(|_| perr("bad resolution"))).collect::<Result<Vec<_>>>()?)
                }
                _ => {}
            }
        }
        let (space, p, class, res) = (
            space.ok_or_else(|| perr("missing space"))?,
            p.ok_or_else(|| perr("missing p"))?,
            class.ok_or_else(|| perr("missing class"))?,
            res.ok_or_else(|| perr("missing resolution"))?,
        );
        let grid = Grid::new(&space, &res)?;
        let dims = res.len();
        let mut values = Vec::new();
        for line in lines {
            let line = line.map_err(|e| perr(&e.to_string()))?;
            for tok in line.split_whitespace().skip(dims) {
                values.push(tok.parse::<f64>().map_err(|_| perr("bad component"))?);
            }
        }
        Self::from_values(grid, p, class, values)
    }
}

fn digits(mut k: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for s in (0..len).rev() {
        out[s] = k % base;
        k /= base;
    }
    out
}

fn monomials(degree: usize) -> Vec<[i32; 3]> {
    let mut out = Vec::new();
    for a in 0..=degree as i32 {
        for b in 0..=degree as i32 - a {
            for c in 0..=degree as i32 - a - b {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// Wavevectors with every |k_a| ≤ band, one of each ± pair.
fn torus_modes(n: usize, band: usize) -> Vec<Vec<i64>> {
    let b = band as i64;
    let side = (2 * b + 1) as usize;
    let mut out = Vec::new();
    for flat in 0..side.pow(n as u32) {
        let k: Vec<i64> = digits(flat, side, n).iter().map(|&d| d as i64 - b).collect();
        let first_nonzero = k.iter().find(|&&x| x != 0);
        if first_nonzero.is_none_or(|&x| x > 0) {
            out.push(k);
        }
    }
    out
}
