use crate::{FieldError, Result};
use curvature::{ModelKind, ModelSpace};
use std::f64::consts::PI;

/// Largest torus grid in nodes (16³, or 64² in two dimensions).
pub const MAX_TORUS_NODES: usize = 4096;
pub const MAX_SPHERE_THETA: usize = 96;
pub const MAX_SPHERE_PHI: usize = 192;
/// Largest tensor order for discretized fields.
pub const MAX_FIELD_ORDER: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    /// Uniform periodic grid, nodes x_a = j_a·L_a/N_a.
    Torus { periods: Vec<f64>, sizes: Vec<usize> },
    /// θ_i = (i + ½)π/N_θ, φ_j = 2πj/N_φ; no node sits on a pole.
    Sphere { radius: f64, n_theta: usize, n_phi: usize },
}

impl Grid {
    /// Grid for a catalog space. Torus resolutions list one size per axis (or one
    /// size for all axes); sphere resolutions are [N_θ, N_φ] or [N_θ] with N_φ = 2N_θ.
    pub fn new(space: &ModelSpace, resolution: &[usize]) -> Result<Self> {
        match space.kind() {
            ModelKind::FlatTorus { periods } => {
                let sizes = match resolution.len() {
                    1 => vec![resolution[0]; periods.len()],
                    l if l == periods.len() => resolution.to_vec(),
                    _ => return Err(FieldError::Shape(format!("torus needs 1 or {} sizes", periods.len()))),
                };
                Self::torus(periods.clone(), sizes)
            }
            ModelKind::RoundSphere2 { radius } => match resolution {
                [nt] => Self::sphere(*radius, *nt, 2 * nt),
                [nt, np] => Self::sphere(*radius, *nt, *np),
                _ => Err(FieldError::Shape("sphere resolution is [n_theta] or [n_theta, n_phi]".into())),
            },
            _ => Err(FieldError::Capability(format!("no field discretization for {space}"))),
        }
    }

    pub fn torus(periods: Vec<f64>, sizes: Vec<usize>) -> Result<Self> {
        if !(2..=3).contains(&periods.len()) || periods.len() != sizes.len() {
            return Err(FieldError::Capability("torus fields need dimension 2 or 3".into()));
        }
        if sizes.iter().any(|&s| s < 4 || s % 2 != 0) {
            return Err(FieldError::Shape("torus sizes must be even and >= 4".into()));
        }
        let total: usize = sizes.iter().product();
        if total > MAX_TORUS_NODES {
            return Err(FieldError::Capability(format!("torus grid of {total} nodes exceeds {MAX_TORUS_NODES}")));
        }
        Ok(Grid::Torus { periods, sizes })
    }

    pub fn sphere(radius: f64, n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 4 || n_phi < 4 || n_phi % 2 != 0 {
            return Err(FieldError::Shape("sphere needs n_theta >= 4 and even n_phi >= 4".into()));
        }
        if n_theta > MAX_SPHERE_THETA || n_phi > MAX_SPHERE_PHI {
            return Err(FieldError::Capability(format!(
                "sphere grid {n_theta}x{n_phi} exceeds {MAX_SPHERE_THETA}x{MAX_SPHERE_PHI}"
            )));
        }
        Ok(Grid::Sphere { radius, n_theta, n_phi })
    }

    pub fn space(&self) -> ModelSpace {
        match self {
            Grid::Torus { periods, .. } => ModelSpace::flat_torus(periods.clone()).expect("validated periods"),
            Grid::Sphere { radius, .. } => ModelSpace::round_sphere2(*radius).expect("validated radius"),
        }
    }

    /// Manifold dimension.
    pub fn dim(&self) -> usize {
        match self {
            Grid::Torus { periods, .. } => periods.len(),
            Grid::Sphere { .. } => 2,
        }
    }

    pub fn resolution(&self) -> Vec<usize> {
        match self {
            Grid::Torus { sizes, .. } => sizes.clone(),
            Grid::Sphere { n_theta, n_phi, .. } => vec![*n_theta, *n_phi],
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.resolution().iter().product()
    }

    /// Grid multi-index of a node (row-major).
    pub fn node_index(&self, node: usize) -> Vec<usize> {
        let res = self.resolution();
        let mut out = vec![0; res.len()];
        let mut rest = node;
        for a in (0..res.len()).rev() {
            out[a] = rest % res[a];
            rest /= res[a];
        }
        out
    }

    /// Torus: Cartesian coordinates. Sphere: (θ, φ).
    pub fn node_coords(&self, node: usize) -> Vec<f64> {
        let idx = self.node_index(node);
        match self {
            Grid::Torus { periods, sizes } => {
                idx.iter().enumerate().map(|(a, &j)| j as f64 * periods[a] / sizes[a] as f64).collect()
            }
            Grid::Sphere { n_theta, n_phi, .. } => vec![
                (idx[0] as f64 + 0.5) * PI / *n_theta as f64,
                2.0 * PI * idx[1] as f64 / *n_phi as f64,
            ],
        }
    }

    /// Quadrature weights: cell measures summing to the total volume.
    pub fn weights(&self) -> Vec<f64> {
        match self {
            Grid::Torus { periods, sizes } => {
                let w: f64 = periods.iter().zip(sizes).map(|(l, &n)| l / n as f64).product();
                vec![w; sizes.iter().product()]
            }
            Grid::Sphere { radius, n_theta, n_phi } => {
                let h = PI / *n_theta as f64;
                let dphi = 2.0 * PI / *n_phi as f64;
                let mut w = Vec::with_capacity(n_theta * n_phi);
                for i in 0..*n_theta {
                    let theta = (i as f64 + 0.5) * h;
                    let cell = radius * radius * 2.0 * theta.sin() * (0.5 * h).sin() * dphi;
                    w.extend(std::iter::repeat_n(cell, *n_phi));
                }
                w
            }
        }
    }

    /// Rejects orders beyond the desk-scale limit.
    pub fn check_order(&self, p: usize) -> Result<()> {
        if p > MAX_FIELD_ORDER {
            return Err(FieldError::Capability(format!("field order {p} exceeds {MAX_FIELD_ORDER}")));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        let r: Vec<String> = self.resolution().iter().map(|x| x.to_string()).collect();
        format!("{} {}", self.space(), r.join("x"))
    }
}
