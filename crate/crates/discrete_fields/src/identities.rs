use crate::derivative::{adjoint_derivative, covariant_derivative};
use crate::field::TensorField;
use crate::grid::Grid;
use crate::operator::{assemble, OperatorKind};
use crate::{FieldError, Result};
use curvature::ModelSpace;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tensor_core::SymmetryClass;
use weitzenboeck::weitzenboeck_apply;

fn scalar_field(grid: &Grid, values: Vec<f64>) -> Result<TensorField> {
    TensorField::from_values(grid.clone(), 0, SymmetryClass::General, values)
}

/// Pointwise ½Δ_B‖F‖² + ⟨Δ_L F, F⟩ − ‖∇F‖² − c⟨ℜ_p F, F⟩ with Δ_B = div∘grad,
/// i.e. the negative of the scalar rough Laplacian.
pub fn bochner_residual(f: &TensorField, c: f64) -> Result<TensorField> {
    let grid = f.grid();
    let space = grid.space();
    let res = grid.resolution();
    let lap = assemble(&space, f.p(), SymmetryClass::General, OperatorKind::Lichnerowicz { c }, &res)?;
    let scalar = assemble(&space, 0, SymmetryClass::General, OperatorKind::Rough, &res)?;
    let curv = space.curvature()?;
    let nodes = grid.num_nodes();

    let sq = scalar_field(grid, (0..nodes).map(|k| f.node(k).iter().map(|x| x * x).sum()).collect())?;
    let lsq = scalar.apply(&sq)?;
    let lf = lap.apply(f)?;
    let df = covariant_derivative(f)?;
    let mut out = Vec::with_capacity(nodes);
    for k in 0..nodes {
        let fk = f.node(k);
        let dot = |a: &[f64]| a.iter().zip(fk).map(|(x, y)| x * y).sum::<f64>();
        let rf = weitzenboeck_apply(&curv, &f.node_tensor(k))?;
        let grad_sq: f64 = df.node(k).iter().map(|x| x * x).sum();
        out.push(-0.5 * lsq.node(k)[0] + dot(lf.node(k)) - grad_sq - c * dot(rf.components()));
    }
    scalar_field(grid, out)
}

/// min over nodes of ‖∇F‖² − ‖d‖F‖‖², skipping nodes where ‖F‖ < 1e−10.
/// d‖F‖(Y) = ⟨F, ∇_Y F⟩/‖F‖ away from zeros.
pub fn kato_gap(f: &TensorField) -> Result<f64> {
    let df = covariant_derivative(f)?;
    let n = f.n();
    let fiber = f.fiber_len();
    let mut gap = f64::INFINITY;
    for k in 0..f.grid().num_nodes() {
        let fk = f.node(k);
        let norm = fk.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-10 {
            continue;
        }
        let dk = df.node(k);
        let grad_sq: f64 = dk.iter().map(|x| x * x).sum();
        let dnorm_sq: f64 = (0..n)
            .map(|y| (dk[y * fiber..(y + 1) * fiber].iter().zip(fk).map(|(a, b)| a * b).sum::<f64>() / norm).powi(2))
            .sum();
        gap = gap.min(grad_sq - dnorm_sq);
    }
    if gap.is_infinite() {
        return Err(FieldError::Degenerate("field vanishes at every node".into()));
    }
    Ok(gap)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TtDiagnostics {
    pub is_tt: bool,
    /// Quadrature norm of D*F.
    pub divergence_norm: f64,
    /// Quadrature norm of trace_g F.
    pub trace_norm: f64,
}

/// Whether a symmetric 2-tensor field is divergence free and traceless to `tol`.
pub fn tt_check(f: &TensorField, tol: f64) -> Result<TtDiagnostics> {
    if f.p() != 2 || !matches!(f.class(), SymmetryClass::Symmetric | SymmetryClass::SymmetricTraceless) {
        return Err(FieldError::Shape("TT check needs a symmetric 2-tensor field".into()));
    }
    let divergence_norm = adjoint_derivative(f)?.norm();
    let n = f.n();
    let tr: Vec<f64> = (0..f.grid().num_nodes()).map(|k| (0..n).map(|i| f.node(k)[i * n + i]).sum()).collect();
    let trace_norm = scalar_field(f.grid(), tr)?.norm();
    Ok(TtDiagnostics { is_tt: divergence_norm < tol && trace_norm < tol, divergence_norm, trace_norm })
}

/// Largest ‖trace_g(Δ_L φ) − Δ̄(trace_g φ)‖ (c = 1) over a few seeded random
/// symmetric fields.
pub fn trace_commutation_residual(space: &ModelSpace, resolution: &[usize]) -> Result<f64> {
    let grid = Grid::new(space, resolution)?;
    let lap = assemble(space, 2, SymmetryClass::Symmetric, OperatorKind::Lichnerowicz { c: 1.0 }, resolution)?;
    let scalar = assemble(space, 0, SymmetryClass::General, OperatorKind::Rough, resolution)?;
    let n = grid.dim();
    let band = (grid.resolution().into_iter().min().unwrap_or(4) / 4).saturating_sub(1).clamp(1, 4);
    let trace = |f: &TensorField| -> Result<TensorField> {
        scalar_field(&grid, (0..grid.num_nodes()).map(|k| (0..n).map(|i| f.node(k)[i * n + i]).sum()).collect())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x7ace);
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let phi = TensorField::random_smooth(&grid, 2, SymmetryClass::Symmetric, band, &mut rng)?;
        let lhs = trace(&lap.apply(&phi)?)?;
        let rhs = scalar.apply(&trace(&phi)?)?;
        worst = worst.max(lhs.add_scaled(-1.0, &rhs)?.norm());
    }
    Ok(worst)
}
