//! Identity suites shared by `verify-identities` and the acceptance tests.

use crate::CliError;
use curvature::{random_orthogonal, CurvatureData, ModelKind, ModelSpace};
use discrete_fields::{
    assemble, bochner_residual, kato_gap, spectrum, trace_commutation_residual, tt_check, Grid, OperatorKind, TensorField,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashMap;
use tensor_core::{inner_product, project_symmetry, CovariantTensor, SymmetryClass};
use theorem_checker::check_eigen_link;
use weitzenboeck::{
    einstein_shift, r2_apply, r2_quadratic_eigenframe, weitzenboeck_apply, weitzenboeck_apply_commutator_form,
    weitzenboeck_quadratic, weitzenboeck_quadratic_eigenframe,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    /// The identity or inequality being checked.
    pub checks: String,
    pub value: f64,
    pub tolerance: f64,
    /// `value < tolerance` unless the check says otherwise.
    pub comparison: &'static str,
    pub pass: bool,
}

impl IdentityCheck {
    pub fn below(name: &str, checks: &str, value: f64, tolerance: f64) -> Self {
        IdentityCheck { name: name.into(), checks: checks.into(), value, tolerance, comparison: "<", pass: value < tolerance }
    }
    pub fn at_most(name: &str, checks: &str, value: f64, tolerance: f64) -> Self {
        IdentityCheck { name: name.into(), checks: checks.into(), value, tolerance, comparison: "<=", pass: value <= tolerance }
    }
    pub fn at_least(name: &str, checks: &str, value: f64, tolerance: f64) -> Self {
        IdentityCheck { name: name.into(), checks: checks.into(), value, tolerance, comparison: ">=", pass: value >= tolerance }
    }
}

fn random_tensor(rng: &mut ChaCha8Rng, n: usize, p: usize) -> CovariantTensor {
    let comps = (0..n.pow(p as u32)).map(|_| rng.random_range(-1.0..1.0)).collect();
    CovariantTensor::from_components(n, p, comps).expect("component count matches")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Worst disagreement among the contraction form, the commutator form and the
/// eigenframe quadratic over `samples` random frames and tensors of order ≤ `max_p`.
pub fn weitzenboeck_agreement(curv: &CurvatureData, samples: usize, max_p: usize, rng: &mut ChaCha8Rng) -> Result<f64, CliError> {
    let n = curv.n();
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let c = curv.rotated(&random_orthogonal(n, rng))?;
        let p = rng.random_range(1..=max_p);
        let t = random_tensor(rng, n, p);
        let a = weitzenboeck_apply(&c, &t)?;
        let b = weitzenboeck_apply_commutator_form(&c, &t)?;
        worst = worst.max(a.max_abs_diff(&b)? / a.norm().max(1.0));
        let q = weitzenboeck_quadratic(&c, &t)?;
        worst = worst.max(rel(q, weitzenboeck_quadratic_eigenframe(&c, &t)?));
    }
    Ok(worst)
}

/// Worst relative gap between ⟨ℜ₂φ, φ⟩ and 2Σ_{i<j} sec(e_i∧e_j)(μ_i−μ_j)² on random symmetric φ.
pub fn symmetric_form_agreement(curv: &CurvatureData, samples: usize, rng: &mut ChaCha8Rng) -> Result<f64, CliError> {
    let n = curv.n();
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let phi = project_symmetry(&random_tensor(rng, n, 2), SymmetryClass::Symmetric)?;
        let direct = inner_product(&r2_apply(curv, &phi)?, &phi)?;
        worst = worst.max(rel(direct, r2_quadratic_eigenframe(curv, &phi)?));
    }
    Ok(worst)
}

/// Curvature-only checks; valid on every catalog space.
pub fn pointwise_suite(space: &ModelSpace, seed: u64) -> Result<Vec<IdentityCheck>, CliError> {
    let curv = space.curvature()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_p = if curv.n() <= 4 { 3 } else { 2 };
    Ok(vec![
        IdentityCheck::below(
            "weitzenboeck_three_way",
            "contraction form = commutator form = eigenframe quadratic (relative)",
            weitzenboeck_agreement(&curv, 100, max_p, &mut rng)?,
            1e-10,
        ),
        IdentityCheck::below(
            "symmetric_two_tensor_forms",
            "<R_2 phi, phi> = 2 sum_{i<j} sec(e_i^e_j)(mu_i - mu_j)^2 (relative)",
            symmetric_form_agreement(&curv, 100, &mut rng)?,
            1e-10,
        ),
        IdentityCheck::at_most(
            "metric_annihilated",
            "R_2(g) = 0 exactly",
            r2_apply(&curv, &CovariantTensor::metric(curv.n())?)?.norm(),
            0.0,
        ),
    ])
}

pub fn has_field_discretization(space: &ModelSpace) -> bool {
    match space.kind() {
        ModelKind::RoundSphere2 { .. } => true,
        ModelKind::FlatTorus { periods } => (2..=3).contains(&periods.len()),
        _ => false,
    }
}

/// Sup-norm Bochner residuals on band-limited fields for p = 0, 1, 2.
pub fn bochner_sup(space: &ModelSpace, res: &[usize], c: f64, seed: u64) -> Result<Vec<f64>, CliError> {
    let grid = Grid::new(space, res)?;
    (0..=2)
        .map(|p| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p as u64 + 1));
            let f = TensorField::random_smooth(&grid, p, SymmetryClass::General, 3, &mut rng)?;
            Ok(bochner_residual(&f, c)?.max_abs())
        })
        .collect()
}

/// Smallest Kato gap over `count` random fields of order 1 and 2.
pub fn kato_min_gap(space: &ModelSpace, res: &[usize], count: usize, seed: u64) -> Result<f64, CliError> {
    let grid = Grid::new(space, res)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for i in 0..count {
        let p = 1 + i % 2;
        let band = 1 + i % 3;
        let f = TensorField::random_smooth(&grid, p, SymmetryClass::General, band, &mut rng)?;
        worst = worst.min(kato_gap(&f)?);
    }
    Ok(worst)
}

/// max |Δ_L(c=1) − Δ_E − (2s/n) Id| over assembled entries.
pub fn einstein_relation_defect(space: &ModelSpace, res: &[usize]) -> Result<f64, CliError> {
    let curv = space.curvature()?;
    let shift = einstein_shift(curv.scalar(), curv.n());
    let lich = assemble(space, 2, SymmetryClass::Symmetric, OperatorKind::Lichnerowicz { c: 1.0 }, res)?;
    let ein = assemble(space, 2, SymmetryClass::Symmetric, OperatorKind::Einstein, res)?;
    let mut diff: HashMap<(usize, usize), f64> = HashMap::new();
    for (r, c, x) in lich.entries() {
        *diff.entry((r, c)).or_default() += x;
    }
    for (r, c, y) in ein.entries() {
        *diff.entry((r, c)).or_default() -= y;
    }
    for i in 0..lich.dim() {
        *diff.entry((i, i)).or_default() -= shift;
    }
    let worst = diff.values().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(worst)
}

/// The constant symmetric tensor dx⊗dx − dy⊗dy on a flat 2-torus.
pub fn page_pope_field(grid: &Grid) -> Result<TensorField, CliError> {
    let t = CovariantTensor::from_components(2, 2, vec![1.0, 0.0, 0.0, -1.0])?;
    Ok(TensorField::constant(grid.clone(), &t, SymmetryClass::Symmetric)?)
}

fn halved(res: &[usize]) -> Vec<usize> {
    res.iter().map(|&r| (r / 2).max(4)).collect()
}

/// Field-level checks on a discretized space at resolution `res`.
pub fn field_suite(space: &ModelSpace, res: &[usize], seed: u64) -> Result<Vec<IdentityCheck>, CliError> {
    let sphere = matches!(space.kind(), ModelKind::RoundSphere2 { .. });
    let mut out = Vec::new();

    if sphere {
        let coarse = bochner_sup(space, &halved(res), 1.0, seed)?;
        let fine = bochner_sup(space, res, 1.0, seed)?;
        let ratio = coarse.iter().zip(&fine).map(|(a, b)| a / b).fold(f64::INFINITY, f64::min);
        out.push(IdentityCheck::at_least(
            "bochner_refinement",
            "sup-norm Bochner residual ratio under 2x refinement, worst over p = 0..2",
            ratio,
            3.5,
        ));
    } else {
        let worst = [1.0, -1.0]
            .iter()
            .map(|&c| bochner_sup(space, res, c, seed))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .flatten()
            .fold(0.0f64, f64::max);
        out.push(IdentityCheck::below("bochner", "1/2 Delta_B |F|^2 = <Delta_L F, F> - |DF|^2 - c<R_p F, F>, sup norm", worst, 1e-8));
    }

    out.push(IdentityCheck::at_least("kato", "|DF|^2 - |d|F||^2 >= 0, worst over 10 fields", kato_min_gap(space, res, 10, seed)?, -1e-6));

    let tc = trace_commutation_residual(space, res)?;
    out.push(IdentityCheck::below(
        "trace_commutation",
        "trace_g(Delta_L phi) = Delta (trace_g phi), c = 1",
        tc,
        if sphere { 1e-5 } else { 1e-10 },
    ));

    if space.is_einstein() {
        out.push(IdentityCheck::below(
            "einstein_relation",
            "Delta_L(c=1) - Delta_E - (2s/n) Id = 0, matrix max-norm",
            einstein_relation_defect(space, res)?,
            1e-12,
        ));
        let op = assemble(space, 2, SymmetryClass::Symmetric, OperatorKind::Lichnerowicz { c: 1.0 }, res)?;
        let rep = spectrum(&op, 6, None)?;
        let link = check_eigen_link(space, &rep.kernel_basis)?;
        out.push(IdentityCheck::below(
            "eigen_link",
            &format!("Delta_E F = {} F on computed Ker Delta_L fields, relative residual vs kernel tolerance", link.expected),
            link.max_residual,
            rep.kernel_tol,
        ));
        if space.curvature()?.scalar() > 0.0 {
            let worst = link.quadratic_forms.iter().fold(f64::NEG_INFINITY, |m, q| m.max(*q));
            out.push(IdentityCheck::below("eigen_link_sign", "<Delta_E F, F> < 0 on Ker Delta_L when s > 0", worst, 0.0));
        }
    }

    if let ModelKind::FlatTorus { periods } = space.kind() {
        if periods.len() == 2 {
            let grid = Grid::new(space, res)?;
            let phi = page_pope_field(&grid)?;
            let tt = tt_check(&phi, 1e-12)?;
            out.push(IdentityCheck::below(
                "page_pope_tt",
                "dx*dx - dy*dy is divergence free and traceless",
                tt.divergence_norm.max(tt.trace_norm),
                1e-12,
            ));
            let op = assemble(space, 2, SymmetryClass::Symmetric, OperatorKind::Lichnerowicz { c: 1.0 }, res)?;
            out.push(IdentityCheck::below("page_pope_harmonic", "Delta_L(dx*dx - dy*dy) = 0, c = 1", op.apply(&phi)?.norm(), 1e-10));
        }
    }
    Ok(out)
}
