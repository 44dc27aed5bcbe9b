use curvature::ModelSpace;
use discrete_fields::*;
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use tensor_core::{CovariantTensor, SymmetryClass};

fn torus2() -> ModelSpace {
    ModelSpace::flat_torus(vec![1.0, 1.0]).unwrap()
}

fn sphere() -> ModelSpace {
    ModelSpace::round_sphere2(1.0).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn cos_x(grid: &Grid) -> TensorField {
    TensorField::from_fn(grid.clone(), 0, SymmetryClass::General, |x| vec![(2.0 * PI * x[0]).cos()]).unwrap()
}

fn page_pope(grid: &Grid) -> TensorField {
    let t = CovariantTensor::from_components(2, 2, vec![1.0, 0.0, 0.0, -1.0]).unwrap();
    TensorField::constant(grid.clone(), &t, SymmetryClass::Symmetric).unwrap()
}

#[test]
fn constant_field_has_zero_derivative_on_torus() {
    let grid = Grid::new(&torus2(), &[16]).unwrap();
    let t = CovariantTensor::from_components(2, 1, vec![0.3, -1.2]).unwrap();
    let f = TensorField::constant(grid, &t, SymmetryClass::General).unwrap();
    assert!(covariant_derivative(&f).unwrap().max_abs() < 1e-12);
    assert!(adjoint_derivative(&f).unwrap().max_abs() < 1e-12);
}

#[test]
fn derivative_of_cosine_is_analytic() {
    let grid = Grid::new(&torus2(), &[32]).unwrap();
    let df = covariant_derivative(&cos_x(&grid)).unwrap();
    for node in 0..grid.num_nodes() {
        let x = grid.node_coords(node);
        let want = [-2.0 * PI * (2.0 * PI * x[0]).sin(), 0.0];
        for a in 0..2 {
            assert!((df.node(node)[a] - want[a]).abs() < 1e-10);
        }
    }
}

#[test]
fn adjoint_of_gradient_is_minus_laplacian() {
    let grid = Grid::new(&torus2(), &[32]).unwrap();
    let f = cos_x(&grid);
    let back = adjoint_derivative(&covariant_derivative(&f).unwrap()).unwrap();
    for node in 0..grid.num_nodes() {
        assert!((back.node(node)[0] - (2.0 * PI).powi(2) * f.node(node)[0]).abs() < 1e-10);
    }
}

#[test]
fn metric_is_parallel_on_sphere() {
    let grid = Grid::new(&sphere(), &[64, 128]).unwrap();
    assert!(covariant_derivative(&TensorField::metric(grid)).unwrap().max_abs() < 1e-6);
}

#[test]
fn integration_by_parts_is_exact_on_torus() {
    let grid = Grid::new(&torus2(), &[16]).unwrap();
    let mut r = rng(1);
    let f = TensorField::random_smooth(&grid, 1, SymmetryClass::General, 3, &mut r).unwrap();
    let g = TensorField::random_smooth(&grid, 2, SymmetryClass::General, 3, &mut r).unwrap();
    let lhs = covariant_derivative(&f).unwrap().inner(&g).unwrap();
    let rhs = f.inner(&adjoint_derivative(&g).unwrap()).unwrap();
    assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
}

#[test]
fn integration_by_parts_holds_on_sphere() {
    let grid = Grid::new(&sphere(), &[24]).unwrap();
    let mut r = rng(2);
    for p in 0..2 {
        let f = TensorField::random_smooth(&grid, p, SymmetryClass::General, 3, &mut r).unwrap();
        let g = TensorField::random_smooth(&grid, p + 1, SymmetryClass::General, 3, &mut r).unwrap();
        let lhs = covariant_derivative(&f).unwrap().inner(&g).unwrap();
        let rhs = f.inner(&adjoint_derivative(&g).unwrap()).unwrap();
        assert!((lhs - rhs).abs() < 1e-8 * lhs.abs().max(1.0), "p={p}: {lhs} vs {rhs}");
    }
}

#[test]
fn adjoint_rejects_scalars() {
    let grid = Grid::new(&torus2(), &[8]).unwrap();
    let f = TensorField::zeros(grid, 0, SymmetryClass::General);
    assert!(matches!(adjoint_derivative(&f), Err(FieldError::Shape(_))));
}

#[test]
fn unsupported_spaces_and_sizes_are_capability_errors() {
    let h = ModelSpace::hyperbolic(2, -1.0).unwrap();
    assert!(matches!(assemble(&h, 0, SymmetryClass::General, OperatorKind::Rough, &[8]), Err(FieldError::Capability(_))));
    assert!(matches!(Grid::new(&torus2(), &[128]), Err(FieldError::Capability(_))));
    assert!(matches!(Grid::new(&sphere(), &[128]), Err(FieldError::Capability(_))));
    let grid = Grid::new(&torus2(), &[8]).unwrap();
    assert!(matches!(grid.check_order(3), Err(FieldError::Capability(_))));
    assert!(matches!(
        assemble(&sphere(), 2, SymmetryClass::General, OperatorKind::Hodge, &[8]),
        Err(FieldError::Capability(_))
    ));
}

#[test]
fn flat_torus_operators_equal_the_rough_laplacian() {
    let rough = assemble(&torus2(), 2, SymmetryClass::General, OperatorKind::Rough, &[8]).unwrap();
    for kind in [OperatorKind::Lichnerowicz { c: 2.5 }, OperatorKind::Lichnerowicz { c: -1.0 }, OperatorKind::Einstein] {
        let op = assemble(&torus2(), 2, SymmetryClass::General, kind, &[8]).unwrap();
        assert_eq!(op.entries(), rough.entries());
    }
}

#[test]
fn scalar_operator_on_sphere_has_no_curvature_term() {
    let rough = assemble(&sphere(), 0, SymmetryClass::General, OperatorKind::Rough, &[12]).unwrap();
    let lich = assemble(&sphere(), 0, SymmetryClass::General, OperatorKind::Lichnerowicz { c: 3.0 }, &[12]).unwrap();
    assert_eq!(rough.entries(), lich.entries());
}

#[test]
fn einstein_kind_is_shifted_lichnerowicz() {
    let s = sphere();
    let lich = assemble(&s, 2, SymmetryClass::Symmetric, OperatorKind::Lichnerowicz { c: 1.0 }, &[32]).unwrap();
    let ein = assemble(&s, 2, SymmetryClass::Symmetric, OperatorKind::Einstein, &[32]).unwrap();
    assert_eq!(ein.shift(), 2.0);
    let (a, b) = (lich.entries(), ein.entries());
    assert_eq!(a.len(), b.len());
    let mut worst = 0.0f64;
    for ((r, c, x), (r2, c2, y)) in a.iter().zip(&b) {
        assert_eq!((r, c), (r2, c2));
        let id = if r == c { 1.0 } else { 0.0 };
        worst = worst.max((x - y - 2.0 * id).abs());
    }
    assert!(worst < 1e-12, "{worst}");
}

#[test]
fn assembled_matrix_is_symmetric_and_rough_part_semidefinite() {
    for (space, res) in [(torus2(), vec![8]), (sphere(), vec![16])] {
        let op = assemble(&space, 2, SymmetryClass::General, OperatorKind::Rough, &res).unwrap();
        let mut map = std::collections::HashMap::new();
        for (r, c, v) in op.entries() {
            *map.entry((r, c)).or_insert(0.0) += v;
        }
        for (&(r, c), v) in &map {
            assert!((v - map.get(&(c, r)).copied().unwrap_or(0.0)).abs() <= 1e-8 * op.norm_inf());
        }
        let pairs = smallest_eigenpairs(&op, 4).unwrap();
        assert!(pairs.values[0] > -1e-8);
    }
}

#[test]
fn operator_is_self_adjoint_under_quadrature() {
    let mut r = rng(3);
    for (space, res) in [(torus2(), vec![16]), (sphere(), vec![16])] {
        let op = assemble(&space, 1, SymmetryClass::General, OperatorKind::Lichnerowicz { c: 1.0 }, &res).unwrap();
        let f = TensorField::random_smooth(op.grid(), 1, SymmetryClass::General, 3, &mut r).unwrap();
        let g = TensorField::random_smooth(op.grid(), 1, SymmetryClass::General, 3, &mut r).unwrap();
        let a = op.apply(&f).unwrap().inner(&g).unwrap();
        let b = f.inner(&op.apply(&g).unwrap()).unwrap();
        assert!((a - b).abs() < 1e-8 * a.abs().max(1.0));
    }
}

#[test]
fn rough_laplacian_matches_derivative_pairing_on_torus() {
    let grid = Grid::new(&torus2(), &[16]).unwrap();
    let op = assemble(&torus2(), 2, SymmetryClass::General, OperatorKind::Rough, &[16]).unwrap();
    let mut r = rng(4);
    let f = TensorField::random_smooth(&grid, 2, SymmetryClass::General, 3, &mut r).unwrap();
    let g = TensorField::random_smooth(&grid, 2, SymmetryClass::General, 3, &mut r).unwrap();
    let a = op.apply(&f).unwrap().inner(&g).unwrap();
    let b = covariant_derivative(&f).unwrap().inner(&covariant_derivative(&g).unwrap()).unwrap();
    assert!((a - b).abs() < 1e-8 * a.abs().max(1.0), "{a} vs {b}");
}

#[test]
fn rough_laplacian_approaches_derivative_pairing_on_sphere() {
    let mut errs = Vec::new();
    for res in [16usize, 32] {
        let grid = Grid::new(&sphere(), &[res]).unwrap();
        let op = assemble(&sphere(), 1, SymmetryClass::General, OperatorKind::Rough, &[res]).unwrap();
        let mut r = rng(5);
        let f = TensorField::random_smooth(&grid, 1, SymmetryClass::General, 3, &mut r).unwrap();
        let a = op.apply(&f).unwrap().inner(&f).unwrap();
        let b = covariant_derivative(&f).unwrap().norm().powi(2);
        errs.push((a - b).abs() / b);
    }
    assert!(errs[1] < errs[0] / 3.0, "{errs:?}");
}

#[test]
fn torus_scalar_spectrum_is_fourier() {
    let op = assemble(&torus2(), 0, SymmetryClass::General, OperatorKind::Rough, &[32]).unwrap();
    let rep = spectrum(&op, 9, None).unwrap();
    assert_eq!(rep.kernel_dim, 1);
    let k1 = (2.0 * PI).powi(2);
    for v in &rep.eigenvalues[1..5] {
        assert!((v - k1).abs() < 1e-9 * k1);
    }
    for v in &rep.eigenvalues[5..9] {
        assert!((v - 2.0 * k1).abs() < 1e-9 * k1);
    }
}

#[test]
fn sphere_scalar_spectrum_matches_spherical_harmonics() {
    let op = assemble(&sphere(), 0, SymmetryClass::General, OperatorKind::Rough, &[64, 128]).unwrap();
    let rep = spectrum(&op, 9, None).unwrap();
    assert_eq!(rep.kernel_dim, 1);
    let want = [0.0, 2.0, 2.0, 2.0, 6.0, 6.0, 6.0, 6.0, 6.0];
    for (v, w) in rep.eigenvalues.iter().zip(want) {
        assert!((v - w).abs() <= 0.01 * w + 1e-9, "{v} vs {w}");
    }
}

#[test]
fn torus_hodge_kernels_are_betti_numbers() {
    let t = torus2();
    for (p, class, b) in [(0, SymmetryClass::General, 1), (1, SymmetryClass::General, 2), (2, SymmetryClass::Alternating, 1)] {
        let op = assemble(&t, p, class, OperatorKind::Hodge, &[32]).unwrap();
        let rep = spectrum(&op, b + 4, None).unwrap();
        assert_eq!(rep.kernel_dim, b, "p={p}");
        assert!(rep.residuals.iter().all(|r| *r < 1e-9));
    }
}

#[test]
fn sphere_one_forms_have_no_harmonic_part() {
    let op = assemble(&sphere(), 1, SymmetryClass::General, OperatorKind::Hodge, &[32]).unwrap();
    let rep = spectrum(&op, 6, None).unwrap();
    assert_eq!(rep.kernel_dim, 0);
    assert!((rep.eigenvalues[0] - 2.0).abs() < 0.02 * 2.0);
}

#[test]
fn sphere_symmetric_sampson_kernel_is_the_metric() {
    let op = assemble(&sphere(), 2, SymmetryClass::Symmetric, OperatorKind::Sampson, &[24]).unwrap();
    let rep = spectrum(&op, 12, None).unwrap();
    assert_eq!(rep.kernel_dim, 1);
    assert!(rep.eigenvalues[0] < -1.9);
    let k = &rep.kernel_basis[0];
    let g = TensorField::metric(op.grid().clone());
    let overlap = k.inner(&g).unwrap().abs() / g.norm();
    assert!((overlap - 1.0).abs() < 1e-6);
}

#[test]
fn flat_full_tensor_kernel_is_constants() {
    let op = assemble(&torus2(), 2, SymmetryClass::General, OperatorKind::Lichnerowicz { c: 1.0 }, &[32]).unwrap();
    let rep = spectrum(&op, 8, None).unwrap();
    assert_eq!(rep.kernel_dim, 4);
    for f in &rep.kernel_basis {
        assert!(covariant_derivative(f).unwrap().norm() < 1e-10);
    }
    for (i, f) in rep.kernel_basis.iter().enumerate() {
        for (j, g) in rep.kernel_basis.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((f.inner(g).unwrap() - want).abs() < 1e-8);
        }
    }
}

#[test]
fn spectrum_rejects_bad_k() {
    let op = assemble(&torus2(), 0, SymmetryClass::General, OperatorKind::Rough, &[4]).unwrap();
    assert!(matches!(spectrum(&op, 0, None), Err(FieldError::Shape(_))));
    assert!(matches!(spectrum(&op, 16, None), Err(FieldError::Shape(_))));
}

#[test]
fn page_pope_tensor_is_tt_and_harmonic() {
    let grid = Grid::new(&torus2(), &[16]).unwrap();
    let phi = page_pope(&grid);
    let d = tt_check(&phi, 1e-12).unwrap();
    assert!(d.is_tt, "{d:?}");
    let op = assemble(&torus2(), 2, SymmetryClass::Symmetric, OperatorKind::Lichnerowicz { c: 1.0 }, &[16]).unwrap();
    assert!(op.apply(&phi).unwrap().norm() < 1e-10);
}

#[test]
fn metric_on_sphere_is_not_tt() {
    let grid = Grid::new(&sphere(), &[16]).unwrap();
    let d = tt_check(&TensorField::metric(grid), 1e-6).unwrap();
    assert!(!d.is_tt);
    assert!((d.trace_norm - 2.0 * (4.0 * PI).sqrt()).abs() < 1e-8);
}

#[test]
fn symmetrized_gradient_has_fourier_divergence() {
    let grid = Grid::new(&torus2(), &[32]).unwrap();
    // φ = sym D(cos 2πx dx) = −2π sin(2πx) dx⊗dx, so D*φ = (2π)² cos(2πx) dx.
    let phi = TensorField::from_fn(grid.clone(), 2, SymmetryClass::Symmetric, |x| {
        vec![-2.0 * PI * (2.0 * PI * x[0]).sin(), 0.0, 0.0, 0.0]
    })
    .unwrap();
    let d = tt_check(&phi, 1e-6).unwrap();
    assert!(!d.is_tt);
    let oracle = (2.0 * PI).powi(2) * (0.5f64).sqrt();
    assert!((d.divergence_norm - oracle).abs() < 1e-9, "{} vs {oracle}", d.divergence_norm);
}

#[test]
fn tt_check_needs_symmetric_two_tensors() {
    let grid = Grid::new(&torus2(), &[8]).unwrap();
    let f = TensorField::zeros(grid, 1, SymmetryClass::General);
    assert!(matches!(tt_check(&f, 1e-6), Err(FieldError::Shape(_))));
}

#[test]
fn bochner_residual_vanishes_for_constants() {
    let grid = Grid::new(&torus2(), &[16]).unwrap();
    let t = CovariantTensor::from_components(2, 2, vec![1.0, 2.0, -0.5, 0.25]).unwrap();
    let f = TensorField::constant(grid, &t, SymmetryClass::General).unwrap();
    // Zero up to transform roundoff amplified by the largest mode.
    let norm = assemble(&torus2(), 2, SymmetryClass::General, OperatorKind::Rough, &[16]).unwrap().norm_inf();
    let r = bochner_residual(&f, 1.0).unwrap().max_abs();
    assert!(r < 1e-14 * norm * t.norm_sq(), "{r}");
}

#[test]
fn bochner_residual_is_spectrally_small_on_torus() {
    let grid = Grid::new(&torus2(), &[32]).unwrap();
    let mut r = rng(6);
    for p in 0..=2 {
        let f = TensorField::random_smooth(&grid, p, SymmetryClass::General, 3, &mut r).unwrap();
        for c in [1.0, -1.0] {
            assert!(bochner_residual(&f, c).unwrap().max_abs() < 1e-8);
        }
    }
}

#[test]
fn bochner_residual_converges_at_second_order_on_sphere() {
    for p in 0..=2 {
        let res: Vec<f64> = [32usize, 64]
            .iter()
            .map(|&n| {
                let grid = Grid::new(&sphere(), &[n]).unwrap();
                let f = TensorField::random_smooth(&grid, p, SymmetryClass::General, 3, &mut rng(7)).unwrap();
                bochner_residual(&f, 1.0).unwrap().max_abs()
            })
            .collect();
        assert!(res[0] / res[1] >= 3.5, "p={p}: {res:?}");
    }
}

#[test]
fn kato_gap_cases() {
    let grid = Grid::new(&torus2(), &[32]).unwrap();
    let t = CovariantTensor::from_components(2, 1, vec![1.0, 1.0]).unwrap();
    let parallel = TensorField::constant(grid.clone(), &t, SymmetryClass::General).unwrap();
    assert!(kato_gap(&parallel).unwrap().abs() < 1e-12);
    let f = TensorField::from_fn(grid.clone(), 1, SymmetryClass::General, |x| vec![(2.0 * PI * x[0]).cos(), 0.0]).unwrap();
    assert!(kato_gap(&f).unwrap() >= -1e-9);
    let zero = TensorField::zeros(grid, 1, SymmetryClass::General);
    assert!(matches!(kato_gap(&zero), Err(FieldError::Degenerate(_))));
}

#[test]
fn trace_commutes_with_lichnerowicz() {
    assert!(trace_commutation_residual(&torus2(), &[16]).unwrap() < 1e-10);
    assert!(trace_commutation_residual(&ModelSpace::flat_torus(vec![1.0, 2.0, 1.5]).unwrap(), &[8]).unwrap() < 1e-10);
    assert!(trace_commutation_residual(&sphere(), &[64, 128]).unwrap() < 1e-5);
}

#[test]
fn traceless_fields_stay_traceless_on_torus() {
    let grid = Grid::new(&torus2(), &[16]).unwrap();
    let op = assemble(&torus2(), 2, SymmetryClass::Symmetric, OperatorKind::Lichnerowicz { c: 1.0 }, &[16]).unwrap();
    let phi = TensorField::random_smooth(&grid, 2, SymmetryClass::SymmetricTraceless, 3, &mut rng(8)).unwrap();
    let out = op.apply(&phi).unwrap();
    for k in 0..grid.num_nodes() {
        assert!((out.node(k)[0] + out.node(k)[3]).abs() < 1e-10);
    }
}

#[test]
fn wigner_d_special_values() {
    let b = 0.7f64;
    assert!((wigner_d(1, 0, 0, b) - b.cos()).abs() < 1e-14);
    assert!((wigner_d(1, 1, 0, b) + b.sin() / 2f64.sqrt()).abs() < 1e-14);
    assert!((wigner_d(1, 0, 1, b) - b.sin() / 2f64.sqrt()).abs() < 1e-14);
    assert!((wigner_d(1, 1, 1, b) - (1.0 + b.cos()) / 2.0).abs() < 1e-14);
    assert!((wigner_d(1, -1, 1, b) - (1.0 - b.cos()) / 2.0).abs() < 1e-14);
    assert!((wigner_d(2, 0, 0, b) - 0.5 * (3.0 * b.cos().powi(2) - 1.0)).abs() < 1e-14);
    assert!((wigner_d(2, 2, 0, b) - (3.0f64 / 8.0).sqrt() * b.sin().powi(2)).abs() < 1e-14);
    for l in 0..5i64 {
        for m in -l..=l {
            let col: f64 = (-l..=l).map(|mp| wigner_d(l, mp, m, b).powi(2)).sum();
            assert!((col - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn pole_corrected_faces_stay_positive() {
    for nt in [8usize, 16, 32, 64, 96] {
        for m in 0..6i64 {
            for sigma in -2..=2i64 {
                let prof = fitted_sector_profile(nt, m, sigma);
                assert!(prof.faces.iter().all(|c| *c > 0.0), "nt={nt} m={m} sigma={sigma}");
            }
        }
    }
}

#[test]
fn export_round_trips() {
    let grid = Grid::new(&sphere(), &[6]).unwrap();
    let f = TensorField::random_smooth(&grid, 2, SymmetryClass::Symmetric, 2, &mut rng(9)).unwrap();
    let mut buf = Vec::new();
    f.export(&mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("# space="));
    let back = TensorField::import(std::io::Cursor::new(buf)).unwrap();
    assert_eq!(back, f);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn kato_gap_nonnegative_on_random_fields(seed in any::<u64>(), p in 1usize..=2, on_sphere in any::<bool>()) {
        let (space, res) = if on_sphere { (sphere(), vec![16]) } else { (torus2(), vec![16]) };
        let grid = Grid::new(&space, &res).unwrap();
        let f = TensorField::random_smooth(&grid, p, SymmetryClass::General, 3, &mut rng(seed)).unwrap();
        prop_assert!(kato_gap(&f).unwrap() >= -1e-6);
    }

    #[test]
    fn torus_pairing_identity(seed in any::<u64>(), p in 0usize..=1) {
        let grid = Grid::new(&torus2(), &[8]).unwrap();
        let mut r = rng(seed);
        let f = TensorField::random_smooth(&grid, p, SymmetryClass::General, 2, &mut r).unwrap();
        let g = TensorField::random_smooth(&grid, p + 1, SymmetryClass::General, 2, &mut r).unwrap();
        let lhs = covariant_derivative(&f).unwrap().inner(&g).unwrap();
        let rhs = f.inner(&adjoint_derivative(&g).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0));
    }

    #[test]
    fn class_projection_commutes_with_operator(seed in any::<u64>()) {
        let op = assemble(&sphere(), 2, SymmetryClass::Symmetric, OperatorKind::Lichnerowicz { c: 1.0 }, &[8]).unwrap();
        let f = TensorField::random_smooth(op.grid(), 2, SymmetryClass::General, 2, &mut rng(seed)).unwrap();
        let a = op.apply(&f).unwrap();
        let b = op.apply(&f.project(SymmetryClass::Symmetric).unwrap()).unwrap();
        prop_assert!(a.add_scaled(-1.0, &b).unwrap().max_abs() < 1e-10 * a.max_abs().max(1.0));
    }
}
