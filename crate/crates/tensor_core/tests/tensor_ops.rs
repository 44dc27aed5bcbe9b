use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tensor_core::*;

fn random_tensor(rng: &mut ChaCha8Rng, n: usize, p: usize) -> CovariantTensor {
    let comps = (0..n.pow(p as u32)).map(|_| rng.random_range(-1.0..1.0)).collect();
    CovariantTensor::from_components(n, p, comps).unwrap()
}

fn random_skew(rng: &mut ChaCha8Rng, n: usize) -> SkewEndomorphism {
    let coords: Vec<f64> = (0..n * (n - 1) / 2).map(|_| rng.random_range(-1.0..1.0)).collect();
    SkewEndomorphism::from_lambda2(n, &coords).unwrap()
}

#[test]
fn inner_product_examples() {
    let z = CovariantTensor::zeros(3, 2).unwrap();
    assert_eq!(inner_product(&z, &z).unwrap(), 0.0);
    let g = CovariantTensor::metric(3).unwrap();
    assert_eq!(inner_product(&g, &g).unwrap(), 3.0);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let t = random_tensor(&mut rng, 4, 3);
    let u = random_tensor(&mut rng, 4, 3);
    let mut brute = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                brute += t.get(&[i, j, k]) * u.get(&[i, j, k]);
            }
        }
    }
    assert!((inner_product(&t, &u).unwrap() - brute).abs() < 1e-13);
}

#[test]
fn inner_product_rejects_mismatched_shapes() {
    let a = CovariantTensor::zeros(3, 2).unwrap();
    let b = CovariantTensor::zeros(3, 1).unwrap();
    assert!(matches!(inner_product(&a, &b), Err(TensorError::Shape(_))));
}

#[test]
fn limits_are_enforced() {
    assert!(matches!(CovariantTensor::zeros(9, 2), Err(TensorError::Limit { .. })));
    assert!(matches!(CovariantTensor::zeros(3, 5), Err(TensorError::Limit { .. })));
    assert!(CovariantTensor::zeros(8, 4).is_ok());
}

#[test]
fn trace_examples() {
    let g = CovariantTensor::metric(5).unwrap();
    let tr = trace_g(&g, 0, 1).unwrap();
    assert_eq!(tr.p(), 0);
    assert_eq!(tr.components()[0], 5.0);

    let d = CovariantTensor::symmetric_from_matrix(2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
    assert_eq!(trace_g(&d, 0, 1).unwrap().components()[0], 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let t = project_symmetry(&random_tensor(&mut rng, 3, 2), SymmetryClass::Symmetric).unwrap();
    let diag_sum: f64 = (0..3).map(|i| t.get(&[i, i])).sum();
    assert!((trace_g(&t, 0, 1).unwrap().components()[0] - diag_sum).abs() < 1e-15);
}

#[test]
fn trace_errors() {
    let v = CovariantTensor::zeros(3, 1).unwrap();
    assert!(matches!(trace_g(&v, 0, 1), Err(TensorError::Order(_))));
    let t = CovariantTensor::zeros(3, 3).unwrap();
    assert!(matches!(trace_g(&t, 0, 3), Err(TensorError::Index { .. })));
    assert!(matches!(trace_g(&t, 1, 1), Err(TensorError::Index { .. })));
}

#[test]
fn trace_of_rank_three_contracts_chosen_slots() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t = random_tensor(&mut rng, 3, 3);
    let tr = trace_g(&t, 0, 2).unwrap();
    for j in 0..3 {
        let expect: f64 = (0..3).map(|i| t.get(&[i, j, i])).sum();
        assert!((tr.get(&[j]) - expect).abs() < 1e-15);
    }
}

#[test]
fn projection_examples() {
    let g = CovariantTensor::metric(3).unwrap();
    let s = project_symmetry(&g, SymmetryClass::Symmetric).unwrap();
    assert!(s.max_abs_diff(&g).unwrap() < 1e-15);

    let t = CovariantTensor::from_components(2, 2, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
    let a = project_symmetry(&t, SymmetryClass::Alternating).unwrap();
    assert_eq!(a.components(), &[0.0, 0.5, -0.5, 0.0]);

    let z = project_symmetry(&g, SymmetryClass::SymmetricTraceless).unwrap();
    assert!(z.norm() < 1e-15);
}

#[test]
fn class_dimensions_match_counting_formulas() {
    let binom = |a: usize, b: usize| -> usize {
        if b > a {
            return 0;
        }
        (0..b).fold(1usize, |acc, k| acc * (a - k) / (k + 1))
    };
    for n in 2..=4 {
        for p in 0..=3 {
            assert_eq!(class_dimension(n, p, SymmetryClass::General).unwrap(), n.pow(p as u32));
            let sym = binom(n + p - 1, p);
            assert_eq!(class_dimension(n, p, SymmetryClass::Symmetric).unwrap(), sym);
            assert_eq!(class_dimension(n, p, SymmetryClass::Alternating).unwrap(), binom(n, p));
            let traceless = if p >= 2 { sym - binom(n + p - 3, p - 2) } else { sym };
            assert_eq!(class_dimension(n, p, SymmetryClass::SymmetricTraceless).unwrap(), traceless);
        }
    }
}

#[test]
fn class_tagging_validates() {
    let t = CovariantTensor::from_components(2, 2, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
    assert!(t.clone().with_class(SymmetryClass::Symmetric).is_err());
    let g = CovariantTensor::metric(2).unwrap();
    assert!(g.clone().with_class(SymmetryClass::SymmetricTraceless).is_err());
    assert!(g.with_class(SymmetryClass::Symmetric).is_ok());
}

#[test]
fn skew_action_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let a = random_skew(&mut rng, 3);
    let s = CovariantTensor::scalar(3, 2.5).unwrap();
    assert_eq!(skew_action(&a, &s).unwrap().components(), &[0.0]);

    let g = CovariantTensor::metric(3).unwrap();
    assert!(skew_action(&a, &g).unwrap().norm() < 1e-15);

    // (A·T)_k = −Σ_m A_{mk} T_m, i.e. the vector −Aᵀ T.
    let rot = SkewEndomorphism::rotation_generator(2, 0, 1).unwrap();
    let t = random_tensor(&mut rng, 2, 1);
    let at = skew_action(&rot, &t).unwrap();
    for k in 0..2 {
        let expect = -(0..2).map(|m| rot.entry(m, k) * t.get(&[m])).sum::<f64>();
        assert!((at.get(&[k]) - expect).abs() < 1e-15);
    }
    assert!((at.get(&[0]) + t.get(&[1])).abs() < 1e-15);
    assert!((at.get(&[1]) - t.get(&[0])).abs() < 1e-15);
}

#[test]
fn skew_rejects_symmetric_matrix() {
    assert!(SkewEndomorphism::new(2, vec![0.0, 1.0, 1.0, 0.0]).is_err());
}

#[test]
fn eigen_examples() {
    let e = eigen_decompose_symmetric(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0], 3).unwrap();
    assert!(e.values.iter().all(|v| (v - 1.0).abs() < 1e-14));

    let e = eigen_decompose_symmetric(&[2.0, 0.0, 0.0, -1.0], 2).unwrap();
    assert!((e.values[0] - 2.0).abs() < 1e-14 && (e.values[1] + 1.0).abs() < 1e-14);
    assert!((e.vectors[0][0].abs() - 1.0).abs() < 1e-14);
    assert!((e.vectors[1][1].abs() - 1.0).abs() < 1e-14);

    assert!(eigen_decompose_symmetric(&[0.0, 1.0, 0.0, 0.0], 2).is_err());
}

#[test]
fn eigen_reconstructs_random_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let d = 6;
    let mut m = vec![0.0; d * d];
    for i in 0..d {
        for j in i..d {
            let v = rng.random_range(-1.0..1.0);
            m[i * d + j] = v;
            m[j * d + i] = v;
        }
    }
    let e = eigen_decompose_symmetric(&m, d).unwrap();
    assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    for i in 0..d {
        for j in 0..d {
            let r: f64 = (0..d).map(|k| e.values[k] * e.vectors[k][i] * e.vectors[k][j]).sum();
            assert!((r - m[i * d + j]).abs() < 1e-9);
            let o: f64 = (0..d).map(|k| e.vectors[i][k] * e.vectors[j][k]).sum();
            assert!((o - if i == j { 1.0 } else { 0.0 }).abs() < 1e-10);
        }
    }
}

fn shape() -> impl Strategy<Value = (usize, usize, u64)> {
    (2usize..=4, 0usize..=3, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inner_product_is_symmetric((n, p, seed) in shape()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tensor(&mut rng, n, p);
        let u = random_tensor(&mut rng, n, p);
        prop_assert_eq!(inner_product(&t, &u).unwrap(), inner_product(&u, &t).unwrap());
        prop_assert!(inner_product(&t, &t).unwrap() >= 0.0);
    }

    #[test]
    fn projections_are_orthogonal((n, p, seed) in shape(), class_idx in 0usize..4) {
        let class = SymmetryClass::ALL[class_idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tensor(&mut rng, n, p);
        let u = random_tensor(&mut rng, n, p);
        let pt = project_symmetry(&t, class).unwrap();
        let ppt = project_symmetry(&pt, class).unwrap();
        prop_assert!(ppt.max_abs_diff(&pt).unwrap() < 1e-12);
        let pu = project_symmetry(&u, class).unwrap();
        let resid = u.add_scaled(-1.0, &pu).unwrap();
        prop_assert!(inner_product(&pt, &resid).unwrap().abs() < 1e-10);
    }

    #[test]
    fn traceless_projection_has_no_trace((n, p, seed) in (2usize..=4, 2usize..=4, any::<u64>())) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tensor(&mut rng, n, p);
        let z = project_symmetry(&t, SymmetryClass::SymmetricTraceless).unwrap();
        for a in 0..p {
            for b in a + 1..p {
                prop_assert!(trace_g(&z, a, b).unwrap().norm() < 1e-12);
            }
        }
    }

    #[test]
    fn skew_action_is_lie_algebra_action((n, p, seed) in shape()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_skew(&mut rng, n);
        let b = random_skew(&mut rng, n);
        let t = random_tensor(&mut rng, n, p);
        let ab = skew_action(&a, &skew_action(&b, &t).unwrap()).unwrap();
        let ba = skew_action(&b, &skew_action(&a, &t).unwrap()).unwrap();
        let lhs = ab.add_scaled(-1.0, &ba).unwrap();
        let rhs = skew_action(&a.commutator(&b).unwrap(), &t).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-10);
    }

    #[test]
    fn skew_action_is_bilinear((n, p, seed) in shape(), s in -2.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_skew(&mut rng, n);
        let t = random_tensor(&mut rng, n, p);
        let u = random_tensor(&mut rng, n, p);
        let lhs = skew_action(&a, &t.add_scaled(s, &u).unwrap()).unwrap();
        let rhs = skew_action(&a, &t).unwrap().add_scaled(s, &skew_action(&a, &u).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
    }
}
