use curvature::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tensor_core::{eigen_decompose_symmetric, lambda2_pairs};

fn catalog() -> Vec<ModelSpace> {
    [
        "sphere:n=2,k=1",
        "sphere:n=3,k=1",
        "sphere:n=4,k=2",
        "hyperbolic:n=3,k=-1",
        "hyperbolic:n=4,k=-1",
        "euclidean:n=3",
        "torus:n=2,L=1,1",
        "torus:n=3,L=1,2,3",
        "product:sphere2+sphere2",
        "product:sphere2+line",
        "product:sphere2+hyperbolic2",
        "product:sphere3+circle",
        "product:line+circle",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

#[test]
fn space_form_examples() {
    let flat = space_form_curvature(2, 0.0).unwrap();
    assert!(flat.riemann().iter().all(|&x| x == 0.0));
    assert!(flat.ricci().iter().all(|&x| x == 0.0));
    assert_eq!(flat.scalar(), 0.0);

    let s3 = space_form_curvature(3, 1.0).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(s3.ricci()[i * 3 + j], if i == j { 2.0 } else { 0.0 });
        }
    }
    assert_eq!(s3.scalar(), 6.0);

    let h4 = space_form_curvature(4, -1.0).unwrap();
    for i in 0..4 {
        for j in i + 1..4 {
            assert_eq!(sectional_curvature(&h4, &unit(4, i), &unit(4, j)).unwrap(), -1.0);
        }
    }
    assert!(matches!(space_form_curvature(1, 1.0), Err(CurvatureError::Dimension(_))));
}

#[test]
fn product_examples() {
    let flat = product_curvature(&[space_form_curvature(2, 0.0).unwrap(), space_form_curvature(2, 0.0).unwrap()]).unwrap();
    assert!(flat.riemann().iter().all(|&x| x == 0.0));

    let s2 = space_form_curvature(2, 1.0).unwrap();
    let s2s2 = product_curvature(&[s2.clone(), s2]).unwrap();
    assert_eq!(s2s2.scalar(), 4.0);
    assert_eq!(sectional_curvature(&s2s2, &unit(4, 0), &unit(4, 2)).unwrap(), 0.0);
    assert_eq!(sectional_curvature(&s2s2, &unit(4, 2), &unit(4, 3)).unwrap(), 1.0);
    // Blockwise oracle: every mixed component vanishes.
    for i in 0..2 {
        for j in 2..4 {
            for k in 0..4 {
                for l in 0..4 {
                    assert_eq!(s2s2.r(i, j, k, l), 0.0);
                }
            }
        }
    }

    let s2_line: ModelSpace = "product:sphere2+line".parse().unwrap();
    let c = s2_line.curvature().unwrap();
    let expected = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0];
    assert_eq!(c.ricci(), &expected);
}

#[test]
fn curvature_operator_examples() {
    let s3 = space_form_curvature(3, 1.0).unwrap();
    let m = s3.lambda2_matrix();
    for a in 0..3 {
        for b in 0..3 {
            assert_eq!(m[a * 3 + b], if a == b { 1.0 } else { 0.0 });
        }
    }
    let t: ModelSpace = "torus:n=3".parse().unwrap();
    assert!(t.curvature().unwrap().lambda2_matrix().iter().all(|&x| x == 0.0));

    let s2s2: ModelSpace = "product:sphere2+sphere2".parse().unwrap();
    let mut ev = s2s2.curvature().unwrap().lambda2_eigenvalues();
    ev.sort_by(f64::total_cmp);
    let expect = [0.0, 0.0, 0.0, 0.0, 1.0, 1.0];
    for (a, b) in ev.iter().zip(expect) {
        assert!(close(*a, b, 1e-12));
    }
}

fn brute_second_kind(c: &CurvatureData, phi: &[f64]) -> Vec<f64> {
    let n = c.n();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    out[i * n + j] += c.r(i, k, j, l) * phi[k * n + l];
                }
            }
        }
    }
    out
}

#[test]
fn second_kind_examples() {
    let t: ModelSpace = "torus:n=2".parse().unwrap();
    assert!(t.curvature().unwrap().second_kind_matrix().iter().all(|&x| x == 0.0));

    for n in 2..=5 {
        let c = space_form_curvature(n, 1.0).unwrap();
        // Trace-free φ: (R̊φ)_ij = δ_ij trφ − φ_ij = −φ_ij.
        let mut phi = vec![0.0; n * n];
        phi[1] = 0.7;
        phi[n] = 0.7;
        phi[0] = 1.0;
        phi[n * n - 1] = -1.0;
        let img = c.second_kind_apply(&phi).unwrap();
        let brute = brute_second_kind(&c, &phi);
        for k in 0..n * n {
            assert!(close(img[k], -phi[k], 1e-14));
            assert!(close(img[k], brute[k], 1e-14));
        }
        let g: Vec<f64> = (0..n * n).map(|k| if k % (n + 1) == 0 { 1.0 } else { 0.0 }).collect();
        let img = c.second_kind_apply(&g).unwrap();
        for k in 0..n * n {
            assert!(close(img[k], (n as f64 - 1.0) * g[k], 1e-14));
        }
    }
}

#[test]
fn sectional_examples() {
    let c = space_form_curvature(3, 2.5).unwrap();
    let x = [0.3, -1.2, 0.4];
    let y = [1.0, 0.5, -0.2];
    assert!(close(sectional_curvature(&c, &x, &y).unwrap(), 2.5, 1e-13));
    assert!(matches!(sectional_curvature(&c, &x, &x), Err(CurvatureError::DegeneratePlane)));

    let s2s2 = "product:sphere2+sphere2".parse::<ModelSpace>().unwrap().curvature().unwrap();
    assert!(close(sectional_curvature(&s2s2, &[1.0, 0.0, 0.0, 0.0], &[0.0, 2.0, 0.0, 0.0]).unwrap(), 1.0, 1e-15));
    assert!(close(sectional_curvature(&s2s2, &[1.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 1.0]).unwrap(), 0.0, 1e-15));

    let t = "torus:n=3".parse::<ModelSpace>().unwrap().curvature().unwrap();
    assert_eq!(sectional_curvature(&t, &x, &y).unwrap(), 0.0);
}

#[test]
fn sec_extremes_examples() {
    assert_eq!(sec_extremes(&space_form_curvature(4, 1.0).unwrap(), 1), (1.0, 1.0));
    let s2s2 = "product:sphere2+sphere2".parse::<ModelSpace>().unwrap().curvature().unwrap();
    assert_eq!(sec_extremes(&s2s2, 1), (0.0, 1.0));
    let t = "torus:n=3".parse::<ModelSpace>().unwrap().curvature().unwrap();
    assert_eq!(sec_extremes(&t, 1), (0.0, 0.0));
    let mixed = "product:sphere2+hyperbolic2".parse::<ModelSpace>().unwrap().curvature().unwrap();
    assert_eq!(sec_extremes(&mixed, 1), (-1.0, 1.0));
}

#[test]
fn grassmannian_search_recovers_block_extremes_in_rotated_frame() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for spec in ["product:sphere2+sphere2", "product:sphere2+hyperbolic2(k=-3)", "product:sphere3(k=2)+line"] {
        let c = spec.parse::<ModelSpace>().unwrap().curvature().unwrap();
        let exact = sec_extremes(&c, 1);
        let q = random_orthogonal(c.n(), &mut rng);
        let rot = c.rotated(&q).unwrap();
        assert!(rot.blocks().is_none());
        let (lo, hi) = sec_extremes(&rot, 8);
        assert!(close(lo, exact.0, 1e-8) && close(hi, exact.1, 1e-8), "{spec}: {lo} {hi} vs {exact:?}");
    }
}

#[test]
fn grassmannian_search_brackets_random_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let c = random_algebraic_curvature(4, 3, &mut rng).unwrap();
    let (lo, hi) = sec_extremes(&c, 10);
    assert!(lo <= hi);
    for _ in 0..2000 {
        let x: Vec<f64> = (0..4).map(|_| rand::Rng::random_range(&mut rng, -1.0..1.0)).collect();
        let y: Vec<f64> = (0..4).map(|_| rand::Rng::random_range(&mut rng, -1.0..1.0)).collect();
        let k = sectional_curvature(&c, &x, &y).unwrap();
        assert!(k >= lo - 1e-9 && k <= hi + 1e-9);
    }
}

#[test]
fn a0_examples() {
    let t = "torus:n=3".parse::<ModelSpace>().unwrap().curvature().unwrap();
    assert!(close(a0_estimate(&t), 0.0, 1e-15));
    for n in 2..=5 {
        assert!(close(a0_estimate(&space_form_curvature(n, 1.0).unwrap()), -1.0, 1e-12));
        assert!(close(a0_estimate(&space_form_curvature(n, -1.0).unwrap()), 1.0, 1e-12));
    }
}

#[test]
fn einstein_flags() {
    let cases = [
        ("sphere:n=3,k=1", Some(2.0)),
        ("sphere:n=2,r=2", Some(0.25)),
        ("hyperbolic:n=4", Some(-3.0)),
        ("torus:n=2", Some(0.0)),
        ("product:sphere2+sphere2", Some(1.0)),
        ("product:sphere2+line", None),
        ("product:sphere2+hyperbolic2", None),
        ("product:sphere3+sphere2(k=2)", Some(2.0)),
    ];
    for (spec, expect) in cases {
        let m: ModelSpace = spec.parse().unwrap();
        assert_eq!(m.einstein_constant(), expect, "{spec}");
        let c = m.curvature().unwrap();
        assert_eq!(c.is_einstein(1e-12), expect.is_some(), "{spec}");
        if let Some(k) = expect {
            assert!(close(c.scalar() / c.n() as f64, k, 1e-12));
        }
    }
}

#[test]
fn catalog_parsing() {
    let m: ModelSpace = "torus:n=2,L=1,2".parse().unwrap();
    assert_eq!(m.kind(), &ModelKind::FlatTorus { periods: vec![1.0, 2.0] });
    assert!(m.topology().compact && !m.topology().simply_connected);
    let h: ModelSpace = "hyperbolic:n=3,k=-1".parse().unwrap();
    let t = h.topology();
    assert!(!t.compact && t.complete && t.simply_connected && t.infinite_volume);
    assert_eq!("sphere:n=2,k=4".parse::<ModelSpace>().unwrap().kind(), &ModelKind::RoundSphere2 { radius: 0.5 });
    assert_eq!("product:sphere2+sphere2".parse::<ModelSpace>().unwrap().dim(), 4);
    for bad in ["", "blob:n=2", "sphere:n=3,k=-1", "torus:n=2,L=1,2,3", "product:sphere2", "product:sphere2+cube", "sphere:n=x", "torus:n=2,q=1", "hyperbolic:n=3,k=1"] {
        assert!(matches!(bad.parse::<ModelSpace>(), Err(CurvatureError::Parse(..))), "{bad}");
    }
    for m in catalog() {
        let again: ModelSpace = m.to_string().parse().unwrap();
        assert_eq!(again, m);
    }
}

fn quadratic_on_pair(c: &CurvatureData, x: &[f64], y: &[f64]) -> f64 {
    // Coordinates of x ∧ y in the unit-norm lexicographic basis.
    let pairs = lambda2_pairs(c.n());
    let v: Vec<f64> = pairs.iter().map(|&(i, j)| x[i] * y[j] - x[j] * y[i]).collect();
    let np = pairs.len();
    let m = c.lambda2_matrix();
    (0..np).map(|a| (0..np).map(|b| v[a] * m[a * np + b] * v[b]).sum::<f64>()).sum()
}

fn invariants_hold(c: &CurvatureData) {
    let n = c.n();
    let scale = c.riemann().iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let tol = 1e-12 * scale;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = c.r(i, j, k, l);
                    assert!((v + c.r(j, i, k, l)).abs() <= tol);
                    assert!((v + c.r(i, j, l, k)).abs() <= tol);
                    assert!((v - c.r(k, l, i, j)).abs() <= tol);
                    assert!((v + c.r(i, k, l, j) + c.r(i, l, j, k)).abs() <= tol);
                }
            }
        }
    }
    let mut s = 0.0;
    for k in 0..n {
        for l in 0..n {
            let contraction: f64 = (0..n).map(|i| c.r(i, k, i, l)).sum();
            assert!((c.ricci()[k * n + l] - contraction).abs() <= tol);
        }
        s += c.ricci()[k * n + k];
    }
    assert!((c.scalar() - s).abs() <= tol);
    for (m, d) in [(c.lambda2_matrix(), n * (n - 1) / 2), (c.second_kind_matrix(), n * (n + 1) / 2)] {
        for a in 0..d {
            for b in 0..d {
                assert!((m[a * d + b] - m[b * d + a]).abs() <= tol);
            }
        }
        eigen_decompose_symmetric(m, d).unwrap();
    }
}

#[test]
fn catalog_invariants() {
    for m in catalog() {
        let c = m.curvature().unwrap();
        invariants_hold(&c);
        let ev = c.lambda2_eigenvalues();
        let (lo, hi) = sec_extremes(&c, 1);
        if lo >= 0.0 {
            assert!(ev.iter().all(|&x| x >= -1e-12), "{m}");
        }
        if hi <= 0.0 {
            assert!(ev.iter().all(|&x| x <= 1e-12), "{m}");
        }
        if m.is_einstein() {
            assert!(c.is_einstein(1e-12));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_tensors_satisfy_invariants(n in 2usize..=4, terms in 1usize..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_algebraic_curvature(n, terms, &mut rng).unwrap();
        invariants_hold(&c);
        let q = random_orthogonal(n, &mut rng);
        invariants_hold(&c.rotated(&q).unwrap());
    }

    #[test]
    fn sectional_matches_lambda2_quadratic(n in 2usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_algebraic_curvature(n, 2, &mut rng).unwrap();
        let q = random_orthogonal(n, &mut rng);
        let (x, y): (Vec<f64>, Vec<f64>) = ((0..n).map(|i| q[i * n]).collect(), (0..n).map(|i| q[i * n + 1]).collect());
        let k = sectional_curvature(&c, &x, &y).unwrap();
        prop_assert!((k - quadratic_on_pair(&c, &x, &y)).abs() < 1e-12);
        // Invariance under a change of basis of the plane.
        let x2: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 2.0 * a - 0.5 * b).collect();
        let y2: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 0.3 * a + 1.7 * b).collect();
        prop_assert!((sectional_curvature(&c, &x2, &y2).unwrap() - k).abs() < 1e-10);
    }

    #[test]
    fn space_form_curvature_operator_is_scaled_identity(n in 2usize..=6, kappa in -3.0f64..3.0) {
        let c = space_form_curvature(n, kappa).unwrap();
        let d = n * (n - 1) / 2;
        for a in 0..d {
            for b in 0..d {
                let expect = if a == b { kappa } else { 0.0 };
                prop_assert_eq!(c.lambda2_matrix()[a * d + b], expect);
            }
        }
    }
}
