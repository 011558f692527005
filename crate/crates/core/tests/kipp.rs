use kipp_core::criteria::pq_from_form;
use kipp_core::geom::{convex_hull, hausdorff_convex, support_polygon};
use kipp_core::kipp::*;
use kipp_core::linalg::*;
use kipp_core::pisom::{ath_matrix, Defect2Form};
use kipp_core::sample::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn j2() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])
}

fn j4_padded() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(6, 6);
    for i in 2..5 {
        m[(i, i + 1)] = cr(1.0);
    }
    m
}

/// Direct determinant of `Re(e^{i theta} A) - lambda I`.
fn det_oracle(a: &ComplexMatrix, lambda: f64, theta: f64) -> f64 {
    determinant(&a.hermitian_part(theta).shift(cr(lambda))).re
}

#[test]
fn polynomial_matches_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 1..=7 {
        let a = gaussian_matrix(n, n, &mut rng);
        let p = kippenhahn_polynomial(&a);
        for _ in 0..100 {
            let lambda = rng.random_range(-2.0..2.0);
            let theta = rng.random_range(-3.2..3.2);
            let want = det_oracle(&a, lambda, theta);
            let scale = hadamard_bound(&a.hermitian_part(theta).shift(cr(lambda))).max(1.0);
            assert!((p.eval(lambda, theta) - want).abs() <= 1e-9 * scale);
        }
        for deg in 0..=n {
            for k in (n - deg + 1)..=n {
                assert_eq!(p.coeff(deg, k as i64), cr(0.0));
            }
        }
    }
}

#[test]
fn j2_polynomial_is_theta_free() {
    let p = kippenhahn_polynomial(&j2());
    for &t in &[0.0, 0.7, 2.0, -1.3] {
        for &l in &[0.0, 0.3, 1.1] {
            assert!((p.eval(l, t) - (l * l - 0.25)).abs() < 1e-14);
        }
    }
}

#[test]
fn defect2_polynomial_has_pq_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for st in FormStratum::ALL {
        let f = sample_defect2_form(st, &mut rng);
        let p = kippenhahn_polynomial(&f.matrix());
        let pq = pq_from_form(&f);
        for _ in 0..50 {
            let l = rng.random_range(-1.2..1.2);
            let t = rng.random_range(-3.2..3.2);
            assert!((p.eval(l, t) - pq.eval(l, t)).abs() < 1e-9);
        }
    }
}

#[test]
fn normal_matrix_polynomial_factors() {
    let a = ComplexMatrix::diag(&[cr(1.0), c(0.0, 1.0)]);
    let p = kippenhahn_polynomial(&a);
    for &t in &[0.2f64, 1.0, 2.5] {
        for &l in &[-0.5, 0.1, 0.9] {
            let want = (t.cos() - l) * (-t.sin() - l);
            assert!((p.eval(l, t) - want).abs() < 1e-13);
        }
    }
}

#[test]
fn j2_trace_lies_on_half_circle() {
    let pts = trace_curve(&j2(), 360);
    assert_eq!(pts.len(), 720);
    for s in pts {
        assert!((s.point.norm() - 0.5).abs() < 1e-8);
    }
}

#[test]
fn normal_trace_is_the_eigenvalues() {
    let a = ComplexMatrix::diag(&[cr(0.0), cr(1.0)]);
    for s in trace_curve(&a, 16) {
        assert!(s.point.norm() < 1e-12 || (s.point - cr(1.0)).norm() < 1e-12);
    }
}

#[test]
fn samples_lie_on_supporting_lines() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = gaussian_matrix(5, 5, &mut rng);
    for s in trace_curve(&a, 64) {
        assert!(((cis(s.theta) * s.point).re - s.lambda).abs() < 1e-8);
    }
}

#[test]
fn numerical_radius_examples() {
    assert!((numerical_radius(&j2()).value - 0.5).abs() < 1e-12);
    for t in [0.0, 0.3, 0.7, 0.95] {
        let w = numerical_radius(&ath_matrix(t, 0.0).unwrap()).value;
        let want = (1.0 + (1.0 - t * t).sqrt()).sqrt() / 2.0;
        assert!((w - want).abs() < 1e-9, "t={} w={} want={}", t, w, want);
    }
    let u = ComplexMatrix::diag(&[cr(1.0), c(0.0, 1.0), cr(-1.0)]);
    assert!((numerical_radius(&u).value - 1.0).abs() < 1e-10);
}

#[test]
fn numerical_radius_argmax_of_real_matrix() {
    // positive diagonal: maximum only in the direction theta = 0
    let a = ComplexMatrix::from_real_rows(&[&[0.9, 0.3], &[0.0, 0.2]]);
    let nr = numerical_radius(&a);
    assert_eq!(nr.argmax_thetas.len(), 1);
    assert!(nr.argmax_thetas[0].abs() < 1e-6);
}

#[test]
fn detect_j2() {
    let r = detect_circles(&j2()).unwrap();
    assert_eq!(r.circles.len(), 1);
    assert!(r.circles[0].center.norm() <= 1e-10);
    assert!((r.circles[0].radius - 0.5).abs() <= 1e-10);
    assert_eq!(r.disk, DiskClassification::CircularDisk);
}

#[test]
fn detect_j4_padded() {
    let r = detect_circles(&j4_padded()).unwrap();
    let radii = r.radii();
    let s5 = 5f64.sqrt();
    assert_eq!(radii.len(), 3);
    assert_eq!(radii[0], 0.0);
    assert!(r.circles.iter().any(|c| c.degenerate));
    assert!((radii[1] - (s5 - 1.0) / 4.0).abs() < 1e-8);
    assert!((radii[2] - (s5 + 1.0) / 4.0).abs() < 1e-8);
}

#[test]
fn detect_normal_matrix() {
    let d = ComplexMatrix::diag(&[cr(1.0), cr(2.0), cr(3.0)]);
    let r = detect_circles(&d).unwrap();
    assert!(r.circles.is_empty());
    assert_eq!(r.disk, DiskClassification::NonDisk);
}

#[test]
fn shifted_j2_has_shifted_center() {
    let a = j2().shift(c(-0.3, 0.2));
    let r = detect_circles(&a).unwrap();
    assert_eq!(r.circles.len(), 1);
    assert!((r.circles[0].center - c(0.3, -0.2)).norm() < 1e-8);
    assert!((r.circles[0].radius - 0.5).abs() < 1e-8);
}

#[test]
fn point_circle_examples() {
    let f = Defect2Form::new(0.0, 0.6, 0.8, 0.8, -0.6, 0.0, 0.0).unwrap();
    assert!(contains_point_circle(&f.matrix()));
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = sample_defect2_form(FormStratum::Generic, &mut rng);
    assert!(g.b * g.e > 0.0);
    assert!(!contains_point_circle(&g.matrix()));
    assert!(contains_point_circle(&ComplexMatrix::zeros(3, 3)));
}

#[test]
fn reported_circles_pass_residual_check() {
    for a in [j2(), j4_padded(), ath_matrix(0.5, 0.0).unwrap()] {
        let r = detect_circles(&a).unwrap();
        for c in &r.circles {
            assert!(contains_circle(&a, c.center, c.radius) <= 1e-6);
            assert_eq!(c.degenerate, c.radius == 0.0);
        }
    }
}

fn sorted_radii(r: &CircleReport) -> Vec<f64> {
    let mut v = r.radii();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn rotation_covariance(seed in any::<u64>(), phi in -3.1f64..3.1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = sample_defect2_form(FormStratum::HalfCaseII, &mut rng);
        let a = f.matrix().shift(c(-0.1, 0.05));
        let r0 = detect_circles(&a).unwrap();
        let r1 = detect_circles(&a.scale(cis(phi))).unwrap();
        let (x, y) = (sorted_radii(&r0), sorted_radii(&r1));
        prop_assert_eq!(x.len(), y.len());
        for (p, q) in x.iter().zip(&y) {
            prop_assert!((p - q).abs() < 1e-8);
        }
        for c in &r0.circles {
            let want = c.center * cis(phi);
            prop_assert!(r1.circles.iter().any(|d| (d.center - want).norm() < 1e-8));
        }
    }

    #[test]
    fn unitary_invariance(seed in any::<u64>(), st in prop::sample::select(FormStratum::ALL.to_vec())) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample_defect2_form(st, &mut rng).matrix();
        let b = a.conjugate_by(&haar_unitary(6, &mut rng));
        let (ra, rb) = (detect_circles(&a).unwrap(), detect_circles(&b).unwrap());
        let (x, y) = (sorted_radii(&ra), sorted_radii(&rb));
        prop_assert_eq!(x.len(), y.len());
        for (p, q) in x.iter().zip(&y) {
            prop_assert!((p - q).abs() < 1e-8);
        }
        prop_assert_eq!(ra.disk, rb.disk);
        prop_assert!((numerical_radius(&a).value - numerical_radius(&b).value).abs() < 1e-8);
    }

    #[test]
    fn real_matrices_have_symmetric_curves(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = ComplexMatrix::from_fn(n, n, |_, _| cr(rng.random_range(-1.0..1.0)));
        // sample_angles is symmetric under theta -> -theta except at theta = pi
        let pts = trace_curve(&a, 64);
        for s in &pts {
            let target = s.point.conj();
            prop_assert!(pts.iter().any(|t| (t.point - target).norm() < 1e-8));
        }
    }

    #[test]
    fn hull_of_curve_is_numerical_range(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = gaussian_matrix(n, n, &mut rng);
        let norm = a.norm2();
        let hull = convex_hull(&trace_curve(&a, 4096).iter().map(|s| s.point).collect::<Vec<_>>());
        let poly = support_polygon(&a, 4096);
        prop_assert!(hausdorff_convex(&hull, &poly) <= 1e-4 * norm);
    }
}
