use kipp_core::criteria::*;
use kipp_core::kipp::*;
use kipp_core::linalg::*;
use kipp_core::pisom::*;
use kipp_core::sample::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn form(b: f64, c: f64, d: f64, e: f64, f: f64, g: f64, h: f64) -> Defect2Form {
    Defect2Form::new(b, c, d, e, f, g, h).unwrap()
}

/// Rounded four-digit example data, repaired and reduced.
fn example(i: usize) -> Defect2Form {
    let raw = [
        Defect2Form { b: 0.9469, c: -0.2926, d: 0.1327, e: 0.1464, f: 0.3228, g: 0.2864, h: 0.8900 },
        Defect2Form { b: 0.6380, c: 0.3687, d: 0.6759, e: 0.4362, f: -0.2380, g: -0.7903, h: 0.3583 },
        Defect2Form { b: 0.0923, c: 0.7491, d: 0.6558, e: 0.3001, f: -0.3428, g: 0.8725, h: 0.1760 },
    ][i];
    let p = project_to_partial_isometry(&raw.matrix()).unwrap();
    canonicalize_defect2(&validate(&p, 1e-10).unwrap()).unwrap().form
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

fn predicted_radii(f: &Defect2Form) -> Vec<f64> {
    sorted(circles_defect2(f).iter().map(|c| c.radius).collect())
}

fn oracle_radii(a: &ComplexMatrix) -> Vec<f64> {
    sorted(detect_circles(a).unwrap().radii())
}

fn roots01(p: &RealPolynomial) -> Vec<f64> {
    let mut v = Vec::new();
    for r in poly_real_roots(p, -1e-9, 1.0).unwrap() {
        for _ in 0..r.multiplicity {
            v.push(r.value);
        }
    }
    sorted(v)
}

#[test]
fn pq_for_triple_half_circle() {
    let f = form(1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0);
    let pq = pq_from_form(&f);
    assert!(pq.p.coeffs().iter().all(|c| *c == 0.0));
    for rho in [0.0, 0.1, 0.25, 0.7] {
        let want = (rho - 0.25f64).powi(3);
        assert!((pq.q.eval(rho) - want).abs() < 1e-15);
    }
}

#[test]
fn pq_nilpotent_reduces_to_cubic() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let f = sample_defect2_form(FormStratum::Nilpotent, &mut rng);
        let pq = pq_from_form(&f);
        // only the constant -ceg/16 survives in p
        for rho in [0.0, 0.3, 0.9] {
            assert!((pq.p.eval(rho) + f.c * f.e * f.g / 16.0).abs() < 1e-15);
        }
        let cubic = nilpotent_cubic(f.b, f.c, f.e);
        for (x, y) in pq.q.coeffs().iter().zip(cubic.coeffs()) {
            assert!((x - y).abs() < 1e-15);
        }
    }
}

#[test]
fn nilpotent_three_circles_straddle_half() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let f = sample_defect2_form(FormStratum::NilpotentCegZero, &mut rng);
        let r = predicted_radii(&f);
        let nz: Vec<f64> = r.iter().copied().filter(|&x| x > 0.0).collect();
        assert_eq!(nz.len(), 3, "{:?}", f);
        assert!(nz[0] <= 0.5 + 1e-12 && nz[2] >= 0.5 - 1e-12);
    }
}

#[test]
fn nilpotent_be_zero_radii_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let f = sample_defect2_form(FormStratum::NilpotentBeZero, &mut rng);
        let want = nilpotent_be0_radii(f.b, f.c, f.e);
        let got = predicted_radii(&f);
        assert_eq!(got.len(), 3);
        for (x, y) in got.iter().zip(&want) {
            assert!((x - y).abs() < 1e-9);
        }
    }
    // J_4 padded: b = c = e = 0 in the formula
    let r = nilpotent_be0_radii(0.0, 0.0, 0.0);
    let s5 = 5f64.sqrt();
    assert!((r[1] - (s5 - 1.0) / 4.0).abs() < 1e-12);
    assert!((r[2] - (s5 + 1.0) / 4.0).abs() < 1e-12);
}

#[test]
fn two_circle_radii() {
    for (d, h) in [(0.5f64, 0.3f64), (0.98, 0.1), (0.2, 0.9)] {
        let f = form((1.0 - d * d).sqrt(), 0.0, d, (1.0 - h * h).sqrt(), 0.0, 0.0, h);
        let r = predicted_radii(&f);
        assert_eq!(r.len(), 2);
        assert!((r[0] - (1.0 - d).sqrt() / 2.0).abs() < 1e-12);
        assert!((r[1] - (1.0 + d).sqrt() / 2.0).abs() < 1e-12);
        assert!(two_circles_classification(&f));
    }
}

#[test]
fn half_circle_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    assert!(has_circle_half(&sample_defect2_form(FormStratum::HalfCaseI, &mut rng)));
    assert!(has_circle_half(&sample_defect2_form(FormStratum::HalfCaseII, &mut rng)));
    let ex1 = example(0);
    assert!(!has_circle_half(&ex1));
}

fn check_j2_reduction(f: &Defect2Form) -> J2Reduction {
    let red = reduce_j2(f).unwrap();
    let j2 = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
    let target = j2.direct_sum(&ath_matrix(red.t, red.h).unwrap());
    let u = &red.unitary;
    assert!(u.unitarity_defect() < 1e-12);
    let reduced = &(&u.adjoint() * &f.matrix()) * u;
    assert!(reduced.dist(&target) < 1e-12, "{:?}", f);
    let (p, q) = (kippenhahn_polynomial(&f.matrix()), kippenhahn_polynomial(&target));
    for t in sample_angles(64) {
        for l in [-0.9, -0.3, 0.2, 0.6] {
            assert!((p.eval(l, t) - q.eval(l, t)).abs() < 1e-8);
        }
    }
    red
}

#[test]
fn j2_reduction_in_both_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let f = sample_defect2_form(FormStratum::HalfCaseI, &mut rng);
        let red = check_j2_reduction(&f);
        assert!((red.t - f.b * f.e).abs() < 1e-15 && red.h == f.h);
        let f = sample_defect2_form(FormStratum::HalfCaseII, &mut rng);
        let red = check_j2_reduction(&f);
        assert!((red.t - f.b * f.e).abs() < 1e-15 && red.h == 0.0);
    }
    let f = form(1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0);
    check_j2_reduction(&f);
    let r = oracle_radii(&f.matrix());
    assert_eq!(r.len(), 1);
    assert!((r[0] - 0.5).abs() < 1e-9);
    assert!(detect_circles(&f.matrix()).unwrap().circles[0].multiplicity >= 3);
    assert!(reduce_j2(&example(0)).is_err());
}

#[test]
fn x_value_examples() {
    let f = form(0.6, 0.0, 0.8, 0.6, 0.0, 0.0, 0.8);
    assert_eq!(x_value(&f).unwrap(), XValue::Defined(0.8));
    // d = 0 and ceg/h < 0 cannot coexist with the convention, so use a raw form
    let raw = Defect2Form { b: 0.6, c: 0.8, d: 0.0, e: 0.5, f: 0.0, g: -0.5, h: 0.7 };
    assert_eq!(x_value(&raw).unwrap(), XValue::Undefined);
    assert!(x_value(&form(1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0)).is_err());
}

#[test]
fn x_value_inverts_detected_radius() {
    let f = example(0);
    let x = x_value(&f).unwrap().value().unwrap();
    let a = f.matrix();
    let r = detect_circles_with(&a, &DetectOptions::rounded_input()).unwrap();
    let radii = r.radii();
    assert_eq!(radii.len(), 1);
    let from_radius = 1.0 - 4.0 * radii[0] * radii[0];
    assert!((x - from_radius).abs() < 1e-5, "x {} vs {}", x, from_radius);
}

#[test]
fn crith_on_two_circle_family() {
    let (d, h) = (0.6f64, 0.5f64);
    let f = form(0.8, 0.0, d, (1.0 - h * h).sqrt(), 0.0, 0.0, h);
    let cc = crith_conditions(&f, 1e-8).unwrap();
    assert!(cc.plus_holds && cc.minus_holds);
    assert!((cc.r_plus.unwrap() - (1.0 + d).sqrt() / 2.0).abs() < 1e-12);
    assert!((cc.r_minus.unwrap() - (1.0 - d).sqrt() / 2.0).abs() < 1e-12);
}

#[test]
fn crith_minus_at_x_one_is_point_circle() {
    // d = 1 gives x = 1 and b = 0, so be = 0
    let f = form(0.0, 0.0, 1.0, 0.6, 0.0, 0.0, 0.8);
    let cc = crith_conditions(&f, 1e-8).unwrap();
    assert!(cc.minus_holds);
    assert_eq!(cc.r_minus, Some(0.0));
    assert!(contains_point_circle(&f.matrix()));
}

#[test]
fn crith_on_example_three_matches_oracle() {
    let f = example(2);
    let cc = crith_conditions(&f, 1e-3).unwrap();
    assert!(cc.plus_holds);
    let r = detect_circles_with(&f.matrix(), &DetectOptions::rounded_input()).unwrap();
    assert_eq!(r.radii().len(), 1);
    assert!((cc.r_plus.unwrap() - r.radii()[0]).abs() < 1e-4);
}

#[test]
fn two_circle_classification_examples() {
    let d = 0.96f64.sqrt();
    let h = (1.0 - 0.09f64).sqrt();
    let f = form(0.2, 0.0, d, (1.0 - h * h).sqrt(), 0.0, 0.0, h);
    assert!(two_circles_classification(&f));
    let e = focal_ellipse(h);
    assert!((e.foci.0 - cr(0.0)).norm() < 1e-15 && (e.foci.1 - cr(h)).norm() < 1e-15);
    assert!(!two_circles_classification(&example(1)));
    let f = form(0.0, 0.0, 1.0, 0.6, 0.0, 0.0, 0.8);
    assert!(!two_circles_classification(&f));
}

#[test]
fn disk_classification_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f = sample_defect2_form(FormStratum::NilpotentCegZero, &mut rng);
    let v = disk_classification(&f);
    assert!(v.is_disk());
    assert_eq!(v.reason, DiskReason::NilpotentThreeCircles);
    let r3 = predicted_radii(&f).last().copied().unwrap();
    assert!((v.radius.unwrap() - r3).abs() < 1e-12);
    let f = form(0.75f64.sqrt(), 0.0, 0.5, (1.0 - 0.09f64).sqrt(), 0.0, 0.0, 0.3);
    let v = disk_classification(&f);
    assert_eq!(v.reason, DiskReason::TwoCirclesThreshold);
    assert!(!v.is_disk());
    let v = disk_classification_with(&example(2), 1e-3);
    assert_eq!(v.reason, DiskReason::SingleCircle);
    assert!(v.is_disk());
}

#[test]
fn low_defect_is_never_disk() {
    let pi = validate(&random_rank3(7), 1e-10).unwrap();
    let c = classify_rank3(&pi, EQUATION_TOL).unwrap();
    assert_eq!(c.defect, 0);
    assert!(!c.verdict.is_disk());
}

#[test]
fn half_shape_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = sample_defect2_form(FormStratum::HalfCaseII, &mut rng);
    match nrc_half_shape(&f).unwrap() {
        HalfShape::Disk { radius } => {
            let t = f.b * f.e;
            assert!((radius - (1.0 + (1.0 - t * t).sqrt()).sqrt() / 2.0).abs() < 1e-15);
            let w = numerical_radius(&f.matrix()).value;
            assert!((w - radius).abs() < 1e-8);
        }
        other => panic!("{:?}", other),
    }
    assert_eq!(nrc_half_shape(&form(1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0)).unwrap(), HalfShape::ConeOne);
    assert_eq!(nrc_half_shape(&form(1.0, 0.0, 0.0, 0.6, 0.0, 0.0, 0.8)).unwrap(), HalfShape::ConeEllipse);
    assert_eq!(nrc_half_shape(&form(1.0, 0.0, 0.0, 0.0, 0.6, 0.0, 0.8)).unwrap(), HalfShape::OvularCarrier);
    assert_eq!(nrc_half_shape(&form(1.0, 0.0, 0.0, 0.5, 0.5, 0.5, 0.5)).unwrap(), HalfShape::AehCarrier);
    assert!(nrc_half_shape(&example(0)).is_err());
}

#[test]
fn ath_radii_match_oracle() {
    for t in [0.2, 0.5, 0.9] {
        let (r1, r3) = ath_radii(t);
        let got = oracle_radii(&ath_matrix(t, 0.0).unwrap());
        assert!(got.iter().any(|r| (r - r1).abs() < 1e-8));
        assert!(got.iter().any(|r| (r - r3).abs() < 1e-8));
    }
}

#[test]
fn interlacing_examples() {
    let f = form((1.0 - 0.98f64 * 0.98).sqrt(), 0.0, 0.98, 1.0, 0.0, 0.0, 0.0);
    let i = interlacing_bound_check(&f);
    assert_eq!((i.positive, i.negative), (1, 4));
    assert!(i.max_error < 1e-9);
    let f = form(0.0, 0.0, 1.0, 0.6, 0.0, 0.0, 0.8);
    let i = interlacing_bound_check(&f);
    assert_eq!(i.positive, 1);
    let s2 = 2f64.sqrt();
    assert!((i.closed_form[4] - (s2 - 1.0)).abs() < 1e-15);
    assert!((i.closed_form[0] + 1.0 + s2).abs() < 1e-15);
}

#[test]
fn crith_solver_produces_single_circles() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut found = 0;
    for _ in 0..20 {
        let v = unit_vector(3, &mut rng);
        let (b, c, d) = (v[0].abs(), v[1].abs(), v[2].abs());
        let hp = rng.random_range(0.1..2.0);
        for f in solve_crith_plus(b, c, d, hp, 5.0, 400) {
            f.validate(1e-9).unwrap();
            let cc = crith_conditions(&f, 1e-9).unwrap();
            assert!(cc.plus_holds);
            let r = cc.r_plus.unwrap();
            assert!(contains_circle(&f.matrix(), cr(0.0), r) < 1e-7);
            found += 1;
        }
    }
    assert!(found > 0);
}

fn arb_stratum() -> impl Strategy<Value = FormStratum> {
    prop::sample::select(FormStratum::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn closed_forms_agree_with_oracle(seed in any::<u64>(), st in arb_stratum()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = sample_defect2_form(st, &mut rng);
        let a = f.matrix();
        let got = predicted_radii(&f);
        let want = oracle_radii(&a);
        prop_assert_eq!(got.len(), want.len(), "{:?} {:?} {:?}", f, got, want);
        for (x, y) in got.iter().zip(&want) {
            prop_assert!((x - y).abs() < 1e-6);
        }
        let report = detect_circles(&a).unwrap();
        let verdict = disk_classification(&f);
        if report.disk != DiskClassification::Undetermined {
            prop_assert_eq!(verdict.classification, report.disk);
        }
        prop_assert_eq!(has_circle_half(&f), want.iter().any(|r| (r - 0.5).abs() < 1e-7));
        prop_assert_eq!(is_zero_be(&f), contains_point_circle(&a));
    }

    #[test]
    fn nilpotent_identities_hold(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for st in [FormStratum::Nilpotent, FormStratum::NilpotentCegZero, FormStratum::HalfCaseII] {
            let f = sample_defect2_form(st, &mut rng);
            let (r1, r2) = nilpotent_identities(&f);
            prop_assert!(r1.abs() < 1e-12);
            if let Some(r2) = r2 {
                prop_assert!(r2.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn middle_root_is_quarter_iff_dg_zero(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for st in [FormStratum::Nilpotent, FormStratum::NilpotentCegZero, FormStratum::HalfCaseII] {
            let f = sample_defect2_form(st, &mut rng);
            let cubic = nilpotent_cubic(f.b, f.c, f.e);
            prop_assert!((cubic.eval(0.25) + f.d * f.d * f.g * f.g / 64.0).abs() < 1e-12);
            let roots = roots01(&cubic);
            prop_assert_eq!(roots.len(), 3);
            let structural = f.g == 0.0 || (f.c == 0.0 && f.d == 0.0);
            prop_assert_eq!((roots[1] - 0.25).abs() < 1e-7, structural);
        }
    }

    #[test]
    fn crith_radii_show_up_in_oracle(seed in any::<u64>(), st in arb_stratum()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = sample_defect2_form(st, &mut rng);
        if f.h == 0.0 {
            return Ok(());
        }
        let cc = crith_conditions(&f, 1e-8).unwrap();
        let radii = oracle_radii(&f.matrix());
        if let Some(r) = cc.r_plus {
            prop_assert!(radii.iter().any(|x| (x - r).abs() < 1e-6));
        }
        if let (Some(r), Some(x)) = (cc.r_minus, cc.x.value()) {
            if x < 1.0 {
                prop_assert!(radii.iter().any(|y| (y - r).abs() < 1e-6));
            }
        }
    }

    #[test]
    fn disk_verdict_matches_numerical_radius(seed in any::<u64>(), st in arb_stratum()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = sample_defect2_form(st, &mut rng);
        let a = f.matrix();
        let v = disk_classification(&f);
        let nr = numerical_radius(&a);
        let radii = predicted_radii(&f);
        let rmax = radii.iter().copied().fold(0.0, f64::max);
        if v.is_disk() {
            prop_assert!((nr.value - rmax).abs() < 1e-7);
        } else {
            let real_axis = nr.argmax_thetas.iter().all(|t| {
                t.abs() < 1e-6 || (t.abs() - core::f64::consts::PI).abs() < 1e-6
            });
            prop_assert!(radii.iter().all(|&r| nr.value > r + 1e-9) || real_axis);
        }
    }

    #[test]
    fn interlacing_matches_eigensolver(seed in any::<u64>(), st in arb_stratum()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = sample_defect2_form(st, &mut rng);
        let i = interlacing_bound_check(&f);
        prop_assert!(i.max_error < 1e-9);
        prop_assert_eq!(i.positive, usize::from(f.d > 0.0));
        prop_assert_eq!(i.negative, if f.d > 0.0 { 4 } else { 3 });
    }
}

fn is_zero_be(f: &Defect2Form) -> bool {
    f.b * f.e == 0.0
}

#[test]
fn gww_centers_are_at_origin() {
    for s in 0..1000 {
        let r = detect_circles(&random_rank3(s)).unwrap();
        for c in &r.circles {
            assert!(c.center.norm() <= 1e-6, "seed {}", s);
        }
    }
}
