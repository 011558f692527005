use kipp_core::linalg::svd::singular_values;
use kipp_core::linalg::*;
use kipp_core::matpoly::assemble_from_c;
use kipp_core::pisom::*;
use kipp_core::sample::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn j2() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])
}

fn rounded_example_1() -> ComplexMatrix {
    Defect2Form { b: 0.9469, c: -0.2926, d: 0.1327, e: 0.1464, f: 0.3228, g: 0.2864, h: 0.8900 }.matrix()
}

fn rounded_example_2() -> ComplexMatrix {
    Defect2Form { b: 0.6380, c: 0.3687, d: 0.6759, e: 0.4362, f: -0.2380, g: -0.7903, h: 0.3583 }.matrix()
}

fn max_sv_deviation(m: &ComplexMatrix) -> f64 {
    singular_values(m).iter().map(|&s| s.min((s - 1.0).abs())).fold(0.0, f64::max)
}

#[test]
fn j2_validates_with_rank_one() {
    let p = validate(&j2(), 1e-12).unwrap();
    assert_eq!(p.rank(), 1);
    assert_eq!(p.kernel_dim(), 1);
}

#[test]
fn rounded_example_accepted_only_at_loose_tolerance() {
    let m = rounded_example_1();
    let p = validate(&m, 5e-3).unwrap();
    assert_eq!(p.rank(), 3);
    match validate(&m, 1e-8) {
        Err(PisomError::NotPartialIsometry { max_deviation }) => assert!(max_deviation > 1e-8),
        other => panic!("expected rejection, got {:?}", other.map(|p| p.rank())),
    }
}

#[test]
fn block_form_reproduces_matrix() {
    let a = random_rank3(3);
    let p = validate(&a, 1e-10).unwrap();
    let w = p.basis();
    let back = &(w * &p.block_form()) * &w.adjoint();
    assert!(back.dist(&a) < 1e-12);
    let b = p.block_b();
    let c = p.block_c();
    let gram = &(&b.adjoint() * b) + &(&c.adjoint() * c);
    assert!(gram.dist(&ComplexMatrix::identity(3)) < 1e-12);
}

#[test]
fn projection_is_idempotent_on_exact_input() {
    let a = random_rank3(11);
    let p = project_to_partial_isometry(&a).unwrap();
    assert!(p.dist(&a) < 1e-12);
}

#[test]
fn projection_repairs_rounding() {
    for m in [rounded_example_1(), rounded_example_2()] {
        let p = project_to_partial_isometry(&m).unwrap();
        assert!(max_sv_deviation(&p) < 1e-12);
        assert!(p.dist(&m) < 1e-3);
        validate(&p, 1e-10).unwrap();
    }
}

#[test]
fn projection_of_small_perturbation_is_close() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let a = random_partial_isometry(5, 2, &mut rng);
        let noise = gaussian_matrix(5, 5, &mut rng).scale_real(1e-4 / 5.0);
        let p = project_to_partial_isometry(&(&a + &noise)).unwrap();
        assert!(p.dist(&a) < 1e-3);
        assert!(max_sv_deviation(&p) < 1e-12);
    }
}

#[test]
fn compression_drops_zero_block() {
    let a = j2().direct_sum(&ComplexMatrix::zeros(3, 3));
    let (m, q) = compress_to_active_subspace(&a).unwrap();
    assert_eq!(m.rows(), 2);
    assert!(q.unitarity_defect() < 1e-12 || q.rows() != q.cols());
    let s = singular_values(&m);
    assert!((s[0] - 1.0).abs() < 1e-12 && s[1].abs() < 1e-12);
    assert!(m.trace().norm() < 1e-12);
}

#[test]
fn compression_keeps_numerical_radius() {
    let a = random_rank3(21);
    let big = a.direct_sum(&ComplexMatrix::zeros(4, 4));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let u = haar_unitary(10, &mut rng);
    let big = big.conjugate_by(&u);
    let (m, _) = compress_to_active_subspace(&big).unwrap();
    assert!(m.rows() <= 6);
    let w1 = kipp_core::kipp::numerical_radius(&a).value;
    let w2 = kipp_core::kipp::numerical_radius(&m).value;
    assert!((w1 - w2).abs() < 1e-8);
}

#[test]
fn compression_of_unitary_is_full() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let u = haar_unitary(3, &mut rng);
    let (m, _) = compress_to_active_subspace(&u).unwrap();
    assert_eq!(m.rows(), 3);
}

#[test]
fn random_rank3_is_deterministic_and_valid() {
    assert_eq!(random_rank3(42), random_rank3(42));
    for s in 0..1000 {
        let a = random_rank3(s);
        let sv = singular_values(&a);
        assert_eq!(sv.iter().filter(|&&x| x > 0.5).count(), 3);
        validate(&a, 1e-10).unwrap();
    }
}

#[test]
fn canonical_rank3_satisfies_orthogonality() {
    for s in 0..50 {
        let a = random_rank3(s);
        let p = validate(&a, 1e-10).unwrap();
        let red = canonicalize_rank3(&p).unwrap();
        assert!(red.form.orthogonality_residual() < 1e-8, "seed {}", s);
        assert!(red.apply(&a).dist(&red.form.matrix()) < 1e-8, "seed {}", s);
        assert!(red.form.a >= 0.0);
    }
}

#[test]
fn triple_j2_has_zero_diagonal() {
    let j = j2().direct_sum(&j2()).direct_sum(&j2());
    // move the kernel to the front: columns/rows 0, 2, 4 first
    let perm = [0usize, 2, 4, 1, 3, 5];
    let p = ComplexMatrix::from_fn(6, 6, |i, k| cr(if perm[k] == i { 1.0 } else { 0.0 }));
    let a = j.conjugate_by(&p.adjoint());
    let pi = validate(&a, 1e-12).unwrap();
    let red = canonicalize_rank3(&pi).unwrap();
    assert!(red.form.a.abs() < 1e-12);
    assert!(red.form.lambda2.norm() < 1e-12 && red.form.lambda3.norm() < 1e-12);
}

#[test]
fn defect2_fixed_point() {
    let f = Defect2Form::new(1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0).unwrap();
    let p = validate(&f.matrix(), 1e-12).unwrap();
    let red = canonicalize_defect2(&p).unwrap();
    let g = red.form;
    assert!((g.b - 1.0).abs() < 1e-10 && (g.e - 1.0).abs() < 1e-10);
    assert!(g.c.abs() + g.d.abs() + g.f.abs() + g.g.abs() + g.h.abs() < 1e-10);
}

#[test]
fn projected_example_2_has_generic_parameters() {
    let p = project_to_partial_isometry(&rounded_example_2()).unwrap();
    let pi = validate(&p, 1e-10).unwrap();
    let f = canonicalize_defect2(&pi).unwrap().form;
    f.validate(1e-8).unwrap();
    for x in [f.c, f.d, f.e, f.f, f.g, f.h] {
        assert!(x.abs() > 1e-3);
    }
}

#[test]
fn nilpotent_instance_has_defect_three() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f = sample_defect2_form(FormStratum::Nilpotent, &mut rng);
    let u = haar_unitary(6, &mut rng);
    let a = f.matrix().conjugate_by(&u);
    assert_eq!(defect(&a).unwrap(), 3);
    let red = canonicalize_defect2(&validate(&a, 1e-10).unwrap()).unwrap();
    assert!(red.form.h.abs() < 1e-9);
}

#[test]
fn defect_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    assert_eq!(defect(&haar_unitary(4, &mut rng)).unwrap(), 0);
    assert_eq!(defect(&j2()).unwrap(), 1);
    let f = sample_defect2_form(FormStratum::Generic, &mut rng);
    assert_eq!(defect(&f.matrix()).unwrap(), 2);
    // compressed block with eigenvalues 0, a, h and a != 0, h != 0
    let c = ComplexMatrix::from_real_rows(&[&[0.0, 0.3, 0.1], &[0.0, 0.5, 0.2], &[0.0, 0.0, 0.4]]);
    let a = assemble_from_c(&c).unwrap();
    assert_eq!(defect(&a).unwrap(), 1);
}

#[test]
fn irreducibility_examples() {
    let c = ComplexMatrix::diag(&[cr(1.0), cr(2.0)]);
    assert!(!is_unitarily_irreducible_blockform(&ComplexMatrix::identity(2), &c));
    let blocks = |t: f64, h: f64| {
        let a = ath_matrix(t, h).unwrap();
        (a.submatrix(0, 2, 2, 2), a.submatrix(2, 2, 2, 2))
    };
    let (b, c) = blocks(0.5, 0.4);
    assert!(is_unitarily_irreducible_blockform(&b, &c));
    let (b, c) = blocks(0.0, 0.4);
    assert!(!is_unitarily_irreducible_blockform(&b, &c));
    let (b, c) = blocks(0.6, 0.8);
    assert!(!is_unitarily_irreducible_blockform(&b, &c));
}

#[test]
fn form_rejects_bad_parameters() {
    assert!(Defect2Form::new(1.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.5).is_err());
    assert!(Defect2Form::new(0.6, 0.8, 0.0, 0.0, 0.6, 0.8, 0.0).is_err());
    assert!(Defect2Form::new(1.0, 0.0, 0.0, 0.0, 0.6, 0.8, 0.0).is_ok());
}

fn arb_stratum() -> impl Strategy<Value = FormStratum> {
    prop::sample::select(FormStratum::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn defect_is_unitarily_invariant(seed in any::<u64>(), st in arb_stratum()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = sample_defect2_form(st, &mut rng);
        let a = f.matrix();
        let u = haar_unitary(6, &mut rng);
        prop_assert_eq!(defect(&a).unwrap(), defect(&a.conjugate_by(&u)).unwrap());
    }

    #[test]
    fn projection_never_fails_with_gap(seed in any::<u64>(), n in 2usize..7, eps in 0.0f64..0.05) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rank = 1 + (seed as usize) % n;
        let a = random_partial_isometry(n, rank, &mut rng);
        let noise = gaussian_matrix(n, n, &mut rng);
        let m = &a + &noise.scale_real(eps / (noise.norm2() * 2.0).max(1e-300));
        let p = project_to_partial_isometry(&m).unwrap();
        prop_assert!(validate(&p, 1e-10).is_ok());
    }

    #[test]
    fn canonical_defect2_preserves_curve(seed in any::<u64>(), st in arb_stratum()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = sample_defect2_form(st, &mut rng);
        let u = haar_unitary(6, &mut rng);
        let phase = cis(rng.random_range(0.0..std::f64::consts::TAU));
        let a = f.matrix().conjugate_by(&u).scale(phase);
        let red = canonicalize_defect2(&validate(&a, 1e-10).unwrap()).unwrap();
        red.form.validate(1e-8).unwrap();
        prop_assert!(red.apply(&a).dist(&red.form.matrix()) < 1e-8);
        let rotated = a.scale(red.phase);
        for th in sample_angles(64) {
            let x = rotated_real_part_eigenvalues(&rotated, th);
            let y = rotated_real_part_eigenvalues(&red.form.matrix(), th);
            for (p, q) in x.iter().zip(&y) {
                prop_assert!((p - q).abs() < 1e-7);
            }
        }
    }
}
