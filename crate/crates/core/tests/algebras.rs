//! Graded quotients, Koszul spaces, certificates and extension validation.

mod common;

use common::*;
use dox_core::blockcalc::{mat_inverse, mat_mul, mat_transpose, BlockMap, LinMap};
use dox_core::exact_linalg::{intersect, Field, Scalar, Tensor};
use dox_core::extension::{is_identity_block, lift_delta, matrix_of, minus_jt_inv_j, validate, ExtensionInput};
use dox_core::qalgebra::{apply_graded, derivation_extension, hom_power, AlgebraCache, GradedImage, GradedKind, Presentation};
use dox_core::Error;
use proptest::prelude::*;

fn violation_names(e: Error) -> Vec<String> {
    match e {
        Error::Validation(vs) => vs.into_iter().map(|v| v.name).collect(),
        other => panic!("expected validation errors, got {other:?}"),
    }
}

#[test]
fn graded_dimensions() {
    let (a, _) = example1(4);
    assert_eq!((a.dim(0), a.dim(2), a.dim(3)), (1, 3, 4));
    assert_eq!(polynomial(3).dim(0), 1);
}

#[test]
fn koszul_spaces() {
    let (a, _) = example1(4);
    let omega = tw(&[(s(1, 0), "x2 x1"), (s(0, -1), "x1 x2")]);
    assert_eq!(a.koszul_space(2).dim(), 1);
    assert!(a.koszul_space(2).contains(&omega));
    assert!(a.koszul_space(3).is_zero());
    assert_eq!(polynomial(3).koszul_dims(), vec![1, 3, 3, 1, 0]);
}

#[test]
fn koszul_recursion() {
    for a in [example1(4).0, polynomial(3), quantum(s(2, 0), Field::Rationals)] {
        let n = a.letters();
        let v = dox_core::exact_linalg::Subspace::full(n, 1);
        // W_2 = R is the base case; the recursion starts at i = 2.
        for i in 2..a.koszul_dims().len() {
            let w = a.koszul_space(i);
            let next = intersect(n, i + 1, &[v.otimes(&w), w.otimes(&v)]).unwrap();
            assert_eq!(next, a.koszul_space(i + 1), "level {i}");
        }
    }
}

#[test]
fn certificates() {
    let (a, _) = example1(6);
    let c = a.as_certificate(6).unwrap();
    assert_eq!(c.d, 2);
    // RREF normalization puts coefficient 1 on x1 x2, giving i times x2 x1 - i x1 x2.
    let printed = tw(&[(s(1, 0), "x2 x1"), (s(0, -1), "x1 x2")]);
    assert_eq!(c.omega(), &printed.scale(&s(0, 1)));
    assert_eq!(c.omega().coeff(&wd("x1 x2")), s(1, 0));

    let p = polynomial(3).as_certificate(7).unwrap();
    assert_eq!(p.d, 3);
    assert!(p.euler_ok && p.palindrome_ok && p.w_top_ok);

    let free = AlgebraCache::new(Presentation::new(Field::Rationals, vec!["x1".into(), "x2".into()], &[]).unwrap(), 4).unwrap();
    let f = free.certificate(4);
    assert_eq!(f.d, 1);
    assert!(!f.passed() && !f.w_top_ok);
    assert!(matches!(free.as_certificate(4), Err(Error::NotRegularEvidence(_))));
}

#[test]
fn graded_applications() {
    let (a, ext) = example1(4);
    let x1 = a.quotient.project(&tw(&[(s(1, 0), "x1")]));
    let GradedImage::Hom(m) = apply_graded(&a, GradedKind::Hom { sigma: &ext.sigma }, 1, &x1) else { panic!() };
    let cls = |t: &Tensor| a.quotient.project(t);
    assert_eq!(m, vec![vec![cls(&z(1)), cls(&tw(&[(s(0, 1), "x2")]))], vec![cls(&tw(&[(s(0, -1), "x2")])), cls(&z(1))]]);

    // δ(x1 x2) = δ(x1) x2 + σ(x1) δ(x2) = (0, -i x1 x2 x2 + x2 x1 x2), zero in A_3
    let x1x2 = cls(&tw(&[(s(1, 0), "x1 x2")]));
    let kind = GradedKind::Derivation { sigma: &ext.sigma, delta: &ext.delta };
    let GradedImage::Derivation(col) = apply_graded(&a, kind, 2, &x1x2) else { panic!() };
    let by_hand = tw(&[(s(0, -1), "x1 x2 x2"), (s(1, 0), "x2 x1 x2")]);
    assert_eq!(col, vec![cls(&z(3)), cls(&by_hand)]);
    assert!(col[1].is_empty());

    let one = a.quotient.project(&Tensor::unit());
    let kind = GradedKind::Derivation { sigma: &ext.sigma, delta: &ext.delta };
    let GradedImage::Derivation(col) = apply_graded(&a, kind, 0, &one) else { panic!() };
    assert!(col.iter().all(|c| c.is_empty()));
}

#[test]
fn sigma_preserves_koszul_spaces() {
    let (a, ext) = example1(4);
    for i in 1..=2 {
        let w = a.koszul_space(i);
        for b in w.basis() {
            for row in hom_power(&ext.sigma, i).apply(b) {
                assert!(row.iter().all(|e| w.contains(e)));
            }
        }
    }
}

#[test]
fn trimmed_kx_validates() {
    let a = kx();
    let input = diagonal_input(s(1, 0), &[s(1, 0)], &[s(1, 0)]);
    let ext = validate(&a, &input, 6).unwrap();
    assert_eq!(matrix_of(&ext.det, 1), vec![vec![s(1, 0)]]);
    assert!(is_identity_block(&ext.sigma_inv_t, 1));
    for k in 0..=6 {
        assert_eq!(ext.b.quotient.dim(k), (k + 1) * (k + 2) / 2);
    }
}

#[test]
fn bad_parameters_are_named() {
    let (a, ext) = example1(4);
    let mut input = ext.input.clone();
    input.p11 = s(1, 0);
    assert!(violation_names(validate(&a, &input, 4).unwrap_err()).contains(&"theta".to_string()));

    let mut input = ext.input.clone();
    input.p12 = s(0, 0);
    assert!(violation_names(validate(&a, &input, 4).unwrap_err()).contains(&"p12-nonzero".to_string()));
}

#[test]
fn lift_outcomes() {
    let (a, ext) = example1(6);
    assert_eq!(lift_delta(&a, &ext.sigma, &ext.delta).unwrap(), ext.delta);

    let mut zero = ext.input.clone();
    zero.delta = vec![[z(2), z(2)], [z(2), z(2)]];
    let zext = validate(&a, &zero, 6).unwrap();
    assert!(zext.delta.is_zero());
    assert_eq!(zext.b.quotient.dims(), ext.b.quotient.dims()[..=6].to_vec());
    assert_eq!(lift_delta(&a, &zext.sigma, &zext.delta).unwrap(), zext.delta);

    // ν(x1) = (x1 x1, 0), ν(x2) = 0 does not extend through the relation.
    let mut bad = ext.input.clone();
    bad.delta = vec![[tw(&[(s(1, 0), "x1 x1")]), z(2)], [z(2), z(2)]];
    assert!(matches!(lift_delta(&a, &bad.sigma_map(), &bad.delta_map()), Err(Error::NoLift(_))));
}

#[test]
fn example1_hilbert_series() {
    let (_, ext) = example1(6);
    for k in 0..=6 {
        assert_eq!(ext.b.quotient.dim(k), (k + 1) * (k + 2) * (k + 3) / 6);
    }
}

#[test]
fn delta_lift_respects_containment() {
    let (a, ext) = example1(4);
    let d2 = derivation_extension(&ext.sigma, &ext.delta, 2, 2);
    let r = &a.presentation.relations;
    let target = r.sandwich(1, 0).sum(&r.sandwich(0, 1));
    for rel in r.basis() {
        for img in d2.apply_column(rel) {
            assert!(target.contains(&img));
        }
    }
}

fn nonzero_rational() -> impl Strategy<Value = Scalar> {
    (1i64..=5, 1i64..=4, any::<bool>()).prop_map(|(n, d, neg)| Scalar::from_ratio(if neg { -n } else { n }, d))
}

fn gaussian() -> impl Strategy<Value = Scalar> {
    (-4i64..=4, -4i64..=4).prop_map(|(a, b)| s(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn minus_jt_inv_j_closed_form(p11 in gaussian(), p12 in gaussian()) {
        prop_assume!(p12 != s(0, 0));
        let input = ExtensionInput { p12: p12.clone(), p11: p11.clone(), sigma: vec![], delta: vec![] };
        let j = input.j_matrix();
        let k = minus_jt_inv_j(&j);
        let p12_inv = p12.inv().unwrap();
        let expected = vec![
            vec![p12_inv.clone(), s(0, 0)],
            vec![&p11 * &(&s(1, 0) + &p12_inv), p12.clone()],
        ];
        prop_assert_eq!(&k, &expected);
        let jr: Vec<Vec<Scalar>> = j.iter().map(|r| r.to_vec()).collect();
        prop_assert!(mat_inverse(&jr).is_some());
        // K = −(J^T)^{−1} J, so −J^T K = J
        let back: Vec<Vec<Scalar>> = mat_mul(&mat_transpose(&jr), &k).into_iter().map(|r| r.into_iter().map(|c| -c).collect()).collect();
        prop_assert_eq!(back, jr);
    }

    #[test]
    fn diagonal_sigma_inverse_t(
        q in nonzero_rational(),
        p12 in nonzero_rational(),
        a in proptest::array::uniform2(nonzero_rational()),
        b in proptest::array::uniform2(nonzero_rational()),
    ) {
        let alg = quantum(q, Field::Rationals);
        let input = diagonal_input(p12, &a, &b);
        let ext = validate(&alg, &input, 4).unwrap();
        let id2 = BlockMap::diag_power(&LinMap::identity(2, 1), 2);
        prop_assert_eq!(ext.sigma_inv_t.bullet(&ext.sigma).unwrap(), id2.clone());
        prop_assert_eq!(ext.sigma.bullet(&ext.sigma_inv_t).unwrap(), id2);
        let u = matrix_of(&ext.det, 2);
        prop_assert_eq!(&u[0][0], &(&a[0] * &b[0]));
        prop_assert_eq!(&u[1][1], &(&a[1] * &b[1]));
    }
}
