//! Nakayama data, superpotentials, resolutions and quadruple freedom on
//! several extensions, including fault injection.

mod common;

use common::*;
use dox_core::blockcalc::{mat_identity, mat_mul, BlockMap, LinMap};
use dox_core::exact_linalg::{solve_affine, Field, Scalar, Subspace, Tensor};
use dox_core::extension::{minus_jt_inv_j, validate, ValidatedExtension};
use dox_core::nakayama::{mu_a_solve, nakayama, preserves_relations};
use dox_core::potential::{
    build_omega_hat, derivation_quotient_check, derivation_span, in_relations_times_tail, in_top_koszul_space, verify_twisted,
};
use dox_core::qalgebra::{hom_power, AlgebraCache};
use dox_core::quadruple::{build_quadruple, build_quadruple_randomized, Quadruple};
use dox_core::resolution::{assemble_f, verify_homotopies, verify_resolution, ChainMaps, GenMap};
use dox_core::Error;
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn omega_of(a: &AlgebraCache) -> Tensor {
    a.as_certificate(6).unwrap().omega().clone()
}

/// Every pipeline check that does not depend on a golden value.
fn full_checks(a: &AlgebraCache, ext: &ValidatedExtension, degree: usize) {
    let omega = omega_of(a);
    let d = a.certificate(6).d;
    let quad = build_quadruple(a, ext, d).unwrap();
    assert!(quad.verify_identities(ext).unwrap().iter().all(|c| c.ok));
    let rep = nakayama(ext, &quad, &omega).unwrap();
    assert_eq!(rep.v_block(), rep.composed_v_block());
    assert!(preserves_relations(&rep.mu_b, ext.b.r_hat()));
    let sp = build_omega_hat(ext, &quad, &omega).unwrap();
    assert_eq!(sp.omega_hat, sp.parts[0].plus(&sp.parts[1]).plus(&sp.parts[2]));
    assert!(verify_twisted(&sp, &rep.mu_b).unwrap());
    assert!(in_relations_times_tail(&sp, ext.b.r_hat()));
    assert!(in_top_koszul_space(&sp, ext.b.r_hat()));
    assert_eq!(derivation_quotient_check(&sp, ext.b.r_hat()).unwrap(), *ext.b.r_hat());
    let maps = ChainMaps::new(a, ext, &quad).unwrap();
    let rep = verify_resolution(&assemble_f(&maps, &ext.b, degree)).unwrap();
    assert!(rep.complex_ok && rep.exact_ok && rep.augmentation_ok && rep.minimal_ok);
    for c in verify_homotopies(&maps, ext, &ext.b, degree).unwrap() {
        assert!(c.ok, "{c:?}");
    }
}

#[test]
fn mu_a_examples() {
    let p = polynomial(3);
    assert_eq!(mu_a_solve(3, &omega_of(&p)).unwrap(), mat_identity(3));
    assert_eq!(mu_a_solve(1, &x(0)).unwrap(), mat_identity(1));
    let (a, _) = example1(6);
    let l = mu_a_solve(2, &omega_of(&a)).unwrap();
    assert_eq!(l, vec![vec![s(0, -1), s(0, 0)], vec![s(0, 0), s(0, 1)]]);
}

#[test]
fn trimmed_kx() {
    let a = kx();
    let one = s(1, 0);
    let ext = validate(&a, &diagonal_input(one.clone(), &[one.clone()], &[one]), 7).unwrap();
    let quad = build_quadruple(&a, &ext, 1).unwrap();
    let rep = nakayama(&ext, &quad, &x(0)).unwrap();
    assert_eq!(rep.h, mat_identity(2));
    assert_eq!(rep.mu_b, mat_identity(3));
    let sp = build_omega_hat(&ext, &quad, &x(0)).unwrap();
    assert!(sp.parts[1].is_zero() && sp.parts[2].is_zero());
    assert_eq!(sp.omega_hat, sp.parts[0]);
    assert!(verify_twisted(&sp, &rep.mu_b).unwrap());
    assert_eq!(derivation_span(&sp, 3).dim(), 3);
    assert_eq!(ext.b.r_hat().dim(), 3);
    full_checks(&a, &ext, 6);
}

#[test]
fn trimmed_example1_sigma() {
    let (a, ext) = example1(7);
    let mut input = ext.input.clone();
    input.delta = vec![[z(2), z(2)], [z(2), z(2)]];
    let ext = validate(&a, &input, 7).unwrap();
    let quad = build_quadruple(&a, &ext, 2).unwrap();
    assert!(quad.is_zero());
    let rep = nakayama(&ext, &quad, &omega_of(&a)).unwrap();
    assert!(rep.delta_r.iter().chain(&rep.delta_l).all(Tensor::is_zero));
    assert!(rep.div_is_zero());
    assert_eq!(rep.mu_b, mat_identity(4));
    let sp = build_omega_hat(&ext, &quad, &omega_of(&a)).unwrap();
    assert!(sp.parts[1].is_zero() && sp.parts[2].is_zero());
    let maps = ChainMaps::new(&a, &ext, &quad).unwrap();
    assert!(maps.h.iter().all(|h| h.images.iter().all(Tensor::is_zero)));
    full_checks(&a, &ext, 6);
}

#[test]
fn poly3_divergence() {
    let (a, ext) = poly3_div(7);
    let quad = build_quadruple(&a, &ext, 3).unwrap();
    let rep = nakayama(&ext, &quad, &omega_of(&a)).unwrap();
    let x1 = tw(&[(s(1, 0), "x1")]);
    assert_eq!(rep.div, [x1.clone(), x1]);
    let row = |v: [i64; 5]| v.iter().map(|&c| s(c, 0)).collect::<Vec<_>>();
    assert_eq!(rep.mu_b[3], row([1, 0, 0, 1, 0]));
    assert_eq!(rep.mu_b[4], row([1, 0, 0, 0, 1]));
    full_checks(&a, &ext, 7);
}

#[test]
fn example1_resolution_shape() {
    let (a, ext) = example1(7);
    let quad = build_quadruple(&a, &ext, 2).unwrap();
    let maps = ChainMaps::new(&a, &ext, &quad).unwrap();
    let rep = verify_resolution(&assemble_f(&maps, &ext.b, 6)).unwrap();
    let generators: Vec<usize> = (0..rep.dims.len()).map(|j| rep.dims[j][j]).collect();
    assert_eq!(generators, vec![1, 4, 6, 4, 1]);
    for k in 1..=6 {
        let euler: i64 = rep.dims.iter().enumerate().map(|(j, d)| if j % 2 == 0 { d[k] as i64 } else { -(d[k] as i64) }).sum();
        assert_eq!(euler, 0, "degree {k}");
    }
}

#[test]
fn corrupt_f1_breaks_the_complex() {
    let (a, ext) = example1(7);
    let quad = build_quadruple(&a, &ext, 2).unwrap();
    let mut maps = ChainMaps::new(&a, &ext, &quad).unwrap();
    let mut images = maps.f[1][0].images.clone();
    images[0] = images[0].scale(&s(2, 0));
    maps.f[1][0] = GenMap::new(&a, 1, 1, images).unwrap();
    let err = verify_resolution(&assemble_f(&maps, &ext.b, 6)).unwrap_err();
    assert!(matches!(err, Error::ComplexBroken { .. }), "{err:?}");
}

#[test]
fn corrupt_superpotential_is_detected() {
    let (a, ext) = example1(6);
    let quad = build_quadruple(&a, &ext, 2).unwrap();
    let omega = omega_of(&a);
    let rep = nakayama(&ext, &quad, &omega).unwrap();
    let sp = build_omega_hat(&ext, &quad, &omega).unwrap();

    let mut bad = sp.clone();
    let (w, c) = bad.omega_hat.leading().map(|(w, c)| (w.clone(), c.clone())).unwrap();
    bad.omega_hat.add_term(w, &c);
    assert!(!verify_twisted(&bad, &rep.mu_b).unwrap());

    let mut bad = sp.clone();
    let stray = tw(&[(s(1, 0), "y1 x1 x1 x1")]);
    bad.parts[1].add_assign(&stray);
    bad.omega_hat.add_assign(&stray);
    assert!(matches!(derivation_quotient_check(&bad, ext.b.r_hat()), Err(Error::SpanMismatch(_))));
}

fn randomized(a: &AlgebraCache, ext: &ValidatedExtension, d: usize, seed: u64) -> Quadruple {
    build_quadruple_randomized(a, ext, d, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

#[test]
fn derivation_span_survives_randomization() {
    for (a, ext, d) in [
        { let (a, e) = example1(6); (a, e, 2) },
        { let (a, e) = poly3_div(6); (a, e, 3) },
    ] {
        let omega = omega_of(&a);
        for seed in 0..10 {
            let q = randomized(&a, &ext, d, seed);
            let sp = build_omega_hat(&ext, &q, &omega).unwrap();
            assert_eq!(derivation_span(&sp, ext.b.letters()), *ext.b.r_hat());
        }
    }
}

/// The `δ_{i,r}` freedom is confined to `W_{i+1}^{⊕2}` once lower levels are fixed,
/// and the lift itself moves only by `R^{⊕2}`.
#[test]
fn quadruple_freedom_is_confined() {
    let (a, ext) = poly3_div(6);
    let n = ext.n;
    let r = &a.presentation.relations;
    let v = Subspace::full(n, 1);
    let id = BlockMap::single(LinMap::identity(n, 1));
    let mut moved = false;
    for seed in 0..8 {
        let q = randomized(&a, &ext, 3, seed);
        for g in 0..n as u8 {
            for c in 0..2 {
                let diff = q.delta.entry(c, 0).apply(&x(g)).minus(&ext.delta.entry(c, 0).apply(&x(g)));
                assert!(r.contains(&diff));
            }
        }
        for i in 2..=3 {
            let w = a.koszul_space(i);
            let freedom = a.koszul_space(i + 1);
            let target = hom_power(&ext.sigma, i - 1).boxed(&q.delta).unwrap().add(&q.level(i - 1).delta_r.boxed(&id).unwrap()).unwrap();
            for b in w.basis() {
                for c in 0..2 {
                    let canonical = solve_affine(&target.entry(c, 0).apply(b), &r.sandwich(i - 1, 0), &w.otimes(&v)).unwrap();
                    let diff = q.level(i).delta_r.entry(c, 0).apply(b).minus(&canonical);
                    assert!(freedom.contains(&diff), "level {i}");
                    moved |= !diff.is_zero();
                }
            }
        }
    }
    assert!(moved, "no seed perturbed a level above the lift");
}

fn nonzero_rational() -> impl Strategy<Value = Scalar> {
    (1i64..=5, 1i64..=4, any::<bool>()).prop_map(|(n, d, neg)| Scalar::from_ratio(if neg { -n } else { n }, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn diagonal_sigma_hdet(
        q in nonzero_rational(),
        p12 in nonzero_rational(),
        a in proptest::array::uniform2(nonzero_rational()),
        b in proptest::array::uniform2(nonzero_rational()),
    ) {
        let alg = quantum(q, Field::Rationals);
        let ext = validate(&alg, &diagonal_input(p12, &a, &b), 6).unwrap();
        let omega = omega_of(&alg);
        let quad = build_quadruple(&alg, &ext, 2).unwrap();
        let rep = nakayama(&ext, &quad, &omega).unwrap();
        let h11 = &a[0] * &a[1];
        let h22 = &b[0] * &b[1];
        prop_assert_eq!(&rep.h, &vec![vec![h11.clone(), s(0, 0)], vec![s(0, 0), h22.clone()]]);
        // direct expansion: σ^{⊠2}(ω) = diag(h11 ω, h22 ω)
        let img = hom_power(&ext.sigma, 2).apply(&omega);
        prop_assert_eq!(&img[0][0], &omega.scale(&h11));
        prop_assert_eq!(&img[1][1], &omega.scale(&h22));
        prop_assert!(img[0][1].is_zero() && img[1][0].is_zero());
        // trimmed formula for μ_B(Y)
        let kh = mat_mul(&minus_jt_inv_j(&ext.j), &rep.h);
        for r in 0..2 {
            prop_assert_eq!(&rep.mu_b[2 + r][2..], &kh[r][..]);
        }
        let sp = build_omega_hat(&ext, &quad, &omega).unwrap();
        prop_assert!(verify_twisted(&sp, &rep.mu_b).unwrap());
        prop_assert!(preserves_relations(&rep.mu_b, ext.b.r_hat()));
        prop_assert_eq!(derivation_span(&sp, 4), ext.b.r_hat().clone());
    }

    #[test]
    fn rescaling_omega_changes_nothing(re in -3i64..=3, im in -3i64..=3, poly in any::<bool>()) {
        prop_assume!(re != 0 || im != 0);
        let (a, ext, d) = if poly { let (a, e) = poly3_div(6); (a, e, 3) } else { let (a, e) = example1(6); (a, e, 2) };
        let quad = build_quadruple(&a, &ext, d).unwrap();
        let omega = omega_of(&a);
        let base = nakayama(&ext, &quad, &omega).unwrap();
        let scaled = nakayama(&ext, &quad, &omega.scale(&s(re, im))).unwrap();
        prop_assert_eq!(&scaled.l, &base.l);
        prop_assert_eq!(&scaled.h, &base.h);
        prop_assert_eq!(&scaled.delta_r, &base.delta_r);
        prop_assert_eq!(&scaled.delta_l, &base.delta_l);
        prop_assert_eq!(&scaled.div, &base.div);
        prop_assert_eq!(&scaled.mu_b, &base.mu_b);
    }
}
