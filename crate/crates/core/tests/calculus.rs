//! The ⊠ / • calculus of matrices of linear maps.

mod common;

use common::*;
use dox_core::blockcalc::{lambda_y, BlockMap, LinMap};
use dox_core::exact_linalg::{all_words, Scalar, Tensor, UNIT};
use dox_core::extension::matrix_of;
use dox_core::qalgebra::{derivation_extension, hom_power};
use proptest::prelude::*;

/// Linear map on `V` (two letters) from an integer matrix acting on generator columns.
fn lin(m: &[i64; 4]) -> LinMap {
    let img = |g: usize| {
        let mut t = Tensor::zero(1);
        t.add_term(vec![0], &Scalar::from_int(m[2 * g]));
        t.add_term(vec![1], &Scalar::from_int(m[2 * g + 1]));
        (vec![g as u8], t)
    };
    LinMap::from_images(1, 1, [img(0), img(1)])
}

fn block_strategy(rows: usize, cols: usize) -> impl Strategy<Value = BlockMap> {
    proptest::collection::vec(proptest::array::uniform4(-2i64..=2), rows * cols)
        .prop_map(move |es| BlockMap::from_entries(rows, cols, es.iter().map(lin).collect()).unwrap())
}

/// Equality of block maps on every word of the domain.
fn same(f: &BlockMap, g: &BlockMap, letters: usize) -> bool {
    f.shape() == g.shape() && all_words(letters, f.deg_in()).iter().all(|w| f.apply(&Tensor::word(w.clone())) == g.apply(&Tensor::word(w.clone())))
}

fn tensor_strategy() -> impl Strategy<Value = Tensor> {
    proptest::array::uniform2(-3i64..=3).prop_map(|c| {
        Tensor::from_terms(1, [(vec![0], Scalar::from_int(c[0])), (vec![1], Scalar::from_int(c[1]))])
    })
}

proptest! {
    #[test]
    fn box_is_associative(f in block_strategy(2, 2), g in block_strategy(2, 1), h in block_strategy(1, 2)) {
        let left = f.boxed(&g).unwrap().boxed(&h).unwrap();
        let right = f.boxed(&g.boxed(&h).unwrap()).unwrap();
        prop_assert!(same(&left, &right, 2));
    }

    #[test]
    fn bullet_is_associative(f in block_strategy(1, 2), g in block_strategy(2, 2), h in block_strategy(2, 1)) {
        let left = f.bullet(&g).unwrap().bullet(&h).unwrap();
        let right = f.bullet(&g.bullet(&h).unwrap()).unwrap();
        prop_assert!(same(&left, &right, 2));
    }

    #[test]
    fn mixed_product_with_diagonal(
        fp in block_strategy(2, 2),
        f in block_strategy(2, 2),
        g in block_strategy(2, 2),
        phi in proptest::array::uniform4(-2i64..=2),
    ) {
        let d = BlockMap::diag_power(&lin(&phi), 2);
        let left = fp.boxed(&d).unwrap().bullet(&f.boxed(&g).unwrap()).unwrap();
        let right = fp.bullet(&f).unwrap().boxed(&d.bullet(&g).unwrap()).unwrap();
        prop_assert!(same(&left, &right, 2));
    }

    #[test]
    fn transpose_is_an_involution(f in block_strategy(2, 3)) {
        prop_assert_eq!(f.transpose().transpose(), f);
    }

    #[test]
    fn underline_is_linear(
        f in block_strategy(2, 2),
        m in proptest::collection::vec(tensor_strategy(), 4),
        n in proptest::collection::vec(tensor_strategy(), 4),
        c in -3i64..=3,
    ) {
        let c = Scalar::from_int(c);
        let mat = |v: &[Tensor]| vec![v[..2].to_vec(), v[2..].to_vec()];
        let sum: Vec<Tensor> = m.iter().zip(&n).map(|(a, b)| a.plus(&b.scale(&c))).collect();
        let lhs = f.underline_apply(&mat(&sum)).unwrap();
        let mut rhs = f.underline_apply(&mat(&m)).unwrap();
        rhs.add_scaled(&f.underline_apply(&mat(&n)).unwrap(), &c);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn column_action_agrees_with_bullet(f in block_strategy(2, 2), g in block_strategy(2, 1), x in tensor_strategy()) {
        let v = g.apply_column(&x);
        prop_assert_eq!(f.column_action(&v).unwrap(), f.bullet(&g).unwrap().apply_column(&x));
    }
}

#[test]
fn mixed_product_can_fail_without_diagonal() {
    let id = lin(&[1, 0, 0, 1]);
    let swap = lin(&[0, 1, 1, 0]);
    let proj = lin(&[1, 0, 0, 0]);
    let full = BlockMap::from_entries(2, 2, vec![id.clone(), id.clone(), id.clone(), id.clone()]).unwrap();
    let mut found = false;
    for a in [&id, &swap, &proj] {
        for b in [&id, &swap, &proj] {
            let fp = BlockMap::from_entries(2, 2, vec![a.clone(), b.clone(), b.clone(), a.clone()]).unwrap();
            let f = BlockMap::from_entries(2, 2, vec![b.clone(), a.clone(), a.clone(), a.clone()]).unwrap();
            let g = BlockMap::from_entries(2, 2, vec![a.clone(), a.clone(), b.clone(), a.clone()]).unwrap();
            let left = fp.boxed(&full).unwrap().bullet(&f.boxed(&g).unwrap()).unwrap();
            let right = fp.bullet(&f).unwrap().boxed(&full.bullet(&g).unwrap()).unwrap();
            found |= !same(&left, &right, 2);
        }
    }
    assert!(found);
}

#[test]
fn sigma_square_on_omega() {
    let (_, ext) = example1(4);
    let omega = tw(&[(s(1, 0), "x2 x1"), (s(0, -1), "x1 x2")]);
    let img = hom_power(&ext.sigma, 2).apply(&omega);
    assert_eq!(img, vec![vec![omega.scale(&s(0, 1)), z(2)], vec![z(2), omega.scale(&s(0, -1))]]);
}

#[test]
fn theta_on_x1() {
    let (_, ext) = example1(4);
    let j = BlockMap::scalar_action(&ext.j_rows(), 2, 1).unwrap();
    let theta = ext.sigma.transpose().bullet(&j).unwrap().bullet(&ext.sigma).unwrap();
    let x1 = tw(&[(s(1, 0), "x1")]);
    let x = |c: Scalar| x1.scale(&c);
    assert_eq!(theta.apply(&x1), vec![vec![z(1), x(s(-1, 0))], vec![x(s(0, -1)), z(1)]]);
    assert_eq!(j.apply(&x1), vec![vec![z(1), x(s(0, -1))], vec![x1.clone(), z(1)]]);
    assert_eq!(ext.sigma.transpose().transpose(), ext.sigma);
    assert_eq!(matrix_of(&ext.det, 2)[1][1], s(0, 1));
}

#[test]
fn underline_delta_j_delta() {
    let (_, ext) = example1(4);
    let d2 = derivation_extension(&ext.sigma, &ext.delta, 2, 2);
    let j_delta = BlockMap::scalar_left(&ext.j_rows(), &ext.delta).unwrap();
    let nu = d2.underline_compose(&j_delta).unwrap();
    assert!(nu.apply(&tw(&[(s(1, 0), "x1")])).is_zero());
    assert_eq!(
        nu.apply(&tw(&[(s(1, 0), "x2")])),
        tw(&[(s(0, 1), "x2 x1 x2"), (s(1, 0), "x1 x2 x2")])
    );
    let zero = vec![vec![z(1), z(1)], vec![z(1), z(1)]];
    assert!(ext.sigma.underline_apply(&zero).unwrap().is_zero());
}

#[test]
fn lambda_row_times_column() {
    let l = lambda_y(2, 3);
    let prod = l.transpose().boxed(&l).unwrap();
    let unit = Tensor::word(vec![UNIT, UNIT]);
    assert_eq!(prod.apply(&unit), vec![vec![tw(&[(s(1, 0), "y1 y1"), (s(1, 0), "y2 y2")])]]);
}
