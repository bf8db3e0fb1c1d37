#![allow(dead_code)]

use dox_core::exact_linalg::{Field, Scalar, Tensor};
use dox_core::extension::{validate, ExtensionInput, ValidatedExtension};
use dox_core::qalgebra::{AlgebraCache, Presentation};

pub fn s(re: i64, im: i64) -> Scalar {
    Scalar::gaussian(re, im)
}

pub fn t(terms: &[(&[u8], Scalar)]) -> Tensor {
    let deg = terms.first().map(|(w, _)| w.len()).unwrap_or(1);
    Tensor::from_terms(deg, terms.iter().map(|(w, c)| (w.to_vec(), c.clone())))
}

pub fn z(k: usize) -> Tensor {
    Tensor::zero(k)
}

/// Quantum plane `x2 x1 = i x1 x2` with the extension from the worked example.
pub fn example1(bound: usize) -> (AlgebraCache, ValidatedExtension) {
    let rel = t(&[(&[1, 0], s(1, 0)), (&[0, 1], s(0, -1))]);
    let pres = Presentation::new(Field::GaussianRationals, vec!["x1".into(), "x2".into()], &[rel]).unwrap();
    let a = AlgebraCache::new(pres, bound).unwrap();
    let i = s(0, 1);
    let mi = s(0, -1);
    let input = ExtensionInput {
        p12: i.clone(),
        p11: s(0, 0),
        sigma: vec![
            [[z(1), t(&[(&[1], i.clone())])], [t(&[(&[1], mi.clone())]), z(1)]],
            [[z(1), t(&[(&[0], i.clone())])], [t(&[(&[0], i.clone())]), z(1)]],
        ],
        delta: vec![
            [z(2), t(&[(&[0, 1], mi.clone())])],
            [t(&[(&[0, 1], i.clone())]), z(2)],
        ],
    };
    let ext = validate(&a, &input, bound).unwrap();
    (a, ext)
}

/// Word from space-separated names over `x1, x2, y1, y2` (letters 0..4).
pub fn wd(s: &str) -> Vec<u8> {
    s.split_whitespace()
        .map(|n| match n {
            "x1" => 0,
            "x2" => 1,
            "y1" => 2,
            "y2" => 3,
            "x3" => 2,
            _ => panic!("unknown letter {n}"),
        })
        .collect()
}

/// Tensor from `(coefficient, word)` pairs written with [`wd`].
pub fn tw(terms: &[(Scalar, &str)]) -> Tensor {
    let deg = wd(terms[0].1).len();
    let mut out = Tensor::zero(deg);
    for (c, w) in terms {
        out.add_term(wd(w), c);
    }
    out
}

pub fn x(g: u8) -> Tensor {
    Tensor::word(vec![g])
}

/// Quantum plane `x2 x1 = q x1 x2`.
pub fn quantum(q: Scalar, field: Field) -> AlgebraCache {
    let mut rel = Tensor::word(vec![1, 0]);
    rel.add_term(vec![0, 1], &-q);
    AlgebraCache::new(Presentation::new(field, vec!["x1".into(), "x2".into()], &[rel]).unwrap(), 7).unwrap()
}

/// Commutative polynomial ring in `n` variables over Q.
pub fn polynomial(n: u8) -> AlgebraCache {
    let mut rels = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            rels.push(t(&[(&[b, a], s(1, 0)), (&[a, b], s(-1, 0))]));
        }
    }
    let names = (1..=n).map(|i| format!("x{i}")).collect();
    AlgebraCache::new(Presentation::new(Field::Rationals, names, &rels).unwrap(), 7).unwrap()
}

/// `k[x]` as the free algebra on one generator.
pub fn kx() -> AlgebraCache {
    AlgebraCache::new(Presentation::new(Field::Rationals, vec!["x".into()], &[]).unwrap(), 7).unwrap()
}

/// `σ(x_j) = diag(a_j x_j, b_j x_j)` with `p11 = 0`, `ν = 0`.
pub fn diagonal_input(p12: Scalar, a: &[Scalar], b: &[Scalar]) -> ExtensionInput {
    ExtensionInput {
        p12,
        p11: Scalar::from_int(0),
        sigma: a
            .iter()
            .zip(b)
            .enumerate()
            .map(|(g, (aj, bj))| [[x(g as u8).scale(aj), z(1)], [z(1), x(g as u8).scale(bj)]])
            .collect(),
        delta: a.iter().map(|_| [z(2), z(2)]).collect(),
    }
}

/// `k[x1, x2, x3]` with `σ = id`, `ν(x2) = (x1 x2, 0)`, `ν(x3) = (0, x1 x3)`; `d = 3`.
pub fn poly3_div(bound: usize) -> (AlgebraCache, ValidatedExtension) {
    let a = polynomial(3);
    let one = s(1, 0);
    let mut input = diagonal_input(one.clone(), &[one.clone(), one.clone(), one.clone()], &[one.clone(), one.clone(), one]);
    input.delta[1][0] = tw(&[(s(1, 0), "x1 x2")]);
    input.delta[2][1] = tw(&[(s(1, 0), "x1 x3")]);
    let ext = validate(&a, &input, bound).unwrap();
    (a, ext)
}
