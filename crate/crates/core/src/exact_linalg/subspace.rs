use std::collections::BTreeMap;

use num_traits::Zero;

use super::reduce::{Combiner, RowReducer};
use super::tensor::{all_words, Tensor, Word};
use super::Scalar;
use crate::error::{Error, Result};

/// A subspace of the degree-`k` tensor power over `n` letters, stored as its
/// reduced row echelon basis (pivot = least word of each row).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    letters: usize,
    degree: usize,
    rows: Vec<Tensor>,
}

impl Subspace {
    pub fn zero(letters: usize, degree: usize) -> Self {
        Subspace { letters, degree, rows: Vec::new() }
    }

    pub fn full(letters: usize, degree: usize) -> Self {
        let rows = all_words(letters, degree).into_iter().map(Tensor::word).collect();
        Subspace { letters, degree, rows }
    }

    /// Canonical basis of the span of `vectors`.
    pub fn span<'a, I: IntoIterator<Item = &'a Tensor>>(letters: usize, degree: usize, vectors: I) -> Self {
        let mut red = RowReducer::new();
        for v in vectors {
            debug_assert_eq!(v.degree(), degree);
            red.insert(v.terms().clone());
        }
        Self::from_reducer(letters, degree, red)
    }

    fn from_reducer(letters: usize, degree: usize, red: RowReducer<Word>) -> Self {
        let rows = red
            .into_rref()
            .into_iter()
            .map(|r| Tensor::from_terms(degree, r))
            .collect();
        Subspace { letters, degree, rows }
    }

    /// Wraps rows already in reduced echelon form (sorted by pivot).
    fn from_rref_rows(letters: usize, degree: usize, mut rows: Vec<Tensor>) -> Self {
        rows.sort_by(|a, b| a.leading().map(|x| x.0).cmp(&b.leading().map(|x| x.0)));
        Subspace { letters, degree, rows }
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[Tensor] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<Word> {
        self.rows.iter().map(|r| r.leading().expect("nonzero row").0.clone()).collect()
    }

    fn pivot_index(&self) -> BTreeMap<Word, usize> {
        self.pivots().into_iter().enumerate().map(|(i, w)| (w, i)).collect()
    }

    /// Normal form modulo the subspace: all pivot coordinates cleared.
    pub fn reduce(&self, t: &Tensor) -> Tensor {
        let idx = self.pivot_index();
        let mut out = t.clone();
        for (w, c) in t.terms() {
            if let Some(&i) = idx.get(w) {
                out.add_scaled(&self.rows[i], &-c);
            }
        }
        out
    }

    pub fn contains(&self, t: &Tensor) -> bool {
        t.degree() == self.degree && self.reduce(t).is_zero()
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Coordinates of `t` (assumed in the subspace) in the RREF basis: its pivot coefficients.
    pub fn coordinates(&self, t: &Tensor) -> Vec<Scalar> {
        self.rows.iter().map(|r| t.coeff(r.leading().expect("nonzero row").0)).collect()
    }

    pub fn combine(&self, coords: &[Scalar]) -> Tensor {
        let mut t = Tensor::zero(self.degree);
        for (r, c) in self.rows.iter().zip(coords) {
            t.add_scaled(r, c);
        }
        t
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(self.letters.max(other.letters), self.degree, self.rows.iter().chain(other.rows.iter()))
    }

    /// Annihilator under the pairing `⟨u, v⟩ = Σ_w u_w v_w`.
    pub fn annihilator(&self) -> Subspace {
        let idx = self.pivot_index();
        let mut rows = Vec::new();
        for q in all_words(self.letters, self.degree) {
            if idx.contains_key(&q) {
                continue;
            }
            let mut t = Tensor::word(q.clone());
            for (p, r) in self.pivots().iter().zip(&self.rows) {
                let c = r.coeff(&q);
                if !c.is_zero() {
                    t.add_term(p.clone(), &-c);
                }
            }
            rows.push(t);
        }
        // Leading word of each row is q unless some pivot p < q appears; re-canonicalize.
        Subspace::span(self.letters, self.degree, rows.iter())
    }

    /// `X ⊗ Y` for canonical `X`, `Y`; the product of RREF bases is again RREF.
    pub fn otimes(&self, other: &Subspace) -> Subspace {
        let mut rows = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.rows {
            for b in &other.rows {
                rows.push(a.otimes(b));
            }
        }
        Subspace::from_rref_rows(self.letters.max(other.letters), self.degree + other.degree, rows)
    }

    /// `V^{⊗a} ⊗ self ⊗ V^{⊗b}` over this subspace's alphabet.
    pub fn sandwich(&self, a: usize, b: usize) -> Subspace {
        let n = self.letters;
        Subspace::full(n, a).otimes(self).otimes(&Subspace::full(n, b))
    }

    /// Membership in `V^{⊗a} ⊗ self ⊗ V^{⊗b}` by slicing, without building that space.
    pub fn contains_sandwiched(&self, t: &Tensor, a: usize) -> bool {
        if t.degree() < a + self.degree {
            return false;
        }
        t.middle_slices(a, self.degree).values().all(|m| self.contains(m))
    }
}

/// Canonical basis of `⋂ spaces` (full space for an empty list).
pub fn intersect(letters: usize, degree: usize, spaces: &[Subspace]) -> Result<Subspace> {
    for s in spaces {
        if s.degree != degree {
            return Err(Error::ShapeMismatch(format!(
                "intersect: degree {} against ambient degree {}",
                s.degree, degree
            )));
        }
    }
    if spaces.is_empty() {
        return Ok(Subspace::full(letters, degree));
    }
    if spaces.len() == 1 {
        return Ok(spaces[0].clone());
    }
    let mut red = RowReducer::new();
    for s in spaces {
        let s = Subspace { letters, ..s.clone() };
        for r in s.annihilator().rows {
            red.insert(r.into_terms());
        }
    }
    Ok(Subspace::from_reducer(letters, degree, red).annihilator())
}

/// Returns `x` in `constraint` with `target - x` in `congruence`; free RREF
/// coordinates of `constraint` are set to zero, least pivot first.
pub fn solve_affine(target: &Tensor, congruence: &Subspace, constraint: &Subspace) -> Result<Tensor> {
    if target.degree() != congruence.degree() || target.degree() != constraint.degree() {
        return Err(Error::ShapeMismatch("solve_affine: ambient degrees differ".into()));
    }
    let mut comb = Combiner::new();
    for c in constraint.basis() {
        comb.push(congruence.reduce(c).terms());
    }
    let rhs = congruence.reduce(target);
    match comb.solve(rhs.terms()) {
        Some(alpha) => Ok(constraint.combine(&alpha)),
        None => Err(Error::NoSolution(format!(
            "target with {} terms is not congruent to an element of the constraint space",
            target.len()
        ))),
    }
}
