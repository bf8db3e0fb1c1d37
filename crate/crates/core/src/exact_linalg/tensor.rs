use std::collections::BTreeMap;

use num_traits::Zero;

use super::Scalar;
use crate::error::{Error, Result};

/// A word over generator indices; lexicographic `Vec` order is the word order.
pub type Word = Vec<u8>;

/// Formal unit slot: occupies a tensor position but carries internal degree 0.
pub const UNIT: u8 = u8::MAX;

/// Sparse element of a tensor power, keyed by words of a fixed length.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tensor {
    degree: usize,
    terms: BTreeMap<Word, Scalar>,
}

impl Tensor {
    pub fn zero(degree: usize) -> Self {
        Tensor { degree, terms: BTreeMap::new() }
    }

    pub fn word(w: Word) -> Self {
        Tensor::term(w, Scalar::from_int(1))
    }

    pub fn term(w: Word, c: Scalar) -> Self {
        let mut t = Tensor::zero(w.len());
        t.add_term(w, &c);
        t
    }

    /// The unit `1` in degree 0.
    pub fn unit() -> Self {
        Tensor::word(Vec::new())
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Scalar)>>(degree: usize, it: I) -> Self {
        let mut t = Tensor::zero(degree);
        for (w, c) in it {
            t.add_term(w, &c);
        }
        t
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, Scalar> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[u8]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Lexicographically least word with nonzero coefficient.
    pub fn leading(&self) -> Option<(&Word, &Scalar)> {
        self.terms.iter().next()
    }

    pub fn add_term(&mut self, w: Word, c: &Scalar) {
        debug_assert_eq!(w.len(), self.degree, "word length must equal tensor degree");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Tensor, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(self.degree, other.degree);
        for (w, v) in &other.terms {
            self.add_term(w.clone(), &(v * c));
        }
    }

    pub fn add_assign(&mut self, other: &Tensor) {
        debug_assert_eq!(self.degree, other.degree);
        for (w, v) in &other.terms {
            self.add_term(w.clone(), v);
        }
    }

    pub fn sub_assign(&mut self, other: &Tensor) {
        debug_assert_eq!(self.degree, other.degree);
        for (w, v) in &other.terms {
            self.add_term(w.clone(), &-v);
        }
    }

    pub fn plus(&self, other: &Tensor) -> Tensor {
        let mut t = self.clone();
        t.add_assign(other);
        t
    }

    pub fn minus(&self, other: &Tensor) -> Tensor {
        let mut t = self.clone();
        t.sub_assign(other);
        t
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        if c.is_zero() {
            return Tensor::zero(self.degree);
        }
        Tensor {
            degree: self.degree,
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Tensor {
        self.scale(&-Scalar::from_int(1))
    }

    /// `self ⊗ other` by word concatenation.
    pub fn otimes(&self, other: &Tensor) -> Tensor {
        let mut t = Tensor::zero(self.degree + other.degree);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                t.add_term(w, &(a * b));
            }
        }
        t
    }

    /// Applies a slot permutation: output slot `k` receives input slot `perm[k]`.
    pub fn permute_slots(&self, perm: &[usize]) -> Tensor {
        debug_assert_eq!(perm.len(), self.degree);
        let mut t = Tensor::zero(self.degree);
        for (w, c) in &self.terms {
            let nw: Word = perm.iter().map(|&p| w[p]).collect();
            t.add_term(nw, c);
        }
        t
    }

    /// Relabels letters; `f` may merge letters (coefficients are summed).
    pub fn map_words<F: Fn(&[u8]) -> Word>(&self, degree: usize, f: F) -> Tensor {
        let mut t = Tensor::zero(degree);
        for (w, c) in &self.terms {
            t.add_term(f(w), c);
        }
        t
    }

    /// Coefficient slice `Σ_u t[u·v] u` for a fixed suffix `v`.
    pub fn prefix_slice(&self, suffix: &[u8]) -> Tensor {
        let k = self.degree - suffix.len();
        let mut t = Tensor::zero(k);
        for (w, c) in &self.terms {
            if &w[k..] == suffix {
                t.add_term(w[..k].to_vec(), c);
            }
        }
        t
    }

    /// Groups terms by (prefix of length `a`, suffix after `a + b` letters) and returns
    /// the middle slices: `t = Σ u ⊗ m_{u,v} ⊗ v`.
    pub fn middle_slices(&self, a: usize, b: usize) -> BTreeMap<(Word, Word), Tensor> {
        let mut out: BTreeMap<(Word, Word), Tensor> = BTreeMap::new();
        for (w, c) in &self.terms {
            let key = (w[..a].to_vec(), w[a + b..].to_vec());
            out.entry(key)
                .or_insert_with(|| Tensor::zero(b))
                .add_term(w[a..a + b].to_vec(), c);
        }
        out
    }
}

/// Slot permutation of the flip operator `τ_d^i`: slot 1 travels to slot `i + 1`.
pub fn tau_permutation(d: usize, i: usize) -> Result<Vec<usize>> {
    if d == 0 || i >= d {
        return Err(Error::IndexOutOfRange { what: "tau", index: i, bound: d });
    }
    let mut perm: Vec<usize> = (0..d).collect();
    // τ_d^i = (id^{i-1} ⊗ τ ⊗ id) τ_d^{i-1}: successive adjacent flips.
    for k in 0..i {
        perm.swap(k, k + 1);
    }
    Ok(perm)
}

/// `τ_d^i(t)`.
pub fn tau_apply(d: usize, i: usize, t: &Tensor) -> Result<Tensor> {
    if t.degree() != d {
        return Err(Error::IndexOutOfRange { what: "tau degree", index: t.degree(), bound: d });
    }
    Ok(t.permute_slots(&tau_permutation(d, i)?))
}

/// All words of length `k` over `n` letters, in lexicographic order.
pub fn all_words(n: usize, k: usize) -> Vec<Word> {
    let mut out: Vec<Word> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * n);
        for w in &out {
            for g in 0..n {
                let mut nw = w.clone();
                nw.push(g as u8);
                next.push(nw);
            }
        }
        out = next;
    }
    out
}
