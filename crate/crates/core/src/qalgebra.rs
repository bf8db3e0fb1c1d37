//! Quadratic algebras `T(V)/(R)`: graded components, Koszul spaces `W_i`,
//! degree-bounded regularity certificates, and graded maps applied to classes.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::blockcalc::{BlockMap, LinMap};
use crate::error::{Error, Result};
use crate::exact_linalg::{intersect, Field, RowReducer, Scalar, SparseRow, Subspace, Tensor, Word};

/// A quadratic presentation over a finite alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    pub field: Field,
    pub names: Vec<String>,
    pub relations: Subspace,
}

impl Presentation {
    pub fn new(field: Field, names: Vec<String>, relations: &[Tensor]) -> Result<Self> {
        let n = names.len();
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::ShapeMismatch(format!("duplicate generator name {a}")));
            }
        }
        if relations.iter().any(|r| r.degree() != 2 || r.terms().keys().flatten().any(|&g| g as usize >= n)) {
            return Err(Error::ShapeMismatch("relations must be quadratic in the generators".into()));
        }
        Ok(Presentation { field, names, relations: Subspace::span(n, 2, relations.iter()) })
    }

    pub fn letters(&self) -> usize {
        self.names.len()
    }
}

#[derive(Clone, Debug)]
struct Level {
    words: Vec<Word>,
    /// `lmul[g][b]`: class of `g · b` for basis element `b` of the previous degree.
    lmul: Vec<Vec<SparseRow<usize>>>,
}

/// The graded quotient built degree by degree as
/// `A_k = (V ⊗ A_{k-1}) / image(R ⊗ A_{k-2})`.
///
/// Basis elements are the non-pivot words of the relation rows under the
/// lexicographic order, and left multiplication by each letter is stored as
/// a sparse matrix. This is a linear-algebra normal form; no rewriting system.
#[derive(Clone, Debug)]
pub struct GradedQuotient {
    letters: usize,
    relations: Vec<Tensor>,
    levels: Vec<Level>,
}

impl GradedQuotient {
    pub fn new(letters: usize, relations: &Subspace, max_degree: usize) -> Self {
        let mut q = GradedQuotient {
            letters,
            relations: relations.basis().to_vec(),
            levels: vec![Level { words: vec![Vec::new()], lmul: Vec::new() }],
        };
        q.extend_to(max_degree);
        q
    }

    pub fn max_degree(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn extend_to(&mut self, k: usize) {
        while self.levels.len() <= k {
            self.push_level();
        }
    }

    fn push_level(&mut self) {
        let k = self.levels.len();
        let n = self.letters;
        let prev = self.levels[k - 1].words.len();
        let mut red = RowReducer::<usize>::new();
        if k >= 2 {
            let prev2 = self.levels[k - 2].words.len();
            let lm = &self.levels[k - 1].lmul;
            for r in &self.relations {
                for b in 0..prev2 {
                    let mut row: SparseRow<usize> = BTreeMap::new();
                    for (w, c) in r.terms() {
                        let (a, a2) = (w[0] as usize, w[1] as usize);
                        for (idx, v) in &lm[a2][b] {
                            let key = a * prev + idx;
                            let e = row.entry(key).or_insert_with(Scalar::zero);
                            *e += &(c * v);
                        }
                    }
                    row.retain(|_, v| !v.is_zero());
                    red.insert(row);
                }
            }
        }
        let rref = red.into_rref();
        let mut pivot_rows: BTreeMap<usize, SparseRow<usize>> = BTreeMap::new();
        for row in rref {
            let p = *row.keys().next().expect("nonzero row");
            pivot_rows.insert(p, row);
        }
        let mut basis_of = BTreeMap::new();
        let mut words = Vec::new();
        for col in 0..n * prev {
            if !pivot_rows.contains_key(&col) {
                basis_of.insert(col, words.len());
                let mut w = vec![(col / prev) as u8];
                w.extend_from_slice(&self.levels[k - 1].words[col % prev]);
                words.push(w);
            }
        }
        let mut lmul = vec![Vec::with_capacity(prev); n];
        for (g, lg) in lmul.iter_mut().enumerate() {
            for b in 0..prev {
                let col = g * prev + b;
                let img: SparseRow<usize> = match pivot_rows.get(&col) {
                    None => [(basis_of[&col], Scalar::one())].into_iter().collect(),
                    Some(row) => row
                        .iter()
                        .filter(|(c, _)| **c != col)
                        .map(|(c, v)| (basis_of[c], -v))
                        .collect(),
                };
                lg.push(img);
            }
        }
        self.levels.push(Level { words, lmul });
    }

    pub fn dim(&self, k: usize) -> usize {
        self.levels[k].words.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.words.len()).collect()
    }

    /// Transversal words of degree `k`.
    pub fn words(&self, k: usize) -> &[Word] {
        &self.levels[k].words
    }

    /// Left multiplication by letter `g` on a degree-`k` class, landing in degree `k + 1`.
    pub fn left_mul(&self, g: u8, k: usize, v: &SparseRow<usize>) -> SparseRow<usize> {
        let lm = &self.levels[k + 1].lmul[g as usize];
        let mut out: SparseRow<usize> = BTreeMap::new();
        for (b, c) in v {
            for (idx, x) in &lm[*b] {
                let e = out.entry(*idx).or_insert_with(Scalar::zero);
                *e += &(c * x);
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Class of a word.
    pub fn project_word(&self, w: &[u8]) -> SparseRow<usize> {
        let mut v: SparseRow<usize> = [(0usize, Scalar::one())].into_iter().collect();
        for (pos, &g) in w.iter().enumerate().rev() {
            let level = w.len() - pos - 1;
            v = self.left_mul(g, level, &v);
        }
        v
    }

    /// Coordinates of the class of `t` in the transversal basis.
    pub fn project(&self, t: &Tensor) -> SparseRow<usize> {
        let mut out: SparseRow<usize> = BTreeMap::new();
        for (w, c) in t.terms() {
            for (i, x) in self.project_word(w) {
                let e = out.entry(i).or_insert_with(Scalar::zero);
                *e += &(c * &x);
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// The tensor `Σ c_b word_b` representing given coordinates.
    pub fn lift(&self, k: usize, coords: &SparseRow<usize>) -> Tensor {
        Tensor::from_terms(k, coords.iter().map(|(b, c)| (self.levels[k].words[*b].clone(), c.clone())))
    }

    /// Dense relation span `Σ_s V^{⊗s} ⊗ R ⊗ V^{⊗k-s-2}` (for small `k`).
    pub fn relation_span(&self, k: usize) -> Subspace {
        let r = Subspace::span(self.letters, 2, self.relations.iter());
        if k < 2 {
            return Subspace::zero(self.letters, k);
        }
        let mut red = RowReducer::new();
        for s in 0..=k - 2 {
            for row in r.sandwich(s, k - s - 2).basis() {
                red.insert(row.terms().clone());
            }
        }
        Subspace::span(self.letters, k, red.into_rref().into_iter().map(|r| Tensor::from_terms(k, r)).collect::<Vec<_>>().iter())
    }
}

/// A presentation with its graded quotient and Koszul spaces, built eagerly.
#[derive(Clone, Debug)]
pub struct AlgebraCache {
    pub presentation: Presentation,
    pub quotient: GradedQuotient,
    koszul: Vec<Subspace>,
}

/// Largest tensor power for which Koszul spaces are computed densely.
const KOSZUL_AMBIENT_LIMIT: usize = 60_000;

impl AlgebraCache {
    /// Builds `A_k` for `k ≤ max_degree` and `W_i` until it vanishes (or the
    /// ambient dimension exceeds a fixed limit).
    pub fn new(presentation: Presentation, max_degree: usize) -> Result<Self> {
        let n = presentation.letters();
        let quotient = GradedQuotient::new(n, &presentation.relations, max_degree);
        let mut koszul = vec![Subspace::full(n, 0), Subspace::full(n, 1)];
        let mut i = 2;
        loop {
            if koszul[i - 1].is_zero() {
                break;
            }
            if n.pow(i as u32) > KOSZUL_AMBIENT_LIMIT {
                break;
            }
            let pieces: Vec<Subspace> =
                (0..=i - 2).map(|s| presentation.relations.sandwich(s, i - s - 2)).collect();
            koszul.push(intersect(n, i, &pieces)?);
            i += 1;
        }
        Ok(AlgebraCache { presentation, quotient, koszul })
    }

    pub fn letters(&self) -> usize {
        self.presentation.letters()
    }

    /// `W_i`; zero beyond the first vanishing one.
    pub fn koszul_space(&self, i: usize) -> Subspace {
        match self.koszul.get(i) {
            Some(w) => w.clone(),
            None => Subspace::zero(self.letters(), i),
        }
    }

    pub fn koszul_dims(&self) -> Vec<usize> {
        self.koszul.iter().map(Subspace::dim).collect()
    }

    fn koszul_complete(&self) -> bool {
        self.koszul.last().map(Subspace::is_zero).unwrap_or(false)
    }

    pub fn dim(&self, k: usize) -> usize {
        self.quotient.dim(k)
    }

    /// Evidence report for AS-regularity of global dimension `d`.
    pub fn certificate(&self, bound: usize) -> Certificate {
        let dims = self.koszul_dims();
        let complete = self.koszul_complete();
        let d = dims.iter().rposition(|&x| x > 0).unwrap_or(0);
        let w_top_ok = complete && dims[d] == 1;
        let palindrome_ok = complete && (0..=d).all(|i| dims[i] == dims[d - i]);
        let mut euler_failures = Vec::new();
        for k in 1..=bound.min(self.quotient.max_degree()) {
            let mut sum = 0i64;
            for (i, &w) in dims.iter().enumerate().take(k + 1) {
                let term = (w * self.dim(k - i)) as i64;
                sum += if i % 2 == 0 { term } else { -term };
            }
            if sum != 0 {
                euler_failures.push(k);
            }
        }
        let omega = if w_top_ok { Some(self.koszul[d].basis()[0].clone()) } else { None };
        Certificate {
            d,
            koszul_dims: dims,
            omega,
            euler_ok: euler_failures.is_empty() && bound <= self.quotient.max_degree(),
            euler_failures,
            palindrome_ok,
            w_top_ok,
            bound,
        }
    }

    /// The certificate, or `NotRegularEvidence` if any check fails.
    pub fn as_certificate(&self, bound: usize) -> Result<Certificate> {
        let c = self.certificate(bound);
        if c.passed() {
            Ok(c)
        } else {
            Err(Error::NotRegularEvidence(c.summary()))
        }
    }
}

/// Degree-bounded regularity evidence. `omega` spans `W_d` and its
/// lexicographically least word has coefficient 1 (RREF normalization).
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub d: usize,
    pub koszul_dims: Vec<usize>,
    pub omega: Option<Tensor>,
    pub euler_ok: bool,
    pub euler_failures: Vec<usize>,
    pub palindrome_ok: bool,
    pub w_top_ok: bool,
    pub bound: usize,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.euler_ok && self.palindrome_ok && self.w_top_ok && self.omega.is_some()
    }

    pub fn omega(&self) -> &Tensor {
        self.omega.as_ref().expect("certificate passed")
    }

    pub fn summary(&self) -> String {
        format!(
            "d = {}, dim W = {:?}, top one-dimensional: {}, palindromic: {}, Euler sums vanish up to degree {}: {}{}",
            self.d,
            self.koszul_dims,
            self.w_top_ok,
            self.palindrome_ok,
            self.bound,
            self.euler_ok,
            if self.euler_failures.is_empty() { String::new() } else { format!(" (fails at {:?})", self.euler_failures) }
        )
    }
}

/// `σ^{⊠k}` for a 2×2 block map `σ` of degree 1; `σ^{⊠0}` is the identity matrix on degree 0.
pub fn hom_power(sigma: &BlockMap, k: usize) -> BlockMap {
    let mut acc = BlockMap::diag_power(&LinMap::identity(0, 0), 2);
    for _ in 0..k {
        acc = acc.boxed(sigma).expect("2x2 shapes");
    }
    acc
}

/// The derivation rule on `V^{⊗k}`: `Σ_s σ^{⊠s} ⊠ δ ⊠ id^{⊗k-s-1}`, a 2×1 block map.
pub fn derivation_extension(sigma: &BlockMap, delta: &BlockMap, n: usize, k: usize) -> BlockMap {
    let (rows, _) = delta.shape();
    let mut acc = BlockMap::zero(rows, 1, k, k + delta.deg_out() - delta.deg_in());
    for s in 0..k {
        let left = hom_power(sigma, s);
        let right = BlockMap::single(LinMap::identity(n, k - s - 1));
        let term = left.boxed(delta).and_then(|x| x.boxed(&right)).expect("conformant shapes");
        acc = acc.add(&term).expect("same shape");
    }
    acc
}

/// Result of applying a graded map to a class.
#[derive(Clone, Debug, PartialEq)]
pub enum GradedImage {
    /// `σ` applied to a degree-`k` class: a 2×2 matrix of degree-`k` classes.
    Hom(Vec<Vec<SparseRow<usize>>>),
    /// `δ` applied to a degree-`k` class: a column of degree-`k+1` classes.
    Derivation(Vec<SparseRow<usize>>),
}

pub enum GradedKind<'a> {
    Hom { sigma: &'a BlockMap },
    Derivation { sigma: &'a BlockMap, delta: &'a BlockMap },
}

/// Lifts a class of `A_k` to transversal words, applies `σ^{⊠k}` or the
/// derivation rule, and projects back.
pub fn apply_graded(a: &AlgebraCache, kind: GradedKind<'_>, k: usize, coords: &SparseRow<usize>) -> GradedImage {
    let t = a.quotient.lift(k, coords);
    let n = a.letters();
    match kind {
        GradedKind::Hom { sigma } => {
            let m = hom_power(sigma, k).apply(&t);
            GradedImage::Hom(m.iter().map(|r| r.iter().map(|x| a.quotient.project(x)).collect()).collect())
        }
        GradedKind::Derivation { sigma, delta } => {
            if k == 0 {
                return GradedImage::Derivation(vec![BTreeMap::new(), BTreeMap::new()]);
            }
            let col = derivation_extension(sigma, delta, n, k).apply_column(&t);
            GradedImage::Derivation(col.iter().map(|x| a.quotient.project(x)).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polynomial(n: usize) -> Presentation {
        let mut rels = Vec::new();
        for a in 0..n as u8 {
            for b in a + 1..n as u8 {
                let mut t = Tensor::word(vec![b, a]);
                t.add_term(vec![a, b], &-Scalar::one());
                rels.push(t);
            }
        }
        let names = (1..=n).map(|i| format!("x{i}")).collect();
        Presentation::new(Field::Rationals, names, &rels).unwrap()
    }

    #[test]
    fn polynomial_dimensions() {
        let a = AlgebraCache::new(polynomial(3), 5).unwrap();
        assert_eq!(a.quotient.dims(), vec![1, 3, 6, 10, 15, 21]);
        assert_eq!(a.koszul_dims(), vec![1, 3, 3, 1, 0]);
        let c = a.as_certificate(5).unwrap();
        assert_eq!(c.d, 3);
    }

    #[test]
    fn projection_respects_relations() {
        let a = AlgebraCache::new(polynomial(2), 3).unwrap();
        let q = &a.quotient;
        assert_eq!(q.project_word(&[1, 0, 1]), q.project_word(&[0, 1, 1]));
    }
}
