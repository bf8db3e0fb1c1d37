//! Sparse Gaussian elimination with first-nonzero pivoting.
//!
//! Rows are maps from column keys to nonzero scalars; the pivot of a row is
//! its least key. The same engine serves word-indexed subspaces and
//! integer-indexed matrices.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::Scalar;

pub type SparseRow<K> = BTreeMap<K, Scalar>;

/// Subtracts `c * src` from `dst`, dropping cancelled entries.
pub fn axpy<K: Ord + Clone>(dst: &mut SparseRow<K>, c: &Scalar, src: &SparseRow<K>) {
    for (k, v) in src {
        let delta = c * v;
        match dst.get_mut(k) {
            Some(e) => {
                *e -= &delta;
                if e.is_zero() {
                    dst.remove(k);
                }
            }
            None => {
                dst.insert(k.clone(), -delta);
            }
        }
    }
}

/// Incremental echelon basis; call [`RowReducer::into_rref`] for the canonical form.
#[derive(Clone, Debug)]
pub struct RowReducer<K: Ord + Clone> {
    rows: Vec<SparseRow<K>>,
    pivots: BTreeMap<K, usize>,
}

impl<K: Ord + Clone> Default for RowReducer<K> {
    fn default() -> Self {
        RowReducer { rows: Vec::new(), pivots: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> RowReducer<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.pivots.contains_key(k)
    }

    /// Eliminates every pivot column from `row`.
    pub fn reduce(&self, mut row: SparseRow<K>) -> SparseRow<K> {
        let mut cursor: Option<K> = None;
        loop {
            let next = {
                let mut it: Box<dyn Iterator<Item = (&K, &Scalar)>> = match &cursor {
                    None => Box::new(row.iter()),
                    Some(c) => Box::new(row.range(c.clone()..)),
                };
                it.find(|(k, _)| self.pivots.contains_key(*k)).map(|(k, v)| (k.clone(), v.clone()))
            };
            match next {
                None => return row,
                Some((k, c)) => {
                    let r = &self.rows[self.pivots[&k]];
                    axpy(&mut row, &c, r);
                    cursor = Some(k);
                }
            }
        }
    }

    /// Adds a row; returns its pivot if it was independent of the current rows.
    pub fn insert(&mut self, row: SparseRow<K>) -> Option<K> {
        let mut row = self.reduce(row);
        let (k, lead) = match row.iter().next() {
            None => return None,
            Some((k, v)) => (k.clone(), v.clone()),
        };
        if !lead.is_one() {
            let inv = lead.inv().expect("nonzero pivot");
            for v in row.values_mut() {
                *v = &*v * &inv;
            }
        }
        self.pivots.insert(k.clone(), self.rows.len());
        self.rows.push(row);
        Some(k)
    }

    /// Reduced row echelon form, rows sorted by pivot.
    pub fn into_rref(self) -> Vec<SparseRow<K>> {
        let mut order: Vec<(K, usize)> = self.pivots.iter().map(|(k, &i)| (k.clone(), i)).collect();
        order.sort_by(|a, b| a.0.cmp(&b.0));
        let mut rows: Vec<Option<SparseRow<K>>> = self.rows.into_iter().map(Some).collect();
        let mut done: BTreeMap<K, SparseRow<K>> = BTreeMap::new();
        for (k, idx) in order.into_iter().rev() {
            let mut row = rows[idx].take().expect("row used once");
            let mut cursor = k.clone();
            loop {
                let next = row
                    .range(cursor.clone()..)
                    .find(|(c, _)| **c != k && done.contains_key(*c))
                    .map(|(c, v)| (c.clone(), v.clone()));
                match next {
                    None => break,
                    Some((c, v)) => {
                        axpy(&mut row, &v, &done[&c]);
                        cursor = c;
                    }
                }
            }
            done.insert(k, row);
        }
        done.into_values().collect()
    }
}

/// Columns indexed either by an ambient key or by a tag recording a combination.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Aug<K> {
    Main(K),
    Tag(usize),
}

/// Solves `Σ α_c v_c = b` for vectors added in order; dependent vectors get
/// coefficient zero, so pivot variables are chosen least-index-first.
#[derive(Clone, Debug)]
pub struct Combiner<K: Ord + Clone> {
    red: RowReducer<Aug<K>>,
    count: usize,
    independent: Vec<bool>,
}

impl<K: Ord + Clone> Default for Combiner<K> {
    fn default() -> Self {
        Combiner { red: RowReducer::new(), count: 0, independent: Vec::new() }
    }
}

impl<K: Ord + Clone> Combiner<K> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers the next vector; returns whether it was independent.
    pub fn push(&mut self, v: &SparseRow<K>) -> bool {
        let mut row: SparseRow<Aug<K>> = v.iter().map(|(k, c)| (Aug::Main(k.clone()), c.clone())).collect();
        row.insert(Aug::Tag(self.count), Scalar::one());
        self.count += 1;
        let reduced = self.red.reduce(row);
        let ok = matches!(reduced.keys().next(), Some(Aug::Main(_)));
        if ok {
            self.red.insert(reduced);
        }
        self.independent.push(ok);
        ok
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn independent(&self) -> &[bool] {
        &self.independent
    }

    /// Coefficients `α` (length = number of pushed vectors), or `None`.
    pub fn solve(&self, b: &SparseRow<K>) -> Option<Vec<Scalar>> {
        let row: SparseRow<Aug<K>> = b.iter().map(|(k, c)| (Aug::Main(k.clone()), c.clone())).collect();
        let reduced = self.red.reduce(row);
        let mut alpha = vec![Scalar::zero(); self.count];
        for (k, v) in reduced {
            match k {
                Aug::Main(_) => return None,
                Aug::Tag(t) => alpha[t] = -v,
            }
        }
        Some(alpha)
    }
}
