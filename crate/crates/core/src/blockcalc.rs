//! Matrices of linear maps between tensor powers and their calculus:
//! `⊠` (entrywise tensor product), `•` (entrywise composition), transpose,
//! underline evaluation, scalar-matrix action, column action and diagonal powers.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_linalg::{all_words, Scalar, Subspace, Tensor, Word, UNIT};

/// A linear map between tensor powers, stored by the images of basis words.
/// Words without a stored image map to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinMap {
    deg_in: usize,
    deg_out: usize,
    cols: BTreeMap<Word, Tensor>,
}

impl LinMap {
    pub fn zero(deg_in: usize, deg_out: usize) -> Self {
        LinMap { deg_in, deg_out, cols: BTreeMap::new() }
    }

    /// Identity on the degree-`k` tensor power over `n` letters.
    pub fn identity(n: usize, k: usize) -> Self {
        let cols = all_words(n, k).into_iter().map(|w| (w.clone(), Tensor::word(w))).collect();
        LinMap { deg_in: k, deg_out: k, cols }
    }

    pub fn from_images(deg_in: usize, deg_out: usize, images: impl IntoIterator<Item = (Word, Tensor)>) -> Self {
        let mut m = LinMap::zero(deg_in, deg_out);
        for (w, t) in images {
            debug_assert_eq!(w.len(), deg_in);
            debug_assert_eq!(t.degree(), deg_out);
            if !t.is_zero() {
                m.cols.insert(w, t);
            }
        }
        m
    }

    /// The map defined on a subspace by the images of its RREF basis rows,
    /// extended by zero off the pivot words. It agrees with the intended map on
    /// the subspace and on any `X ⊗ S ⊗ Y` when used as a tensor factor.
    pub fn on_basis(space: &Subspace, deg_out: usize, images: Vec<Tensor>) -> Self {
        debug_assert_eq!(images.len(), space.dim());
        LinMap::from_images(space.degree(), deg_out, space.pivots().into_iter().zip(images))
    }

    pub fn deg_in(&self) -> usize {
        self.deg_in
    }

    pub fn deg_out(&self) -> usize {
        self.deg_out
    }

    pub fn images(&self) -> &BTreeMap<Word, Tensor> {
        &self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn image_of(&self, w: &[u8]) -> Option<&Tensor> {
        self.cols.get(w)
    }

    pub fn apply(&self, t: &Tensor) -> Tensor {
        let mut out = Tensor::zero(self.deg_out);
        for (w, c) in t.terms() {
            if let Some(img) = self.cols.get(w) {
                out.add_scaled(img, c);
            }
        }
        out
    }

    /// `h ∘ f`.
    pub fn compose(h: &LinMap, f: &LinMap) -> LinMap {
        LinMap::from_images(
            f.deg_in,
            h.deg_out,
            f.cols.iter().map(|(w, t)| (w.clone(), h.apply(t))).collect::<Vec<_>>(),
        )
    }

    /// `f ⊗ g` acting on concatenated words.
    pub fn otimes(f: &LinMap, g: &LinMap) -> LinMap {
        let mut cols = BTreeMap::new();
        for (u, a) in &f.cols {
            for (v, b) in &g.cols {
                let mut w = u.clone();
                w.extend_from_slice(v);
                let img = a.otimes(b);
                if !img.is_zero() {
                    cols.insert(w, img);
                }
            }
        }
        LinMap { deg_in: f.deg_in + g.deg_in, deg_out: f.deg_out + g.deg_out, cols }
    }

    pub fn add_assign(&mut self, other: &LinMap) {
        self.add_scaled(other, &Scalar::one());
    }

    pub fn add_scaled(&mut self, other: &LinMap, c: &Scalar) {
        debug_assert_eq!((self.deg_in, self.deg_out), (other.deg_in, other.deg_out));
        if c.is_zero() {
            return;
        }
        for (w, t) in &other.cols {
            let e = self.cols.entry(w.clone()).or_insert_with(|| Tensor::zero(other.deg_out));
            e.add_scaled(t, c);
            if e.is_zero() {
                self.cols.remove(w);
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> LinMap {
        let mut m = LinMap::zero(self.deg_in, self.deg_out);
        m.add_scaled(self, c);
        m
    }

    /// Applies `f_1 ⊗ … ⊗ f_m` to `t` factor by factor without materializing the product.
    pub fn apply_kron(factors: &[&LinMap], t: &Tensor) -> Tensor {
        let deg_in: usize = factors.iter().map(|f| f.deg_in).sum();
        let deg_out: usize = factors.iter().map(|f| f.deg_out).sum();
        debug_assert_eq!(t.degree(), deg_in);
        let mut out = Tensor::zero(deg_out);
        'terms: for (w, c) in t.terms() {
            let mut acc = Tensor::term(Vec::new(), c.clone());
            let mut pos = 0;
            for f in factors {
                match f.cols.get(&w[pos..pos + f.deg_in]) {
                    None => continue 'terms,
                    Some(img) => acc = acc.otimes(img),
                }
                pos += f.deg_in;
            }
            out.add_assign(&acc);
        }
        out
    }
}

/// An `r × s` matrix of linear maps, all from degree `deg_in` to `deg_out`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMap {
    rows: usize,
    cols: usize,
    deg_in: usize,
    deg_out: usize,
    entries: Vec<LinMap>,
}

impl BlockMap {
    pub fn zero(rows: usize, cols: usize, deg_in: usize, deg_out: usize) -> Self {
        BlockMap { rows, cols, deg_in, deg_out, entries: vec![LinMap::zero(deg_in, deg_out); rows * cols] }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<LinMap>) -> Result<Self> {
        if entries.len() != rows * cols || entries.is_empty() {
            return Err(Error::ShapeMismatch(format!("{} entries for a {}x{} block map", entries.len(), rows, cols)));
        }
        let (di, d_o) = (entries[0].deg_in, entries[0].deg_out);
        if entries.iter().any(|e| e.deg_in != di || e.deg_out != d_o) {
            return Err(Error::ShapeMismatch("entries of mixed degrees".into()));
        }
        Ok(BlockMap { rows, cols, deg_in: di, deg_out: d_o, entries })
    }

    /// A 1×1 block map.
    pub fn single(m: LinMap) -> Self {
        BlockMap { rows: 1, cols: 1, deg_in: m.deg_in, deg_out: m.deg_out, entries: vec![m] }
    }

    /// `φ^{⊕r}`: the `r × r` diagonal matrix with `φ` on the diagonal.
    pub fn diag_power(phi: &LinMap, r: usize) -> Self {
        let mut b = BlockMap::zero(r, r, phi.deg_in, phi.deg_out);
        for i in 0..r {
            *b.entry_mut(i, i) = phi.clone();
        }
        b
    }

    /// Diagonal matrix with the given maps.
    pub fn diag(maps: &[LinMap]) -> Result<Self> {
        let r = maps.len();
        let mut entries = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                entries.push(if i == j { maps[i].clone() } else { LinMap::zero(maps[i].deg_in, maps[i].deg_out) });
            }
        }
        BlockMap::from_entries(r, r, entries)
    }

    /// Scalar matrix `X` acting by `v ↦ (x_ij v)` on the degree-`k` tensor power over `n` letters.
    pub fn scalar_action(x: &[Vec<Scalar>], n: usize, k: usize) -> Result<Self> {
        let rows = x.len();
        let cols = x.first().map(|r| r.len()).unwrap_or(0);
        if rows == 0 || x.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged scalar matrix".into()));
        }
        let id = LinMap::identity(n, k);
        let entries = x.iter().flat_map(|r| r.iter().map(|c| id.scale(c))).collect();
        BlockMap::from_entries(rows, cols, entries)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn deg_in(&self) -> usize {
        self.deg_in
    }

    pub fn deg_out(&self) -> usize {
        self.deg_out
    }

    pub fn entry(&self, i: usize, j: usize) -> &LinMap {
        &self.entries[i * self.cols + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut LinMap {
        &mut self.entries[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LinMap::is_zero)
    }

    /// `f ⊠ g = (Σ_l f_il ⊗ g_lj)`.
    pub fn boxed(&self, g: &BlockMap) -> Result<BlockMap> {
        if self.cols != g.rows {
            return Err(Error::ShapeMismatch(format!(
                "box of {}x{} with {}x{}",
                self.rows, self.cols, g.rows, g.cols
            )));
        }
        let mut out = BlockMap::zero(self.rows, g.cols, self.deg_in + g.deg_in, self.deg_out + g.deg_out);
        for i in 0..self.rows {
            for j in 0..g.cols {
                let e = out.entry_mut(i, j);
                for l in 0..self.cols {
                    let (a, b) = (self.entry(i, l), g.entry(l, j));
                    if !a.is_zero() && !b.is_zero() {
                        e.add_assign(&LinMap::otimes(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `h • f = (Σ_l h_il f_lj)` with `self = h`.
    pub fn bullet(&self, f: &BlockMap) -> Result<BlockMap> {
        if self.cols != f.rows {
            return Err(Error::ShapeMismatch(format!(
                "bullet of {}x{} with {}x{}",
                self.rows, self.cols, f.rows, f.cols
            )));
        }
        if self.deg_in != f.deg_out {
            return Err(Error::ShapeMismatch(format!(
                "bullet: codomain degree {} against domain degree {}",
                f.deg_out, self.deg_in
            )));
        }
        let mut out = BlockMap::zero(self.rows, f.cols, f.deg_in, self.deg_out);
        for i in 0..self.rows {
            for j in 0..f.cols {
                let e = out.entry_mut(i, j);
                for l in 0..self.cols {
                    let (h, g) = (self.entry(i, l), f.entry(l, j));
                    if !h.is_zero() && !g.is_zero() {
                        e.add_assign(&LinMap::compose(h, g));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `X • f` for a scalar matrix `X`, without materializing identities.
    pub fn scalar_left(x: &[Vec<Scalar>], f: &BlockMap) -> Result<BlockMap> {
        if x.iter().any(|r| r.len() != f.rows) {
            return Err(Error::ShapeMismatch("scalar_left".into()));
        }
        let mut out = BlockMap::zero(x.len(), f.cols, f.deg_in, f.deg_out);
        for (i, row) in x.iter().enumerate() {
            for j in 0..f.cols {
                for (l, c) in row.iter().enumerate() {
                    let src = f.entry(l, j).clone();
                    out.entry_mut(i, j).add_scaled(&src, c);
                }
            }
        }
        Ok(out)
    }

    /// `f • X` for a scalar matrix `X`.
    pub fn scalar_right(f: &BlockMap, x: &[Vec<Scalar>]) -> Result<BlockMap> {
        if x.len() != f.cols {
            return Err(Error::ShapeMismatch("scalar_right".into()));
        }
        let cols = x.first().map(|r| r.len()).unwrap_or(0);
        let mut out = BlockMap::zero(f.rows, cols, f.deg_in, f.deg_out);
        for i in 0..f.rows {
            for (l, row) in x.iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    let src = f.entry(i, l).clone();
                    out.entry_mut(i, j).add_scaled(&src, c);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> BlockMap {
        let mut out = BlockMap::zero(self.cols, self.rows, self.deg_in, self.deg_out);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.entry_mut(j, i) = self.entry(i, j).clone();
            }
        }
        out
    }

    pub fn add(&self, other: &BlockMap) -> Result<BlockMap> {
        self.add_scaled(other, &Scalar::one())
    }

    pub fn sub(&self, other: &BlockMap) -> Result<BlockMap> {
        self.add_scaled(other, &-Scalar::one())
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, other: &BlockMap, c: &Scalar) -> Result<BlockMap> {
        if self.shape() != other.shape() || self.deg_in != other.deg_in || self.deg_out != other.deg_out {
            return Err(Error::ShapeMismatch(format!(
                "sum of {}x{} ({}→{}) and {}x{} ({}→{})",
                self.rows, self.cols, self.deg_in, self.deg_out, other.rows, other.cols, other.deg_in, other.deg_out
            )));
        }
        let mut out = self.clone();
        for (e, o) in out.entries.iter_mut().zip(&other.entries) {
            e.add_scaled(o, c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> BlockMap {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = e.scale(c);
        }
        out
    }

    /// Entrywise application: the matrix `(f_ij(t))`.
    pub fn apply(&self, t: &Tensor) -> Vec<Vec<Tensor>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.entry(i, j).apply(t)).collect()).collect()
    }

    /// Entries of an `r × 1` block map applied to `t`.
    pub fn apply_column(&self, t: &Tensor) -> Vec<Tensor> {
        (0..self.rows).map(|i| self.entry(i, 0).apply(t)).collect()
    }

    /// Underline evaluation `(v_ij) ↦ Σ f_ij(v_ij)`.
    pub fn underline_apply(&self, m: &[Vec<Tensor>]) -> Result<Tensor> {
        if m.len() != self.rows || m.iter().any(|r| r.len() != self.cols) {
            return Err(Error::ShapeMismatch("underline argument shape".into()));
        }
        let mut out = Tensor::zero(self.deg_out);
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.degree() != self.deg_in && !v.is_zero() {
                    return Err(Error::ShapeMismatch("underline argument degree".into()));
                }
                out.add_assign(&self.entry(i, j).apply(v));
            }
        }
        Ok(out)
    }

    /// The underline map composed with a block map of the same shape:
    /// `underline(f)(g) = Σ_ij f_ij ∘ g_ij`.
    pub fn underline_compose(&self, g: &BlockMap) -> Result<LinMap> {
        if self.shape() != g.shape() || self.deg_in != g.deg_out {
            return Err(Error::ShapeMismatch("underline composition".into()));
        }
        let mut out = LinMap::zero(g.deg_in, self.deg_out);
        for (f, h) in self.entries.iter().zip(&g.entries) {
            if !f.is_zero() && !h.is_zero() {
                out.add_assign(&LinMap::compose(f, h));
            }
        }
        Ok(out)
    }

    /// Column action `f · v = (Σ_l f_il(v_l))` for a column `v`.
    pub fn column_action(&self, v: &[Tensor]) -> Result<Vec<Tensor>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch("column action length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Tensor::zero(self.deg_out);
                for (l, vl) in v.iter().enumerate() {
                    acc.add_assign(&self.entry(i, l).apply(vl));
                }
                acc
            })
            .collect())
    }
}

/// `λ_Y`: the 2×1 map sending the formal unit slot to `(y_1, y_2)^T`.
pub fn lambda_y(y1: u8, y2: u8) -> BlockMap {
    let col = |y: u8| LinMap::from_images(1, 1, [(vec![UNIT], Tensor::word(vec![y]))]);
    BlockMap::from_entries(2, 1, vec![col(y1), col(y2)]).expect("fixed shape")
}

/// Scalar 2×2 matrix helpers.
pub type Mat2 = [[Scalar; 2]; 2];

pub fn mat2_rows(m: &Mat2) -> Vec<Vec<Scalar>> {
    m.iter().map(|r| r.to_vec()).collect()
}

pub fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let inner = b.len();
    let cols = b.first().map(|r| r.len()).unwrap_or(0);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = Scalar::zero();
                    for l in 0..inner {
                        acc += &(&row[l] * &b[l][j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Inverse of a square scalar matrix by Gauss-Jordan elimination.
pub fn mat_inverse(a: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = a.len();
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].inv()?;
        for v in m[c].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let pivot = m[c].clone();
                for (v, pv) in m[r].iter_mut().zip(&pivot) {
                    *v -= &(&f * pv);
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_transpose(a: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_identity(n: usize) -> Vec<Vec<Scalar>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_row_times_column() {
        let l = lambda_y(0, 1);
        let prod = l.transpose().boxed(&l).unwrap();
        let t = prod.entry(0, 0).apply(&Tensor::word(vec![UNIT, UNIT]));
        let expect = Tensor::word(vec![0, 0]).plus(&Tensor::word(vec![1, 1]));
        assert_eq!(t, expect);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = vec![
            vec![Scalar::from_int(2), Scalar::i()],
            vec![Scalar::from_int(1), Scalar::from_int(3)],
        ];
        let inv = mat_inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), mat_identity(2));
    }
}
