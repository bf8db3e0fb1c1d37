//! The Nakayama automorphism of `A` from its superpotential, the homological
//! determinant, the boundary vectors `δ_r`, `δ_l`, the σ-divergence and the
//! Nakayama automorphism of `B`.
//!
//! Matrices act on generator columns: `μ(x_1, …, x_n)^T = M (x_1, …, x_n)^T`,
//! so row `i` of `M` holds the coordinates of `μ(x_i)`.

use num_traits::{One, Zero};

use crate::blockcalc::{mat_inverse, mat_mul, LinMap};
use crate::error::{Error, Result};
use crate::exact_linalg::{tau_apply, Combiner, Scalar, Subspace, Tensor};
use crate::extension::{map_of, matrix_of, minus_jt_inv_j, ValidatedExtension};
use crate::qalgebra::hom_power;
use crate::quadruple::Quadruple;

pub type Matrix = Vec<Vec<Scalar>>;

#[derive(Clone, Debug, PartialEq)]
pub struct NakayamaReport {
    pub d: usize,
    pub omega: Tensor,
    /// `μ_A` on `V`.
    pub l: Matrix,
    /// `det σ` on `V`.
    pub u: Matrix,
    /// `hdet σ`.
    pub h: Matrix,
    pub delta_r: [Tensor; 2],
    pub delta_l: [Tensor; 2],
    pub div: [Tensor; 2],
    /// `μ_B` on `(x_1, …, x_n, y_1, y_2)`.
    pub mu_b: Matrix,
}

/// `(−1)^{d−1} τ_d^{d−1} (μ ⊗ id^{⊗d−1})(ω)`.
pub fn twist(omega: &Tensor, mu: &LinMap) -> Result<Tensor> {
    let d = omega.degree();
    let mut t = Tensor::zero(d);
    for (w, c) in omega.terms() {
        if let Some(img) = mu.image_of(&w[..1]) {
            t.add_scaled(&img.otimes(&Tensor::word(w[1..].to_vec())), c);
        }
    }
    Ok(tau_apply(d, d - 1, &t)?.scale(&Scalar::sign(d - 1)))
}

/// The unique `μ` on `V` with `ω = (−1)^{d−1} τ_d^{d−1}(μ ⊗ id)(ω)`.
pub fn mu_a_solve(n: usize, omega: &Tensor) -> Result<Matrix> {
    let d = omega.degree();
    if d == 0 {
        return Err(Error::NonUniqueOrNone("omega has degree 0".into()));
    }
    let mut comb = Combiner::new();
    for i in 0..n {
        for j in 0..n {
            let mut img = Tensor::zero(d);
            for (w, c) in omega.terms() {
                if w[0] as usize == i {
                    let mut nw = w.clone();
                    nw[0] = j as u8;
                    img.add_term(nw, c);
                }
            }
            let img = tau_apply(d, d - 1, &img)?.scale(&Scalar::sign(d - 1));
            comb.push(img.terms());
        }
    }
    if comb.independent().iter().any(|&x| !x) {
        return Err(Error::NonUniqueOrNone("the twisting equation has a nonzero kernel".into()));
    }
    let alpha = comb
        .solve(omega.terms())
        .ok_or_else(|| Error::NonUniqueOrNone("omega is not twisted by any map on V".into()))?;
    let m: Matrix = alpha.chunks(n).map(|r| r.to_vec()).collect();
    if twist(omega, &map_of(&m))? != *omega {
        return Err(Error::NonUniqueOrNone("residual of the twisting equation is nonzero".into()));
    }
    Ok(m)
}

/// Coefficient `c` with `t = c ω`.
fn proportional(t: &Tensor, omega: &Tensor) -> Result<Scalar> {
    let (lead, lc) = omega.leading().ok_or_else(|| Error::NotProportional("omega is zero".into()))?;
    let c = &t.coeff(lead) / lc;
    if omega.scale(&c) != *t {
        return Err(Error::NotProportional(format!("tensor with {} terms", t.len())));
    }
    Ok(c)
}

/// `H` with `σ^{⊠d}(ω) = H ω`.
pub fn hdet(ext: &ValidatedExtension, omega: &Tensor) -> Result<Matrix> {
    let s = hom_power(&ext.sigma, omega.degree()).apply(omega);
    s.iter().map(|row| row.iter().map(|e| proportional(e, omega)).collect()).collect()
}

/// Factors `t = ω ⊗ v` (`right`) or `t = v ⊗ ω` (left) with `v ∈ V`.
fn factor(t: &Tensor, omega: &Tensor, n: usize, right: bool) -> Result<Tensor> {
    let (lead, lc) = omega.leading().ok_or_else(|| Error::FactorizationFailure("omega is zero".into()))?;
    let mut v = Tensor::zero(1);
    for g in 0..n as u8 {
        let mut w = lead.clone();
        if right {
            w.push(g);
        } else {
            w.insert(0, g);
        }
        v.add_term(vec![g], &(&t.coeff(&w) / lc));
    }
    let rebuilt = if right { omega.otimes(&v) } else { v.otimes(omega) };
    if rebuilt != *t {
        return Err(Error::FactorizationFailure(format!(
            "{} image is not of the form {}",
            if right { "delta_d,r" } else { "delta_d,l" },
            if right { "omega⊗v" } else { "v⊗omega" }
        )));
    }
    Ok(v)
}

/// `(δ_r, δ_l)` from `δ_{d,r}(ω) = ω ⊗ δ_r` and `δ_{d,l}(ω) = δ_l ⊗ ω`.
pub fn boundary_vectors(quad: &Quadruple, omega: &Tensor) -> Result<([Tensor; 2], [Tensor; 2])> {
    let top = quad.level(quad.d);
    let r = top.delta_r.apply_column(omega);
    let l = top.delta_l.apply_column(omega);
    let n = quad.n;
    Ok((
        [factor(&r[0], omega, n, true)?, factor(&r[1], omega, n, true)?],
        [factor(&l[0], omega, n, false)?, factor(&l[1], omega, n, false)?],
    ))
}

/// `div = δ_r + μ_A^{⊕2}(σ^{−T} · δ_l)`.
pub fn divergence(ext: &ValidatedExtension, l: &Matrix, delta_r: &[Tensor; 2], delta_l: &[Tensor; 2]) -> Result<[Tensor; 2]> {
    let mu = map_of(l);
    let col = ext.sigma_inv_t.column_action(delta_l)?;
    Ok([delta_r[0].plus(&mu.apply(&col[0])), delta_r[1].plus(&mu.apply(&col[1]))])
}

/// The block matrix `(U^{−1}L, 0; C, K H)` with `K = −(J^T)^{−1} J` and `C` the
/// x-coordinates of `K · div`.
pub fn mu_b_matrix(ext: &ValidatedExtension, l: &Matrix, h: &Matrix, div: &[Tensor; 2]) -> Result<Matrix> {
    let n = ext.n;
    let u_inv = mat_inverse(&ext.u).ok_or_else(|| Error::NotInvertible("det sigma".into()))?;
    let top = mat_mul(&u_inv, l);
    let k = minus_jt_inv_j(&ext.j);
    let kh = mat_mul(&k, h);
    let mut m = vec![vec![Scalar::zero(); n + 2]; n + 2];
    for i in 0..n {
        m[i][..n].clone_from_slice(&top[i]);
    }
    for a in 0..2 {
        for i in 0..n {
            let mut c = Scalar::zero();
            for (b, div_b) in div.iter().enumerate() {
                c += &(&k[a][b] * &div_b.coeff(&[i as u8]));
            }
            m[n + a][i] = c;
        }
        for b in 0..2 {
            m[n + a][n + b] = kh[a][b].clone();
        }
    }
    Ok(m)
}

/// Checks that `μ` maps `R̂` onto itself as canonical subspaces.
pub fn preserves_relations(mu: &Matrix, r_hat: &Subspace) -> bool {
    if mat_inverse(mu).is_none() {
        return false;
    }
    let m = map_of(mu);
    let m2 = LinMap::otimes(&m, &m);
    let images: Vec<Tensor> = r_hat.basis().iter().map(|r| m2.apply(r)).collect();
    Subspace::span(r_hat.letters(), 2, images.iter()) == *r_hat
}

/// The full report for a validated extension and a quadruple built to level `d`.
pub fn nakayama(ext: &ValidatedExtension, quad: &Quadruple, omega: &Tensor) -> Result<NakayamaReport> {
    let n = ext.n;
    let l = mu_a_solve(n, omega)?;
    let h = hdet(ext, omega)?;
    let (delta_r, delta_l) = boundary_vectors(quad, omega)?;
    let div = divergence(ext, &l, &delta_r, &delta_l)?;
    let mu_b = mu_b_matrix(ext, &l, &h, &div)?;
    if !preserves_relations(&mu_b, ext.b.r_hat()) {
        return Err(Error::AutomorphismCheckFailure("mu_B does not preserve the relations of B".into()));
    }
    Ok(NakayamaReport { d: omega.degree(), omega: omega.clone(), l, u: ext.u.clone(), h, delta_r, delta_l, div, mu_b })
}

impl NakayamaReport {
    /// `(det σ)^{−1} ∘ μ_A` composed as maps, in matrix form.
    pub fn composed_v_block(&self) -> Matrix {
        let u_inv = mat_inverse(&self.u).expect("validated");
        let n = self.l.len();
        matrix_of(&LinMap::compose(&map_of(&u_inv), &map_of(&self.l)), n)
    }

    pub fn v_block(&self) -> Matrix {
        let n = self.l.len();
        self.mu_b[..n].iter().map(|r| r[..n].to_vec()).collect()
    }

    pub fn div_is_zero(&self) -> bool {
        self.div.iter().all(Tensor::is_zero)
    }

    pub fn mu_b_is_identity(&self) -> bool {
        self.mu_b
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, c)| if i == j { c.is_one() } else { c.is_zero() }))
    }
}
