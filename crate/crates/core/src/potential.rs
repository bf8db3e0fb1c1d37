//! The twisted superpotential `ω̂ ∈ V̂^{⊗d+2}` of `B` and its checks.
//!
//! The formal unit slots of `1 ⊗ 1 ⊗ ω` are carried as the letter
//! [`UNIT`]; the flips permute them like any other slot and `λ_Y` then
//! replaces each by `y_1` or `y_2`.

use crate::blockcalc::{lambda_y, BlockMap, LinMap};
use crate::error::{Error, Result};
use crate::exact_linalg::{tau_apply, tau_permutation, Scalar, Subspace, Tensor, UNIT};
use crate::extension::{map_of, ValidatedExtension};
use crate::nakayama::Matrix;
use crate::qalgebra::hom_power;
use crate::quadruple::{det_power, id_block, Quadruple};

#[derive(Clone, Debug, PartialEq)]
pub struct Superpotential {
    pub d: usize,
    pub omega_hat: Tensor,
    pub parts: [Tensor; 3],
}

/// `(id ⊗ τ_{m}^{k})` on a tensor of degree `m + 1`.
fn id_tau(k: usize, t: &Tensor) -> Result<Tensor> {
    let m = t.degree() - 1;
    let inner = tau_permutation(m, k)?;
    let perm: Vec<usize> = std::iter::once(0).chain(inner.into_iter().map(|p| p + 1)).collect();
    Ok(t.permute_slots(&perm))
}

/// `Σ_i Σ_j (−1)^j ((det σ)^{⊗i} ⊗ (λ^T ⊠ (J • σ^{⊠j}) ⊠ λ) ⊗ id^{⊗d−i−j}) τ^i_{d+2}(id ⊗ τ^{i+j}_{d+1})(1 ⊗ 1 ⊗ ω)`.
pub fn omega_hat_1(ext: &ValidatedExtension, omega: &Tensor) -> Result<Tensor> {
    let (n, d) = (ext.n, omega.degree());
    let lam = lambda_y(n as u8, n as u8 + 1);
    let seed = Tensor::word(vec![UNIT, UNIT]).otimes(omega);
    let mut out = Tensor::zero(d + 2);
    for j in 0..=d {
        let mid = lam
            .transpose()
            .boxed(&BlockMap::scalar_left(&ext.j_rows(), &hom_power(&ext.sigma, j))?)?
            .boxed(&lam)?;
        let mid = mid.entry(0, 0);
        for i in 0..=d - j {
            let t = tau_apply(d + 2, i, &id_tau(i + j, &seed)?)?;
            let dp = det_power(&ext.det, n, i);
            let rest = LinMap::identity(n, d - i - j);
            let term = LinMap::apply_kron(&[&dp, mid, &rest], &t);
            out.add_scaled(&term, &Scalar::sign(j));
        }
    }
    Ok(out)
}

/// `Σ_j Σ_i (−1)^{i+j} τ^j_{d+2}(λ^T ⊠ ((σ^{⊠j} ⊠ I^{d+1−j})^T • J • (δ_{i,r} ⊠ id^{⊠d−i})))(1 ⊗ ω)`.
pub fn omega_hat_2(ext: &ValidatedExtension, quad: &Quadruple, omega: &Tensor) -> Result<Tensor> {
    let (n, d) = (ext.n, omega.degree());
    let lam_t = lambda_y(n as u8, n as u8 + 1).transpose();
    let seed = Tensor::word(vec![UNIT]).otimes(omega);
    let mut out = Tensor::zero(d + 2);
    for i in 1..=d {
        let dr = BlockMap::scalar_left(&ext.j_rows(), &quad.level(i).delta_r.boxed(&id_block(n, d - i))?)?;
        if dr.is_zero() {
            continue;
        }
        for j in 0..=d + 1 {
            let s = hom_power(&ext.sigma, j).boxed(&BlockMap::diag_power(&LinMap::identity(n, d + 1 - j), 2))?;
            let inner = s.transpose().bullet(&dr)?;
            let m = lam_t.boxed(&inner)?;
            let t = tau_apply(d + 2, j, &m.entry(0, 0).apply(&seed))?;
            out.add_scaled(&t, &Scalar::sign(i + j));
        }
    }
    Ok(out)
}

/// `(Σ_i Σ_{j≤i} (−1)^{i+j} underline(δ_{j,r} ⊠ id^{⊠d+1−j})(J • (δ_{i,r} ⊠ id^{⊠d−i})) − Σ_{i<d} υ_{i,r} ⊗ id^{⊗d−i})(ω)`.
pub fn omega_hat_3(ext: &ValidatedExtension, quad: &Quadruple, omega: &Tensor) -> Result<Tensor> {
    let (n, d) = (ext.n, omega.degree());
    let mut out = Tensor::zero(d + 2);
    for i in 1..=d {
        let inner = BlockMap::scalar_left(&ext.j_rows(), &quad.level(i).delta_r.boxed(&id_block(n, d - i))?)?;
        let col = inner.apply_column(omega);
        for j in 1..=i {
            let outer = quad.level(j).delta_r.boxed(&id_block(n, d + 1 - j))?;
            let t = outer.underline_apply(&[vec![col[0].clone()], vec![col[1].clone()]])?;
            out.add_scaled(&t, &Scalar::sign(i + j));
        }
    }
    for i in 1..d {
        let ups = LinMap::otimes(&quad.level(i).upsilon_r, &LinMap::identity(n, d - i));
        out.sub_assign(&ups.apply(omega));
    }
    Ok(out)
}

pub fn build_omega_hat(ext: &ValidatedExtension, quad: &Quadruple, omega: &Tensor) -> Result<Superpotential> {
    let parts = [omega_hat_1(ext, omega)?, omega_hat_2(ext, quad, omega)?, omega_hat_3(ext, quad, omega)?];
    let omega_hat = parts[0].plus(&parts[1]).plus(&parts[2]);
    Ok(Superpotential { d: omega.degree(), omega_hat, parts })
}

/// Residual-free check of `ω̂ = (−1)^{d+1} τ^{d+1}_{d+2}(μ_B ⊗ id^{⊗d+1})(ω̂)`.
pub fn verify_twisted(sp: &Superpotential, mu_b: &Matrix) -> Result<bool> {
    let twisted = crate::nakayama::twist(&sp.omega_hat, &map_of(mu_b))?;
    Ok(twisted == sp.omega_hat)
}

/// `ω̂ ∈ R̂ ⊗ V̂^{⊗d}`.
pub fn in_relations_times_tail(sp: &Superpotential, r_hat: &Subspace) -> bool {
    r_hat.contains_sandwiched(&sp.omega_hat, 0)
}

/// `ω̂ ∈ Ŵ_{d+2} = ⋂_s V̂^{⊗s} ⊗ R̂ ⊗ V̂^{⊗d−s}`, by slicing.
pub fn in_top_koszul_space(sp: &Superpotential, r_hat: &Subspace) -> bool {
    (0..=sp.d).all(|s| r_hat.contains_sandwiched(&sp.omega_hat, s))
}

/// Span of `(id^{⊗2} ⊗ ψ)(ω̂)` over the dual word basis of `V̂^{⊗d}`.
pub fn derivation_span(sp: &Superpotential, letters: usize) -> Subspace {
    let slices = sp.omega_hat.middle_slices(0, 2);
    Subspace::span(letters, 2, slices.values())
}

/// Compares the derivation span with `R̂`.
pub fn derivation_quotient_check(sp: &Superpotential, r_hat: &Subspace) -> Result<Subspace> {
    let span = derivation_span(sp, r_hat.letters());
    if span != *r_hat {
        return Err(Error::SpanMismatch(format!(
            "span of dimension {} against relations of dimension {} (span contained: {}, relations contained: {})",
            span.dim(),
            r_hat.dim(),
            r_hat.contains_space(&span),
            span.contains_space(r_hat)
        )));
    }
    Ok(span)
}
