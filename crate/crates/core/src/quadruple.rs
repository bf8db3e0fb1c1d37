//! The quadruple `({δ_{i,r}}, {δ_{i,l}}, {υ_{i,r}}, {υ_{i,l}})` of a
//! validated extension, with the derived maps `Γ_{i,r}`, `Γ_{i,l}` and `Δ_i`.
//!
//! Every map at level `i` is stored by its values on the RREF basis of `W_i`
//! (extended by zero off the pivot words), so it can be used as a tensor
//! factor on any `V^{⊗a} ⊗ W_i ⊗ V^{⊗b}`.

use num_traits::One;
use rand::Rng;

use crate::blockcalc::{BlockMap, LinMap};
use crate::error::{Error, Result};
use crate::exact_linalg::{intersect, solve_affine, Scalar, Subspace, Tensor};
use crate::extension::ValidatedExtension;
use crate::qalgebra::{hom_power, AlgebraCache};

/// The maps attached to one Koszul space `W_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadLevel {
    pub w: Subspace,
    /// 2×1, `W_i → (W_i ⊗ V)^{⊕2}`.
    pub delta_r: BlockMap,
    /// 2×1, `W_i → (V ⊗ W_i)^{⊕2}`.
    pub delta_l: BlockMap,
    /// `W_i → W_{i+1} ⊗ V`.
    pub upsilon_r: LinMap,
    /// `W_i → V ⊗ W_{i+1}`.
    pub upsilon_l: LinMap,
    /// 1×2, `W_i → M_{1×2}(W_i ⊗ V)`.
    pub gamma_r: BlockMap,
    /// 1×2, `W_i → M_{1×2}(V ⊗ W_i)`.
    pub gamma_l: BlockMap,
    /// `Δ_i: W_i → V^{⊗i+2}`.
    pub delta_cap: LinMap,
}

/// Levels `0..=d`; level `d` carries `υ_{d,⋆} = 0` since `W_{d+1} = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadruple {
    pub n: usize,
    pub d: usize,
    /// The lift `δ` used at level 1 (the validated one plus any perturbation).
    pub delta: BlockMap,
    pub levels: Vec<QuadLevel>,
}

/// Outcome of one identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub level: usize,
    pub ok: bool,
}

pub(crate) fn id_block(n: usize, k: usize) -> BlockMap {
    BlockMap::single(LinMap::identity(n, k))
}

/// `(det σ)^{⊗m}`, the identity on degree 0 when `m = 0`.
pub fn det_power(det: &LinMap, n: usize, m: usize) -> LinMap {
    let mut acc = LinMap::identity(n, 0);
    for _ in 0..m {
        acc = LinMap::otimes(&acc, det);
    }
    acc
}

/// Values of every entry of `map` on the basis of `w`, re-stored by pivots.
pub fn restrict(map: &BlockMap, w: &Subspace) -> BlockMap {
    let (r, c) = map.shape();
    let mut entries = Vec::with_capacity(r * c);
    for i in 0..r {
        for j in 0..c {
            entries.push(restrict_lin(map.entry(i, j), w, map.deg_out()));
        }
    }
    BlockMap::from_entries(r, c, entries).expect("same shape")
}

pub fn restrict_lin(f: &LinMap, w: &Subspace, deg_out: usize) -> LinMap {
    LinMap::on_basis(w, deg_out, w.basis().iter().map(|b| f.apply(b)).collect())
}

/// `det σ^{⊠i} = (det σ)^{⊗i}` on `V^{⊗i}` for `i ≤ max_power`, and
/// `(σ^{⊠i})^T • J • σ^{⊠i} − J • diag((det σ)^{⊗i}) = 0` on `W_i` for `i ≤ d`.
pub fn calculus_identities(a: &AlgebraCache, ext: &ValidatedExtension, d: usize, max_power: usize) -> Result<Vec<IdentityCheck>> {
    let n = ext.n;
    let jm = ext.j_rows();
    let mut out = Vec::new();
    for i in 1..=max_power {
        let s = hom_power(&ext.sigma, i);
        let lhs = crate::extension::det_sigma(&s, &ext.input.p12, &ext.input.p11);
        let rhs = det_power(&ext.det, n, i);
        let ok = crate::exact_linalg::all_words(n, i).into_iter().all(|w| {
            let w = Tensor::word(w);
            lhs.apply(&w) == rhs.apply(&w)
        });
        out.push(IdentityCheck { name: "det-power".into(), level: i, ok });
    }
    for i in 1..=d {
        let w = a.koszul_space(i);
        let s = hom_power(&ext.sigma, i);
        let theta = s.transpose().bullet(&BlockMap::scalar_left(&jm, &s)?)?;
        let dd = BlockMap::scalar_left(&jm, &BlockMap::diag_power(&det_power(&ext.det, n, i), 2))?;
        let diff = theta.sub(&dd)?;
        let ok = w.basis().iter().all(|b| diff.apply(b).iter().flatten().all(Tensor::is_zero));
        out.push(IdentityCheck { name: "theta-recursion".into(), level: i, ok });
    }
    Ok(out)
}

fn zero_level(i: usize, w: Subspace) -> QuadLevel {
    QuadLevel {
        w,
        delta_r: BlockMap::zero(2, 1, i, i + 1),
        delta_l: BlockMap::zero(2, 1, i, i + 1),
        upsilon_r: LinMap::zero(i, i + 2),
        upsilon_l: LinMap::zero(i, i + 2),
        gamma_r: BlockMap::zero(1, 2, i, i + 1),
        gamma_l: BlockMap::zero(1, 2, i, i + 1),
        delta_cap: LinMap::zero(i, i + 2),
    }
}

fn random_scalar<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    Scalar::from_int(rng.gen_range(-3..=3))
}

fn random_element<R: Rng + ?Sized>(space: &Subspace, rng: &mut R) -> Tensor {
    let coords: Vec<Scalar> = (0..space.dim()).map(|_| random_scalar(rng)).collect();
    space.combine(&coords)
}

fn describe(t: &Tensor) -> String {
    format!("{} terms, leading word {:?}", t.len(), t.leading().map(|x| x.0.clone()))
}

/// `Γ_{i,⋆} = ((σ^{⊠i+1})^T • J • δ_{i,⋆})^T + δ_{i,⋆}^T • J • σ^{⊠i}` on `W_i`.
pub fn gamma(ext: &ValidatedExtension, i: usize, delta_star: &BlockMap, w: &Subspace) -> Result<BlockMap> {
    let j = ext.j_rows();
    let a = hom_power(&ext.sigma, i + 1).transpose().bullet(&BlockMap::scalar_left(&j, delta_star)?)?.transpose();
    let b = delta_star.transpose().bullet(&BlockMap::scalar_left(&j, &hom_power(&ext.sigma, i))?)?;
    Ok(restrict(&a.add(&b)?, w))
}

/// `Δ_i = underline(σ^{⊠i} ⊠ δ + δ_{i,r} ⊠ id_V)(J • δ_{i,r})` on `W_i`.
pub fn delta_cap(ext: &ValidatedExtension, i: usize, delta: &BlockMap, delta_r: &BlockMap, w: &Subspace) -> Result<LinMap> {
    let n = ext.n;
    let outer = hom_power(&ext.sigma, i).boxed(delta)?.add(&delta_r.boxed(&id_block(n, 1))?)?;
    let inner = BlockMap::scalar_left(&ext.j_rows(), delta_r)?;
    Ok(restrict_lin(&outer.underline_compose(&inner)?, w, i + 2))
}

/// Builds the quadruple with every free coordinate set to zero.
pub fn build_quadruple(a: &AlgebraCache, ext: &ValidatedExtension, d: usize) -> Result<Quadruple> {
    build(a, ext, d, None::<&mut rand_chacha::ChaCha8Rng>)
}

/// Builds a quadruple after adding random elements of each freedom space:
/// a lift correction `ρ: V → R^{⊕2}`, `W_{i+1}^{⊕2}` for `δ_{i,r}` and
/// `W_{i+2}` for `υ_{i,r}`.
pub fn build_quadruple_randomized<R: Rng + ?Sized>(
    a: &AlgebraCache,
    ext: &ValidatedExtension,
    d: usize,
    rng: &mut R,
) -> Result<Quadruple> {
    build(a, ext, d, Some(rng))
}

fn build<R: Rng + ?Sized>(a: &AlgebraCache, ext: &ValidatedExtension, d: usize, mut rng: Option<&mut R>) -> Result<Quadruple> {
    let n = ext.n;
    let r = &a.presentation.relations;
    let v = Subspace::full(n, 1);
    let jm = ext.j_rows();
    let sign = |i: usize| Scalar::sign(i);

    let mut delta = ext.delta.clone();
    if let Some(rng) = rng.as_deref_mut() {
        for g in 0..n {
            for c in 0..2 {
                let rho = random_element(r, rng);
                if rho.is_zero() {
                    continue;
                }
                let mut img = delta.entry(c, 0).image_of(&[g as u8]).cloned().unwrap_or_else(|| Tensor::zero(2));
                img.add_assign(&rho);
                let mut images: Vec<_> = delta.entry(c, 0).images().iter().map(|(w, t)| (w.clone(), t.clone())).collect();
                images.retain(|(w, _)| w[0] as usize != g);
                images.push((vec![g as u8], img));
                *delta.entry_mut(c, 0) = LinMap::from_images(1, 2, images);
            }
        }
    }

    let mut levels = vec![zero_level(0, a.koszul_space(0))];
    for i in 1..=d {
        let w = a.koszul_space(i);
        let w_next = a.koszul_space(i + 1);
        let prev = &levels[i - 1];

        let (delta_r, delta_l) = if i == 1 {
            (delta.clone(), delta.clone())
        } else {
            let target = hom_power(&ext.sigma, i - 1).boxed(&delta)?.add(&prev.delta_r.boxed(&id_block(n, 1))?)?;
            let congruence = r.sandwich(i - 1, 0);
            let constraint = w.otimes(&v);
            let freedom = if rng.is_some() {
                Some(intersect(n, i + 1, &[constraint.clone(), congruence.clone()])?)
            } else {
                None
            };
            let mut cols = [Vec::new(), Vec::new()];
            for b in w.basis() {
                for (c, col) in cols.iter_mut().enumerate() {
                    let t = target.entry(c, 0).apply(b);
                    let mut x = solve_affine(&t, &congruence, &constraint).map_err(|_| {
                        Error::NoSolution(format!("delta_{i},r component {} on a W_{i} basis vector ({})", c + 1, describe(&t)))
                    })?;
                    if let (Some(rng), Some(f)) = (rng.as_deref_mut(), &freedom) {
                        x.add_assign(&random_element(f, rng));
                    }
                    col.push(x);
                }
            }
            let [c0, c1] = cols;
            let delta_r = BlockMap::from_entries(
                2,
                1,
                vec![LinMap::on_basis(&w, i + 1, c0), LinMap::on_basis(&w, i + 1, c1)],
            )?;
            // δ_{i,l} = δ_{i-1,l} ⊠ id + (-1)^i (σ ⊠ δ_{i-1,r} − δ_{i,r})
            let rec = prev
                .delta_l
                .boxed(&id_block(n, 1))?
                .add(&ext.sigma.boxed(&prev.delta_r)?.sub(&delta_r)?.scale(&sign(i)))?;
            let delta_l = restrict(&rec, &w);
            for b in w.basis() {
                for t in delta_l.apply_column(b) {
                    if !w.contains_sandwiched(&t, 1) {
                        return Err(Error::ContainmentFailure(format!("delta_{i},l image outside V⊗W_{i}: {}", describe(&t))));
                    }
                }
            }
            (delta_r, delta_l)
        };

        let gamma_r = gamma(ext, i, &delta_r, &w)?;
        let gamma_l = gamma(ext, i, &delta_l, &w)?;
        for b in w.basis() {
            for c in 0..2 {
                let (tr, tl) = (gamma_r.entry(0, c).apply(b), gamma_l.entry(0, c).apply(b));
                if !w.contains_sandwiched(&tr, 0) {
                    return Err(Error::ContainmentFailure(format!("Gamma_{i},r image outside W_{i}⊗V: {}", describe(&tr))));
                }
                if !w.contains_sandwiched(&tl, 1) {
                    return Err(Error::ContainmentFailure(format!("Gamma_{i},l image outside V⊗W_{i}: {}", describe(&tl))));
                }
            }
        }
        let dcap = delta_cap(ext, i, &delta, &delta_r, &w)?;

        // υ_{i,r} ≡ Δ_i + Σ_{u<i} (-1)^u (det σ)^{⊠i-1-u} ⊠ Γ_{u,l} ⊠ δ − υ_{i-1,r} ⊗ id  (mod V^{⊗i} ⊗ R)
        let mut target = dcap.clone();
        for u in 1..i {
            let left = BlockMap::single(det_power(&ext.det, n, i - 1 - u));
            let term = left.boxed(&levels[u].gamma_l)?.boxed(&delta)?;
            target.add_scaled(term.entry(0, 0), &sign(u));
        }
        target.add_scaled(&LinMap::otimes(&prev.upsilon_r, &LinMap::identity(n, 1)), &-Scalar::one());
        let congruence = r.sandwich(i, 0);
        let constraint = w_next.otimes(&v);
        let freedom = if rng.is_some() {
            Some(intersect(n, i + 2, &[constraint.clone(), congruence.clone()])?)
        } else {
            None
        };
        let mut ups = Vec::new();
        for b in w.basis() {
            let t = target.apply(b);
            let mut x = solve_affine(&t, &congruence, &constraint)
                .map_err(|_| Error::NoSolution(format!("upsilon_{i},r on a W_{i} basis vector ({})", describe(&t))))?;
            if let (Some(rng), Some(f)) = (rng.as_deref_mut(), &freedom) {
                x.add_assign(&random_element(f, rng));
            }
            ups.push(x);
        }
        let upsilon_r = LinMap::on_basis(&w, i + 2, ups);

        // υ_{i,l} = −υ_{i-1,l} ⊗ id + (-1)^i (υ_{i,r} − det σ ⊗ υ_{i-1,r})
        //           + underline(σ ⊠ δ_{i,r})(J • δ_{i,l}) + underline(δ_{i,l} ⊠ id)(J • δ_{i,r})
        let mut ul = LinMap::otimes(&prev.upsilon_l, &LinMap::identity(n, 1)).scale(&-Scalar::one());
        let mut diff = upsilon_r.clone();
        diff.add_scaled(&LinMap::otimes(&ext.det, &prev.upsilon_r), &-Scalar::one());
        ul.add_scaled(&diff, &sign(i));
        ul.add_assign(&ext.sigma.boxed(&delta_r)?.underline_compose(&BlockMap::scalar_left(&jm, &delta_l)?)?);
        ul.add_assign(&delta_l.boxed(&id_block(n, 1))?.underline_compose(&BlockMap::scalar_left(&jm, &delta_r)?)?);
        let upsilon_l = restrict_lin(&ul, &w, i + 2);
        for b in w.basis() {
            let t = upsilon_l.apply(b);
            if !w_next.contains_sandwiched(&t, 1) {
                return Err(Error::ContainmentFailure(format!("upsilon_{i},l image outside V⊗W_{}: {}", i + 1, describe(&t))));
            }
        }

        levels.push(QuadLevel { w, delta_r, delta_l, upsilon_r, upsilon_l, gamma_r, gamma_l, delta_cap: dcap });
    }
    Ok(Quadruple { n, d, delta, levels })
}

impl Quadruple {
    pub fn level(&self, i: usize) -> &QuadLevel {
        &self.levels[i]
    }

    /// True when every stored map is zero (the trimmed case).
    pub fn is_zero(&self) -> bool {
        self.levels.iter().all(|l| {
            l.delta_r.is_zero()
                && l.delta_l.is_zero()
                && l.upsilon_r.is_zero()
                && l.upsilon_l.is_zero()
                && l.gamma_r.is_zero()
                && l.gamma_l.is_zero()
                && l.delta_cap.is_zero()
        })
    }

    /// Checks the recursion relating `δ_{i,r}` and `δ_{i,l}`, the Γ relation,
    /// and the four sum relations between the families, each on `W_k`.
    pub fn verify_identities(&self, ext: &ValidatedExtension) -> Result<Vec<IdentityCheck>> {
        let n = self.n;
        let sign = |i: usize| Scalar::sign(i);
        let mut out = Vec::new();
        let mut push = |name: &str, level: usize, ok: bool| out.push(IdentityCheck { name: name.into(), level, ok });
        let jm = ext.j_rows();
        let on_w = |m: &BlockMap, w: &Subspace| w.basis().iter().map(|b| m.apply(b)).collect::<Vec<_>>();
        let lin_on_w = |m: &LinMap, w: &Subspace| w.basis().iter().map(|b| m.apply(b)).collect::<Vec<_>>();

        for k in 1..=self.d {
            let w = &self.levels[k].w;
            let prev = &self.levels[k - 1];
            let cur = &self.levels[k];

            // δ_{k,r} + (-1)^k δ_{k,l} = σ ⊠ δ_{k-1,r} + (-1)^k δ_{k-1,l} ⊠ id
            let lhs = cur.delta_r.add_scaled(&cur.delta_l, &sign(k))?;
            let rhs = ext.sigma.boxed(&prev.delta_r)?.add_scaled(&prev.delta_l.boxed(&id_block(n, 1))?, &sign(k))?;
            push("delta-recursion", k, on_w(&lhs, w) == on_w(&rhs, w));

            // Σ_u (-1)^u Γ_{u,r} ⊠ σ^{⊠k-u} = Σ_u (-1)^{k+u+1} (det σ)^{⊠k-u} ⊠ Γ_{u,l}
            let mut lhs = BlockMap::zero(1, 2, k, k + 1);
            let mut rhs = BlockMap::zero(1, 2, k, k + 1);
            for u in 1..=k {
                lhs = lhs.add_scaled(&self.levels[u].gamma_r.boxed(&hom_power(&ext.sigma, k - u))?, &sign(u))?;
                let dp = BlockMap::single(det_power(&ext.det, n, k - u));
                rhs = rhs.add_scaled(&dp.boxed(&self.levels[u].gamma_l)?, &sign(k + u + 1))?;
            }
            push("gamma-relation", k, on_w(&lhs, w) == on_w(&rhs, w));

            // Σ_i (-1)^i δ_{i,r} ⊠ id^{k-i} = (-1)^{k+1} Σ_i (-1)^i σ^{⊠k-i} ⊠ δ_{i,l}
            let mut lhs = BlockMap::zero(2, 1, k, k + 1);
            let mut rhs = BlockMap::zero(2, 1, k, k + 1);
            for i in 1..=k {
                let l = &self.levels[i];
                lhs = lhs.add_scaled(&l.delta_r.boxed(&id_block(n, k - i))?, &sign(i))?;
                rhs = rhs.add_scaled(&hom_power(&ext.sigma, k - i).boxed(&l.delta_l)?, &sign(k + 1 + i))?;
            }
            push("sum-relation-a", k, on_w(&lhs, w) == on_w(&rhs, w));

            if k >= 2 {
                // Σ_{i<k} (-1)^{i+1} σ^{⊠k-i-1} ⊠ δ_{i,l} ⊠ id = (-1)^{k+1} Σ_{i<k} (-1)^i δ_{i,r} ⊠ id^{k-i}
                let mut lhs = BlockMap::zero(2, 1, k, k + 1);
                let mut rhs = BlockMap::zero(2, 1, k, k + 1);
                for i in 1..k {
                    let l = &self.levels[i];
                    lhs = lhs.add_scaled(
                        &hom_power(&ext.sigma, k - i - 1).boxed(&l.delta_l)?.boxed(&id_block(n, 1))?,
                        &sign(i + 1),
                    )?;
                    rhs = rhs.add_scaled(&l.delta_r.boxed(&id_block(n, k - i))?, &sign(k + 1 + i))?;
                }
                push("sum-relation-b", k, on_w(&lhs, w) == on_w(&rhs, w));
            }

            // Σ_i υ_{i,r} ⊗ id^{k-i} = Σ_i (-1)^i (det σ)^{⊗k-i} ⊗ υ_{i,l} − Σ_i Σ_{u≤i} (-1)^u (det σ)^{⊗k-i} ⊗ Ψ_{u,i-u}
            let mut lhs = LinMap::zero(k, k + 2);
            let mut rhs = LinMap::zero(k, k + 2);
            for i in 1..=k {
                let l = &self.levels[i];
                lhs.add_assign(&LinMap::otimes(&l.upsilon_r, &LinMap::identity(n, k - i)));
                let dp = det_power(&ext.det, n, k - i);
                rhs.add_scaled(&LinMap::otimes(&dp, &l.upsilon_l), &sign(i));
                for u in 1..=i {
                    let psi = self.psi(ext, &jm, u, i - u)?;
                    rhs.add_scaled(&LinMap::otimes(&dp, &psi), &-sign(u));
                }
            }
            push("sum-relation-c", k, lin_on_w(&lhs, w) == lin_on_w(&rhs, w));

            if k >= 2 {
                let mut lhs = LinMap::zero(k, k + 2);
                let mut rhs = LinMap::zero(k, k + 2);
                for i in 1..k {
                    let l = &self.levels[i];
                    lhs.add_assign(&LinMap::otimes(&l.upsilon_r, &LinMap::identity(n, k - i)));
                    let dp = det_power(&ext.det, n, k - i - 1);
                    rhs.add_scaled(
                        &LinMap::otimes(&LinMap::otimes(&dp, &l.upsilon_l), &LinMap::identity(n, 1)),
                        &sign(i),
                    );
                    for u in 1..=i {
                        let psi = self.psi(ext, &jm, u, i - u + 1)?;
                        rhs.add_scaled(&LinMap::otimes(&dp, &psi), &-sign(u));
                    }
                }
                push("sum-relation-d", k, lin_on_w(&lhs, w) == lin_on_w(&rhs, w));
            }
        }
        Ok(out)
    }

    /// `underline(σ ⊠ δ_{u,r} ⊠ id^{p})(J • (δ_{u,l} ⊠ id^{p})) + underline(δ_{u,l} ⊠ id^{p+1})(J • (δ_{u,r} ⊠ id^{p}))`.
    fn psi(&self, ext: &ValidatedExtension, jm: &[Vec<Scalar>], u: usize, p: usize) -> Result<LinMap> {
        let n = self.n;
        let l = &self.levels[u];
        let idp = id_block(n, p);
        let dr = l.delta_r.boxed(&idp)?;
        let dl = l.delta_l.boxed(&idp)?;
        let mut out = ext.sigma.boxed(&dr)?.underline_compose(&BlockMap::scalar_left(jm, &dl)?)?;
        out.add_assign(&dl.boxed(&id_block(n, 1))?.underline_compose(&BlockMap::scalar_left(jm, &dr)?)?);
        Ok(out)
    }
}
