//! Double Ore extension data `(P, σ, δ)`: validation of the defining
//! conditions, the determinant of `σ`, its T-inverse, and the presentation
//! of `B` over `V̂ = V ⊕ k{y1, y2}`.

use num_traits::{One, Zero};

use crate::blockcalc::{mat2_rows, mat_inverse, BlockMap, LinMap, Mat2};
use crate::error::{Error, Result, Violation};
use crate::exact_linalg::{Scalar, Subspace, Tensor};
use crate::qalgebra::{derivation_extension, hom_power, AlgebraCache, GradedQuotient, Presentation};

/// Raw extension data: `p12`, `p11`, `σ` on generators and a lift `δ` of `ν`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionInput {
    pub p12: Scalar,
    pub p11: Scalar,
    /// `sigma[g][a][b] = σ_ab(x_g)`, degree-1 tensors.
    pub sigma: Vec<[[Tensor; 2]; 2]>,
    /// `delta[g][a] = δ_a(x_g)`, degree-2 tensors.
    pub delta: Vec<[Tensor; 2]>,
}

impl ExtensionInput {
    /// `σ` as a 2×2 block map on `V`.
    pub fn sigma_map(&self) -> BlockMap {
        let entry = |a: usize, b: usize| {
            LinMap::from_images(1, 1, self.sigma.iter().enumerate().map(|(g, m)| (vec![g as u8], m[a][b].clone())))
        };
        BlockMap::from_entries(2, 2, vec![entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1)]).expect("2x2")
    }

    /// `δ` as a 2×1 block map `V → (V ⊗ V)^{⊕2}`.
    pub fn delta_map(&self) -> BlockMap {
        let entry = |a: usize| {
            LinMap::from_images(1, 2, self.delta.iter().enumerate().map(|(g, c)| (vec![g as u8], c[a].clone())))
        };
        BlockMap::from_entries(2, 1, vec![entry(0), entry(1)]).expect("2x1")
    }

    pub fn nu_is_zero(&self) -> bool {
        self.delta.iter().all(|c| c[0].is_zero() && c[1].is_zero())
    }

    /// `J = (-p11, -p12; 1, 0)`.
    pub fn j_matrix(&self) -> Mat2 {
        [[-self.p11.clone(), -self.p12.clone()], [Scalar::one(), Scalar::zero()]]
    }
}

/// Matrix `M` of a map on generators: `f(x_i) = Σ_j M_ij x_j`.
pub fn matrix_of(f: &LinMap, n: usize) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|i| {
            let img = f.image_of(&[i as u8]).cloned().unwrap_or_else(|| Tensor::zero(1));
            (0..n).map(|j| img.coeff(&[j as u8])).collect()
        })
        .collect()
}

/// Inverse of [`matrix_of`].
pub fn map_of(m: &[Vec<Scalar>]) -> LinMap {
    LinMap::from_images(
        1,
        1,
        m.iter().enumerate().map(|(i, row)| {
            (vec![i as u8], Tensor::from_terms(1, row.iter().enumerate().map(|(j, c)| (vec![j as u8], c.clone()))))
        }),
    )
}

/// `det σ = σ22σ11 − p12 σ12σ21 − p11 σ12σ11` (products are compositions).
pub fn det_sigma(sigma: &BlockMap, p12: &Scalar, p11: &Scalar) -> LinMap {
    let s = |a: usize, b: usize| sigma.entry(a, b);
    let mut det = LinMap::compose(s(1, 1), s(0, 0));
    det.add_scaled(&LinMap::compose(s(0, 1), s(1, 0)), &-p12);
    det.add_scaled(&LinMap::compose(s(0, 1), s(0, 0)), &-p11);
    det
}

/// The presentation of `B` and its graded quotient.
#[derive(Clone, Debug)]
pub struct ExtendedAlgebra {
    pub presentation: Presentation,
    pub quotient: GradedQuotient,
    pub hilbert: Vec<(usize, usize, usize)>,
}

impl ExtendedAlgebra {
    pub fn r_hat(&self) -> &Subspace {
        &self.presentation.relations
    }

    pub fn letters(&self) -> usize {
        self.presentation.letters()
    }
}

/// Extension data that passed every check, with its derived objects.
#[derive(Clone, Debug)]
pub struct ValidatedExtension {
    pub input: ExtensionInput,
    pub n: usize,
    pub j: Mat2,
    pub sigma: BlockMap,
    pub delta: BlockMap,
    pub det: LinMap,
    pub det_inv: LinMap,
    /// `det σ (x-column) = U (x-column)`.
    pub u: Vec<Vec<Scalar>>,
    pub sigma_inv_t: BlockMap,
    pub sigma_inv: BlockMap,
    pub b: ExtendedAlgebra,
    pub checks: Vec<(String, bool)>,
}

impl ValidatedExtension {
    pub fn y1(&self) -> u8 {
        self.n as u8
    }

    pub fn y2(&self) -> u8 {
        self.n as u8 + 1
    }

    pub fn j_rows(&self) -> Vec<Vec<Scalar>> {
        mat2_rows(&self.j)
    }
}

/// Returns `δ` unchanged when `δ(R) ⊆ (R⊗V + V⊗R)^{⊕2}`; otherwise `NoLift`.
///
/// Adding a correction `ρ: V → R^{⊕2}` to a lift changes `δ(R)` by
/// `(σ⊠ρ + ρ⊠id)(R) ⊆ V⊗R + R⊗V`, so the containment does not depend on the
/// chosen lift and no correction system needs solving.
pub fn lift_delta(a: &AlgebraCache, sigma: &BlockMap, delta: &BlockMap) -> Result<BlockMap> {
    let n = a.letters();
    let r = &a.presentation.relations;
    let ext = derivation_extension(sigma, delta, n, 2);
    for rel in r.basis() {
        for (c, img) in ext.apply_column(rel).iter().enumerate() {
            if !a.quotient.project(img).is_empty() {
                return Err(Error::NoLift(format!("component {} of delta applied to a relation is nonzero in A_3", c + 1)));
            }
        }
    }
    Ok(delta.clone())
}

/// Lift of `ν` given by classes in `A_2`, using transversal representatives.
pub fn canonical_lift(a: &AlgebraCache, nu: &[[crate::exact_linalg::SparseRow<usize>; 2]]) -> Vec<[Tensor; 2]> {
    nu.iter().map(|c| [a.quotient.lift(2, &c[0]), a.quotient.lift(2, &c[1])]).collect()
}

fn render(t: &Tensor) -> String {
    if t.is_zero() {
        return "0".into();
    }
    t.terms().iter().map(|(w, c)| format!("({c}){w:?}")).collect::<Vec<_>>().join(" + ")
}

/// Checks the extension conditions; on success builds `B` up to degree `bound`.
pub fn validate(a: &AlgebraCache, input: &ExtensionInput, bound: usize) -> Result<ValidatedExtension> {
    let n = a.letters();
    if input.sigma.len() != n || input.delta.len() != n {
        return Err(Error::ShapeMismatch("sigma and nu must be given on every generator".into()));
    }
    let mut violations = Vec::new();
    let mut checks = Vec::new();
    let mut record = |name: &str, witness: Option<String>, checks: &mut Vec<(String, bool)>| {
        checks.push((name.to_string(), witness.is_none()));
        if let Some(w) = witness {
            violations.push(Violation { name: name.to_string(), witness: w });
        }
    };

    let j = input.j_matrix();
    let jr = mat2_rows(&j);
    record("p12-nonzero", input.p12.is_zero().then(|| "p12 = 0".to_string()), &mut checks);

    let sigma = input.sigma_map();
    let delta = input.delta_map();
    let r = &a.presentation.relations;

    let s2 = hom_power(&sigma, 2);
    let mut w = None;
    'outer: for rel in r.basis() {
        for row in s2.apply(rel) {
            for e in row {
                if !r.contains(&e) {
                    w = Some(format!("sigma^[2] of a relation has entry {} outside R", render(&e)));
                    break 'outer;
                }
            }
        }
    }
    record("sigma-well-defined", w, &mut checks);

    let lifted = lift_delta(a, &sigma, &delta);
    record("nu-well-defined", lifted.as_ref().err().map(|e| e.to_string()), &mut checks);

    let det = det_sigma(&sigma, &input.p12, &input.p11);
    let diag_det = BlockMap::diag_power(&det, 2);
    let theta = sigma.transpose().bullet(&BlockMap::scalar_left(&jr, &sigma)?)?;
    let theta_a = theta.sub(&BlockMap::scalar_left(&jr, &diag_det)?)?;
    let theta_b = theta.sub(&BlockMap::scalar_right(&diag_det, &jr)?)?;
    let w = if theta_a.is_zero() && theta_b.is_zero() {
        None
    } else {
        let bad = if theta_a.is_zero() { &theta_b } else { &theta_a };
        let mut msg = String::from("sigma^T J sigma - J diag(det sigma) is nonzero");
        'f: for i in 0..2 {
            for jj in 0..2 {
                if let Some((g, img)) = bad.entry(i, jj).images().iter().next() {
                    msg = format!("entry ({},{}) sends generator {} to {}", i + 1, jj + 1, g[0], render(img));
                    break 'f;
                }
            }
        }
        Some(msg)
    };
    record("theta", w, &mut checks);

    // ν^T•J•σ + (σ^T•J•ν)^T, evaluated in A_2.
    let g1 = delta.transpose().bullet(&BlockMap::scalar_left(&jr, &sigma)?)?;
    let g2 = s2.transpose().bullet(&BlockMap::scalar_left(&jr, &delta)?)?.transpose();
    let gamma = g1.add(&g2)?;
    let mut w = None;
    for c in 0..2 {
        for (g, img) in gamma.entry(0, c).images() {
            if !r.contains(img) {
                w = Some(format!("column {} on generator {} gives {}", c + 1, g[0], render(img)));
            }
        }
    }
    record("gamma", w, &mut checks);

    // underline δ(J•δ) on V, evaluated in A_3.
    let d2 = derivation_extension(&sigma, &delta, n, 2);
    let nu_map = d2.underline_compose(&BlockMap::scalar_left(&jr, &delta)?)?;
    let mut w = None;
    for (g, img) in nu_map.images() {
        if !a.quotient.project(img).is_empty() {
            w = Some(format!("generator {} gives {} outside R⊗V + V⊗R", g[0], render(img)));
        }
    }
    record("nu", w, &mut checks);

    let u = matrix_of(&det, n);
    let u_inv = mat_inverse(&u);
    record("det-invertible", u_inv.is_none().then(|| "det sigma is singular on V".to_string()), &mut checks);

    let j_inv = mat_inverse(&jr);
    let (sigma_inv_t, sigma_inv) = match (&u_inv, &j_inv) {
        (Some(ui), Some(ji)) => {
            let det_inv = map_of(ui);
            let dinv = BlockMap::diag_power(&det_inv, 2);
            let sit = BlockMap::scalar_left(ji, &dinv.bullet(&BlockMap::scalar_right(&sigma.transpose(), &jr)?)?)?;
            let si = BlockMap::scalar_left(&jr, &BlockMap::scalar_right(&sigma, ji)?)?.bullet(&dinv)?;
            (Some(sit), Some(si))
        }
        _ => (None, None),
    };
    let id2 = BlockMap::diag_power(&LinMap::identity(n, 1), 2);
    let w = match (&sigma_inv_t, &sigma_inv) {
        (Some(sit), Some(si)) => {
            let st = sigma.transpose();
            let ok = sit.bullet(&sigma)? == id2
                && sigma.bullet(sit)? == id2
                && st.bullet(si)? == id2
                && si.bullet(&st)? == id2;
            (!ok).then(|| "candidate inverse fails a two-sided identity on V".to_string())
        }
        _ => Some("no candidate inverse".to_string()),
    };
    record("sigma-invertible", w, &mut checks);

    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    let u_inv = u_inv.expect("checked");
    let b = build_b(a, input, bound)?;
    Ok(ValidatedExtension {
        input: input.clone(),
        n,
        j,
        sigma,
        delta,
        det_inv: map_of(&u_inv),
        det,
        u,
        sigma_inv_t: sigma_inv_t.expect("checked"),
        sigma_inv: sigma_inv.expect("checked"),
        b,
        checks,
    })
}

/// `R̂ = R ⊕ span(y2y1 − p12 y1y2 − p11 y1y1) ⊕ span(y_i v − Σ_j σ_ij(v) y_j − δ_i(v))`.
pub fn r_hat_basis(n: usize, r: &Subspace, input: &ExtensionInput) -> Vec<Tensor> {
    let (y1, y2) = (n as u8, n as u8 + 1);
    let mut rels: Vec<Tensor> = r.basis().to_vec();
    let mut yy = Tensor::word(vec![y2, y1]);
    yy.add_term(vec![y1, y2], &-&input.p12);
    yy.add_term(vec![y1, y1], &-&input.p11);
    rels.push(yy);
    for i in 0..2 {
        let yi = [y1, y2][i];
        for g in 0..n {
            let mut t = Tensor::word(vec![yi, g as u8]);
            for (jj, yj) in [y1, y2].into_iter().enumerate() {
                t.sub_assign(&input.sigma[g][i][jj].otimes(&Tensor::word(vec![yj])));
            }
            t.sub_assign(&input.delta[g][i]);
            rels.push(t);
        }
    }
    rels
}

/// Presentation of `B` with Hilbert freeness checked for `k ≤ bound`.
pub fn build_b(a: &AlgebraCache, input: &ExtensionInput, bound: usize) -> Result<ExtendedAlgebra> {
    let n = a.letters();
    let mut names = a.presentation.names.clone();
    names.push("y1".into());
    names.push("y2".into());
    let rels = r_hat_basis(n, &a.presentation.relations, input);
    let presentation = Presentation::new(a.presentation.field, names, &rels)?;
    let quotient = GradedQuotient::new(n + 2, &presentation.relations, bound);
    let mut hilbert = Vec::new();
    for k in 0..=bound {
        let expected: usize = (0..=k.min(a.quotient.max_degree())).map(|jj| a.dim(jj) * (k - jj + 1)).sum();
        let got = quotient.dim(k);
        hilbert.push((k, got, expected));
        if got != expected {
            return Err(Error::HilbertMismatch { degree: k, got, expected });
        }
    }
    Ok(ExtendedAlgebra { presentation, quotient, hilbert })
}

/// `−(J^T)^{−1} J`, the matrix appearing in `μ_B(Y)`.
pub fn minus_jt_inv_j(j: &Mat2) -> Vec<Vec<Scalar>> {
    let jr = mat2_rows(j);
    let jt = crate::blockcalc::mat_transpose(&jr);
    let inv = mat_inverse(&jt).expect("p12 nonzero");
    crate::blockcalc::mat_mul(&inv, &jr).into_iter().map(|r| r.into_iter().map(|c| -c).collect()).collect()
}

/// Identity check helper used by tests of the T-inverse.
pub fn is_identity_block(m: &BlockMap, n: usize) -> bool {
    *m == BlockMap::diag_power(&LinMap::identity(n, 1), 2)
}

