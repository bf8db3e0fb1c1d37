//! Command pipeline: builds the kernel objects for a [`ProblemSpec`] and
//! collects their reports.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dox_core::exact_linalg::Tensor;
use dox_core::extension::{matrix_of, validate, ValidatedExtension};
use dox_core::nakayama::{nakayama, NakayamaReport};
use dox_core::potential::{build_omega_hat, derivation_span, in_relations_times_tail, in_top_koszul_space, verify_twisted, Superpotential};
use dox_core::qalgebra::{AlgebraCache, Certificate};
use dox_core::quadruple::{build_quadruple, build_quadruple_randomized, calculus_identities, IdentityCheck, Quadruple};
use dox_core::resolution::{assemble_f, verify_homotopies, verify_resolution, ChainMaps};
use dox_core::Error;

use crate::dsl::{DslError, ProblemSpec};
use crate::report::Node;

/// Degrees through which Hilbert freeness is always checked.
pub const HILBERT_BOUND: usize = 6;
/// Largest tensor power for the `det σ^{⊠i}` identity.
pub const DET_POWER_BOUND: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Analyze,
    Validate,
    Quadruple,
    Nakayama,
    Resolution,
    Superpotential,
    Verify,
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    /// Internal degree bound `D`; defaults to the input's `degree` line, then `d + 4`.
    pub degree: Option<usize>,
    /// Number of randomized quadruples; defaults to the input's `randomized` line, then 0.
    pub randomized: Option<usize>,
}

/// A report with its process exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Node,
    pub exit_code: i32,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

pub fn parse_failure(e: &DslError) -> Outcome {
    let kind = match e {
        DslError::Parse { .. } => "ParseError",
        DslError::FieldMismatch { .. } => "FieldMismatch",
        DslError::Invalid { .. } => "InvalidInput",
    };
    let mut err = Node::map().add("kind", kind).add("message", e.to_string());
    match e {
        DslError::Parse { line, col, expected, found } => {
            err.push("line", *line);
            err.push("column", *col);
            err.push("expected", expected.clone());
            err.push("found", found.clone());
        }
        DslError::FieldMismatch { line, col } => {
            err.push("line", *line);
            err.push("column", *col);
        }
        DslError::Invalid { line, .. } => err.push("line", *line),
    }
    Outcome { report: Node::map().add("error", err).build(), exit_code: EXIT_PARSE }
}

fn kernel_failure(e: &Error) -> Outcome {
    let kind = format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or("Error").to_string();
    let mut err = Node::map().add("kind", kind).add("message", e.to_string());
    if let Error::Validation(vs) = e {
        let list = vs
            .iter()
            .map(|v| Node::map().add("condition", v.name.clone()).add("witness", v.witness.clone()).build())
            .collect::<Vec<_>>();
        err.push("violations", list);
    }
    let exit_code = if e.is_input_rejection() { EXIT_REJECTED } else { EXIT_INTERNAL };
    Outcome { report: Node::map().add("error", err).build(), exit_code }
}

/// Kernel objects shared by the commands.
pub struct Pipeline {
    pub spec: ProblemSpec,
    pub a: AlgebraCache,
    pub cert: Certificate,
    pub degree: usize,
    pub randomized: usize,
}

impl Pipeline {
    /// Builds `A`, its graded pieces through `max(D, 6)` and the regularity certificate.
    pub fn new(spec: &ProblemSpec, opts: &Options) -> dox_core::Result<(Self, bool)> {
        let mut a = AlgebraCache::new(spec.presentation()?, HILBERT_BOUND)?;
        let d = a.certificate(0).d;
        let degree = opts.degree.or(spec.degree).unwrap_or(d + 4);
        let bound = degree.max(HILBERT_BOUND);
        a.quotient.extend_to(bound);
        let cert = a.certificate(bound);
        let passed = cert.passed();
        let randomized = opts.randomized.or(spec.randomized).unwrap_or(0);
        Ok((Pipeline { spec: spec.clone(), a, cert, degree, randomized }, passed))
    }

    pub fn bound(&self) -> usize {
        self.degree.max(HILBERT_BOUND)
    }

    pub fn d(&self) -> usize {
        self.cert.d
    }

    pub fn omega(&self) -> &Tensor {
        self.cert.omega()
    }

    pub fn extension(&self) -> dox_core::Result<ValidatedExtension> {
        self.a.as_certificate(self.bound())?;
        validate(&self.a, &self.spec.extension_input(), self.bound())
    }

    pub fn quadruple(&self, ext: &ValidatedExtension) -> dox_core::Result<Quadruple> {
        build_quadruple(&self.a, ext, self.d())
    }

    /// Quadruple number `k` of the randomized family, seeded by `k`.
    pub fn randomized_quadruple(&self, ext: &ValidatedExtension, k: usize) -> dox_core::Result<Quadruple> {
        let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
        build_quadruple_randomized(&self.a, ext, self.d(), &mut rng)
    }
}

fn checks_node(checks: &[IdentityCheck]) -> Node {
    Node::List(
        checks
            .iter()
            .map(|c| Node::map().add("name", c.name.clone()).add("level", c.level).add("ok", c.ok).build())
            .collect(),
    )
}

pub fn analyze_node(p: &Pipeline) -> Node {
    let c = &p.cert;
    let mut m = Node::map()
        .add("field", p.spec.field.name())
        .add("generators", p.spec.names.join(" "))
        .add("relations", Node::List(p.a.presentation.relations.basis().iter().cloned().map(Node::Tensor).collect()))
        .add("hilbert_A", Node::ints(&p.a.quotient.dims()[..=p.bound()]))
        .add("koszul_dims", Node::ints(&c.koszul_dims))
        .add("global_dimension", c.d)
        .add("degree_bound", c.bound)
        .add("top_space_one_dimensional", c.w_top_ok)
        .add("palindromic", c.palindrome_ok)
        .add("euler_sums_vanish", c.euler_ok);
    if let Some(o) = &c.omega {
        m.push("omega", o.clone());
    }
    m.add("certificate_passed", c.passed()).build()
}

pub fn validate_node(ext: &ValidatedExtension) -> Node {
    let mut checks = Node::map();
    for (name, ok) in &ext.checks {
        checks.push(name, *ok);
    }
    let hilbert = ext
        .b
        .hilbert
        .iter()
        .map(|&(k, got, expected)| Node::map().add("degree", k).add("dim_B", got).add("expected", expected).add("ok", got == expected).build())
        .collect::<Vec<_>>();
    Node::map()
        .add("conditions", checks)
        .add("det_sigma", matrix_of(&ext.det, ext.n))
        .add("relations_B_dim", ext.b.r_hat().dim())
        .add("hilbert_B", hilbert)
        .add("note", "invertibility of sigma is verified on generators only")
        .build()
}

pub fn quadruple_node(ext: &ValidatedExtension, quad: &Quadruple, checks: &[IdentityCheck]) -> Node {
    let mut levels = Vec::new();
    for i in 1..=quad.d {
        let l = quad.level(i);
        let basis = l
            .w
            .basis()
            .iter()
            .map(|b| {
                Node::map()
                    .add("w", b.clone())
                    .add("delta_r", Node::Column(l.delta_r.apply_column(b)))
                    .add("delta_l", Node::Column(l.delta_l.apply_column(b)))
                    .add("upsilon_r", l.upsilon_r.apply(b))
                    .add("upsilon_l", l.upsilon_l.apply(b))
                    .build()
            })
            .collect::<Vec<_>>();
        levels.push(Node::map().add("level", i).add("dim_W", l.w.dim()).add("basis", basis).build());
    }
    Node::map()
        .add("nu_is_zero", Node::Flag(ext.input.nu_is_zero()))
        .add("all_zero", Node::Flag(quad.is_zero()))
        .add("levels", levels)
        .add("identities", checks_node(checks))
        .build()
}

pub fn nakayama_node(rep: &NakayamaReport) -> Node {
    Node::map()
        .add("omega", rep.omega.clone())
        .add("mu_A", rep.l.clone())
        .add("det_sigma", rep.u.clone())
        .add("hdet", rep.h.clone())
        .add("delta_r", Node::Column(rep.delta_r.to_vec()))
        .add("delta_l", Node::Column(rep.delta_l.to_vec()))
        .add("div", Node::Column(rep.div.to_vec()))
        .add("mu_B", rep.mu_b.clone())
        .add("div_is_zero", Node::Flag(rep.div_is_zero()))
        .add("calabi_yau", Node::Flag(rep.mu_b_is_identity()))
        .add("v_block_matches_composition", rep.v_block() == rep.composed_v_block())
        .build()
}

pub fn superpotential_node(sp: &Superpotential, ext: &ValidatedExtension, mu_b: &[Vec<dox_core::exact_linalg::Scalar>]) -> dox_core::Result<Node> {
    let r_hat = ext.b.r_hat();
    let span = derivation_span(sp, r_hat.letters());
    Ok(Node::map()
        .add("omega_hat_1", sp.parts[0].clone())
        .add("omega_hat_2", sp.parts[1].clone())
        .add("omega_hat_3", sp.parts[2].clone())
        .add("omega_hat", sp.omega_hat.clone())
        .add("twisted", verify_twisted(sp, &mu_b.to_vec())?)
        .add("in_relations_tensor_tail", in_relations_times_tail(sp, r_hat))
        .add("in_top_koszul_space", in_top_koszul_space(sp, r_hat))
        .add("derivation_span_dim", span.dim())
        .add("relations_B_dim", r_hat.dim())
        .add("derivation_span_equals_relations", span == *r_hat)
        .build())
}

pub fn resolution_node(p: &Pipeline, ext: &ValidatedExtension, quad: &Quadruple) -> dox_core::Result<Node> {
    let maps = ChainMaps::new(&p.a, ext, quad)?;
    let fc = assemble_f(&maps, &ext.b, p.degree);
    let rep = verify_resolution(&fc)?;
    let homotopies = verify_homotopies(&maps, ext, &ext.b, p.degree)?;
    let positions = fc
        .positions
        .iter()
        .enumerate()
        .map(|(j, pos)| {
            let summands: Vec<String> = pos.iter().map(|s| format!("W{}(-{})", s.m, s.shift)).collect();
            Node::map()
                .add("position", j)
                .add("summands", summands.join(" + "))
                .add("dims", Node::ints(&rep.dims[j]))
                .add("ranks", Node::ints(&rep.ranks[j]))
                .build()
        })
        .collect::<Vec<_>>();
    Ok(Node::map()
        .add("degree_bound", p.degree)
        .add("positions", positions)
        .add("complex", rep.complex_ok)
        .add("exact", rep.exact_ok)
        .add("augmentation", rep.augmentation_ok)
        .add("minimal", rep.minimal_ok)
        .add("identities", checks_node(&homotopies))
        .build())
}

/// Reruns the pipeline on randomized quadruples and compares `div` and the
/// derivation span with the canonical ones.
pub fn randomized_node(p: &Pipeline, ext: &ValidatedExtension, canonical: &NakayamaReport, with_span: bool) -> dox_core::Result<Node> {
    let mut identities = true;
    let mut div_same = true;
    let mut span_same = true;
    for k in 0..p.randomized {
        let q = p.randomized_quadruple(ext, k)?;
        identities &= q.verify_identities(ext)?.iter().all(|c| c.ok);
        let rep = nakayama(ext, &q, p.omega())?;
        div_same &= rep.div == canonical.div;
        if with_span {
            let sp = build_omega_hat(ext, &q, p.omega())?;
            span_same &= derivation_span(&sp, ext.b.letters()) == *ext.b.r_hat();
        }
    }
    let mut m = Node::map().add("count", p.randomized).add("identities_hold", identities).add("div_invariant", div_same);
    if with_span {
        m.push("derivation_span_invariant", span_same);
    }
    Ok(m.build())
}

fn run_inner(cmd: Command, p: &Pipeline) -> dox_core::Result<Node> {
    let ext = p.extension()?;
    let mut out = Node::map();
    match cmd {
        Command::Analyze => unreachable!("handled by run"),
        Command::Validate => return Ok(validate_node(&ext)),
        _ => {}
    }
    let quad = p.quadruple(&ext)?;
    let checks = quad.verify_identities(&ext)?;
    if cmd == Command::Quadruple {
        return Ok(quadruple_node(&ext, &quad, &checks));
    }
    if cmd == Command::Resolution {
        return resolution_node(p, &ext, &quad);
    }
    let rep = nakayama(&ext, &quad, p.omega())?;
    match cmd {
        Command::Nakayama => {
            let mut node = nakayama_node(&rep);
            if p.randomized > 0 {
                if let Node::Map(m) = &mut node {
                    m.push(("randomized".into(), randomized_node(p, &ext, &rep, false)?));
                }
            }
            Ok(node)
        }
        Command::Superpotential => {
            let sp = build_omega_hat(&ext, &quad, p.omega())?;
            superpotential_node(&sp, &ext, &rep.mu_b)
        }
        Command::Verify => {
            let sp = build_omega_hat(&ext, &quad, p.omega())?;
            out.push("analyze", analyze_node(p));
            out.push("validate", validate_node(&ext));
            out.push("quadruple", quadruple_node(&ext, &quad, &checks));
            out.push("calculus", checks_node(&calculus_identities(&p.a, &ext, p.d(), DET_POWER_BOUND)?));
            out.push("nakayama", nakayama_node(&rep));
            out.push("superpotential", superpotential_node(&sp, &ext, &rep.mu_b)?);
            out.push("resolution", resolution_node(p, &ext, &quad)?);
            if p.randomized > 0 {
                out.push("randomized", randomized_node(p, &ext, &rep, true)?);
            }
            let node = out.build();
            let failed: Vec<Node> = node.checks().into_iter().filter(|(_, ok)| !ok).map(|(k, _)| Node::Str(k)).collect();
            let Node::Map(mut m) = node else { unreachable!() };
            m.push(("failed_checks".into(), Node::List(failed.clone())));
            m.push(("all_passed".into(), Node::Bool(failed.is_empty())));
            Ok(Node::Map(m))
        }
        _ => unreachable!(),
    }
}

/// Runs one command. A false check anywhere in a non-`analyze` report means a
/// guaranteed property failed and yields exit code 3.
pub fn run(cmd: Command, spec: &ProblemSpec, opts: &Options) -> Outcome {
    let (p, passed) = match Pipeline::new(spec, opts) {
        Ok(x) => x,
        Err(e) => return kernel_failure(&e),
    };
    if cmd == Command::Analyze {
        return Outcome { report: analyze_node(&p), exit_code: if passed { EXIT_OK } else { EXIT_REJECTED } };
    }
    match run_inner(cmd, &p) {
        Ok(report) => {
            let ok = report.checks().iter().all(|(_, ok)| *ok);
            Outcome { report, exit_code: if ok { EXIT_OK } else { EXIT_INTERNAL } }
        }
        Err(e) => kernel_failure(&e),
    }
}
