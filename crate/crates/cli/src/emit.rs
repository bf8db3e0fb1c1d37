//! Text, JSON and LaTeX renderings of a [`Node`] tree.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use dox_core::exact_linalg::{Scalar, Tensor};

use crate::dsl::render_expr;
use crate::report::Node;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

pub fn emit(node: &Node, names: &[String], format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = String::new();
            text(node, names, 0, &mut out);
            out
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&to_json(node, names)).expect("serializable");
            s.push('\n');
            s
        }
        Format::Latex => latex_document(node, names),
    }
}

// ---------------------------------------------------------------- JSON

fn rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn scalar_json(s: &Scalar) -> Value {
    json!({ "re": rational(s.re()), "im": rational(s.im()) })
}

/// `[{"word": [...], "re": "p/q", "im": "r/s"}, …]` ordered by word.
pub fn tensor_json(t: &Tensor, names: &[String]) -> Value {
    Value::Array(
        t.terms()
            .iter()
            .map(|(w, c)| {
                let word: Vec<Value> = w.iter().map(|&g| Value::String(names[g as usize].clone())).collect();
                json!({ "word": word, "re": rational(c.re()), "im": rational(c.im()) })
            })
            .collect(),
    )
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    (!d.is_zero()).then(|| BigRational::new(n, d))
}

/// Inverse of [`tensor_json`] for a tensor of the given degree.
pub fn tensor_from_json(v: &Value, names: &[String], degree: usize) -> Option<Tensor> {
    let mut t = Tensor::zero(degree);
    for term in v.as_array()? {
        let word = term
            .get("word")?
            .as_array()?
            .iter()
            .map(|g| names.iter().position(|n| Some(n.as_str()) == g.as_str()).map(|p| p as u8))
            .collect::<Option<Vec<u8>>>()?;
        if word.len() != degree {
            return None;
        }
        let re = parse_rational(term.get("re")?.as_str()?)?;
        let im = parse_rational(term.get("im")?.as_str()?)?;
        t.add_term(word, &Scalar::new(re, im));
    }
    Some(t)
}

pub fn to_json(node: &Node, names: &[String]) -> Value {
    match node {
        Node::Bool(b) | Node::Flag(b) => Value::Bool(*b),
        Node::Int(v) => json!(v),
        Node::Str(s) => Value::String(s.clone()),
        Node::Scalar(s) => scalar_json(s),
        Node::Tensor(t) => tensor_json(t, names),
        Node::Column(c) => Value::Array(c.iter().map(|t| tensor_json(t, names)).collect()),
        Node::Matrix(m) => Value::Array(m.iter().map(|r| Value::Array(r.iter().map(scalar_json).collect())).collect()),
        Node::List(v) => Value::Array(v.iter().map(|x| to_json(x, names)).collect()),
        Node::Map(m) => {
            // Insertion order is kept by the `preserve_order` feature.
            let mut obj = Map::new();
            for (k, v) in m {
                obj.insert(k.clone(), to_json(v, names));
            }
            Value::Object(obj)
        }
    }
}

// ---------------------------------------------------------------- text

fn tensor_text(t: &Tensor, names: &[String]) -> String {
    render_expr(t, names)
}

fn is_leaf(n: &Node) -> bool {
    !matches!(n, Node::Map(_) | Node::List(_) | Node::Matrix(_) | Node::Column(_))
}

fn leaf_text(n: &Node, names: &[String]) -> String {
    match n {
        Node::Bool(b) => if *b { "pass".into() } else { "FAIL".into() },
        Node::Flag(b) => if *b { "yes".into() } else { "no".into() },
        Node::Int(v) => v.to_string(),
        Node::Str(s) => s.clone(),
        Node::Scalar(s) => s.to_string(),
        Node::Tensor(t) => tensor_text(t, names),
        _ => unreachable!("not a leaf"),
    }
}

fn text(node: &Node, names: &[String], indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match node {
        Node::Map(m) => {
            for (k, v) in m {
                if is_leaf(v) {
                    out.push_str(&format!("{pad}{k}: {}\n", leaf_text(v, names)));
                } else if let Node::List(items) = v {
                    if items.iter().all(is_leaf) {
                        let parts: Vec<String> = items.iter().map(|x| leaf_text(x, names)).collect();
                        out.push_str(&format!("{pad}{k}: [{}]\n", parts.join(", ")));
                    } else {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text(v, names, indent + 1, out);
                    }
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    text(v, names, indent + 1, out);
                }
            }
        }
        Node::List(items) => {
            for (i, x) in items.iter().enumerate() {
                if is_leaf(x) {
                    out.push_str(&format!("{pad}- {}\n", leaf_text(x, names)));
                } else {
                    out.push_str(&format!("{pad}- [{i}]\n"));
                    text(x, names, indent + 1, out);
                }
            }
        }
        Node::Matrix(m) => {
            for r in m {
                let cells: Vec<String> = r.iter().map(|c| c.to_string()).collect();
                out.push_str(&format!("{pad}[{}]\n", cells.join(", ")));
            }
        }
        Node::Column(c) => {
            for t in c {
                out.push_str(&format!("{pad}[{}]\n", tensor_text(t, names)));
            }
        }
        leaf => out.push_str(&format!("{pad}{}\n", leaf_text(leaf, names))),
    }
}

// ---------------------------------------------------------------- LaTeX

fn latex_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().abs().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", q.numer().abs(), q.denom())
    }
}

/// `(sign is negative, magnitude)` with purely real or imaginary magnitudes bare.
fn latex_scalar_parts(s: &Scalar) -> (bool, String) {
    let (re, im) = (s.re(), s.im());
    if im.is_zero() {
        return (re.is_negative(), latex_rational(re));
    }
    if re.is_zero() {
        let m = if im.abs().is_one() { String::new() } else { latex_rational(im) };
        return (im.is_negative(), format!("{m}i"));
    }
    let m = if im.abs().is_one() { String::new() } else { latex_rational(im) };
    let sep = if im.is_negative() { "-" } else { "+" };
    let r = latex_rational(re);
    if re.is_negative() {
        let sep = if im.is_negative() { "+" } else { "-" };
        (true, format!("({r}{sep}{m}i)"))
    } else {
        (false, format!("({r}{sep}{m}i)"))
    }
}

pub fn latex_scalar(s: &Scalar) -> String {
    let (neg, mag) = latex_scalar_parts(s);
    if neg {
        format!("-{mag}")
    } else {
        mag
    }
}

/// `x1` becomes `x_{1}`; other names are set upright.
fn latex_name(n: &str) -> String {
    let split = n.find(|c: char| c.is_ascii_digit()).unwrap_or(n.len());
    let (head, tail) = n.split_at(split);
    let head = if head.len() == 1 { head.to_string() } else { format!("\\mathrm{{{head}}}") };
    if !tail.is_empty() && tail.chars().all(|c| c.is_ascii_digit()) {
        format!("{head}_{{{tail}}}")
    } else if tail.is_empty() {
        head
    } else {
        format!("\\mathrm{{{n}}}")
    }
}

pub fn latex_tensor(t: &Tensor, names: &[String]) -> String {
    if t.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (w, c)) in t.terms().iter().enumerate() {
        let (neg, mag) = latex_scalar_parts(c);
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let word: Vec<String> = w.iter().map(|&g| latex_name(&names[g as usize])).collect();
        if mag != "1" {
            out.push_str(&mag);
            out.push_str("\\,");
        }
        out.push_str(&word.join("\\otimes "));
    }
    out
}

fn latex_value(n: &Node, names: &[String]) -> String {
    match n {
        Node::Bool(b) => if *b { "\\text{pass}".into() } else { "\\text{FAIL}".into() },
        Node::Flag(b) => if *b { "\\text{yes}".into() } else { "\\text{no}".into() },
        Node::Int(v) => v.to_string(),
        Node::Str(s) => format!("\\text{{{}}}", s.replace('_', "\\_")),
        Node::Scalar(s) => latex_scalar(s),
        Node::Tensor(t) => latex_tensor(t, names),
        Node::Column(c) => {
            let rows: Vec<String> = c.iter().map(|t| latex_tensor(t, names)).collect();
            format!("\\begin{{pmatrix}} {} \\end{{pmatrix}}", rows.join(" \\\\ "))
        }
        Node::Matrix(m) => {
            let rows: Vec<String> = m.iter().map(|r| r.iter().map(latex_scalar).collect::<Vec<_>>().join(" & ")).collect();
            format!("\\begin{{pmatrix}} {} \\end{{pmatrix}}", rows.join(" \\\\ "))
        }
        Node::List(items) if items.iter().all(is_leaf) => {
            format!("({})", items.iter().map(|x| latex_value(x, names)).collect::<Vec<_>>().join(", "))
        }
        _ => unreachable!("handled by latex_block"),
    }
}

fn latex_block(node: &Node, names: &[String], out: &mut String) {
    match node {
        Node::Map(m) => {
            out.push_str("\\begin{description}\n");
            for (k, v) in m {
                let key = k.replace('_', "\\_");
                match v {
                    Node::Map(_) | Node::List(_) if !matches!(v, Node::List(items) if items.iter().all(is_leaf)) => {
                        out.push_str(&format!("\\item[{key}]\n"));
                        latex_block(v, names, out);
                    }
                    _ => out.push_str(&format!("\\item[{key}] ${}$\n", latex_value(v, names))),
                }
            }
            out.push_str("\\end{description}\n");
        }
        Node::List(items) => {
            out.push_str("\\begin{enumerate}\n");
            for x in items {
                out.push_str("\\item ");
                if matches!(x, Node::Map(_) | Node::List(_)) {
                    out.push('\n');
                    latex_block(x, names, out);
                } else {
                    out.push_str(&format!("${}$\n", latex_value(x, names)));
                }
            }
            out.push_str("\\end{enumerate}\n");
        }
        leaf => out.push_str(&format!("${}$\n", latex_value(leaf, names))),
    }
}

fn latex_document(node: &Node, names: &[String]) -> String {
    let mut out = String::from("\\documentclass{article}\n\\usepackage{amsmath}\n\\begin{document}\n");
    latex_block(node, names, &mut out);
    out.push_str("\\end{document}\n");
    out
}
