//! Line-oriented input format.
//!
//! ```text
//! # comment
//! field Q(i)
//! gens x1 x2
//! rel x2*x1 - i x1*x2
//! p12 i
//! p11 0
//! sigma x1 = [[0, i x2], [-i x2, 0]]
//! sigma x2 = [[0, i x1], [i x1, 0]]
//! nu x1 = [0, -i x1*x2]
//! nu x2 = [i x1*x2, 0]
//! degree 6
//! ```
//!
//! Scalars are `a`, `a/b`, `i`, `b*i`, `a+b*i`, `a-b*i` with integers `a`, `b`;
//! inside expressions a compound scalar is written in parentheses. `nu` lines
//! and `p11` may be omitted (zero); `degree` and `randomized` are options.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use dox_core::exact_linalg::{Field, Scalar, Tensor};
use dox_core::extension::ExtensionInput;
use dox_core::qalgebra::Presentation;

/// Names reserved for the adjoined variables of `B`.
pub const Y_NAMES: [&str; 2] = ["y1", "y2"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DslError {
    #[error("line {line}, column {col}: expected {expected}, found {found}")]
    Parse { line: usize, col: usize, expected: String, found: String },
    #[error("line {line}, column {col}: scalar uses i but the field is Q")]
    FieldMismatch { line: usize, col: usize },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

/// A parsed problem: presentation of `A`, extension data and options.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub field: Field,
    pub names: Vec<String>,
    pub relations: Vec<Tensor>,
    pub p12: Scalar,
    pub p11: Scalar,
    /// `sigma[g][a][b] = σ_ab(x_g)`.
    pub sigma: Vec<[[Tensor; 2]; 2]>,
    /// `nu[g][a] = δ_a(x_g)`.
    pub nu: Vec<[Tensor; 2]>,
    pub degree: Option<usize>,
    pub randomized: Option<usize>,
}

impl ProblemSpec {
    pub fn presentation(&self) -> dox_core::Result<Presentation> {
        Presentation::new(self.field, self.names.clone(), &self.relations)
    }

    pub fn extension_input(&self) -> ExtensionInput {
        ExtensionInput { p12: self.p12.clone(), p11: self.p11.clone(), sigma: self.sigma.clone(), delta: self.nu.clone() }
    }

    /// Letter names of `V̂`: the generators followed by `y1`, `y2`.
    pub fn letter_names(&self) -> Vec<String> {
        self.names.iter().cloned().chain(Y_NAMES.iter().map(|s| s.to_string())).collect()
    }

    /// Renders the problem back into the input format.
    pub fn to_dsl(&self) -> String {
        let names = &self.names;
        let mut out = String::new();
        out.push_str(&format!("field {}\n", self.field.name()));
        out.push_str(&format!("gens {}\n", names.join(" ")));
        for r in &self.relations {
            out.push_str(&format!("rel {}\n", render_expr(r, names)));
        }
        out.push_str(&format!("p12 {}\n", self.p12));
        out.push_str(&format!("p11 {}\n", self.p11));
        for (g, m) in self.sigma.iter().enumerate() {
            let e = |a: usize, b: usize| render_expr(&m[a][b], names);
            out.push_str(&format!("sigma {} = [[{}, {}], [{}, {}]]\n", names[g], e(0, 0), e(0, 1), e(1, 0), e(1, 1)));
        }
        for (g, c) in self.nu.iter().enumerate() {
            out.push_str(&format!("nu {} = [{}, {}]\n", names[g], render_expr(&c[0], names), render_expr(&c[1], names)));
        }
        if let Some(d) = self.degree {
            out.push_str(&format!("degree {d}\n"));
        }
        if let Some(r) = self.randomized {
            out.push_str(&format!("randomized {r}\n"));
        }
        out
    }
}

/// `c1 w1 + c2 w2 + …` with words joined by `*` and compound scalars parenthesized.
pub fn render_expr(t: &Tensor, names: &[String]) -> String {
    if t.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (w, c)) in t.terms().iter().enumerate() {
        let word: Vec<&str> = w.iter().map(|&g| names[g as usize].as_str()).collect();
        let word = word.join("*");
        let (neg, mag) = split_sign(c);
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag.is_one() {
            out.push_str(&word);
        } else if mag.re().is_zero() || mag.im().is_zero() {
            out.push_str(&format!("{mag} {word}"));
        } else {
            out.push_str(&format!("({mag}) {word}"));
        }
    }
    out
}

/// Splits off a leading minus sign for display: real or purely imaginary
/// negatives, and compounds with negative real part.
fn split_sign(c: &Scalar) -> (bool, Scalar) {
    let neg = if c.re().is_zero() { c.im() < &BigRational::zero() } else { c.re() < &BigRational::zero() };
    if neg {
        (true, -c.clone())
    } else {
        (false, c.clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
        }
    }
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<Token>, DslError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = k + 1;
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            // `Q(i)` is a single field token.
            let mut word: String = chars[start..k].iter().collect();
            if word == "Q" && chars[k..].starts_with(&['(', 'i', ')']) {
                word.push_str("(i)");
                k += 3;
            }
            out.push(Token { tok: Tok::Ident(word), col });
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            out.push(Token { tok: Tok::Int(s.parse().expect("digits")), col });
        } else if "+-*/()[],=".contains(c) {
            out.push(Token { tok: Tok::Sym(c), col });
            k += 1;
        } else {
            return Err(DslError::Parse { line: lineno, col, expected: "a token".into(), found: format!("`{c}`") });
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_col: usize,
    field: Option<Field>,
    names: &'a [String],
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.col).unwrap_or(self.end_col)
    }

    fn err<T>(&self, expected: &str) -> Result<T, DslError> {
        let found = match self.peek() {
            Some(t) => t.to_string(),
            None => "end of line".into(),
        };
        Err(DslError::Parse { line: self.line, col: self.col(), expected: expected.into(), found })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), DslError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("`{c}`"))
        }
    }

    fn end(&self) -> Result<(), DslError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            self.err("end of line")
        }
    }

    fn ident(&mut self, expected: &str) -> Result<String, DslError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(expected),
        }
    }

    fn usize(&mut self) -> Result<usize, DslError> {
        match self.peek() {
            Some(Tok::Int(n)) => match usize::try_from(n.clone()) {
                Ok(v) => {
                    self.pos += 1;
                    Ok(v)
                }
                Err(_) => self.err("a small non-negative integer"),
            },
            _ => self.err("a non-negative integer"),
        }
    }

    fn generator(&mut self) -> Result<u8, DslError> {
        match self.peek() {
            Some(Tok::Ident(s)) => match self.names.iter().position(|n| n == s) {
                Some(g) => {
                    self.pos += 1;
                    Ok(g as u8)
                }
                None => self.err("a generator name"),
            },
            _ => self.err("a generator name"),
        }
    }

    fn is_generator(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if self.names.contains(s))
    }

    fn imaginary(&self, col: usize) -> Result<Scalar, DslError> {
        if self.field == Some(Field::Rationals) {
            return Err(DslError::FieldMismatch { line: self.line, col });
        }
        Ok(Scalar::i())
    }

    /// `n`, `n/m`, `n*i`, `n/m*i` or `i`.
    fn atom(&mut self) -> Result<Scalar, DslError> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Ident(s)) if s == "i" => {
                self.pos += 1;
                self.imaginary(col)
            }
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let mut q = BigRational::from_integer(n);
                if self.eat('/') {
                    match self.peek().cloned() {
                        Some(Tok::Int(m)) if !m.is_zero() => {
                            self.pos += 1;
                            q /= BigRational::from_integer(m);
                        }
                        _ => return self.err("a nonzero integer denominator"),
                    }
                }
                if self.peek() == Some(&Tok::Sym('*')) && self.toks.get(self.pos + 1).map(|t| &t.tok) == Some(&Tok::Ident("i".into())) {
                    let icol = self.toks[self.pos + 1].col;
                    self.pos += 2;
                    self.imaginary(icol)?;
                    return Ok(Scalar::new(BigRational::zero(), q));
                }
                Ok(Scalar::new(q, BigRational::zero()))
            }
            _ => self.err("a scalar"),
        }
    }

    /// A signed sum of atoms, as on `p12` lines or inside parentheses.
    fn scalar(&mut self) -> Result<Scalar, DslError> {
        let mut neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        let mut acc = Scalar::zero();
        loop {
            let a = self.atom()?;
            if neg {
                acc -= &a;
            } else {
                acc += &a;
            }
            if self.eat('+') {
                neg = false;
            } else if self.eat('-') {
                neg = true;
            } else {
                return Ok(acc);
            }
        }
    }

    /// Optional coefficient of a term: `(scalar)` or an atom, then an optional `*`.
    fn coefficient(&mut self) -> Result<Option<Scalar>, DslError> {
        let c = if self.eat('(') {
            let s = self.scalar()?;
            self.expect(')')?;
            s
        } else if self.is_generator() {
            return Ok(None);
        } else if matches!(self.peek(), Some(Tok::Ident(s)) if s != "i") {
            return self.err("a generator name");
        } else {
            self.atom()?
        };
        if self.peek() == Some(&Tok::Sym('*')) {
            self.pos += 1;
            if !self.is_generator() {
                return self.err("a generator name");
            }
        }
        Ok(Some(c))
    }

    /// A homogeneous linear combination of words of length `degree`.
    fn expr(&mut self, degree: usize) -> Result<Tensor, DslError> {
        let mut out = Tensor::zero(degree);
        let mut neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        loop {
            let coef = self.coefficient()?;
            let mut c = coef.clone().unwrap_or_else(Scalar::one);
            if neg {
                c = -c;
            }
            if self.is_generator() {
                let start_col = self.col();
                let mut w = vec![self.generator()?];
                loop {
                    if self.eat('*') {
                        w.push(self.generator()?);
                    } else if self.is_generator() {
                        return self.err("`*`");
                    } else {
                        break;
                    }
                }
                if w.len() != degree {
                    return Err(DslError::Parse {
                        line: self.line,
                        col: start_col,
                        expected: format!("a word of length {degree}"),
                        found: format!("a word of length {}", w.len()),
                    });
                }
                out.add_term(w, &c);
            } else if !coef.map(|c| c.is_zero()).unwrap_or(false) {
                return self.err("a generator name");
            }
            if self.eat('+') {
                neg = false;
            } else if self.eat('-') {
                neg = true;
            } else {
                return Ok(out);
            }
        }
    }

    fn bracketed<const N: usize>(&mut self, degree: usize) -> Result<[Tensor; N], DslError> {
        self.expect('[')?;
        let mut v = Vec::with_capacity(N);
        for k in 0..N {
            if k > 0 {
                self.expect(',')?;
            }
            v.push(self.expr(degree)?);
        }
        self.expect(']')?;
        Ok(v.try_into().expect("N entries"))
    }
}

/// Parses the input format into a [`ProblemSpec`].
pub fn parse(text: &str) -> Result<ProblemSpec, DslError> {
    let mut field = None;
    let mut names: Vec<String> = Vec::new();
    let mut relations = Vec::new();
    let mut p12 = None;
    let mut p11 = None;
    let mut sigma: Vec<Option<[[Tensor; 2]; 2]>> = Vec::new();
    let mut nu: Vec<Option<[Tensor; 2]>> = Vec::new();
    let mut degree = None;
    let mut randomized = None;
    let mut last_line = 0;

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokenize(content, line)?;
        if toks.is_empty() {
            continue;
        }
        let names_now = names.clone();
        let mut cur = Cursor { toks: &toks, pos: 0, line, end_col: content.chars().count() + 1, field, names: &names_now };
        let kw = cur.ident("a keyword")?;
        let invalid = |message: String| DslError::Invalid { line, message };
        let needs_gens = |what: &str| {
            if names.is_empty() {
                Err(invalid(format!("`{what}` must come after `gens`")))
            } else {
                Ok(())
            }
        };
        match kw.as_str() {
            "field" => {
                let f = match cur.ident("`Q` or `Q(i)`")?.as_str() {
                    "Q" => Field::Rationals,
                    "Q(i)" => Field::GaussianRationals,
                    _ => {
                        cur.pos -= 1;
                        return cur.err("`Q` or `Q(i)`");
                    }
                };
                cur.end()?;
                if field.is_some() {
                    return Err(invalid("duplicate `field` line".into()));
                }
                field = Some(f);
            }
            "gens" => {
                if field.is_none() {
                    return Err(invalid("`gens` must come after `field`".into()));
                }
                if !names.is_empty() {
                    return Err(invalid("duplicate `gens` line".into()));
                }
                while cur.peek().is_some() {
                    let col = cur.col();
                    let n = cur.ident("a generator name")?;
                    if n == "i" || Y_NAMES.contains(&n.as_str()) {
                        return Err(DslError::Parse { line, col, expected: "a generator name other than i, y1, y2".into(), found: format!("`{n}`") });
                    }
                    if names.contains(&n) {
                        return Err(invalid(format!("duplicate generator `{n}`")));
                    }
                    names.push(n);
                }
                if names.is_empty() {
                    return cur.err("a generator name");
                }
                if names.len() > 200 {
                    return Err(invalid("at most 200 generators are supported".into()));
                }
                sigma = vec![None; names.len()];
                nu = vec![None; names.len()];
            }
            "rel" => {
                needs_gens("rel")?;
                let mut c = Cursor { names: &names, ..cur };
                let r = c.expr(2)?;
                c.end()?;
                relations.push(r);
            }
            "p12" | "p11" => {
                let s = cur.scalar()?;
                cur.end()?;
                let slot = if kw == "p12" { &mut p12 } else { &mut p11 };
                if slot.is_some() {
                    return Err(invalid(format!("duplicate `{kw}` line")));
                }
                *slot = Some(s);
            }
            "sigma" | "nu" => {
                needs_gens(&kw)?;
                let mut c = Cursor { names: &names, ..cur };
                let g = c.generator()? as usize;
                c.expect('=')?;
                if kw == "sigma" {
                    c.expect('[')?;
                    let r0 = c.bracketed::<2>(1)?;
                    c.expect(',')?;
                    let r1 = c.bracketed::<2>(1)?;
                    c.expect(']')?;
                    c.end()?;
                    if sigma[g].replace([r0, r1]).is_some() {
                        return Err(invalid(format!("duplicate `sigma {}`", names[g])));
                    }
                } else {
                    let v = c.bracketed::<2>(2)?;
                    c.end()?;
                    if nu[g].replace(v).is_some() {
                        return Err(invalid(format!("duplicate `nu {}`", names[g])));
                    }
                }
            }
            "degree" | "randomized" => {
                let v = cur.usize()?;
                cur.end()?;
                if kw == "degree" {
                    degree = Some(v);
                } else {
                    randomized = Some(v);
                }
            }
            _ => {
                cur.pos = 0;
                return cur.err("one of field, gens, rel, p12, p11, sigma, nu, degree, randomized");
            }
        }
    }

    let at_end = |message: &str| DslError::Invalid { line: last_line, message: message.into() };
    let field = field.ok_or_else(|| at_end("missing `field` line"))?;
    if names.is_empty() {
        return Err(at_end("missing `gens` line"));
    }
    let p12 = p12.ok_or_else(|| at_end("missing `p12` line"))?;
    let sigma = sigma
        .into_iter()
        .zip(&names)
        .map(|(s, n)| s.ok_or_else(|| at_end(&format!("missing `sigma {n}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let nu = nu.into_iter().map(|v| v.unwrap_or_else(|| [Tensor::zero(2), Tensor::zero(2)])).collect();
    Ok(ProblemSpec {
        field,
        names,
        relations,
        p12,
        p11: p11.unwrap_or_else(Scalar::zero),
        sigma,
        nu,
        degree,
        randomized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX1: &str = "field Q(i)\ngens x1 x2\nrel x2*x1 - i x1*x2\np12 i\np11 0\n\
        sigma x1 = [[0, i x2], [-i x2, 0]]\nsigma x2 = [[0, i x1], [i x1, 0]]\n\
        nu x1 = [0, -i x1*x2]\nnu x2 = [i x1*x2, 0]\n";

    #[test]
    fn parses_example() {
        let s = parse(EX1).unwrap();
        assert_eq!(s.names, vec!["x1", "x2"]);
        assert_eq!(s.sigma[0][0][1], Tensor::term(vec![1], Scalar::i()));
        assert_eq!(s.sigma[0][1][0], Tensor::term(vec![1], -Scalar::i()));
        assert_eq!(s.nu[1][0], Tensor::term(vec![0, 1], Scalar::i()));
        assert_eq!(s.p12, Scalar::i());
    }

    #[test]
    fn round_trip() {
        let s = parse(EX1).unwrap();
        assert_eq!(parse(&s.to_dsl()).unwrap(), s);
    }

    #[test]
    fn scalar_forms() {
        for (txt, re, im) in [("3", 3, 0), ("-2/4", -1, 0), ("i", 0, 1), ("1+2*i", 1, 2), ("1-2*i", 1, -2), ("-3*i", 0, -3)] {
            let s = parse(&format!("field Q(i)\ngens x\np12 {txt}\nsigma x = [[x, 0], [0, x]]\n")).unwrap();
            let want = if txt == "-2/4" { Scalar::from_ratio(-1, 2) } else { Scalar::gaussian(re, im) };
            assert_eq!(s.p12, want, "{txt}");
        }
    }

    #[test]
    fn missing_star_points_at_token() {
        let err = parse("field Q\ngens x1 x2\nrel x2 x1 - 2 x1*x2\n").unwrap_err();
        assert_eq!(err, DslError::Parse { line: 3, col: 8, expected: "`*`".into(), found: "`x1`".into() });
    }

    #[test]
    fn glued_word_is_unknown_generator() {
        let err = parse("field Q\ngens x1 x2\nrel x2x1 - 2 x1*x2\n").unwrap_err();
        match err {
            DslError::Parse { line: 3, col: 5, expected, found } => {
                assert_eq!(expected, "a generator name");
                assert_eq!(found, "`x2x1`");
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn imaginary_under_q_is_rejected() {
        let err = parse("field Q\ngens x1 x2\nrel x2*x1 - i x1*x2\n").unwrap_err();
        assert_eq!(err, DslError::FieldMismatch { line: 3, col: 13 });
    }

    #[test]
    fn zero_entries_and_explicit_star() {
        let s = parse("field Q\ngens x\np12 1\nsigma x = [[2*x, 0], [0, 1/2 x]]\nnu x = [0, 0]\n").unwrap();
        assert_eq!(s.sigma[0][0][0], Tensor::term(vec![0], Scalar::from_int(2)));
        assert_eq!(s.sigma[0][1][1], Tensor::term(vec![0], Scalar::from_ratio(1, 2)));
        assert!(s.nu[0][0].is_zero());
    }
}
