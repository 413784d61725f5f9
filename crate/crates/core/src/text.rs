//! Text syntax for rationals, elements and polynomials.
//!
//! Elements use either the literal form `1/2 - 3i + k` (signed rational
//! coefficients on basis names) or a plain coordinate list `c0,c1,...`.
//! Polynomials extend the literal form with variables and `*`, e.g.
//! `-1/2 i*x1*j + x2`; juxtaposition also multiplies.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{Algebra, Element};
use crate::calculus::poly::NCPoly;
use crate::rational::{fmt_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {0:?} at {1}")]
    BadChar(char, usize),
    #[error("unknown name {0:?}")]
    UnknownName(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token at {0}")]
    UnexpectedToken(usize),
    #[error("bad rational {0:?}")]
    BadRational(String),
    #[error("expected {expected} coordinates, got {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("expected a constant, found a polynomial in variables")]
    NotConstant,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Open,
    Close,
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            // a slash directly followed by digits continues the number
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let q = parse_rational(&text).ok_or(ParseError::BadRational(text))?;
            out.push((Tok::Num(q), start));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '(' => Tok::Open,
            ')' => Tok::Close,
            _ => return Err(ParseError::BadChar(c, i)),
        };
        out.push((t, start));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    alg: &'a Arc<Algebra>,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(usize::MAX, |t| t.1)
    }

    fn expr(&mut self) -> Result<NCPoly, ParseError> {
        let n = self.vars.len();
        let mut acc = NCPoly::zero(self.alg, n);
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if negate { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<NCPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Open) => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<NCPoly, ParseError> {
        let n = self.vars.len();
        let at = self.here();
        let tok = self.peek().cloned().ok_or(ParseError::UnexpectedEnd)?;
        self.pos += 1;
        match tok {
            Tok::Num(q) => Ok(NCPoly::constant(&self.alg.scalar(q), n)),
            Tok::Ident(name) => {
                if let Some(v) = self.vars.iter().position(|x| *x == name) {
                    return Ok(NCPoly::var(self.alg, n, v));
                }
                match self.alg.basis_names().iter().position(|x| *x == name) {
                    Some(b) => Ok(NCPoly::constant(&self.alg.basis(b), n)),
                    None => Err(ParseError::UnknownName(name)),
                }
            }
            Tok::Open => {
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::Close) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    None => Err(ParseError::UnexpectedEnd),
                    _ => Err(ParseError::UnexpectedToken(self.here())),
                }
            }
            _ => Err(ParseError::UnexpectedToken(at)),
        }
    }
}

/// Parse a polynomial whose variables are named by `vars` (in index order).
pub fn parse_poly(s: &str, alg: &Arc<Algebra>, vars: &[String]) -> Result<NCPoly, ParseError> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(ParseError::UnexpectedEnd);
    }
    let mut p = Parser { toks, pos: 0, alg, vars };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ParseError::UnexpectedToken(p.here()));
    }
    Ok(out)
}

/// Parse an element, either as a literal or as a comma-separated coordinate list.
pub fn parse_element(s: &str, alg: &Arc<Algebra>) -> Result<Element, ParseError> {
    if s.contains(',') {
        let coords: Vec<Rational> = s
            .split(',')
            .map(|c| parse_rational(c).ok_or_else(|| ParseError::BadRational(c.trim().to_string())))
            .collect::<Result<_, _>>()?;
        return alg.element(coords.clone()).map_err(|_| ParseError::WrongLength {
            expected: alg.dim(),
            found: coords.len(),
        });
    }
    let p = parse_poly(s, alg, &[])?;
    constant_of(&p).ok_or(ParseError::NotConstant)
}

/// The constant value of a polynomial without variables.
pub fn constant_of(p: &NCPoly) -> Option<Element> {
    let alg = p.algebra();
    let mut coords = vec![Rational::zero(); alg.dim()];
    for (m, q) in p.terms() {
        if !m.vars.is_empty() {
            return None;
        }
        coords[m.basis[0]] += q;
    }
    alg.element(coords).ok()
}

fn is_unit_basis(alg: &Algebra, b: usize) -> bool {
    alg.unit_index() == Some(b)
}

fn signed_terms(parts: Vec<(bool, String)>) -> String {
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (neg, body)) in parts.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

fn coefficient_prefix(q: &Rational, chain: &str) -> String {
    let a = q.abs();
    if chain.is_empty() {
        fmt_rational(&a)
    } else if a.is_one() {
        chain.to_string()
    } else if a.is_integer() && !chain.contains('*') {
        format!("{}{}", fmt_rational(&a), chain)
    } else {
        format!("{} {}", fmt_rational(&a), chain)
    }
}

/// Literal form `1/2 - 3i + k`.
pub fn format_literal(e: &Element) -> String {
    let alg = e.algebra();
    let parts = e
        .coords()
        .iter()
        .enumerate()
        .filter(|(_, q)| !q.is_zero())
        .map(|(b, q)| {
            let chain = if is_unit_basis(alg, b) { String::new() } else { alg.basis_names()[b].clone() };
            (q.is_negative(), coefficient_prefix(q, &chain))
        })
        .collect();
    signed_terms(parts)
}

/// Coordinate list `c0,c1,...`.
pub fn format_coords(e: &Element) -> String {
    e.coords().iter().map(fmt_rational).collect::<Vec<_>>().join(",")
}

/// Canonical printed form: literal syntax for the built-in quaternions,
/// coordinate lists otherwise.
pub fn format_element(e: &Element) -> String {
    if e.algebra().label() == Some("quaternion") {
        format_literal(e)
    } else {
        format_coords(e)
    }
}

pub fn format_poly(p: &NCPoly, names: &[String]) -> String {
    let alg = p.algebra();
    let parts = p
        .terms()
        .map(|(m, q)| {
            let mut chain: Vec<String> = Vec::new();
            for (pos, &b) in m.basis.iter().enumerate() {
                if !is_unit_basis(alg, b) {
                    chain.push(alg.basis_names()[b].clone());
                }
                if let Some(&v) = m.vars.get(pos) {
                    chain.push(names[v].clone());
                }
            }
            (q.is_negative(), coefficient_prefix(q, &chain.join("*")))
        })
        .collect();
    signed_terms(parts)
}
