//! Expression parsing and canonical rendering.
//!
//! Grammar: `expr := term (('+'|'-') term)*`, `term := unary (('*'|'/') unary)*`,
//! `unary := ('+'|'-') unary | power`, `power := atom ('^' natural)?`,
//! `atom := identifier | integer | '(' expr ')'`. Division is only allowed by
//! nonzero expressions free of main variables.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use super::{AScalar, Coeff, ParamPoly, ParamScalar, Poly, Rat};
use crate::orders::{Exponent, MonomialOrder};

/// Variable and parameter names of a ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Names {
    pub params: Vec<String>,
    pub vars: Vec<String>,
}

impl Names {
    pub fn new<S: AsRef<str>>(params: &[S], vars: &[S]) -> Self {
        Names {
            params: params.iter().map(|s| s.as_ref().to_string()).collect(),
            vars: vars.iter().map(|s| s.as_ref().to_string()).collect(),
        }
    }

    /// Appends a fresh name for the homogenizing variable.
    pub fn with_homogenizer(&self) -> Names {
        let mut name = "z".to_string();
        while self.params.contains(&name) || self.vars.contains(&name) {
            name.push('_');
        }
        let mut out = self.clone();
        out.vars.push(name);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownIdentifier(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {}", match .kind {
    ParseErrorKind::Syntax(m) => format!("syntax error: {m}"),
    ParseErrorKind::UnknownIdentifier(n) => format!("unknown identifier `{n}`"),
})]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Lexed, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    let err = |m: String, at: usize| ParseError {
        kind: ParseErrorKind::Syntax(m),
        line,
        col: col0 + at,
    };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\r' => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push((Tok::Int(s.parse().expect("digits")), start));
                continue;
            }
            a if a.is_alphabetic() || a == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), start));
                continue;
            }
            other => return Err(err(format!("unexpected character `{other}`"), start)),
        };
        toks.push((tok, start));
        i += 1;
    }
    Ok(Lexed {
        toks,
        end: chars.len(),
    })
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    names: &'a Names,
    line: usize,
    col0: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.col0 + self.toks.get(self.pos).map_or(self.end, |(_, c)| *c)
    }

    fn syntax(&self, m: impl Into<String>) -> ParseError {
        ParseError {
            kind: ParseErrorKind::Syntax(m.into()),
            line: self.line,
            col: self.here(),
        }
    }

    fn nvars(&self) -> usize {
        self.names.vars.len()
    }

    fn expr(&mut self) -> Result<ParamPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ParamPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.here();
                    let d = self.unary()?;
                    let bad = |m: &str| ParseError {
                        kind: ParseErrorKind::Syntax(m.to_string()),
                        line: self.line,
                        col: at,
                    };
                    if d.is_zero() {
                        return Err(bad("division by zero"));
                    }
                    if !d.is_x_free() {
                        return Err(bad("divisor must not involve main variables"));
                    }
                    let (_, c) = d.terms().next().expect("nonzero");
                    acc = acc.scale(&c.inverse());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<ParamPoly, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<ParamPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let k = match self.peek() {
            Some(Tok::Int(k)) => k.clone(),
            _ => return Err(self.syntax("expected a natural exponent after `^`")),
        };
        let k: u32 = k
            .try_into()
            .map_err(|_| self.syntax("exponent too large"))?;
        self.pos += 1;
        let mut out = Poly::one(self.nvars());
        for _ in 0..k {
            out = out.mul(&base);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<ParamPoly, ParseError> {
        let n = self.nvars();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Poly::constant(n, ParamScalar::from_rat(Rat::from_integer(v))))
            }
            Some(Tok::Ident(name)) => {
                let col = self.here();
                self.pos += 1;
                if let Some(i) = self.names.vars.iter().position(|v| *v == name) {
                    Ok(Poly::var(n, i))
                } else if let Some(i) = self.names.params.iter().position(|v| *v == name) {
                    Ok(Poly::constant(n, ParamScalar::from_poly(AScalar::var(i))))
                } else {
                    Err(ParseError {
                        kind: ParseErrorKind::UnknownIdentifier(name),
                        line: self.line,
                        col,
                    })
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.syntax("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(t) => Err(self.syntax(format!("unexpected token {t:?}"))),
            None => Err(self.syntax("unexpected end of expression")),
        }
    }
}

/// Parses an expression; `line` and `col` locate its first character in
/// the enclosing document for error reporting (1-based).
pub fn parse_poly_at(src: &str, names: &Names, line: usize, col: usize) -> Result<ParamPoly, ParseError> {
    let Lexed { toks, end } = lex(src, line, col)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        names,
        line,
        col0: col,
    };
    if p.peek().is_none() {
        return Err(p.syntax("empty expression"));
    }
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(p.syntax("trailing input"));
    }
    Ok(out)
}

pub fn parse_poly(src: &str, names: &Names) -> Result<ParamPoly, ParseError> {
    parse_poly_at(src, names, 1, 1)
}

/// Parses an expression that must be a parameter polynomial.
pub fn parse_scalar_at(src: &str, names: &Names, line: usize, col: usize) -> Result<AScalar, ParseError> {
    let p = parse_poly_at(src, names, line, col)?;
    let syntax = |m: &str| ParseError {
        kind: ParseErrorKind::Syntax(m.to_string()),
        line,
        col,
    };
    if !p.is_x_free() {
        return Err(syntax("expected an expression in the parameters only"));
    }
    let out = match p.terms().next() {
        None => Ok(AScalar::zero()),
        Some((_, c)) if c.is_polynomial() => Ok(c.num().clone()),
        Some(_) => Err(syntax("expected a polynomial in the parameters")),
    };
    out
}

fn render_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn render_power(out: &mut String, name: &str, k: u32) {
    out.push_str(name);
    if k > 1 {
        let _ = write!(out, "^{k}");
    }
}

fn render_monomial(e: &[u32], names: &[String]) -> String {
    let mut out = String::new();
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('*');
        }
        render_power(&mut out, &names[i], k);
    }
    out
}

/// `|c| * m`, with unit coefficients and empty monomials elided.
fn render_abs_term(c: &Rat, mono: &str) -> String {
    let mag = c.abs();
    match (One::is_one(&mag), mono.is_empty()) {
        (_, true) => render_rat(&mag),
        (true, false) => mono.to_string(),
        (false, false) => format!("{}*{}", render_rat(&mag), mono),
    }
}

/// Renders a parameter polynomial in graded-lex descending order.
pub fn render_scalar(s: &AScalar, names: &Names) -> String {
    let terms = s.display_terms();
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (e, c)) in terms.into_iter().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&render_abs_term(c, &render_monomial(e, &names.params)));
    }
    out
}

fn is_single_power(s: &AScalar) -> bool {
    match s.terms().collect::<Vec<_>>().as_slice() {
        [(e, c)] => One::is_one(*c) && e.iter().filter(|&&k| k > 0).count() == 1,
        _ => false,
    }
}

fn first_is_negative(s: &AScalar) -> bool {
    s.display_terms()
        .first()
        .is_some_and(|(_, c)| c.is_negative())
}

/// Renders one coefficient times one monomial, without its sign; returns
/// whether the term is negative.
fn render_term(c: &ParamScalar, mono: &str, names: &Names) -> (bool, String) {
    let c = c.canonical();
    let (mut num, den) = c.into_parts();
    let neg = first_is_negative(&num);
    if neg {
        num = num.negated();
    }
    let attach = |body: String| {
        if mono.is_empty() {
            body
        } else {
            format!("{body}*{mono}")
        }
    };
    let body = if den.is_one() {
        if num.len() == 1 {
            let (e, r) = num.terms().next().expect("one term");
            let pm = render_monomial(e, &names.params);
            let joined = match (pm.is_empty(), mono.is_empty()) {
                (true, _) => mono.to_string(),
                (false, true) => pm,
                (false, false) => format!("{pm}*{mono}"),
            };
            return (neg, render_abs_term(r, &joined));
        }
        attach(format!("({})", render_scalar(&num, names)))
    } else {
        let n = if num.len() == 1 {
            render_scalar(&num, names)
        } else {
            format!("({})", render_scalar(&num, names))
        };
        let d = if is_single_power(&den) {
            render_scalar(&den, names)
        } else {
            format!("({})", render_scalar(&den, names))
        };
        attach(format!("({n}/{d})"))
    };
    (neg, body)
}

/// Canonical text: terms in decreasing order under `order`, coefficients
/// fully reduced.
pub fn render_poly(p: &ParamPoly, names: &Names, order: &MonomialOrder) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (e, c)) in p.sorted_terms(order).into_iter().enumerate() {
        let mono = render_monomial(e, &names.vars);
        let (neg, body) = render_term(c, &mono, names);
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

pub fn render_qpoly(p: &Poly<Rat>, names: &Names, order: &MonomialOrder) -> String {
    render_poly(&p.to_param(), names, order)
}

/// Renders an exponent vector as a monomial, `1` for the origin.
pub fn render_exponent(e: &Exponent, names: &Names) -> String {
    let m = render_monomial(e, &names.vars);
    if m.is_empty() {
        "1".to_string()
    } else {
        m
    }
}
