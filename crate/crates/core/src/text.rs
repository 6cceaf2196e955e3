//! Text forms of quaternions and polynomials.
//!
//! Expressions use `z`, `i`, `j`, `k`, numbers (`3`, `0.25`, `1e-3`, `2/3`),
//! `+`, `-`, `*`, integer powers `^n` and parentheses. A number written
//! directly against a unit or `z` (`2i`, `3z`) is one literal. The only other
//! implicit product is `)(`. Besides expressions, `coeffs=[c0, c1, ...]`
//! (ascending) and `{"coeffs": ["c0", ...]}` are accepted for polynomials.

use crate::error::{Error, Result};
use crate::poly::QPoly;
use crate::quat::Quaternion;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(String),
    Unit(char),
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < chars.len() {
        let c = chars[pos];
        match c {
            c if c.is_whitespace() => pos += 1,
            '0'..='9' | '.' => {
                let start = pos;
                let digits = |pos: &mut usize| {
                    while *pos < chars.len() && (chars[*pos].is_ascii_digit() || chars[*pos] == '.') {
                        *pos += 1;
                    }
                };
                digits(&mut pos);
                if pos < chars.len() && (chars[pos] == 'e' || chars[pos] == 'E') {
                    let mut look = pos + 1;
                    if look < chars.len() && (chars[look] == '+' || chars[look] == '-') {
                        look += 1;
                    }
                    if look < chars.len() && chars[look].is_ascii_digit() {
                        pos = look;
                        digits(&mut pos);
                    }
                }
                if pos + 1 < chars.len() && chars[pos] == '/' && chars[pos + 1].is_ascii_digit() {
                    pos += 1;
                    digits(&mut pos);
                }
                out.push(Token::Num(chars[start..pos].iter().collect()));
                // `2i`, `3z`: a coefficient glued to a unit.
                if pos < chars.len() && matches!(chars[pos], 'i' | 'j' | 'k' | 'z') {
                    out.push(Token::Star);
                }
            }
            'i' | 'j' | 'k' | 'z' => {
                out.push(Token::Unit(c));
                pos += 1;
            }
            '+' => {
                out.push(Token::Plus);
                pos += 1;
            }
            '-' | '\u{2212}' => {
                out.push(Token::Minus);
                pos += 1;
            }
            '*' => {
                out.push(Token::Star);
                pos += 1;
            }
            '^' => {
                out.push(Token::Caret);
                pos += 1;
            }
            '(' => {
                if out.last() == Some(&Token::Close) {
                    out.push(Token::Star);
                }
                out.push(Token::Open);
                pos += 1;
            }
            ')' => {
                out.push(Token::Close);
                pos += 1;
            }
            other => return Err(parse_err(format!("unexpected character '{other}' at {pos}"))),
        }
    }
    Ok(out)
}

struct Parser<S> {
    tokens: Vec<Token>,
    pos: usize,
    _scalar: std::marker::PhantomData<S>,
}

impl<S: Scalar> Parser<S> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<QPoly<S>> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QPoly<S>> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<QPoly<S>> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<QPoly<S>> {
        let base = self.atom()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        match self.next() {
            Some(Token::Num(n)) => {
                let e: usize = n.parse().map_err(|_| parse_err(format!("exponent '{n}' is not a nonnegative integer")))?;
                Ok(base.pow(e))
            }
            other => Err(parse_err(format!("expected an integer exponent, found {other:?}"))),
        }
    }

    fn atom(&mut self) -> Result<QPoly<S>> {
        match self.next() {
            Some(Token::Num(n)) => {
                let v = S::parse_literal(&n).ok_or_else(|| parse_err(format!("bad number '{n}'")))?;
                Ok(QPoly::constant(Quaternion::real(v)))
            }
            Some(Token::Unit('z')) => Ok(QPoly::z()),
            Some(Token::Unit('i')) => Ok(QPoly::constant(Quaternion::unit_i())),
            Some(Token::Unit('j')) => Ok(QPoly::constant(Quaternion::unit_j())),
            Some(Token::Unit('k')) => Ok(QPoly::constant(Quaternion::unit_k())),
            Some(Token::Open) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::Close) => Ok(inner),
                    _ => Err(parse_err("missing ')'")),
                }
            }
            Some(other) => Err(parse_err(format!("unexpected token {other:?}"))),
            None => Err(parse_err("unexpected end of input")),
        }
    }
}

/// Parses an expression in `z` with quaternion constants.
pub fn parse_expr<S: Scalar>(src: &str) -> Result<QPoly<S>> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(parse_err("empty input"));
    }
    let mut p = Parser { tokens, pos: 0, _scalar: std::marker::PhantomData };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(parse_err(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}

/// Parses a quaternion literal such as `1/2 - 3*i + 0.5*k`.
pub fn parse_quaternion<S: Scalar>(src: &str) -> Result<Quaternion<S>> {
    let p = parse_expr::<S>(src)?;
    match p.degree() {
        None => Ok(Quaternion::zero()),
        Some(0) => Ok(p.coeff(0)),
        Some(_) => Err(parse_err(format!("'{src}' is not a constant quaternion"))),
    }
}

/// Parses any of the polynomial forms: an expression, `coeffs=[...]`, or
/// a JSON object with a `coeffs` list of quaternion strings.
pub fn parse_poly<S: Scalar>(src: &str) -> Result<QPoly<S>> {
    let t = src.trim();
    if let Some(rest) = t.strip_prefix("coeffs") {
        let rest = rest.trim_start();
        if let Some(list) = rest.strip_prefix('=') {
            return parse_coeff_list(list.trim());
        }
    }
    if t.starts_with('{') {
        let body = t.strip_prefix('{').and_then(|b| b.strip_suffix('}')).ok_or_else(|| parse_err("unbalanced '{'"))?;
        let (key, list) = body.split_once(':').ok_or_else(|| parse_err("expected \"coeffs\": [...]"))?;
        if key.trim() != "\"coeffs\"" {
            return Err(parse_err("expected the key \"coeffs\""));
        }
        return parse_coeff_list(list.trim());
    }
    parse_expr(t)
}

fn parse_coeff_list<S: Scalar>(list: &str) -> Result<QPoly<S>> {
    let inner = list.strip_prefix('[').and_then(|b| b.strip_suffix(']')).ok_or_else(|| parse_err("expected [ ... ]"))?;
    if inner.trim().is_empty() {
        return Ok(QPoly::zero());
    }
    let coeffs = inner
        .split(',')
        .map(|c| parse_quaternion::<S>(c.trim().trim_matches('"')))
        .collect::<Result<Vec<_>>>()?;
    Ok(QPoly::new(coeffs))
}

/// Expression form, e.g. `z^2 + z*(-1*j - 2*k) + (2*i)`.
pub fn format_poly<S: Scalar>(p: &QPoly<S>) -> String {
    p.to_string()
}

/// `coeffs=[c0, c1, ...]`, ascending.
pub fn format_coeffs<S: Scalar>(p: &QPoly<S>) -> String {
    let parts: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
    format!("coeffs=[{}]", parts.join(", "))
}

pub fn format_quaternion<S: Scalar>(q: &Quaternion<S>) -> String {
    q.to_string()
}
