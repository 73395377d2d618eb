//! Text syntax for polynomials: terms joined by + and -, a term is an
//! optional rational coefficient and ^-powered variables joined by *.
//! Examples: `3/2*x^2*y - u^-1`, `x^2 + y^3 + z^5`, `-1/3`.
//!
//! The printer in the ring module emits exactly this syntax, and parsing a
//! printed element gives back the identical element.

use crate::arith::{int, Rat};
use crate::error::{Error, Result};
use num_traits::Zero;

/// One parsed term: rational coefficient and (variable name, exponent) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTerm {
    pub coeff: Rat,
    pub powers: Vec<(String, i64)>,
}

pub fn parse_polynomial(text: &str) -> Result<Vec<RawTerm>> {
    let mut lx = Lexer::new(text);
    let mut terms = Vec::new();
    let mut sign = match lx.peek()? {
        Some(Tok::Minus) => {
            lx.next()?;
            -1
        }
        Some(Tok::Plus) => {
            lx.next()?;
            1
        }
        _ => 1,
    };
    loop {
        let mut term = parse_term(&mut lx)?;
        if sign < 0 {
            term.coeff = -term.coeff;
        }
        terms.push(term);
        match lx.peek()? {
            None => break,
            Some(Tok::Plus) => {
                lx.next()?;
                sign = 1;
            }
            Some(Tok::Minus) => {
                lx.next()?;
                sign = -1;
            }
            Some(_) => return Err(lx.err("expected + or - between terms")),
        }
    }
    Ok(terms)
}

fn parse_term(lx: &mut Lexer) -> Result<RawTerm> {
    let mut coeff = Rat::from_integer(int(1));
    let mut powers = Vec::new();
    let mut first = true;
    loop {
        match lx.peek()? {
            Some(Tok::Int(_)) if first => {
                let n = lx.take_int()?;
                let mut q = int(1);
                if matches!(lx.peek()?, Some(Tok::Slash)) {
                    lx.next()?;
                    q = lx.take_int()?;
                    if q.is_zero() {
                        return Err(lx.err("zero denominator"));
                    }
                }
                coeff = Rat::new(n, q);
            }
            Some(Tok::Ident(_)) => {
                let name = lx.take_ident()?;
                let mut exp = 1i64;
                if matches!(lx.peek()?, Some(Tok::Caret)) {
                    lx.next()?;
                    let mut neg = false;
                    if matches!(lx.peek()?, Some(Tok::Minus)) {
                        lx.next()?;
                        neg = true;
                    }
                    let e = lx.take_int()?;
                    exp = i64::try_from(e).map_err(|_| lx.err("exponent too large"))?;
                    if neg {
                        exp = -exp;
                    }
                }
                powers.push((name, exp));
            }
            _ => return Err(lx.err("expected a coefficient or variable")),
        }
        first = false;
        if matches!(lx.peek()?, Some(Tok::Star)) {
            lx.next()?;
        } else {
            break;
        }
    }
    Ok(RawTerm { coeff, powers })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(num_bigint::BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    peeked: Option<(Tok, usize)>,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, bytes: src.as_bytes(), pos: 0, peeked: None }
    }

    fn err(&self, msg: &str) -> Error {
        let upto = &self.src[..self.pos.min(self.src.len())];
        let line = upto.matches('\n').count() + 1;
        let col = upto.rsplit('\n').next().map(|s| s.chars().count()).unwrap_or(0) + 1;
        Error::Parse { line, col, msg: msg.to_string() }
    }

    fn lex(&mut self) -> Result<Option<(Tok, usize)>> {
        let b = self.bytes;
        let mut i = self.pos;
        while i < b.len() && (b[i] as char).is_whitespace() {
            i += 1;
        }
        if i >= b.len() {
            self.pos = i;
            return Ok(None);
        }
        let start = i;
        let tok = match b[i] as char {
            '+' => {
                i += 1;
                Tok::Plus
            }
            '-' => {
                i += 1;
                Tok::Minus
            }
            '*' => {
                i += 1;
                Tok::Star
            }
            '/' => {
                i += 1;
                Tok::Slash
            }
            '^' => {
                i += 1;
                Tok::Caret
            }
            c if c.is_ascii_digit() => {
                while i < b.len() && (b[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let n: num_bigint::BigInt = self.src[start..i].parse().expect("digits");
                Tok::Int(n)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                Tok::Ident(self.src[start..i].to_string())
            }
            c => {
                self.pos = start;
                return Err(self.err(&format!("unexpected character {c:?}")));
            }
        };
        Ok(Some((tok, i)))
    }

    fn peek(&mut self) -> Result<Option<Tok>> {
        if self.peeked.is_none() {
            self.peeked = self.lex()?;
        }
        Ok(self.peeked.as_ref().map(|(t, _)| t.clone()))
    }

    fn next(&mut self) -> Result<Option<Tok>> {
        if self.peeked.is_none() {
            self.peeked = self.lex()?;
        }
        match self.peeked.take() {
            Some((t, end)) => {
                self.pos = end;
                Ok(Some(t))
            }
            None => Ok(None),
        }
    }

    fn take_int(&mut self) -> Result<num_bigint::BigInt> {
        match self.next()? {
            Some(Tok::Int(n)) => Ok(n),
            _ => Err(self.err("expected an integer")),
        }
    }

    fn take_ident(&mut self) -> Result<String> {
        match self.next()? {
            Some(Tok::Ident(s)) => Ok(s),
            _ => Err(self.err("expected a variable name")),
        }
    }
}
