//! Parser for the canonical expression grammar: rational literals, chart
//! symbols, `+ - * / ^` with nonnegative integer exponents, parentheses.
//! Whitespace-insensitive; `^` binds tighter than unary minus.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::scalar::Rat;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn error(&self, msg: &str) -> Error {
        Error::ParseError { line: self.line, col: self.col, msg: msg.into() }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>> {
        let mut out = Vec::new();
        loop {
            while let Some(&c) = self.src.get(self.pos) {
                if c.is_ascii_whitespace() {
                    self.bump();
                } else {
                    break;
                }
            }
            let (line, col) = (self.line, self.col);
            let Some(&c) = self.src.get(self.pos) else { break };
            let tok = match c {
                b'+' => {
                    self.bump();
                    Tok::Plus
                }
                b'-' => {
                    self.bump();
                    Tok::Minus
                }
                b'*' => {
                    self.bump();
                    Tok::Star
                }
                b'/' => {
                    self.bump();
                    Tok::Slash
                }
                b'^' => {
                    self.bump();
                    Tok::Caret
                }
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b'0'..=b'9' => {
                    let start = self.pos;
                    while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                        self.bump();
                    }
                    let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    Tok::Int(s.parse().map_err(|_| self.error("bad integer"))?)
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    while self
                        .src
                        .get(self.pos)
                        .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                    {
                        self.bump();
                    }
                    Tok::Ident(std::str::from_utf8(&self.src[start..self.pos]).unwrap().into())
                }
                _ => return Err(self.error(&format!("unexpected character `{}`", c as char))),
            };
            out.push((tok, line, col));
        }
        Ok(out)
    }
}

struct Parser<'c> {
    chart: &'c Arc<Chart>,
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl<'c> Parser<'c> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or((1, 1))
    }

    fn error(&self, msg: &str) -> Error {
        let (line, col) = self.here();
        Error::ParseError { line, col, msg: msg.into() }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(x) if x == t => Ok(()),
            _ => Err(self.error(&format!("expected {t:?}"))),
        }
    }

    // sum := product (('+'|'-') product)*
    fn sum(&mut self) -> Result<Expr> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    acc = acc.add(&self.product()?);
                }
                Some(Tok::Minus) => {
                    self.next();
                    acc = acc.sub(&self.product()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    // product := unary (('*'|'/') unary)*
    fn product(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.next();
                    let rhs = self.unary()?;
                    acc = acc.div(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> Result<Expr> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.next();
            Ok(self.unary()?.neg())
        } else {
            self.power()
        }
    }

    // power := atom ('^' nonneg-int)*
    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.next();
            match self.next() {
                Some(Tok::Int(k)) => {
                    let k: u32 = k
                        .try_into()
                        .map_err(|_| self.error("exponent out of range"))?;
                    let mut acc = base.pow(k as i64).expect("nonnegative power");
                    // allow chained ^ by treating a^b^c as error-free left fold
                    while matches!(self.peek(), Some(Tok::Caret)) {
                        self.next();
                        match self.next() {
                            Some(Tok::Int(k2)) => {
                                let k2: u32 = k2
                                    .try_into()
                                    .map_err(|_| self.error("exponent out of range"))?;
                                acc = acc.pow(k2 as i64).expect("nonnegative power");
                            }
                            _ => return Err(self.error("exponent must be a nonnegative integer")),
                        }
                    }
                    Ok(acc)
                }
                _ => Err(self.error("exponent must be a nonnegative integer")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(Expr::constant(self.chart, Rat::from_integer(n))),
            Some(Tok::Ident(name)) => {
                self.chart
                    .lookup(&name)
                    .map(|sym| Expr::symbol(self.chart, sym))
                    .ok_or(Error::UnknownSymbol(name))
            }
            Some(Tok::LParen) => {
                let e = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => Err(self.error("expected a literal, symbol, or parenthesis")),
        }
    }
}

/// Parse an expression against a chart.
pub fn parse_expr(chart: &Arc<Chart>, src: &str) -> Result<Expr> {
    let toks = Lexer::new(src).tokens()?;
    let mut p = Parser { chart, toks, pos: 0 };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::plain_chart;

    #[test]
    fn round_trip() {
        let chart = plain_chart(2, &["x1", "x2"]).unwrap();
        let e = parse_expr(&chart, "(x1^2 - 1) / (x1 - 1)").unwrap();
        assert_eq!(e.to_canonical_string(), "x1 + 1");
        let e2 = parse_expr(&chart, "3/5*u1*x2 - u2^2").unwrap();
        let s = e2.to_canonical_string();
        let e3 = parse_expr(&chart, &s).unwrap();
        assert_eq!(e2, e3);
    }

    #[test]
    fn negative_exponent_rejected() {
        let chart = plain_chart(1, &["x1"]).unwrap();
        assert!(matches!(
            parse_expr(&chart, "x1^-2"),
            Err(Error::ParseError { .. })
        ));
    }

    #[test]
    fn unknown_symbol() {
        let chart = plain_chart(1, &["x1"]).unwrap();
        assert!(matches!(parse_expr(&chart, "x1 + zz"), Err(Error::UnknownSymbol(_))));
    }
}
