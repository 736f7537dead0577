//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := factor (("*" | "/") factor)*
//! factor  := "-" factor | primary ("^" integer)?
//! primary := number | "i" | "t" | ident "(" expr ")" | "(" expr ")"
//! ident   := exp | log | sqrt | sin | cos | sinh | cosh
//! ```
//!
//! Whitespace-insensitive; errors carry the byte offset of the offending
//! token.

use std::sync::Arc;

use num_complex::Complex64;

use super::ast::{Func, HoloExpr};
use crate::error::{Error, Result};

pub fn parse_expr(text: &str) -> Result<HoloExpr> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<HoloExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = HoloExpr::Add(Arc::new(lhs), Arc::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = HoloExpr::Sub(Arc::new(lhs), Arc::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<HoloExpr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = HoloExpr::Mul(Arc::new(lhs), Arc::new(self.factor()?));
            } else if self.eat(b'/') {
                lhs = HoloExpr::Div(Arc::new(lhs), Arc::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<HoloExpr> {
        if self.eat(b'-') {
            return Ok(HoloExpr::Neg(Arc::new(self.factor()?)));
        }
        let base = self.primary()?;
        if self.eat(b'^') {
            let n = self.integer()?;
            return Ok(HoloExpr::Pow(Arc::new(base), n));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i32> {
        let start = self.pos;
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.err("expected integer exponent"));
        }
        // a fractional exponent is a distinct, more helpful error
        if self.peek() == Some(b'.') {
            return Err(Error::NonIntegerExponent { offset: start });
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        let n: i32 = text
            .parse()
            .map_err(|_| Error::NonIntegerExponent { offset: start })?;
        self.skip_ws();
        Ok(n)
    }

    fn primary(&mut self) -> Result<HoloExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                self.skip_ws();
                match name {
                    "i" => Ok(HoloExpr::I),
                    "t" => Ok(HoloExpr::Var),
                    _ => {
                        if self.peek() != Some(b'(') {
                            self.pos = start;
                            return Err(self.err("expected function call or `i`/`t`"));
                        }
                        let func = Func::from_name(name)
                            .ok_or_else(|| Error::UnknownFunction(name.to_string()))?;
                        self.pos += 1;
                        self.skip_ws();
                        let arg = self.expr()?;
                        if !self.eat(b')') {
                            return Err(self.err("expected `)`"));
                        }
                        Ok(HoloExpr::Apply(func, Arc::new(arg)))
                    }
                }
            }
            _ => Err(self.err("expected a number, `i`, `t`, function call or `(`")),
        }
    }

    fn number(&mut self) -> Result<HoloExpr> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        // optional exponent part, e.g. 2.5e-3
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            let ds = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == ds {
                // not an exponent after all (e.g. `2*exp(t)`)
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        let value: f64 = text.parse().map_err(|_| {
            let e = Parser {
                bytes: self.bytes,
                pos: start,
            };
            e.err("malformed number")
        })?;
        self.skip_ws();
        Ok(HoloExpr::Lit(Complex64::new(value, 0.0)))
    }
}
