//! Parser for polynomial literals in the manifest grammar `coef*x^e*y^f ± ...`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::{Poly, PolyCtx};

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn next(&mut self) -> Result<Tok> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(Tok::End);
        }
        let c = self.src[self.pos];
        self.pos += 1;
        match c {
            b'+' => Ok(Tok::Plus),
            b'-' => Ok(Tok::Minus),
            b'*' => Ok(Tok::Star),
            b'^' => Ok(Tok::Caret),
            b'/' => Ok(Tok::Slash),
            b'0'..=b'9' => {
                let start = self.pos - 1;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(Tok::Num(s.parse().unwrap()))
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos - 1;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Ok(Tok::Name(
                    std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string(),
                ))
            }
            _ => Err(Error::Parse(format!(
                "unexpected character `{}` at position {}",
                c as char,
                self.pos - 1
            ))),
        }
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    cur: Tok,
    ctx: &'a PolyCtx,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<()> {
        self.cur = self.lexer.next()?;
        Ok(())
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut negate = false;
        if self.cur == Tok::Minus {
            negate = true;
            self.bump()?;
        } else if self.cur == Tok::Plus {
            self.bump()?;
        }
        let mut acc = {
            let t = self.term()?;
            if negate {
                t.neg(self.ctx)
            } else {
                t
            }
        };
        loop {
            match self.cur {
                Tok::Plus => {
                    self.bump()?;
                    let t = self.term()?;
                    acc = acc.add(&t, self.ctx);
                }
                Tok::Minus => {
                    self.bump()?;
                    let t = self.term()?;
                    acc = acc.sub(&t, self.ctx);
                }
                Tok::End => return Ok(acc),
                _ => return Err(Error::Parse(format!("unexpected token {:?}", self.cur))),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.cur == Tok::Star {
            self.bump()?;
            let f = self.factor()?;
            acc = acc.mul(&f, self.ctx);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        match self.cur.clone() {
            Tok::Num(n) => {
                self.bump()?;
                let mut value = BigRational::from_integer(n);
                if self.cur == Tok::Slash {
                    self.bump()?;
                    match self.cur.clone() {
                        Tok::Num(d) => {
                            self.bump()?;
                            value /= BigRational::from_integer(d);
                        }
                        _ => return Err(Error::Parse("expected denominator after `/`".into())),
                    }
                }
                Poly::constant(self.ctx, value)
            }
            Tok::Name(name) => {
                self.bump()?;
                let idx = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or(Error::UnknownVariable(name))?;
                let mut exp = 1u32;
                if self.cur == Tok::Caret {
                    self.bump()?;
                    match self.cur.clone() {
                        Tok::Num(n) => {
                            self.bump()?;
                            exp = n
                                .try_into()
                                .map_err(|_| Error::Parse("exponent too large".into()))?;
                        }
                        _ => return Err(Error::Parse("expected exponent after `^`".into())),
                    }
                }
                let mut m = Monomial::one(self.ctx.nvars);
                m.exps[idx] = exp;
                Poly::from_terms(self.ctx, vec![(m, BigRational::one())])
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse_poly(src: &str, ctx: &PolyCtx, vars: &[String]) -> Result<Poly> {
    let mut lexer = Lexer::new(src);
    let cur = lexer.next()?;
    let mut p = Parser { lexer, cur, ctx, vars };
    p.expr()
}
