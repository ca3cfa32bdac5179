//! Reader for the ASCII form produced by [`RatFunc::to_ascii`].
//!
//! Grammar:
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' integer)?
//! atom   := integer | variable | '(' expr ')'
//! ```
//! Variables are `z<i>`, `y<i>`, `s<i>`, `x<i>_<j>` and `N`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::poly::Var;
use super::{RatFunc, SymbolicError};

pub fn parse(input: &str) -> Result<RatFunc, SymbolicError> {
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> SymbolicError {
        SymbolicError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFunc, SymbolicError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc, SymbolicError> {
        let mut acc = RatFunc::one();
        for (f, divide) in self.term_parts()? {
            acc = if divide { acc.checked_div(&f)? } else { &acc * &f };
        }
        Ok(acc)
    }

    /// Factors of a product, each flagged when it divides. Divisors are kept
    /// apart so that `1/(a*b)` keeps `a` and `b` as separate denominator factors.
    fn term_parts(&mut self) -> Result<Vec<(RatFunc, bool)>, SymbolicError> {
        let mut parts = vec![(self.factor()?, false)];
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    parts.push((self.factor()?, false));
                }
                b'/' => {
                    self.pos += 1;
                    for (f, d) in self.divisor()? {
                        parts.push((f, !d));
                    }
                }
                _ => break,
            }
        }
        Ok(parts)
    }

    fn divisor(&mut self) -> Result<Vec<(RatFunc, bool)>, SymbolicError> {
        let start = self.pos;
        if self.peek() == Some(b'(') {
            self.pos += 1;
            if let Ok(parts) = self.term_parts() {
                if self.peek() == Some(b')') {
                    self.pos += 1;
                    if self.peek() != Some(b'^') {
                        return Ok(parts);
                    }
                }
            }
            self.pos = start;
        }
        Ok(vec![(self.factor()?, false)])
    }

    fn factor(&mut self) -> Result<RatFunc, SymbolicError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.factor()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc, SymbolicError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: i32 = e
                .try_into()
                .map_err(|_| self.err("exponent out of range"))?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, SymbolicError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        s.parse::<BigInt>().map_err(|_| self.err("bad integer"))
    }

    fn index(&mut self) -> Result<u16, SymbolicError> {
        let i = self.integer()?;
        u16::try_from(i).map_err(|_| self.err("index out of range"))
    }

    fn atom(&mut self) -> Result<RatFunc, SymbolicError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RatFunc::constant(BigRational::from_integer(n)))
            }
            Some(b'N') => {
                self.pos += 1;
                Ok(RatFunc::var(Var::N))
            }
            Some(c @ (b'z' | b'y' | b's')) => {
                self.pos += 1;
                let i = self.index()?;
                let v = match c {
                    b'z' => Var::Z(i),
                    b'y' => Var::Y(i),
                    _ => Var::S(i),
                };
                Ok(RatFunc::var(v))
            }
            Some(b'x') => {
                self.pos += 1;
                let i = self.index()?;
                if self.src.get(self.pos) != Some(&b'_') {
                    return Err(self.err("expected '_' in x variable"));
                }
                self.pos += 1;
                let j = self.index()?;
                Ok(RatFunc::var(Var::X(i, j)))
            }
            _ => Err(self.err("expected number, variable or '('")),
        }
    }
}
