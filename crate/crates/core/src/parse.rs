//! Polynomial expression parser.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := ('+' | '-') factor | power
//! power   := atom ('^' integer)?
//! atom    := integer | variable | '(' expr ')'
//! variable:= 'q' k | 'p' k          with 1 <= k <= n
//! ```
//!
//! Rationals are written `a/b`; division is only allowed by a nonzero
//! constant. Floating-point literals are rejected.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{NfError, Result};
use crate::poly::Poly;
use crate::scalar::Rational;

pub fn parse_poly(src: &str, n: usize) -> Result<Poly> {
    let mut p = Parser {
        src,
        chars: src.char_indices().collect(),
        pos: 0,
        n,
    };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(p.error_here("empty expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(p.error_here(&format!("unexpected character '{c}'")));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn location(&self, pos: usize) -> (usize, usize) {
        let byte = self.chars.get(pos).map_or(self.src.len(), |&(b, _)| b);
        let before = &self.src[..byte];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
        (line, column)
    }

    fn error_at(&self, pos: usize, message: &str) -> NfError {
        let (line, column) = self.location(pos);
        NfError::Parse {
            line,
            column,
            message: message.to_string(),
        }
    }

    fn error_here(&self, message: &str) -> NfError {
        self.error_at(self.pos, message)
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.factor()?;
            } else if self.eat('/') {
                self.skip_ws();
                let start = self.pos;
                let d = self.factor()?;
                let c = constant_value(&d)
                    .ok_or_else(|| self.error_at(start, "division by a non-constant"))?;
                if c.is_zero() {
                    return Err(self.error_at(start, "division by zero"));
                }
                acc = acc.scale_rational(&c.recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        if self.eat('-') {
            return Ok(-&self.factor()?);
        }
        if self.eat('+') {
            return self.factor();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error_at(start, "expected a non-negative integer exponent"));
            }
            let e: u32 = digits
                .parse()
                .map_err(|_| self.error_at(start, "exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.pos += 1;
        }
        s
    }

    fn atom(&mut self) -> Result<Poly> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error_here("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                if matches!(self.peek(), Some('.') | Some('e') | Some('E')) {
                    return Err(self.error_at(start, "floating-point literals are not accepted"));
                }
                let v: BigInt = digits.parse().expect("digit string");
                Ok(Poly::from_rational(self.n, Rational::from_integer(v)))
            }
            Some(c @ ('q' | 'p')) => {
                self.pos += 1;
                let digits = self.digits();
                let k: usize = digits.parse().unwrap_or(0);
                if k == 0 || k > self.n {
                    return Err(self.error_at(
                        start,
                        &format!("unknown variable '{c}{digits}' (dimension is {})", self.n),
                    ));
                }
                let idx = if c == 'q' { k - 1 } else { self.n + k - 1 };
                Poly::var(self.n, idx)
            }
            Some(c) => Err(self.error_here(&format!("unexpected character '{c}'"))),
            None => Err(self.error_here("unexpected end of input")),
        }
    }
}

fn constant_value(p: &Poly) -> Option<Rational> {
    if p.is_zero() {
        return Some(Rational::zero());
    }
    match p.degree() {
        Some(0) if p.is_real() => Some(p.terms().next().unwrap().1.re.clone()),
        _ => None,
    }
}
