//! Text grammar: `x0^4 + x1^4 - x2^4 - x3^4`, `6*t1^2 + 9 t2`.
//!
//! Variables are `x<i>` (zero-based) or `t<i>` (one-based); a polynomial uses
//! one family only. `*` between factors is optional.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{IntPolynomial, Monomial};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VarStyle {
    #[default]
    X,
    T,
}

impl VarStyle {
    pub fn name(self, index: usize) -> String {
        match self {
            VarStyle::X => format!("x{index}"),
            VarStyle::T => format!("t{}", index + 1),
        }
    }

    /// Style used by `text`, if it names any variable.
    pub fn detect(text: &str) -> Option<VarStyle> {
        text.chars().find_map(|c| match c {
            'x' | 'X' => Some(VarStyle::X),
            't' | 'T' => Some(VarStyle::T),
            _ => None,
        })
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    style: Option<VarStyle>,
}

type RawTerm = (BigInt, Vec<(usize, u32)>);

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn factor(&mut self, coef: &mut BigInt, vars: &mut Vec<(usize, u32)>) -> Result<()> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n: BigInt = self.digits().unwrap().parse().unwrap();
                *coef *= n;
                Ok(())
            }
            Some(c @ (b'x' | b'X' | b't' | b'T')) => {
                let style = if c.eq_ignore_ascii_case(&b'x') {
                    VarStyle::X
                } else {
                    VarStyle::T
                };
                match self.style {
                    Some(s) if s != style => {
                        return self.err("cannot mix x- and t-style variables");
                    }
                    _ => self.style = Some(style),
                }
                self.pos += 1;
                let Some(idx) = self.digits() else {
                    return self.err("expected a variable index");
                };
                let Ok(idx) = idx.parse::<usize>() else {
                    return self.err("variable index too large");
                };
                let index = match style {
                    VarStyle::X => idx,
                    VarStyle::T => {
                        if idx == 0 {
                            self.pos -= 1;
                            return self.err("t-variables are numbered from t1");
                        }
                        idx - 1
                    }
                };
                self.skip_ws();
                let mut exp = 1u32;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.skip_ws();
                    let Some(e) = self.digits() else {
                        return self.err("expected an exponent after `^`");
                    };
                    let Ok(e) = e.parse::<u32>() else {
                        return self.err("exponent too large");
                    };
                    exp = e;
                }
                vars.push((index, exp));
                Ok(())
            }
            Some(_) => self.err(format!(
                "unexpected character `{}`",
                self.src[self.pos] as char
            )),
            None => self.err("unexpected end of input"),
        }
    }

    fn term(&mut self) -> Result<RawTerm> {
        let mut coef = BigInt::one();
        let mut vars = Vec::new();
        self.skip_ws();
        self.factor(&mut coef, &mut vars)?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    self.skip_ws();
                    self.factor(&mut coef, &mut vars)?;
                }
                Some(c) if c.is_ascii_alphanumeric() => self.factor(&mut coef, &mut vars)?,
                _ => break,
            }
        }
        Ok((coef, vars))
    }

    fn polynomial(&mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty polynomial");
        }
        let mut negative = false;
        if let Some(c @ (b'+' | b'-')) = self.peek() {
            negative = c == b'-';
            self.pos += 1;
        }
        loop {
            let (c, vars) = self.term()?;
            terms.push((if negative { -c } else { c }, vars));
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(c @ (b'+' | b'-')) => {
                    negative = c == b'-';
                    self.pos += 1;
                }
                Some(c) => {
                    return self.err(format!("unexpected character `{}`", c as char));
                }
            }
        }
        Ok(terms)
    }
}

pub(super) fn parse(text: &str, arity: Option<usize>) -> Result<IntPolynomial> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        style: None,
    };
    let raw = parser.polynomial()?;
    let max_index = raw
        .iter()
        .flat_map(|(_, vars)| vars.iter().map(|&(i, _)| i))
        .max();
    let needed = max_index.map_or(0, |i| i + 1);
    let arity = match arity {
        Some(a) if a < needed => {
            return Err(Error::VariableOutOfRange {
                index: needed - 1,
                arity: a,
            })
        }
        Some(a) => a,
        None => needed.max(1),
    };
    let mut poly = IntPolynomial::zero(arity);
    for (c, vars) in raw {
        if c.is_zero() {
            continue;
        }
        let mut e = vec![0u32; arity];
        for (i, k) in vars {
            e[i] += k;
        }
        poly.add_term(Monomial(e), c);
    }
    Ok(poly)
}
