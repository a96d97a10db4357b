//! Sparse multivariate polynomials with exact integer coefficients.
//!
//! Terms are stored in a map keyed by [`Monomial`], ordered graded
//! lexicographically. Iteration through [`IntPolynomial::terms`] yields the
//! leading term first, which is also the order used by the text and JSON
//! forms.

mod parse;
pub(crate) mod wire;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use parse::VarStyle;

/// Exponent vector of fixed arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Integer vector a polynomial can be evaluated at.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(pub Vec<BigInt>);

impl LatticePoint {
    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }
}

impl From<&[i64]> for LatticePoint {
    fn from(xs: &[i64]) -> Self {
        LatticePoint(xs.iter().map(|&x| BigInt::from(x)).collect())
    }
}

impl<const N: usize> From<[i64; N]> for LatticePoint {
    fn from(xs: [i64; N]) -> Self {
        LatticePoint::from(&xs[..])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    arity: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPolynomial {
    pub fn zero(arity: usize) -> Self {
        IntPolynomial {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: impl Into<BigInt>) -> Self {
        let mut p = IntPolynomial::zero(arity);
        p.add_term(Monomial::one(arity), c.into());
        p
    }

    /// The polynomial `X_index`.
    pub fn variable(arity: usize, index: usize) -> Result<Self> {
        if index >= arity {
            return Err(Error::VariableOutOfRange { index, arity });
        }
        let mut e = vec![0; arity];
        e[index] = 1;
        let mut p = IntPolynomial::zero(arity);
        p.add_term(Monomial(e), BigInt::one());
        Ok(p)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs. Repeated
    /// monomials are summed and zero coefficients dropped.
    pub fn from_terms<I, C>(arity: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
        C: Into<BigInt>,
    {
        let mut p = IntPolynomial::zero(arity);
        for (e, c) in terms {
            if e.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: e.len(),
                });
            }
            p.add_term(Monomial(e), c.into());
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Terms in canonical order, leading term first.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> + '_ {
        self.terms.iter().rev()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigInt {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    /// Largest exponent of `var` over all terms.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.degree() {
            None => true,
            Some(d) => self.terms.keys().all(|m| m.degree() == d),
        }
    }

    /// Fails with a message naming the first term of the wrong degree.
    pub fn require_homogeneous(&self) -> Result<()> {
        self.require_homogeneous_in(VarStyle::X)
    }

    /// As [`Self::require_homogeneous`], naming the term in `style`.
    pub fn require_homogeneous_in(&self, style: VarStyle) -> Result<()> {
        let Some(d) = self.degree() else {
            return Ok(());
        };
        for (m, c) in self.terms() {
            if m.degree() != d {
                return Err(Error::NotHomogeneous {
                    term: format_term(c, m, style, true),
                    found: m.degree(),
                    expected: d,
                });
            }
        }
        Ok(())
    }

    /// `Σ c_i X_i^d` with every variable present and `d ≥ 1`.
    pub fn is_diagonal(&self) -> bool {
        let Some(d) = self.degree() else {
            return false;
        };
        if d == 0 || self.terms.len() != self.arity {
            return false;
        }
        let mut seen = vec![false; self.arity];
        for m in self.terms.keys() {
            let nz: Vec<usize> = (0..self.arity).filter(|&i| m.0[i] != 0).collect();
            if nz.len() != 1 || m.0[nz[0]] != d || seen[nz[0]] {
                return false;
            }
            seen[nz[0]] = true;
        }
        true
    }

    pub fn evaluate(&self, x: &LatticePoint) -> Result<BigInt> {
        self.evaluate_big(x.coords())
    }

    pub fn evaluate_big(&self, x: &[BigInt]) -> Result<BigInt> {
        self.check_arity(x.len())?;
        let small: Option<Vec<i128>> = x.iter().map(|v| v.to_i128()).collect();
        if let Some(small) = small {
            if let Some(v) = self.eval_checked_i128(&small) {
                return Ok(BigInt::from(v));
            }
        }
        Ok(self.eval_bigint(x))
    }

    pub fn evaluate_i64(&self, x: &[i64]) -> Result<BigInt> {
        self.check_arity(x.len())?;
        let small: Vec<i128> = x.iter().map(|&v| v as i128).collect();
        if let Some(v) = self.eval_checked_i128(&small) {
            return Ok(BigInt::from(v));
        }
        let big: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        Ok(self.eval_bigint(&big))
    }

    fn check_arity(&self, n: usize) -> Result<()> {
        if n != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: n,
            });
        }
        Ok(())
    }

    fn eval_checked_i128(&self, x: &[i128]) -> Option<i128> {
        let mut acc: i128 = 0;
        for (m, c) in &self.terms {
            let mut t = c.to_i128()?;
            for (xi, &e) in x.iter().zip(&m.0) {
                t = t.checked_mul(xi.checked_pow(e)?)?;
            }
            acc = acc.checked_add(t)?;
        }
        Some(acc)
    }

    fn eval_bigint(&self, x: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(xi.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// `X_0^δ f(X_1/X_0, …, X_ν/X_0)`, with the new variable prepended.
    pub fn homogenize(&self, delta: u32) -> Result<IntPolynomial> {
        if let Some(d) = self.degree() {
            if delta < d {
                return Err(Error::DegreeTooSmall {
                    target: delta,
                    degree: d,
                });
            }
        }
        let mut out = IntPolynomial::zero(self.arity + 1);
        for (m, c) in &self.terms {
            let mut e = Vec::with_capacity(self.arity + 1);
            e.push(delta - m.degree());
            e.extend_from_slice(&m.0);
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Substitutes `value` for variable `var`, removing that variable.
    pub fn slice(&self, var: usize, value: impl Into<BigInt>) -> Result<IntPolynomial> {
        if var >= self.arity {
            return Err(Error::VariableOutOfRange {
                index: var,
                arity: self.arity,
            });
        }
        let value = value.into();
        let mut out = IntPolynomial::zero(self.arity - 1);
        for (m, c) in &self.terms {
            let e = m.0[var];
            let coef = if e == 0 {
                c.clone()
            } else {
                c * num_traits::pow(value.clone(), e as usize)
            };
            let mut rest = m.0.clone();
            rest.remove(var);
            out.add_term(Monomial(rest), coef);
        }
        Ok(out)
    }

    /// Positive gcd of the coefficients.
    pub fn content(&self) -> Result<BigInt> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c)))
    }

    /// `self / content`; the leading coefficient keeps its sign.
    pub fn primitive_part(&self) -> Result<IntPolynomial> {
        let g = self.content()?;
        Ok(IntPolynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c / &g))
                .collect(),
        })
    }

    /// Maximum coefficient modulus.
    pub fn height(&self) -> Result<BigInt> {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn partial(&self, var: usize) -> Result<IntPolynomial> {
        if var >= self.arity {
            return Err(Error::VariableOutOfRange {
                index: var,
                arity: self.arity,
            });
        }
        let mut out = IntPolynomial::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut d = m.0.clone();
            d[var] -= 1;
            out.add_term(Monomial(d), c * BigInt::from(e));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<IntPolynomial> {
        (0..self.arity)
            .map(|i| self.partial(i).expect("index in range"))
            .collect()
    }

    /// Coefficientwise reduction into `[0, prime)`.
    pub fn reduce_mod_p(&self, prime: u64) -> Result<IntPolynomial> {
        if prime < 2 {
            return Err(Error::InvalidArgument(format!(
                "modulus must be at least 2, got {prime}"
            )));
        }
        let p = BigInt::from(prime);
        let mut out = IntPolynomial::zero(self.arity);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.mod_floor(&p));
        }
        Ok(out)
    }

    /// Composes with a linear change of variables: variable `j` is replaced
    /// by `Σ_k rows[j][k] · S_k`. The result has arity `rows[0].len()`.
    pub fn linear_substitute(&self, rows: &[Vec<BigInt>]) -> Result<IntPolynomial> {
        self.check_arity(rows.len())?;
        let new_arity = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != new_arity) {
            return Err(Error::InvalidArgument("ragged substitution matrix".into()));
        }
        let forms: Vec<IntPolynomial> = rows
            .iter()
            .map(|r| {
                let mut f = IntPolynomial::zero(new_arity);
                for (k, a) in r.iter().enumerate() {
                    let mut e = vec![0; new_arity];
                    e[k] = 1;
                    f.add_term(Monomial(e), a.clone());
                }
                f
            })
            .collect();
        let mut out = IntPolynomial::zero(new_arity);
        for (m, c) in &self.terms {
            let mut t = IntPolynomial::constant(new_arity, c.clone());
            for (form, &e) in forms.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &form.pow(e);
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> IntPolynomial {
        let mut result = IntPolynomial::constant(self.arity, 1);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn scale(&self, k: &BigInt) -> IntPolynomial {
        let mut out = IntPolynomial::zero(self.arity);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    /// Coefficients in `var` as polynomials in the remaining variables,
    /// indexed by power.
    pub fn coefficients_in(&self, var: usize) -> Result<Vec<IntPolynomial>> {
        if var >= self.arity {
            return Err(Error::VariableOutOfRange {
                index: var,
                arity: self.arity,
            });
        }
        let deg = self.degree_in(var) as usize;
        let mut out = vec![IntPolynomial::zero(self.arity - 1); deg + 1];
        for (m, c) in &self.terms {
            let mut rest = m.0.clone();
            let e = rest.remove(var) as usize;
            out[e].add_term(Monomial(rest), c.clone());
        }
        Ok(out)
    }

    /// Dense coefficient vector of a univariate polynomial, constant first.
    pub fn univariate_coefficients(&self) -> Result<Vec<BigInt>> {
        if self.arity != 1 {
            return Err(Error::InvalidArgument(format!(
                "expected a univariate polynomial, got arity {}",
                self.arity
            )));
        }
        let deg = self.degree().unwrap_or(0) as usize;
        let mut out = vec![BigInt::zero(); deg + 1];
        for (m, c) in &self.terms {
            out[m.0[0] as usize] = c.clone();
        }
        Ok(out)
    }

    /// Reinterprets the polynomial in a larger ambient space, appending
    /// unused variables.
    pub fn with_arity(&self, arity: usize) -> Result<IntPolynomial> {
        if arity < self.arity {
            if let Some(used) = (arity..self.arity).find(|&i| self.degree_in(i) > 0) {
                return Err(Error::VariableOutOfRange { index: used, arity });
            }
        }
        let mut out = IntPolynomial::zero(arity);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.resize(arity, 0);
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    pub fn to_text(&self, style: VarStyle) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    s.push('-');
                }
            } else if c.is_negative() {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            s.push_str(&format_term(c, m, style, false));
        }
        s
    }

    pub fn parse(text: &str) -> Result<IntPolynomial> {
        parse::parse(text, None)
    }

    /// Parses with an explicit ambient arity, which must cover every
    /// variable that appears.
    pub fn parse_with_arity(text: &str, arity: usize) -> Result<IntPolynomial> {
        parse::parse(text, Some(arity))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<IntPolynomial> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            column: e.column(),
            message: e.to_string(),
        })
    }
}

fn format_term(c: &BigInt, m: &Monomial, style: VarStyle, signed: bool) -> String {
    let mut out = String::new();
    let abs = c.abs();
    if signed && c.is_negative() {
        out.push('-');
    }
    let vars: Vec<String> =
        m.0.iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let name = style.name(i);
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
    if vars.is_empty() {
        out.push_str(&abs.to_string());
    } else {
        if !abs.is_one() {
            out.push_str(&abs.to_string());
            out.push('*');
        }
        out.push_str(&vars.join("*"));
    }
    out
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(VarStyle::X))
    }
}

impl std::str::FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IntPolynomial::parse(s)
    }
}

fn assert_same_arity(a: &IntPolynomial, b: &IntPolynomial) {
    assert_eq!(a.arity, b.arity, "polynomial arity mismatch");
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        assert_same_arity(self, rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        assert_same_arity(self, rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        assert_same_arity(self, rhs);
        let mut out = IntPolynomial::zero(self.arity);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> IntPolynomial {
        IntPolynomial::parse(s).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn evaluate_examples() {
        let f = p("t1^2 + t2^2 + t3^2 - 3");
        assert_eq!(f.evaluate(&[1, 1, 1].into()).unwrap(), big(0));
        let fermat = p("x0^4 + x1^4 - x2^4 - x3^4");
        assert_eq!(fermat.evaluate(&[1, 2, 2, 1].into()).unwrap(), big(0));
        let g = p("t1^3 + t2*t3 - 1");
        assert_eq!(g.evaluate(&[2, 3, 5].into()).unwrap(), big(22));
    }

    #[test]
    fn evaluate_rejects_wrong_arity() {
        let g = p("t1^3 + t2*t3 - 1");
        assert!(matches!(
            g.evaluate(&[1, 2].into()),
            Err(Error::ArityMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn evaluate_promotes_past_i128() {
        let f = p("x0^9 + x1");
        let x = LatticePoint(vec![BigInt::from(10).pow(20), big(1)]);
        let expected = BigInt::from(10).pow(180) + 1;
        assert_eq!(f.evaluate(&x).unwrap(), expected);
    }

    #[test]
    fn homogenize_examples() {
        assert_eq!(
            p("t1^3 + t2*t3 - 1").homogenize(3).unwrap(),
            p("x1^3 + x0*x2*x3 - x0^3")
        );
        assert_eq!(
            p("t1^4 + t2^4 + t3^4 - 1").homogenize(4).unwrap(),
            p("x1^4 + x2^4 + x3^4 - x0^4")
        );
        let h = p("x0^2 + x0*x1").homogenize(2).unwrap();
        assert_eq!(h.degree_in(0), 0);
        assert_eq!(h.slice(0, 1).unwrap(), p("x0^2 + x0*x1"));
        assert!(matches!(
            p("t1^3").homogenize(2),
            Err(Error::DegreeTooSmall { .. })
        ));
    }

    #[test]
    fn slice_examples() {
        let f = p("x0^4 + x1^4 - x2^4 - x3^4");
        assert_eq!(f.slice(0, 1).unwrap(), p("1 + x0^4 - x1^4 - x2^4"));
        assert_eq!(f.slice(0, 0).unwrap(), p("x0^4 - x1^4 - x2^4"));
        let zero = p("x0 - x1").slice(0, 0).unwrap().slice(0, 0).unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero.degree(), None);
    }

    #[test]
    fn content_examples() {
        let f = p("6*t1^2 + 9*t2");
        assert_eq!(f.content().unwrap(), big(3));
        assert_eq!(f.primitive_part().unwrap(), p("2*t1^2 + 3*t2"));
        let g = p("t1^2 + 3*t2");
        assert_eq!(g.content().unwrap(), big(1));
        assert_eq!(g.primitive_part().unwrap(), g);
        let h = p("-4*x0^4 - 8*x1^4");
        assert_eq!(h.content().unwrap(), big(4));
        assert_eq!(h.primitive_part().unwrap(), p("-x0^4 - 2*x1^4"));
        assert_eq!(IntPolynomial::zero(2).content(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn height_examples() {
        assert_eq!(p("x0^4 + x1^4 - x2^4 - x3^4").height().unwrap(), big(1));
        assert_eq!(p("6*t1^2 + 9*t2").height().unwrap(), big(9));
        assert_eq!(
            p("t1^5 + t2^5 + t3^5 - 1000000").height().unwrap(),
            big(1_000_000)
        );
        assert_eq!(IntPolynomial::zero(1).height(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn gradient_examples() {
        let g = p("x0^4 + x1^4 - x2^4 - x3^4").gradient();
        let expected: Vec<IntPolynomial> = ["4*x0^3", "4*x1^3", "-4*x2^3", "-4*x3^3"]
            .iter()
            .map(|s| IntPolynomial::parse_with_arity(s, 4).unwrap())
            .collect();
        assert_eq!(g, expected);
        let c = IntPolynomial::constant(3, 7).gradient();
        assert!(c.iter().all(IntPolynomial::is_zero));
        let g = p("t1^3 + t2*t3 - 1").gradient();
        assert_eq!(g[0], IntPolynomial::parse_with_arity("3*t1^2", 3).unwrap());
        assert_eq!(g[1], IntPolynomial::parse_with_arity("t3", 3).unwrap());
        assert_eq!(g[2], IntPolynomial::parse_with_arity("t2", 3).unwrap());
    }

    #[test]
    fn reduce_mod_p_examples() {
        assert!(p("6*t1^2 + 9*t2").reduce_mod_p(3).unwrap().is_zero());
        assert_eq!(
            p("x0^4 + x1^4 - x2^4 - x3^4").reduce_mod_p(5).unwrap(),
            p("x0^4 + x1^4 + 4*x2^4 + 4*x3^4")
        );
        assert_eq!(
            p("7*t1 + 1").reduce_mod_p(7).unwrap(),
            IntPolynomial::constant(1, 1)
        );
    }

    #[test]
    fn diagonal_detection() {
        assert!(p("x0^5 + x1^5 - x2^5 - x3^5").is_diagonal());
        assert!(!p("x0^5 + x1^5 - x2^5").with_arity(4).unwrap().is_diagonal());
        assert!(!p("x0*x3 - x1*x2").is_diagonal());
        assert!(!p("x0^2 + x1^3").is_diagonal());
    }

    #[test]
    fn not_homogeneous_names_term() {
        let err = p("t1^3 + t2*t3 - 1")
            .require_homogeneous_in(VarStyle::T)
            .unwrap_err();
        match err {
            Error::NotHomogeneous {
                term,
                found,
                expected,
            } => {
                assert_eq!(term, "t2*t3");
                assert_eq!((found, expected), (2, 3));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn linear_substitution_matches_pointwise() {
        let f = p("t1^3 + t2*t3 - 1");
        let m = vec![
            vec![big(1), big(2), big(0)],
            vec![big(0), big(1), big(-1)],
            vec![big(3), big(0), big(1)],
        ];
        let g = f.linear_substitute(&m).unwrap();
        for s in [[1i64, 2, 3], [-4, 0, 7], [2, -2, 5]] {
            let t: Vec<i64> = (0..3)
                .map(|j| (0..3).map(|k| m[j][k].to_i64().unwrap() * s[k]).sum())
                .collect();
            assert_eq!(g.evaluate_i64(&s).unwrap(), f.evaluate_i64(&t).unwrap());
        }
    }

    fn arb_poly(arity: usize) -> impl Strategy<Value = IntPolynomial> {
        prop::collection::vec((prop::collection::vec(0u32..4, arity), -50i64..50), 0..6)
            .prop_map(move |terms| IntPolynomial::from_terms(arity, terms).unwrap())
    }

    proptest! {
        #[test]
        fn homogenize_round_trips(f in arb_poly(3), x in prop::collection::vec(-6i64..6, 3)) {
            let d = f.degree().unwrap_or(0);
            let h = f.homogenize(d + 1).unwrap();
            prop_assert!(h.is_homogeneous());
            let h0 = f.homogenize(d).unwrap();
            prop_assert_eq!(h0.slice(0, 1).unwrap(), f.clone());
            let mut y = vec![1i64];
            y.extend_from_slice(&x);
            prop_assert_eq!(h.evaluate_i64(&y).unwrap(), f.evaluate_i64(&x).unwrap());
        }

        #[test]
        fn content_reconstructs(f in arb_poly(2)) {
            prop_assume!(!f.is_zero());
            let c = f.content().unwrap();
            let pp = f.primitive_part().unwrap();
            prop_assert_eq!(pp.content().unwrap(), BigInt::one());
            prop_assert_eq!(pp.scale(&c), f.clone());
            prop_assert_eq!(
                pp.leading_term().unwrap().1.sign(),
                f.leading_term().unwrap().1.sign()
            );
        }

        #[test]
        fn gradient_commutes_with_reduction(f in arb_poly(3), pi in 0usize..4) {
            // exponents stay below 4, so primes ≥ 5 never kill a multiplied-down exponent
            let prime = [5u64, 7, 11, 13][pi];
            let lhs: Vec<_> = f.gradient().iter().map(|g| g.reduce_mod_p(prime).unwrap()).collect();
            let rhs: Vec<_> = f
                .reduce_mod_p(prime)
                .unwrap()
                .gradient()
                .iter()
                .map(|g| g.reduce_mod_p(prime).unwrap())
                .collect();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn text_and_json_round_trip(f in arb_poly(4)) {
            let text = f.to_string();
            let back = IntPolynomial::parse_with_arity(&text, 4).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(back.to_string(), text);
            let json = f.to_json();
            let back = IntPolynomial::from_json(&json).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(back.to_json(), json);
        }
    }
}
