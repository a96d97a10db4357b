//! Multiplicity of a point on its own tangent hyperplane section.
//!
//! At a smooth point `P` of `F = 0` the tangent hyperplane `T` contains `P`
//! (Euler's identity gives `∇F(P)·P = d·F(P) = 0` in any characteristic).
//! Writing `T = ⟨P, v_1, …, v_{m-2}⟩` and expanding
//! `G(u) = F(P + Σ u_i v_i)`, the constant and linear parts vanish and the
//! multiplicity is the degree of the lowest nonvanishing homogeneous part.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::polyring::IntPolynomial;

/// Coefficient domain the expansion runs over.
pub trait Ring {
    type Elem: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_big(&self, a: &BigInt) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

/// The integers, standing in for `Q` on primitive integer points.
#[derive(Debug, Clone, Copy)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn from_big(&self, a: &BigInt) -> BigInt {
        a.clone()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PrimeField(pub u64);

impl Ring for PrimeField {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a % self.0) % self.0
    }
    fn is_zero(&self, a: &u64) -> bool {
        (*a).is_multiple_of(self.0)
    }
    fn from_big(&self, a: &BigInt) -> u64 {
        a.mod_floor(&BigInt::from(self.0))
            .to_u64()
            .expect("residue fits")
    }
}

type Sparse<E> = BTreeMap<Vec<u32>, E>;

fn sparse_mul<R: Ring>(ring: &R, a: &Sparse<R::Elem>, b: &Sparse<R::Elem>) -> Sparse<R::Elem> {
    let mut out: Sparse<R::Elem> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let c = ring.mul(ca, cb);
            let slot = out.entry(e).or_insert_with(|| ring.zero());
            *slot = ring.add(slot, &c);
        }
    }
    out.retain(|_, c| !ring.is_zero(c));
    out
}

fn eval_in<R: Ring>(ring: &R, f: &IntPolynomial, x: &[R::Elem]) -> R::Elem {
    let mut acc = ring.zero();
    for (m, c) in f.terms() {
        let mut t = ring.from_big(c);
        for (xi, &e) in x.iter().zip(m.exponents()) {
            for _ in 0..e {
                t = ring.mul(&t, xi);
            }
        }
        acc = ring.add(&acc, &t);
    }
    acc
}

/// Fraction-free test that `v` is independent of the echelon rows in
/// `basis`; on success `v`'s reduction is appended.
fn try_extend<R: Ring>(ring: &R, basis: &mut Vec<(usize, Vec<R::Elem>)>, v: &[R::Elem]) -> bool {
    let mut w = v.to_vec();
    for (col, row) in basis.iter() {
        if ring.is_zero(&w[*col]) {
            continue;
        }
        let (a, b) = (row[*col].clone(), w[*col].clone());
        w = w
            .iter()
            .zip(row)
            .map(|(x, r)| ring.sub(&ring.mul(&a, x), &ring.mul(&b, r)))
            .collect();
    }
    match w.iter().position(|x| !ring.is_zero(x)) {
        Some(col) => {
            basis.push((col, w));
            true
        }
        None => false,
    }
}

/// Multiplicity of `point` on the section of `F = 0` by its tangent
/// hyperplane at `point`, computed over `ring`.
pub fn multiplicity_in<R: Ring>(ring: &R, form: &IntPolynomial, point: &[R::Elem]) -> Result<u32> {
    let m = form.arity();
    if point.len() != m {
        return Err(Error::ArityMismatch {
            expected: m,
            found: point.len(),
        });
    }
    if m < 3 {
        return Err(Error::InvalidArgument(
            "tangent sections need at least three homogeneous variables".into(),
        ));
    }
    form.require_homogeneous()?;
    if point.iter().all(|x| ring.is_zero(x)) {
        return Err(Error::InvalidArgument(
            "zero vector is not a projective point".into(),
        ));
    }
    if !ring.is_zero(&eval_in(ring, form, point)) {
        return Err(Error::PointNotOnHypersurface);
    }
    let grad: Vec<R::Elem> = form
        .gradient()
        .iter()
        .map(|g| eval_in(ring, g, point))
        .collect();
    let Some(j) = grad.iter().position(|g| !ring.is_zero(g)) else {
        return Err(Error::SingularPoint);
    };

    // kernel of ∇F(P): g_j e_i − g_i e_j for i ≠ j
    let mut basis = Vec::new();
    try_extend(ring, &mut basis, point);
    let mut directions: Vec<Vec<R::Elem>> = Vec::new();
    for i in (0..m).filter(|&i| i != j) {
        let mut w = vec![ring.zero(); m];
        w[i] = grad[j].clone();
        w[j] = ring.neg(&grad[i]);
        if try_extend(ring, &mut basis, &w) {
            directions.push(w);
        }
        if directions.len() == m - 2 {
            break;
        }
    }
    debug_assert_eq!(directions.len(), m - 2);

    let k = m - 2;
    // X_c = P_c + Σ_i u_i v_{i,c}
    let linear: Vec<Sparse<R::Elem>> = (0..m)
        .map(|c| {
            let mut s: Sparse<R::Elem> = BTreeMap::new();
            if !ring.is_zero(&point[c]) {
                s.insert(vec![0; k], point[c].clone());
            }
            for (i, v) in directions.iter().enumerate() {
                if !ring.is_zero(&v[c]) {
                    let mut e = vec![0; k];
                    e[i] = 1;
                    s.insert(e, v[c].clone());
                }
            }
            s
        })
        .collect();
    let mut total: Sparse<R::Elem> = BTreeMap::new();
    for (mono, c) in form.terms() {
        let mut t: Sparse<R::Elem> = BTreeMap::new();
        let c = ring.from_big(c);
        if ring.is_zero(&c) {
            continue;
        }
        t.insert(vec![0; k], c);
        for (lin, &e) in linear.iter().zip(mono.exponents()) {
            for _ in 0..e {
                t = sparse_mul(ring, &t, lin);
            }
        }
        for (e, c) in t {
            let slot = total.entry(e).or_insert_with(|| ring.zero());
            *slot = ring.add(slot, &c);
        }
    }
    total
        .iter()
        .filter(|(_, c)| !ring.is_zero(c))
        .map(|(e, _)| e.iter().sum::<u32>())
        .min()
        .ok_or(Error::DegenerateTangentSection)
}

/// Over `Q`, at the projective point with integer coordinates `point`.
pub fn tangent_section_multiplicity(form: &IntPolynomial, point: &[BigInt]) -> Result<u32> {
    multiplicity_in(&Integers, form, point)
}

/// Over `F_p`, at a point with coordinates in `[0, p)`.
pub fn tangent_section_multiplicity_mod_p(
    form: &IntPolynomial,
    point: &[u64],
    prime: u64,
) -> Result<u32> {
    let field = PrimeField(prime);
    let pt: Vec<u64> = point.iter().map(|x| x % prime).collect();
    multiplicity_in(&field, form, &pt)
}
