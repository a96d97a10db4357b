//! Box enumeration engines.
//!
//! Every engine walks the outer coordinates `x_0, …, x_{ν-2}` of the box
//! `[-B, B]^ν` and handles the last coordinate `z` per fiber. The slice
//! engine solves the fiber polynomial exactly; the sieve engine only tries
//! lifts of the residue classes mod `p` on which the fiber vanishes; brute
//! force evaluates everything. The walk over `x_0` is split into shards.

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use super::{CountOptions, Engine};
use crate::arith::fp::ModPoly;
use crate::arith::roots::{RootFinder, RootSet};
use crate::arith::{is_primitive, ExactInt, Width};
use crate::error::{Error, Result};
use crate::polyring::IntPolynomial;

/// Accumulated hits of one enumeration.
#[derive(Debug, Clone, Default)]
pub(crate) struct Tally {
    pub primitive_only: bool,
    pub collect: bool,
    pub count: u64,
    pub points: Vec<Vec<i64>>,
}

impl Tally {
    pub fn new(primitive_only: bool, collect: bool) -> Tally {
        Tally {
            primitive_only,
            collect,
            ..Tally::default()
        }
    }

    #[inline]
    fn hit(&mut self, x: &[i64]) {
        if self.primitive_only && !is_primitive(x) {
            return;
        }
        self.count += 1;
        if self.collect {
            self.points.push(x.to_vec());
        }
    }

    fn absorb(&mut self, other: Tally) {
        self.count += other.count;
        self.points.extend(other.points);
    }
}

/// Upper bound for every intermediate the engines form on `[-B, B]^ν`,
/// including the forward differences taken by the root finder.
pub(crate) fn magnitude_bound(f: &IntPolynomial, bound: i64) -> BigInt {
    let deg = f.degree().unwrap_or(0);
    let l1: BigInt = f.terms().map(|(_, c)| c.abs()).sum();
    let reach = num_traits::pow(BigInt::from(bound + 1), deg as usize);
    (l1 * reach) << (deg * (deg + 1) / 2) as usize
}

/// Smallest `B^{1/√δ}`-sized modulus, as used by the sieve by default.
pub(crate) fn default_sieve_prime(bound: i64, degree: u32) -> u64 {
    super::select_primes(bound.max(2) as u64, degree.max(1), 1)[0]
}

struct Plan<T> {
    arity: usize,
    bound: i64,
    /// `tensor[j][e]`: terms of the coefficient of `z^j y^e`, exponents over
    /// the prefix `x_0, …, x_{ν-3}`.
    tensor: Vec<Vec<Vec<(T, Vec<u32>)>>>,
    /// For each `j`, the `e` with a nonempty `tensor[j][e]`.
    active: Vec<Vec<usize>>,
    /// All terms, for brute-force evaluation.
    terms: Vec<(T, Vec<u32>)>,
    /// `pow[e][x + B] = x^e`.
    pow: Vec<Vec<T>>,
    finder: RootFinder<T>,
}

fn narrow<T: ExactInt>(c: &BigInt) -> Result<T> {
    T::from_big(c)
        .ok_or_else(|| Error::Overflow(format!("coefficient {c} exceeds the chosen width")))
}

impl<T: ExactInt> Plan<T> {
    fn new(f: &IntPolynomial, bound: i64) -> Result<Plan<T>> {
        let arity = f.arity();
        let z = arity - 1;
        let zdeg = f.degree_in(z) as usize;
        let ydeg = if arity >= 2 {
            f.degree_in(arity - 2) as usize
        } else {
            0
        };
        let mut tensor = vec![vec![Vec::new(); ydeg + 1]; zdeg + 1];
        let mut terms = Vec::new();
        for (m, c) in f.terms() {
            let e = m.exponents();
            let c: T = narrow(c)?;
            terms.push((c.clone(), e.to_vec()));
            let (ye, prefix) = if arity >= 2 {
                (e[arity - 2] as usize, e[..arity - 2].to_vec())
            } else {
                (0, Vec::new())
            };
            tensor[e[z] as usize][ye].push((c, prefix));
        }
        let active = tensor
            .iter()
            .map(|row| (0..row.len()).filter(|&e| !row[e].is_empty()).collect())
            .collect();
        let maxdeg = f.degree().unwrap_or(0) as usize;
        let pow = (0..=maxdeg)
            .map(|e| {
                (-bound..=bound)
                    .map(|x| num_traits::pow(T::from_i64(x).expect("fits"), e))
                    .collect()
            })
            .collect();
        let exps: Vec<u32> = (2..=zdeg as u32).collect();
        Ok(Plan {
            arity,
            bound,
            tensor,
            active,
            terms,
            pow,
            finder: RootFinder::with_tables(&exps, bound),
        })
    }

    #[inline]
    fn powered(&self, e: u32, x: i64) -> &T {
        &self.pow[e as usize][(x + self.bound) as usize]
    }

    fn monomial(&self, coef: &T, exps: &[u32], x: &[i64]) -> T {
        let mut t = coef.clone();
        for (&e, &xi) in exps.iter().zip(x) {
            if e > 0 {
                t = t * self.powered(e, xi).clone();
            }
        }
        t
    }

    /// `a[j][e]` for the given prefix.
    fn prefix_coeffs(&self, prefix: &[i64], a: &mut [Vec<T>]) {
        for (j, row) in self.tensor.iter().enumerate() {
            for &e in &self.active[j] {
                let mut acc = T::zero();
                for (c, exps) in &row[e] {
                    acc = acc + self.monomial(c, exps, prefix);
                }
                a[j][e] = acc;
            }
        }
    }

    /// Coefficients in `z` of the fiber over `(prefix, y)`.
    fn fiber_coeffs(&self, a: &[Vec<T>], y: i64, c: &mut [T]) {
        for (j, slot) in c.iter_mut().enumerate() {
            let mut acc = T::zero();
            for &e in &self.active[j] {
                if e == 0 {
                    acc = acc + a[j][0].clone();
                } else {
                    acc = acc + a[j][e].clone() * self.powered(e as u32, y).clone();
                }
            }
            *slot = acc;
        }
    }

    fn scratch(&self) -> (Vec<i64>, Vec<Vec<T>>, Vec<T>) {
        let a = self
            .tensor
            .iter()
            .map(|row| vec![T::zero(); row.len()])
            .collect();
        (vec![0; self.arity], a, vec![T::zero(); self.tensor.len()])
    }

    /// Walks prefixes and `y` values with `x_0 ∈ range0`, handing each fiber's
    /// coefficients to `fiber` with `x` holding the outer coordinates.
    fn walk_fibers(&self, range0: (i64, i64), mut fiber: impl FnMut(&[T], &mut Vec<i64>)) {
        let (mut x, mut a, mut c) = self.scratch();
        let b = self.bound;
        if self.arity == 1 {
            self.prefix_coeffs(&[], &mut a);
            self.fiber_coeffs(&a, 0, &mut c);
            fiber(&c, &mut x);
            return;
        }
        let plen = self.arity - 2;
        let (ylo, yhi) = if plen == 0 { range0 } else { (-b, b) };
        let ranges: Vec<(i64, i64)> = (0..plen)
            .map(|i| if i == 0 { range0 } else { (-b, b) })
            .collect();
        for_each_tuple(&ranges, |prefix| {
            self.prefix_coeffs(prefix, &mut a);
            x[..plen].copy_from_slice(prefix);
            for y in ylo..=yhi {
                self.fiber_coeffs(&a, y, &mut c);
                x[plen] = y;
                fiber(&c, &mut x);
            }
        });
    }

    fn run_slice(&self, range0: (i64, i64), tally: &mut Tally) {
        let b = self.bound;
        let z = self.arity - 1;
        self.walk_fibers(range0, |c, x| match self.finder.roots(c, -b, b) {
            RootSet::All => {
                for t in -b..=b {
                    x[z] = t;
                    tally.hit(x);
                }
            }
            RootSet::Finite(roots) => {
                for t in roots {
                    x[z] = t;
                    tally.hit(x);
                }
            }
        });
    }

    fn run_sieve(&self, table: &SieveTable, range0: (i64, i64), tally: &mut Tally) {
        let b = self.bound;
        let z = self.arity - 1;
        let p = table.prime as i64;
        let mut nonzero = Vec::with_capacity(self.tensor.len());
        self.walk_fibers(range0, |c, x| {
            let idx = table.index(&x[..z], b);
            nonzero.clear();
            nonzero.extend((0..c.len()).filter(|&j| !c[j].is_zero()));
            for &r in table.classes(idx) {
                let mut t = -b + (r as i64 + b).rem_euclid(p);
                while t <= b {
                    let mut v = T::zero();
                    for &j in &nonzero {
                        v = v + c[j].clone() * self.powered(j as u32, t).clone();
                    }
                    if v.is_zero() {
                        x[z] = t;
                        tally.hit(x);
                    }
                    t += p;
                }
            }
        });
    }

    fn run_brute(&self, range0: (i64, i64), tally: &mut Tally) {
        let b = self.bound;
        let ranges: Vec<(i64, i64)> = (0..self.arity)
            .map(|i| if i == 0 { range0 } else { (-b, b) })
            .collect();
        for_each_tuple(&ranges, |x| {
            let mut v = T::zero();
            for (c, e) in &self.terms {
                v = v + self.monomial(c, e, x);
            }
            if v.is_zero() {
                tally.hit(x);
            }
        });
    }
}

/// Residue classes of `z` mod `p` on which `f` vanishes, for every residue
/// tuple of the outer coordinates, in CSR layout.
struct SieveTable {
    prime: u64,
    offsets: Vec<u32>,
    classes: Vec<u32>,
    /// `x mod p` for `x ∈ [-B, B]`, offset by `B`.
    residue: Vec<u32>,
}

impl SieveTable {
    fn new(f: &IntPolynomial, bound: i64, prime: u64, mem_cap: u64) -> Result<SieveTable> {
        let outer = f.arity() - 1;
        let tuples = prime
            .checked_pow(outer as u32)
            .filter(|&n| n < u32::MAX as u64 / prime.max(1));
        let bytes = tuples.map(|n| 4 * (n + 1) + 4 * n * prime);
        match bytes {
            Some(bytes) if bytes <= mem_cap => {}
            _ => {
                return Err(Error::ResourceCap(format!(
                    "sieve table for p = {prime} over {outer} coordinates exceeds the memory cap"
                )))
            }
        }
        let tuples = tuples.expect("checked") as usize;
        let reduced = ModPoly::new(f, prime);
        let mut offsets = Vec::with_capacity(tuples + 1);
        let mut classes = Vec::new();
        let mut point = vec![0u64; f.arity()];
        offsets.push(0u32);
        for idx in 0..tuples {
            let mut r = idx as u64;
            for slot in point.iter_mut().take(outer) {
                *slot = r % prime;
                r /= prime;
            }
            for t in 0..prime {
                point[outer] = t;
                if reduced.eval(&point) == 0 {
                    classes.push(t as u32);
                }
            }
            offsets.push(classes.len() as u32);
        }
        let residue = (-bound..=bound)
            .map(|x| x.rem_euclid(prime as i64) as u32)
            .collect();
        Ok(SieveTable {
            prime,
            offsets,
            classes,
            residue,
        })
    }

    #[inline]
    fn index(&self, outer: &[i64], bound: i64) -> usize {
        let mut idx = 0usize;
        for &x in outer.iter().rev() {
            idx = idx * self.prime as usize + self.residue[(x + bound) as usize] as usize;
        }
        idx
    }

    #[inline]
    fn classes(&self, idx: usize) -> &[u32] {
        &self.classes[self.offsets[idx] as usize..self.offsets[idx + 1] as usize]
    }
}

/// Calls `visit` on every tuple in the product of inclusive ranges.
pub(crate) fn for_each_tuple(ranges: &[(i64, i64)], mut visit: impl FnMut(&[i64])) {
    if ranges.iter().any(|&(lo, hi)| lo > hi) {
        return;
    }
    let mut x: Vec<i64> = ranges.iter().map(|&(lo, _)| lo).collect();
    loop {
        visit(&x);
        let mut i = ranges.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if x[i] < ranges[i].1 {
                x[i] += 1;
                break;
            }
            x[i] = ranges[i].0;
        }
    }
}

/// Contiguous pieces of `[-B, B]`, at most `shards` of them.
pub(crate) fn shard_ranges(bound: i64, shards: usize) -> Vec<(i64, i64)> {
    let width = 2 * bound + 1;
    let n = (shards.max(1) as i64).min(width);
    (0..n)
        .map(|s| (-bound + s * width / n, -bound + (s + 1) * width / n - 1))
        .collect()
}

fn run<T: ExactInt>(
    f: &IntPolynomial,
    bound: i64,
    opts: &CountOptions,
    proto: &Tally,
) -> Result<Tally> {
    let plan = Plan::<T>::new(f, bound)?;
    let table = match opts.engine {
        Engine::Sieve { prime } => {
            let p = prime.unwrap_or_else(|| default_sieve_prime(bound, f.degree().unwrap_or(1)));
            Some(SieveTable::new(f, bound, p, opts.mem_cap)?)
        }
        _ => None,
    };
    let pieces = if f.arity() == 1 {
        vec![(-bound, bound)]
    } else {
        shard_ranges(bound, opts.shards)
    };
    let parts: Vec<Tally> = pieces
        .par_iter()
        .map(|&range0| {
            let mut t = proto.clone();
            match (&opts.engine, &table) {
                (Engine::Brute, _) => plan.run_brute(range0, &mut t),
                (Engine::Sieve { .. }, Some(table)) => plan.run_sieve(table, range0, &mut t),
                _ => plan.run_slice(range0, &mut t),
            }
            t
        })
        .collect();
    let mut total = proto.clone();
    for part in parts {
        total.absorb(part);
    }
    Ok(total)
}

pub(crate) fn enumerate(
    f: &IntPolynomial,
    bound: i64,
    opts: &CountOptions,
    proto: Tally,
) -> Result<Tally> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if bound < 1 {
        return Err(Error::InvalidArgument(format!(
            "bound must be at least 1, got {bound}"
        )));
    }
    if let Engine::Sieve { prime: Some(p) } = opts.engine {
        if !crate::arith::primes::is_prime(p) {
            return Err(Error::InvalidArgument(format!(
                "sieve modulus {p} is not prime"
            )));
        }
    }
    match Width::for_bound(&magnitude_bound(f, bound)) {
        Width::I64 => run::<i64>(f, bound, opts, &proto),
        Width::I128 => run::<i128>(f, bound, opts, &proto),
        Width::Big => run::<BigInt>(f, bound, opts, &proto),
    }
}
