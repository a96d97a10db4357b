//! Representation counts for sums of three like powers, and equal sums of
//! a polynomial's values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyring::IntPolynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RepCount {
    pub n: u64,
    pub d: u32,
    /// Ordered triples of positive integers with `t1^d + t2^d + t3^d = n`.
    pub r: u64,
}

/// `t^d` for `t = 0, 1, …` while `t^d ≤ limit`.
fn powers_up_to(d: u32, limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut t = 0u64;
    while let Some(v) = t.checked_pow(d).filter(|&v| v <= limit) {
        out.push(v);
        t += 1;
    }
    out
}

/// Sorted `(value, multiplicity)` of `a + b` over ordered pairs from
/// `values` with `a + b ≤ limit`.
fn pair_sums(values: &[u64], limit: u64) -> Vec<(u64, u64)> {
    let mut sums = Vec::new();
    for &a in values {
        for &b in values {
            match a.checked_add(b) {
                Some(s) if s <= limit => sums.push(s),
                _ => break,
            }
        }
    }
    run_lengths(sums)
}

fn run_lengths<T: Ord + Copy>(mut v: Vec<T>) -> Vec<(T, u64)> {
    v.sort_unstable();
    let mut out: Vec<(T, u64)> = Vec::new();
    for x in v {
        match out.last_mut() {
            Some((y, m)) if *y == x => *m += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

fn check_degree(d: u32) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "degree must be at least 2, got {d}"
        )));
    }
    Ok(())
}

/// `r_d(n)` by probing a table of two-term sums with each `t3`.
pub fn r_d(n: u64, d: u32) -> Result<RepCount> {
    check_degree(d)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let powers = powers_up_to(d, n);
    let positive = &powers[1..];
    let table = pair_sums(positive, n);
    let mut r = 0u64;
    for &c in positive {
        let rest = n - c;
        if let Ok(i) = table.binary_search_by_key(&rest, |&(v, _)| v) {
            r += table[i].1;
        }
    }
    Ok(RepCount { n, d, r })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BatchCounts {
    pub limit: u64,
    pub d: u32,
    /// `(n, r_d(n))` for every `n ≤ limit` with `r_d(n) > 0`, by `n`.
    pub nonzero: Vec<(u64, u64)>,
    pub max: u64,
    /// Smallest `n` attaining `max`; `None` when every count is zero.
    pub argmax: Option<u64>,
    /// Residue classes the range was split into.
    pub shards: u64,
}

impl BatchCounts {
    pub fn get(&self, n: u64) -> u64 {
        self.nonzero
            .binary_search_by_key(&n, |&(m, _)| m)
            .map_or(0, |i| self.nonzero[i].1)
    }

    /// `Σ_{n ≤ limit} r_d(n)`.
    pub fn total(&self) -> u64 {
        self.nonzero.iter().map(|&(_, r)| r).sum()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BatchOptions {
    pub mem_cap: u64,
    /// Split into residue classes when the dense count array would exceed
    /// `mem_cap`; without it such inputs are refused.
    pub allow_sharding: bool,
}

impl Default for BatchOptions {
    fn default() -> Self {
        BatchOptions {
            mem_cap: crate::census::DEFAULT_MEM_CAP,
            allow_sharding: true,
        }
    }
}

/// `r_d(n)` for every `1 ≤ n ≤ limit`.
pub fn r_d_batch(limit: u64, d: u32, opts: &BatchOptions) -> Result<BatchCounts> {
    check_degree(d)?;
    let powers = powers_up_to(d, limit);
    let positive = &powers[1..];
    let table = pair_sums(positive, limit);
    // dense u32 counts per residue class, plus the table itself
    let table_bytes = 16 * table.len() as u64;
    let cell_budget = opts.mem_cap.saturating_sub(table_bytes) / 4;
    if cell_budget == 0 {
        return Err(Error::ResourceCap(
            "pair-sum table alone exceeds the memory cap".into(),
        ));
    }
    let cells = limit + 1;
    let shards = cells.div_ceil(cell_budget);
    if shards > 1 && !opts.allow_sharding {
        return Err(Error::ResourceCap(format!(
            "{cells} counters exceed the memory cap and sharding is disabled"
        )));
    }
    let parts: Vec<Vec<(u64, u64)>> = (0..shards)
        .into_par_iter()
        .map(|class| {
            let len = (cells - class).div_ceil(shards) as usize;
            let mut counts = vec![0u32; len];
            for &c in positive {
                for &(v, m) in &table {
                    let n = v + c;
                    if n > limit {
                        break;
                    }
                    if n % shards == class {
                        counts[(n / shards) as usize] += m as u32;
                    }
                }
            }
            counts
                .iter()
                .enumerate()
                .filter(|&(_, &r)| r > 0)
                .map(|(i, &r)| (i as u64 * shards + class, r as u64))
                .collect()
        })
        .collect();
    let mut nonzero: Vec<(u64, u64)> = parts.into_iter().flatten().collect();
    nonzero.sort_unstable();
    let max = nonzero.iter().map(|&(_, r)| r).max().unwrap_or(0);
    let argmax = nonzero
        .iter()
        .find(|&&(_, r)| r == max && max > 0)
        .map(|&(n, _)| n);
    Ok(BatchCounts {
        limit,
        d,
        nonzero,
        max,
        argmax,
        shards,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EqualSumsTally {
    pub s: u32,
    pub bound: u64,
    /// Ordered `2s`-tuples in `[1, B]` with equal value sums on both sides.
    pub total: u64,
    /// Tuples whose second half permutes the first.
    pub trivial: u64,
    pub nontrivial: u64,
}

/// Largest number of `s`-tuples the brute-force histogram will hold.
const BRUTE_TUPLE_CAP: u64 = 1 << 26;

fn values_on_range(f: &IntPolynomial, bound: u64) -> Result<Vec<i128>> {
    let coeffs = f.univariate_coefficients()?;
    (1..=bound)
        .map(|x| {
            let x = BigInt::from(x);
            let mut acc = BigInt::zero();
            for c in coeffs.iter().rev() {
                acc = acc * &x + c;
            }
            acc.to_i128()
                .filter(|v| v.unsigned_abs() < (1u128 << 120))
                .ok_or_else(|| Error::Overflow(format!("f({x}) = {acc} is too large")))
        })
        .collect()
}

/// `L_s(f; B)` split into trivial and nontrivial solutions.
///
/// `s = 2` uses a sorted table of pair sums, sharded by residue of the
/// value when it would exceed `mem_cap`; larger `s` histograms every
/// `s`-tuple and is capped.
pub fn equal_sums(f: &IntPolynomial, s: u32, bound: u64, mem_cap: u64) -> Result<EqualSumsTally> {
    if s < 2 {
        return Err(Error::InvalidArgument(format!(
            "s must be at least 2, got {s}"
        )));
    }
    if f.arity() != 1 {
        return Err(Error::InvalidArgument(format!(
            "expected a univariate polynomial, got arity {}",
            f.arity()
        )));
    }
    if bound == 0 {
        return Err(Error::InvalidArgument("bound must be positive".into()));
    }
    let values = values_on_range(f, bound)?;
    let total = if s == 2 {
        pair_collisions(&values, mem_cap)?
    } else {
        tuple_collisions(&values, s)?
    };
    let trivial = trivial_count(s, bound)
        .to_u64()
        .ok_or_else(|| Error::Overflow("trivial count exceeds u64".into()))?;
    Ok(EqualSumsTally {
        s,
        bound,
        total,
        trivial,
        nontrivial: total - trivial,
    })
}

fn pair_collisions(values: &[i128], mem_cap: u64) -> Result<u64> {
    let n = values.len() as u64;
    let bytes = 16 * n * n;
    let shards = bytes.div_ceil(mem_cap.max(1)).max(1) as i128;
    let parts: Vec<u64> = (0..shards)
        .into_par_iter()
        .map(|class| {
            let mut sums = Vec::new();
            for &a in values {
                for &b in values {
                    let v = a + b;
                    if v.rem_euclid(shards) == class {
                        sums.push(v);
                    }
                }
            }
            run_lengths(sums).iter().map(|&(_, m)| m * m).sum()
        })
        .collect();
    Ok(parts.iter().sum())
}

fn tuple_collisions(values: &[i128], s: u32) -> Result<u64> {
    let n = values.len() as u64;
    let tuples = n
        .checked_pow(s)
        .filter(|&t| t <= BRUTE_TUPLE_CAP)
        .ok_or_else(|| Error::ResourceCap(format!("{n}^{s} tuples exceed the brute-force cap")))?;
    let mut sums = Vec::with_capacity(tuples as usize);
    for k in 0..tuples {
        let mut r = k;
        let mut v = 0i128;
        for _ in 0..s {
            v += values[(r % n) as usize];
            r /= n;
        }
        sums.push(v);
    }
    Ok(run_lengths(sums).iter().map(|&(_, m)| m * m).sum())
}

/// Exact number of `2s`-tuples in `[1, B]` whose second half is a
/// permutation of the first: `(s!)² [x^s] (Σ_m x^m/(m!)²)^B`.
pub fn trivial_count(s: u32, bound: u64) -> BigInt {
    let s = s as usize;
    let mut fact = vec![BigInt::one()];
    for m in 1..=s {
        let next = &fact[m - 1] * BigInt::from(m);
        fact.push(next);
    }
    let base: Vec<BigRational> = (0..=s)
        .map(|m| BigRational::new(BigInt::one(), &fact[m] * &fact[m]))
        .collect();
    let truncated_mul = |a: &[BigRational], b: &[BigRational]| -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); s + 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(s + 1 - i) {
                out[i + j] += x * y;
            }
        }
        out
    };
    let mut result = vec![BigRational::zero(); s + 1];
    result[0] = BigRational::one();
    let mut power = base;
    let mut e = bound;
    while e > 0 {
        if e & 1 == 1 {
            result = truncated_mul(&result, &power);
        }
        e >>= 1;
        if e > 0 {
            power = truncated_mul(&power, &power);
        }
    }
    let scaled = &result[s] * BigRational::from_integer(&fact[s] * &fact[s]);
    debug_assert!(scaled.is_integer() && !scaled.is_negative());
    scaled.to_integer()
}
