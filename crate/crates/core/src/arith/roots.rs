//! Exact integer roots of univariate polynomials on a bounded interval.
//!
//! The general path never leaves integer arithmetic. The sequence `q(t)` on
//! consecutive integers is monotone wherever the forward difference
//! `Δq(t) = q(t+1) − q(t)` keeps one sign, so sign changes of `Δq` (found
//! recursively, degree dropping by one per level) cut `[lo, hi]` into
//! monotone runs, and each run is bisected. Binomials and linear
//! polynomials are solved in closed form.

use super::ExactInt;

/// Outcome of a root search on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootSet {
    /// The polynomial is identically zero.
    All,
    /// Sorted integer roots.
    Finite(Vec<i64>),
}

/// `t ↦ t^r` on `0..=bound`, for binary-search root extraction.
#[derive(Debug, Clone)]
pub struct PowerTable<T> {
    exponent: u32,
    values: Vec<T>,
}

impl<T: ExactInt> PowerTable<T> {
    pub fn new(exponent: u32, bound: i64) -> Self {
        let values = (0..=bound)
            .map(|t| num_traits::pow(T::from_i64(t).unwrap(), exponent as usize))
            .collect();
        PowerTable { exponent, values }
    }

    fn root(&self, q: &T) -> Option<i64> {
        self.values.binary_search(q).ok().map(|i| i as i64)
    }
}

/// Reusable solver; holds power tables for the binomial exponents it has
/// been told to expect.
#[derive(Debug, Clone, Default)]
pub struct RootFinder<T> {
    tables: Vec<PowerTable<T>>,
}

impl<T: ExactInt> RootFinder<T> {
    pub fn new() -> Self {
        RootFinder { tables: Vec::new() }
    }

    pub fn with_tables(exponents: &[u32], bound: i64) -> Self {
        let mut tables: Vec<PowerTable<T>> = Vec::new();
        for &r in exponents {
            if r >= 2 && tables.iter().all(|t| t.exponent != r) {
                tables.push(PowerTable::new(r, bound));
            }
        }
        RootFinder { tables }
    }

    /// Non-negative exact `r`-th root of `q ≥ 0`, if one exists.
    fn exact_root(&self, q: &T, r: u32) -> Option<i64> {
        if let Some(t) = self.tables.iter().find(|t| t.exponent == r) {
            if let Some(x) = t.root(q) {
                return Some(x);
            }
            if t.values.last().is_some_and(|m| q <= m) {
                return None;
            }
        }
        let x = q.nth_root(r);
        if num_traits::pow(x.clone(), r as usize) == *q {
            x.to_i64()
        } else {
            None
        }
    }

    /// Integer roots of `Σ c_j t^j` (constant first) in `[lo, hi]`.
    pub fn roots(&self, coeffs: &[T], lo: i64, hi: i64) -> RootSet {
        let c = trim(coeffs);
        if c.is_empty() {
            return RootSet::All;
        }
        let mut out = Vec::new();
        if lo > hi {
            return RootSet::Finite(out);
        }
        let nonzero: Vec<usize> = (0..c.len()).filter(|&j| !c[j].is_zero()).collect();
        match nonzero.len() {
            1 => {
                if nonzero[0] > 0 && lo <= 0 && 0 <= hi {
                    out.push(0);
                }
            }
            2 => {
                let (m, k) = (nonzero[0], nonzero[1]);
                if m > 0 && lo <= 0 && 0 <= hi {
                    out.push(0);
                }
                let rhs = -c[m].clone();
                let (q, rem) = rhs.div_rem(&c[k]);
                if rem.is_zero() {
                    let r = (k - m) as u32;
                    let mut cand = [None, None];
                    if r == 1 {
                        cand[0] = q.to_i64();
                    } else if q.is_negative() {
                        if r % 2 == 1 {
                            cand[0] = self.exact_root(&-q.clone(), r).map(|x| -x);
                        }
                    } else if let Some(x) = self.exact_root(&q, r) {
                        cand[0] = Some(x);
                        if r.is_multiple_of(2) {
                            cand[1] = Some(-x);
                        }
                    }
                    out.extend(
                        cand.into_iter()
                            .flatten()
                            .filter(|&t| t != 0 && lo <= t && t <= hi),
                    );
                }
                out.sort_unstable();
            }
            _ => {
                general_roots(c, lo, hi, &mut out);
            }
        }
        RootSet::Finite(out)
    }
}

fn trim<T: ExactInt>(c: &[T]) -> &[T] {
    let mut n = c.len();
    while n > 0 && c[n - 1].is_zero() {
        n -= 1;
    }
    &c[..n]
}

pub fn horner<T: ExactInt>(c: &[T], t: i64) -> T {
    let t = T::from_i64(t).unwrap();
    let mut acc = T::zero();
    for a in c.iter().rev() {
        acc = acc * t.clone() + a.clone();
    }
    acc
}

fn sign<T: ExactInt>(c: &[T], t: i64) -> i8 {
    let v = horner(c, t);
    if v.is_zero() {
        0
    } else if v.is_negative() {
        -1
    } else {
        1
    }
}

/// Coefficients of `q(t+1) − q(t)`.
fn forward_difference<T: ExactInt>(c: &[T]) -> Vec<T> {
    let n = c.len();
    let mut out = vec![T::zero(); n.saturating_sub(1)];
    for (j, cj) in c.iter().enumerate().skip(1) {
        let mut binom = T::one();
        for (i, slot) in out.iter_mut().enumerate().take(j) {
            *slot = slot.clone() + cj.clone() * binom.clone();
            binom = binom * T::from_usize(j - i).unwrap() / T::from_usize(i + 1).unwrap();
        }
    }
    out
}

/// First `t` in `[u, v]` with `pred(t)`, assuming `pred` is monotone
/// false → true and `pred(v)` holds.
fn first_true(u: i64, v: i64, pred: impl Fn(i64) -> bool) -> i64 {
    let (mut lo, mut hi) = (u, v);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Maximal integer runs of `[lo, hi]` on which `q` is monotone.
fn monotone_runs<T: ExactInt>(q: &[T], lo: i64, hi: i64) -> Vec<(i64, i64)> {
    if q.len() <= 2 || lo >= hi {
        return vec![(lo, hi)];
    }
    let d = forward_difference(q);
    let mut breaks = Vec::new();
    sign_changes(trim(&d), lo, hi - 1, &mut breaks);
    let mut points = Vec::with_capacity(breaks.len() + 2);
    points.push(lo);
    points.extend(breaks.iter().map(|c| c + 1));
    points.push(hi);
    points.dedup();
    points.windows(2).map(|w| (w[0], w[1])).collect()
}

/// All `c ∈ [lo, hi)` where `sign q(c) ≠ sign q(c+1)`.
fn sign_changes<T: ExactInt>(q: &[T], lo: i64, hi: i64, out: &mut Vec<i64>) {
    if q.len() <= 1 || lo >= hi {
        return;
    }
    for (u, v) in monotone_runs(q, lo, hi) {
        let (su, sv) = (sign(q, u), sign(q, v));
        if su == sv {
            continue;
        }
        let mut found = Vec::with_capacity(2);
        if su < sv {
            for level in (su + 1)..=sv {
                let t = first_true(u, v, |t| sign(q, t) >= level);
                found.push(t - 1);
            }
        } else {
            for level in (sv..su).rev() {
                let t = first_true(u, v, |t| sign(q, t) <= level);
                found.push(t - 1);
            }
        }
        found.dedup();
        out.extend(found);
    }
}

fn general_roots<T: ExactInt>(q: &[T], lo: i64, hi: i64, out: &mut Vec<i64>) {
    for (u, v) in monotone_runs(q, lo, hi) {
        let (su, sv) = (sign(q, u), sign(q, v));
        if su == sv {
            if su == 0 {
                out.extend(u..=v);
            }
            continue;
        }
        let start = if su < sv {
            first_true(u, v, |t| sign(q, t) >= 0)
        } else {
            first_true(u, v, |t| sign(q, t) <= 0)
        };
        let mut t = start;
        while t <= v && sign(q, t) == 0 {
            out.push(t);
            t += 1;
        }
    }
    out.sort_unstable();
    out.dedup();
}
