//! Lines through sampled points of a hypersurface.
//!
//! Detection is sample based: a line is found only if two independent
//! sample points lie on it, so the result is a lower bound on the set of
//! lines defined over `Q`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{projective_points, CountOptions};
use crate::error::{Error, Result};
use crate::polyring::IntPolynomial;

/// Random points added to the height-`≤ 2` part of a line sample.
pub const LINE_SAMPLE_RANDOM: usize = 64;

/// Projective line, stored as the reduced row echelon basis of its plane
/// in `Q^m`, each row scaled to a primitive integer vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Line {
    pub basis: [Vec<i64>; 2],
}

impl Line {
    /// The line through two independent points, or `None` if dependent.
    pub fn through(p: &[i64], q: &[i64]) -> Option<Line> {
        let mut rows: Vec<Vec<BigRational>> = [p, q]
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| BigRational::from_integer(x.into()))
                    .collect()
            })
            .collect();
        let m = p.len();
        let mut pivot_row = 0;
        for col in 0..m {
            if pivot_row == 2 {
                break;
            }
            let Some(r) = (pivot_row..2).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(pivot_row, r);
            let inv = rows[pivot_row][col].recip();
            for x in rows[pivot_row].iter_mut() {
                *x = &*x * &inv;
            }
            let other = 1 - pivot_row;
            let f = rows[other][col].clone();
            if !f.is_zero() {
                for j in 0..m {
                    let d = &f * &rows[pivot_row][j];
                    rows[other][j] = &rows[other][j] - d;
                }
            }
            pivot_row += 1;
        }
        if pivot_row < 2 {
            return None;
        }
        let ints: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| primitive_row(r))
            .collect::<Option<_>>()?;
        Some(Line {
            basis: [ints[0].clone(), ints[1].clone()],
        })
    }

    /// Whether `x` lies in the plane spanned by the basis.
    pub fn contains(&self, x: &[i64]) -> bool {
        let [a, b] = &self.basis;
        let m = x.len();
        if m < 3 {
            return true;
        }
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    let col = |v: &[i64]| [v[i] as i128, v[j] as i128, v[k] as i128];
                    if det3(col(a), col(b), col(x)) != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn det3(r0: [i128; 3], r1: [i128; 3], r2: [i128; 3]) -> i128 {
    r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
}

fn primitive_row(r: &[BigRational]) -> Option<Vec<i64>> {
    let l = r.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = r.iter().map(|x| (x * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    ints.iter().map(|x| (x / &g).to_i64()).collect()
}

/// Whether `form` vanishes identically on the line through `p` and `q`:
/// checked at the `deg + 1` distinct points `p + j q`, `j = 0..=deg`.
fn vanishes_on_line(form: &IntPolynomial, p: &[i64], q: &[i64]) -> bool {
    let d = form.degree().unwrap_or(0) as i64;
    (0..=d).all(|j| {
        let x: Vec<BigInt> = p
            .iter()
            .zip(q)
            .map(|(&a, &b)| BigInt::from(a) + BigInt::from(j) * BigInt::from(b))
            .collect();
        form.evaluate_big(&x).is_ok_and(|v| v.is_zero())
    })
}

/// Lines contained in `form = 0` through pairs of sample points, sorted and
/// deduplicated.
pub fn detect_lines(form: &IntPolynomial, sample: &[Vec<i64>]) -> Result<Vec<Line>> {
    form.require_homogeneous()?;
    if let Some(bad) = sample.iter().find(|x| x.len() != form.arity()) {
        return Err(Error::ArityMismatch {
            expected: form.arity(),
            found: bad.len(),
        });
    }
    let mut found: Vec<Line> = Vec::new();
    for (i, p) in sample.iter().enumerate() {
        for q in &sample[i + 1..] {
            if found.iter().any(|l| l.contains(p) && l.contains(q)) {
                continue;
            }
            let Some(line) = Line::through(p, q) else {
                continue;
            };
            if vanishes_on_line(form, p, q) {
                found.push(line);
            }
        }
    }
    found.sort();
    found.dedup();
    Ok(found)
}

/// All points of height `≤ 2` plus [`LINE_SAMPLE_RANDOM`] draws from
/// `points`, with a seeded generator.
pub fn line_sample(points: &[Vec<i64>], seed: u64) -> Vec<Vec<i64>> {
    let mut chosen: BTreeSet<usize> = points
        .iter()
        .enumerate()
        .filter(|(_, x)| x.iter().all(|v| v.abs() <= 2))
        .map(|(i, _)| i)
        .collect();
    if !points.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..LINE_SAMPLE_RANDOM {
            chosen.insert(rng.random_range(0..points.len()));
        }
    }
    chosen.into_iter().map(|i| points[i].clone()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OffLinesReport {
    pub total: u64,
    pub on_lines: u64,
    pub off_lines: u64,
    pub lines: Vec<Line>,
    /// Points not on any detected line, sorted.
    pub off_line_points: Vec<Vec<i64>>,
}

/// Splits `N(F; B)` into vectors on detected lines and the rest.
pub fn count_off_lines(
    form: &IntPolynomial,
    bound: i64,
    opts: &CountOptions,
    seed: u64,
) -> Result<OffLinesReport> {
    let points = projective_points(form, bound, opts)?;
    let lines = detect_lines(form, &line_sample(&points, seed))?;
    let off_line_points: Vec<Vec<i64>> = points
        .iter()
        .filter(|x| !lines.iter().any(|l| l.contains(x)))
        .cloned()
        .collect();
    let total = points.len() as u64;
    let off_lines = off_line_points.len() as u64;
    Ok(OffLinesReport {
        total,
        on_lines: total - off_lines,
        off_lines,
        lines,
        off_line_points,
    })
}
