//! Exact point counts: integer points of bounded sup-norm on affine and
//! projective hypersurfaces, points over prime fields, points on plane
//! curves, and the split between points on detected lines and the rest.

mod enumerate;
mod lines;
mod modp;

use serde::Serialize;

use crate::arith::primes::next_prime;
use crate::error::{Error, Result};
use crate::polyring::{IntPolynomial, LatticePoint};

pub use lines::{
    count_off_lines, detect_lines, line_sample, Line, OffLinesReport, LINE_SAMPLE_RANDOM,
};
pub use modp::{count_mod_p, ModPSummary};

/// 4 GiB.
pub const DEFAULT_MEM_CAP: u64 = 4 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Engine {
    /// Evaluate at every point of the box.
    Brute,
    /// Exact root finding in the last coordinate.
    Slice,
    /// Residue-class sieve in the last coordinate; the default modulus is
    /// the smallest prime `≥ B^{1/√δ}`.
    Sieve { prime: Option<u64> },
}

impl Engine {
    pub fn name(&self) -> &'static str {
        match self {
            Engine::Brute => "brute",
            Engine::Slice => "slice",
            Engine::Sieve { .. } => "sieve",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CountOptions {
    pub engine: Engine,
    pub shards: usize,
    pub mem_cap: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            engine: Engine::Slice,
            shards: 1,
            mem_cap: DEFAULT_MEM_CAP,
        }
    }
}

impl CountOptions {
    pub fn with_engine(engine: Engine) -> Self {
        CountOptions {
            engine,
            ..CountOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointRecord {
    pub coords: LatticePoint,
    pub primitive: bool,
    /// `None` until line detection has run.
    pub on_detected_line: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountSeries {
    pub experiment: String,
    pub points: Vec<(u64, u64)>,
}

impl CountSeries {
    pub fn new(experiment: impl Into<String>) -> Self {
        CountSeries {
            experiment: experiment.into(),
            points: Vec::new(),
        }
    }

    /// Appends `(bound, count)`; bounds must increase strictly.
    pub fn push(&mut self, bound: u64, count: u64) -> Result<()> {
        if let Some(&(last, _)) = self.points.last() {
            if bound <= last {
                return Err(Error::InvalidArgument(format!(
                    "bound {bound} does not exceed previous bound {last}"
                )));
            }
        }
        self.points.push((bound, count));
        Ok(())
    }

    pub fn is_monotone(&self) -> bool {
        self.points.windows(2).all(|w| w[0].1 <= w[1].1)
    }
}

/// `M(f; B)`: integer points `|t| ≤ B` with `f(t) = 0`.
pub fn count_affine(f: &IntPolynomial, bound: i64) -> Result<u64> {
    count_affine_with(f, bound, &CountOptions::default())
}

pub fn count_affine_with(f: &IntPolynomial, bound: i64, opts: &CountOptions) -> Result<u64> {
    Ok(enumerate::enumerate(f, bound, opts, enumerate::Tally::new(false, false))?.count)
}

/// [`count_affine`] through the residue sieve; `None` picks the default
/// modulus.
pub fn count_affine_sieved(f: &IntPolynomial, bound: i64, prime: Option<u64>) -> Result<u64> {
    count_affine_with(
        f,
        bound,
        &CountOptions::with_engine(Engine::Sieve { prime }),
    )
}

/// Sorted list of the points counted by [`count_affine`].
pub fn affine_points(f: &IntPolynomial, bound: i64, opts: &CountOptions) -> Result<Vec<Vec<i64>>> {
    let mut pts = enumerate::enumerate(f, bound, opts, enumerate::Tally::new(false, true))?.points;
    pts.sort();
    Ok(pts)
}

/// `N(F; B)`: primitive integer vectors `|x| ≤ B` with `F(x) = 0`. `x` and
/// `-x` are both counted.
pub fn count_projective(form: &IntPolynomial, bound: i64) -> Result<u64> {
    count_projective_with(form, bound, &CountOptions::default())
}

pub fn count_projective_with(form: &IntPolynomial, bound: i64, opts: &CountOptions) -> Result<u64> {
    form.require_homogeneous()?;
    Ok(enumerate::enumerate(form, bound, opts, enumerate::Tally::new(true, false))?.count)
}

/// Sorted list of the vectors counted by [`count_projective`].
pub fn projective_points(
    form: &IntPolynomial,
    bound: i64,
    opts: &CountOptions,
) -> Result<Vec<Vec<i64>>> {
    form.require_homogeneous()?;
    let mut pts =
        enumerate::enumerate(form, bound, opts, enumerate::Tally::new(true, true))?.points;
    pts.sort();
    Ok(pts)
}

/// Integer points `|t| ≤ B` on the plane curve `g = 0`.
pub fn count_curve_points(g: &IntPolynomial, bound: i64) -> Result<u64> {
    if g.arity() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            found: g.arity(),
        });
    }
    count_affine(g, bound)
}

/// The `count` smallest primes `≥ B^{1/√d}`.
pub fn select_primes(bound: u64, degree: u32, count: usize) -> Vec<u64> {
    let mut p = next_prime(root_ceiling(bound, degree));
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        out.push(p);
        p = next_prime(p + 1);
    }
    out
}

/// Smallest integer `n ≥ B^{1/√d}`.
fn root_ceiling(bound: u64, degree: u32) -> u64 {
    if bound <= 1 {
        return 1;
    }
    let s = (degree as f64).sqrt().round() as u32;
    if s * s == degree {
        // exact: smallest n with n^s ≥ B
        let mut n = (bound as f64).powf(1.0 / s as f64).round() as u64;
        while n > 1 && (n - 1).checked_pow(s).is_none_or(|v| v >= bound) {
            n -= 1;
        }
        while n.checked_pow(s).is_some_and(|v| v < bound) {
            n += 1;
        }
        return n;
    }
    // B^{1/√d} is irrational here, so the comparison √d·ln n ≥ ln B never ties
    let root = (degree as f64).sqrt();
    let target = (bound as f64).ln();
    let mut n = (target / root).exp().floor().max(1.0) as u64;
    while root * (n as f64).ln() >= target && n > 1 {
        n -= 1;
    }
    while root * (n as f64).ln() < target {
        n += 1;
    }
    n
}
