//! Hyperplane slices `a·t = κ` of an affine hypersurface.
//!
//! A primitive direction `a` is completed to `A ∈ SL_ν(Z)` with first row
//! `a`; the transformed polynomial is `g(S) = f(A⁻¹ S)`, so `g(A t) = f(t)`
//! and the slice at `κ` is `g(κ, S_2, …, S_ν)`.

use std::cmp::Reverse;

use serde::Serialize;

use super::{smoothness_verdict, Model, SmoothnessConfig};
use crate::arith::is_primitive;
use crate::error::{Error, Result};
use crate::lattice::{inverse, unimodular_completion, IntMatrix};
use crate::polyring::IntPolynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BadReason {
    /// The slice is the zero polynomial: the hyperplane lies in the
    /// hypersurface.
    Vanishes,
    DegreeDrop,
    /// The projective closure of the slice failed the smoothness evidence.
    Singular,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BadSlice {
    pub value: i64,
    pub reason: BadReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceReport {
    pub direction: Vec<i64>,
    #[serde(serialize_with = "crate::polyring::wire::decimal_matrix")]
    pub completion: IntMatrix,
    pub good_value: i64,
    /// Values along `direction` rejected before `good_value` was accepted.
    pub bad_values: Vec<BadSlice>,
    pub slice: IntPolynomial,
    /// Search radius at which the slice was found.
    pub radius: i64,
}

#[derive(Debug, Clone)]
pub struct SliceSearchConfig {
    pub initial_radius: i64,
    pub max_radius: i64,
    /// Skip the smoothness precondition on the input.
    pub override_smoothness: bool,
    pub smoothness: SmoothnessConfig,
}

impl Default for SliceSearchConfig {
    fn default() -> Self {
        SliceSearchConfig {
            initial_radius: 8,
            max_radius: 64,
            override_smoothness: false,
            smoothness: SmoothnessConfig::default(),
        }
    }
}

/// `g(S) = f(A⁻¹ S)` for a unimodular `A`.
pub fn transform(f: &IntPolynomial, completion: &IntMatrix) -> Result<IntPolynomial> {
    let inv = inverse(completion)?;
    f.linear_substitute(&inv)
}

/// Completion of `direction` together with the slice of `f` on
/// `direction · t = value`.
pub fn slice_along(
    f: &IntPolynomial,
    direction: &[i64],
    value: i64,
) -> Result<(IntMatrix, IntPolynomial)> {
    check_direction(f, direction)?;
    let a = unimodular_completion(direction)?;
    let g = transform(f, &a)?;
    Ok((a, g.slice(0, value)?))
}

fn check_direction(f: &IntPolynomial, direction: &[i64]) -> Result<()> {
    if direction.len() != f.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: direction.len(),
        });
    }
    if f.arity() < 2 {
        return Err(Error::InvalidArgument(
            "slicing needs at least two variables".into(),
        ));
    }
    if !is_primitive(direction) {
        return Err(Error::InvalidArgument(format!(
            "direction {direction:?} is not primitive"
        )));
    }
    Ok(())
}

/// Why the slice `g_κ` is bad, or `None` if it is good.
pub fn classify_slice(
    slice: &IntPolynomial,
    degree: u32,
    config: &SmoothnessConfig,
) -> Option<BadReason> {
    match slice.degree() {
        None => return Some(BadReason::Vanishes),
        Some(d) if d < degree => return Some(BadReason::DegreeDrop),
        Some(_) => {}
    }
    match smoothness_verdict(slice, Model::Affine, config) {
        Ok(v) if v.passes() => None,
        _ => Some(BadReason::Singular),
    }
}

/// Every `|κ| ≤ range_bound` whose slice along `direction` is bad, in
/// increasing order of `κ`.
pub fn bad_slice_values(
    f: &IntPolynomial,
    direction: &[i64],
    range_bound: i64,
    config: &SmoothnessConfig,
) -> Result<Vec<BadSlice>> {
    check_direction(f, direction)?;
    let degree = f.degree().ok_or(Error::ZeroPolynomial)?;
    let g = transform(f, &unimodular_completion(direction)?)?;
    let mut out = Vec::new();
    for value in -range_bound..=range_bound {
        if let Some(reason) = classify_slice(&g.slice(0, value)?, degree, config) {
            out.push(BadSlice { value, reason });
        }
    }
    Ok(out)
}

/// Primitive directions of sup-norm exactly `sup`, first nonzero entry
/// positive, ordered by l1-norm and then with larger leading magnitudes
/// first (so `e_1` precedes `e_2`).
pub fn direction_order(arity: usize, sup: i64) -> Vec<Vec<i64>> {
    let side = (2 * sup + 1) as u64;
    let total = side.pow(arity as u32);
    let mut out = Vec::new();
    for k in 0..total {
        let mut r = k;
        let v: Vec<i64> = (0..arity)
            .map(|_| {
                let d = (r % side) as i64 - sup;
                r /= side;
                d
            })
            .rev()
            .collect();
        let lead_positive = v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0);
        if lead_positive && v.iter().map(|x| x.abs()).max() == Some(sup) && is_primitive(&v) {
            out.push(v);
        }
    }
    out.sort_by_key(|v| {
        let abs: Vec<i64> = v.iter().map(|x| x.abs()).collect();
        (abs.iter().sum::<i64>(), Reverse(abs), Reverse(v.clone()))
    });
    out
}

/// Values `0, 1, -1, 2, -2, …` with `|κ| ≤ bound`.
fn value_order(bound: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=bound).flat_map(|k| [k, -k]))
}

/// First direction and integral value whose slice keeps the degree and
/// passes the smoothness evidence. The radius bounds both the direction's
/// sup-norm and `|κ|`, and doubles on exhaustion.
pub fn good_slice_search(f: &IntPolynomial, config: &SliceSearchConfig) -> Result<SliceReport> {
    let degree = f.degree().ok_or(Error::ZeroPolynomial)?;
    if f.arity() < 2 {
        return Err(Error::InvalidArgument(
            "slicing needs at least two variables".into(),
        ));
    }
    if !config.override_smoothness {
        let v = smoothness_verdict(f, Model::Affine, &config.smoothness)?;
        if !v.passes() {
            return Err(Error::InvalidArgument(
                "input failed the smoothness evidence; pass the override to search anyway".into(),
            ));
        }
    }
    let mut searched = 0i64;
    let mut radius = config.initial_radius.max(1);
    loop {
        for sup in 1..=radius {
            for direction in direction_order(f.arity(), sup) {
                let a = unimodular_completion(&direction)?;
                let g = transform(f, &a)?;
                let mut bad = Vec::new();
                for value in value_order(radius) {
                    if sup <= searched && value.abs() <= searched {
                        continue;
                    }
                    let slice = g.slice(0, value)?;
                    match classify_slice(&slice, degree, &config.smoothness) {
                        None => {
                            return Ok(SliceReport {
                                direction,
                                completion: a,
                                good_value: value,
                                bad_values: bad,
                                slice,
                                radius,
                            })
                        }
                        Some(reason) => bad.push(BadSlice { value, reason }),
                    }
                }
            }
        }
        searched = radius;
        if radius >= config.max_radius {
            return Err(Error::SearchExhausted {
                radius: radius as u64,
            });
        }
        radius = (radius * 2).min(config.max_radius);
    }
}
