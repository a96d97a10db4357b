//! Smoothness evidence for hypersurfaces and the hyperplane-slice search.
//!
//! Exact certification is only attempted for diagonal forms, where the
//! gradient `(d c_i X_i^{d-1})` vanishes only at the origin. Everything
//! else gets exhaustive singular-point scans over a list of small primes
//! together with a search for exact integer witnesses, and the verdict says
//! which kind of evidence it rests on.

mod slices;
mod tangent;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::fp::{for_each_projective_point, ModPoly};
use crate::arith::primes::is_prime;
use crate::error::{Error, Result};
use crate::polyring::IntPolynomial;

pub use slices::{
    bad_slice_values, classify_slice, direction_order, good_slice_search, slice_along, transform,
    BadReason, BadSlice, SliceReport, SliceSearchConfig,
};
pub use tangent::{
    multiplicity_in, tangent_section_multiplicity, tangent_section_multiplicity_mod_p, Integers,
    PrimeField, Ring,
};

pub const DEFAULT_EVIDENCE_PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

/// Largest `p^(arity-1)` an exhaustive projective scan may visit; `101³`
/// admits every prime up to 101 on a surface in `P³`.
pub const DEFAULT_SCAN_CAP: u64 = 101 * 101 * 101;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmoothnessStatus {
    CertifiedSmoothDiagonal,
    NoSingularPointsModPList,
    SingularWithWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// Primitive integer vector where the form and every partial vanish.
    Exact {
        #[serde(serialize_with = "crate::polyring::wire::decimal_vec")]
        point: Vec<BigInt>,
    },
    /// Projective `F_p`-point of the reduction where everything vanishes.
    ModP { prime: u64, point: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmoothnessVerdict {
    pub status: SmoothnessStatus,
    pub witnesses: Vec<Witness>,
    pub primes_checked: Vec<u64>,
    /// Primes whose reduction had no singular `F_p`-point.
    pub clean_primes: Vec<u64>,
    /// Primes skipped because the reduction vanished or the scan was too
    /// large.
    pub skipped_primes: Vec<u64>,
}

impl SmoothnessVerdict {
    /// Certified, or at least one prime with a singularity-free reduction
    /// and no exact witness.
    pub fn passes(&self) -> bool {
        self.status != SmoothnessStatus::SingularWithWitness
    }
}

/// How a polynomial handed to [`smoothness_verdict`] is to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// A form; its zero set lives in projective space directly.
    Projective,
    /// An affine polynomial; judged through its degree-preserving
    /// homogenization.
    Affine,
}

impl Model {
    /// Homogeneous inputs are forms, everything else is affine.
    pub fn infer(p: &IntPolynomial) -> Model {
        if p.is_homogeneous() {
            Model::Projective
        } else {
            Model::Affine
        }
    }
}

#[derive(Debug, Clone)]
pub struct SmoothnessConfig {
    pub primes: Vec<u64>,
    pub scan_cap: u64,
    /// Witnesses kept per prime in the report.
    pub max_witnesses_per_prime: usize,
}

impl Default for SmoothnessConfig {
    fn default() -> Self {
        SmoothnessConfig {
            primes: DEFAULT_EVIDENCE_PRIMES.to_vec(),
            scan_cap: DEFAULT_SCAN_CAP,
            max_witnesses_per_prime: 8,
        }
    }
}

fn scan_size(arity: usize, prime: u64) -> Option<u64> {
    prime.checked_pow(arity.saturating_sub(1) as u32)
}

/// Every projective `F_p`-point where the reduction of `form` and all its
/// partials vanish, sorted.
pub fn find_singular_points_mod_p(form: &IntPolynomial, prime: u64) -> Result<Vec<Vec<u64>>> {
    find_singular_points_mod_p_capped(form, prime, DEFAULT_SCAN_CAP)
}

pub fn find_singular_points_mod_p_capped(
    form: &IntPolynomial,
    prime: u64,
    scan_cap: u64,
) -> Result<Vec<Vec<u64>>> {
    if !is_prime(prime) {
        return Err(Error::InvalidArgument(format!("{prime} is not prime")));
    }
    form.require_homogeneous()?;
    let reduced = ModPoly::new(form, prime);
    if reduced.is_zero() {
        return Err(Error::ZeroReduction { prime });
    }
    match scan_size(form.arity(), prime) {
        Some(n) if n <= scan_cap => {}
        _ => {
            return Err(Error::ResourceCap(format!(
                "scan of P^{}(F_{prime}) exceeds cap {scan_cap}",
                form.arity() - 1
            )))
        }
    }
    let partials: Vec<ModPoly> = form
        .gradient()
        .iter()
        .map(|g| ModPoly::new(g, prime))
        .collect();
    let mut out = Vec::new();
    for_each_projective_point(form.arity(), prime, |x| {
        if reduced.eval(x) == 0 && partials.iter().all(|g| g.eval(x) == 0) {
            out.push(x.to_vec());
        }
    });
    out.sort();
    Ok(out)
}

/// True when `x` is a nonzero integer point where `form` and every partial
/// vanish.
pub fn is_exact_singular_point(form: &IntPolynomial, x: &[BigInt]) -> bool {
    if x.iter().all(Zero::is_zero) {
        return false;
    }
    form.evaluate_big(x).is_ok_and(|v| v.is_zero())
        && form
            .gradient()
            .iter()
            .all(|g| g.evaluate_big(x).is_ok_and(|v| v.is_zero()))
}

fn canonical_projective(x: &[BigInt]) -> Vec<BigInt> {
    let g = x.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    let mut v: Vec<BigInt> = x.iter().map(|c| c / &g).collect();
    if v.iter()
        .find(|c| !c.is_zero())
        .is_some_and(|c| c.is_negative())
    {
        v.iter_mut().for_each(|c| *c = -&*c);
    }
    v
}

fn symmetric_lift(x: &[u64], prime: u64) -> Vec<BigInt> {
    x.iter()
        .map(|&v| {
            if v > prime / 2 {
                BigInt::from(v) - BigInt::from(prime)
            } else {
                BigInt::from(v)
            }
        })
        .collect()
}

/// Exact singular points among `{-1, 0, 1}^m`, up to sign.
fn small_height_witnesses(form: &IntPolynomial) -> Vec<Vec<BigInt>> {
    let m = form.arity();
    if m > 10 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let total = 3u64.pow(m as u32);
    for k in 0..total {
        let mut r = k;
        let x: Vec<BigInt> = (0..m)
            .map(|_| {
                let d = (r % 3) as i64 - 1;
                r /= 3;
                BigInt::from(d)
            })
            .collect();
        if x.iter().all(Zero::is_zero) {
            continue;
        }
        if canonical_projective(&x) == x && is_exact_singular_point(form, &x) {
            out.push(x);
        }
    }
    out.sort();
    out
}

/// Smoothness evidence for `poly` read as `model`.
pub fn smoothness_verdict(
    poly: &IntPolynomial,
    model: Model,
    config: &SmoothnessConfig,
) -> Result<SmoothnessVerdict> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let form = match model {
        Model::Projective => {
            poly.require_homogeneous()?;
            poly.clone()
        }
        Model::Affine => poly.homogenize(poly.degree().expect("nonzero"))?,
    };
    if form.is_diagonal() {
        return Ok(SmoothnessVerdict {
            status: SmoothnessStatus::CertifiedSmoothDiagonal,
            witnesses: Vec::new(),
            primes_checked: Vec::new(),
            clean_primes: Vec::new(),
            skipped_primes: Vec::new(),
        });
    }

    let mut exact = small_height_witnesses(&form);
    let mut modp = Vec::new();
    let mut checked = Vec::new();
    let mut clean = Vec::new();
    let mut skipped = Vec::new();
    for &p in &config.primes {
        match find_singular_points_mod_p_capped(&form, p, config.scan_cap) {
            Ok(points) => {
                checked.push(p);
                if points.is_empty() {
                    clean.push(p);
                }
                for pt in &points {
                    let lift = canonical_projective(&symmetric_lift(pt, p));
                    if !exact.contains(&lift) && is_exact_singular_point(&form, &lift) {
                        exact.push(lift);
                    }
                }
                modp.extend(
                    points
                        .into_iter()
                        .take(config.max_witnesses_per_prime)
                        .map(|point| Witness::ModP { prime: p, point }),
                );
            }
            Err(Error::ZeroReduction { .. }) | Err(Error::ResourceCap(_)) => skipped.push(p),
            Err(e) => return Err(e),
        }
    }
    exact.sort();

    let status = if !exact.is_empty() {
        SmoothnessStatus::SingularWithWitness
    } else if !clean.is_empty() {
        SmoothnessStatus::NoSingularPointsModPList
    } else if !modp.is_empty() {
        SmoothnessStatus::SingularWithWitness
    } else {
        return Err(Error::InvalidArgument(
            "no evidence prime produced a usable reduction".into(),
        ));
    };
    let mut witnesses: Vec<Witness> = exact
        .into_iter()
        .map(|point| Witness::Exact { point })
        .collect();
    if status == SmoothnessStatus::SingularWithWitness {
        witnesses.extend(modp);
    }
    Ok(SmoothnessVerdict {
        status,
        witnesses,
        primes_checked: checked,
        clean_primes: clean,
        skipped_primes: skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPolynomial {
        IntPolynomial::parse(s).unwrap()
    }

    /// Independent scan: all of `F_p^4 \ 0` by brute force, then projectivised.
    fn brute_singular(form: &IntPolynomial, prime: u64) -> Vec<Vec<u64>> {
        let grads = form.gradient();
        let m = form.arity();
        let mut out = std::collections::BTreeSet::new();
        let total = prime.pow(m as u32);
        for k in 1..total {
            let mut r = k;
            let x: Vec<i64> = (0..m)
                .map(|_| {
                    let d = (r % prime) as i64;
                    r /= prime;
                    d
                })
                .collect();
            let vanish = |g: &IntPolynomial| {
                g.evaluate_i64(&x)
                    .unwrap()
                    .mod_floor(&BigInt::from(prime))
                    .is_zero()
            };
            if vanish(form) && grads.iter().all(vanish) {
                let lead = x.iter().find(|&&v| v != 0).copied().unwrap();
                let inv = (1..prime as i64)
                    .find(|i| i * lead % prime as i64 == 1)
                    .unwrap();
                out.insert(x.iter().map(|&v| (v * inv % prime as i64) as u64).collect());
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn fermat_quartic_is_clean_mod_3() {
        let f = p("x0^4 + x1^4 - x2^4 - x3^4");
        assert!(find_singular_points_mod_p(&f, 3).unwrap().is_empty());
        assert!(brute_singular(&f, 3).is_empty());
    }

    #[test]
    fn singular_monomial_surface() {
        let f = IntPolynomial::parse_with_arity("x0^2*x1", 4).unwrap();
        let pts = find_singular_points_mod_p(&f, 5).unwrap();
        assert!(pts.contains(&vec![0, 0, 1, 0]));
        assert_eq!(pts, brute_singular(&f, 5));
        assert_eq!(pts.len(), 31, "the whole plane x0 = 0");
    }

    #[test]
    fn characteristic_dividing_degree() {
        let f = p("x0^5 + x1^5 - x2^5 - x3^5");
        let pts = find_singular_points_mod_p(&f, 5).unwrap();
        assert!(!pts.is_empty());
        assert_eq!(pts, brute_singular(&f, 5));
        // F ≡ (x0 + x1 - x2 - x3)^5 mod 5: singular locus is that plane
        assert_eq!(pts.len(), 31);
    }

    #[test]
    fn scan_guards() {
        let f = p("x0^4 + x1^4 - x2^4 - x3^4");
        assert!(matches!(
            find_singular_points_mod_p(&f, 103),
            Err(Error::ResourceCap(_))
        ));
        assert!(find_singular_points_mod_p(&f, 101).is_ok());
        assert!(matches!(
            find_singular_points_mod_p(&p("3*x0^2 + 6*x1^2"), 3),
            Err(Error::ZeroReduction { prime: 3 })
        ));
        assert!(find_singular_points_mod_p(&f, 9).is_err());
    }

    #[test]
    fn verdict_examples() {
        let cfg = SmoothnessConfig::default();
        let v =
            smoothness_verdict(&p("x0^5 + x1^5 - x2^5 - x3^5"), Model::Projective, &cfg).unwrap();
        assert_eq!(v.status, SmoothnessStatus::CertifiedSmoothDiagonal);

        let f = IntPolynomial::parse_with_arity("x0^2*x1", 4).unwrap();
        let v = smoothness_verdict(&f, Model::Projective, &cfg).unwrap();
        assert_eq!(v.status, SmoothnessStatus::SingularWithWitness);
        let exact: Vec<_> = v
            .witnesses
            .iter()
            .filter_map(|w| match w {
                Witness::Exact { point } => Some(point.clone()),
                _ => None,
            })
            .collect();
        let target: Vec<BigInt> = [0, 0, 1, 0].iter().map(|&x| BigInt::from(x)).collect();
        assert!(exact.contains(&target));
        for w in &exact {
            assert!(is_exact_singular_point(&f, w));
        }

        let v = smoothness_verdict(&p("t1^4 + t2^4 + t3^4 - 1"), Model::Affine, &cfg).unwrap();
        assert_eq!(v.status, SmoothnessStatus::CertifiedSmoothDiagonal);
    }

    #[test]
    fn smooth_quadric_by_evidence() {
        let cfg = SmoothnessConfig::default();
        let v = smoothness_verdict(&p("x0*x3 - x1*x2"), Model::Projective, &cfg).unwrap();
        assert_eq!(v.status, SmoothnessStatus::NoSingularPointsModPList);
        assert_eq!(v.clean_primes, vec![3, 5, 7, 11, 13]);
        assert!(v.witnesses.is_empty());
    }

    #[test]
    fn cone_slice_is_singular() {
        // closure x1^4 + x2^4 in P^2 is singular at [1, 0, 0]
        let cfg = SmoothnessConfig::default();
        let v = smoothness_verdict(&p("t2^4 + t3^4").slice(0, 0).unwrap(), Model::Affine, &cfg)
            .unwrap();
        assert_eq!(v.status, SmoothnessStatus::SingularWithWitness);
        assert!(!v.passes());
    }

    #[test]
    fn diagonal_forms_have_clean_reductions() {
        for (d, prime) in [(4u32, 3u64), (4, 5), (5, 3), (5, 7), (6, 5), (3, 7)] {
            let f = IntPolynomial::from_terms(
                4,
                (0..4).map(|i| {
                    let mut e = vec![0; 4];
                    e[i] = d;
                    (e, if i % 2 == 0 { 1 } else { -1 })
                }),
            )
            .unwrap();
            assert!(find_singular_points_mod_p(&f, prime).unwrap().is_empty());
        }
    }
}
