use serde::Serialize;

use crate::arith::fp::{for_each_affine_point, for_each_projective_point, ModPoly};
use crate::arith::primes::is_prime;
use crate::error::{Error, Result};
use crate::polyring::IntPolynomial;
use crate::smoothcheck::tangent_section_multiplicity_mod_p;

/// Largest `p^arity` the exhaustive affine scan will visit.
const AFFINE_SCAN_CAP: u64 = 1 << 30;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModPSummary {
    pub prime: u64,
    /// Zeros in `F_p^m`, origin included.
    pub affine_zero_count: u64,
    pub projective_count: u64,
    /// Smooth points whose tangent section has multiplicity `≤ 2` there.
    pub u_count: u64,
    pub singular_count: u64,
    /// Smooth points whose tangent hyperplane lies inside the reduction;
    /// excluded from `u_count`.
    pub degenerate_count: u64,
}

/// Exhaustive point counts of the reduction of `form` mod `prime`.
pub fn count_mod_p(form: &IntPolynomial, prime: u64) -> Result<ModPSummary> {
    if !is_prime(prime) {
        return Err(Error::InvalidArgument(format!("{prime} is not prime")));
    }
    form.require_homogeneous()?;
    if form.arity() < 3 {
        return Err(Error::InvalidArgument(
            "tangent sections need at least three homogeneous variables".into(),
        ));
    }
    let reduced = ModPoly::new(form, prime);
    if reduced.is_zero() {
        return Err(Error::ZeroReduction { prime });
    }
    let m = form.arity() as u32;
    if prime.checked_pow(m).is_none_or(|n| n > AFFINE_SCAN_CAP) {
        return Err(Error::ResourceCap(format!(
            "F_{prime}^{m} is too large to scan exhaustively"
        )));
    }

    let mut affine_zero_count = 0u64;
    for_each_affine_point(form.arity(), prime, |x| {
        if reduced.eval(x) == 0 {
            affine_zero_count += 1;
        }
    });

    let mut summary = ModPSummary {
        prime,
        affine_zero_count,
        projective_count: 0,
        u_count: 0,
        singular_count: 0,
        degenerate_count: 0,
    };
    let mut failure = None;
    for_each_projective_point(form.arity(), prime, |x| {
        if failure.is_some() || reduced.eval(x) != 0 {
            return;
        }
        summary.projective_count += 1;
        match tangent_section_multiplicity_mod_p(form, x, prime) {
            Ok(k) if k <= 2 => summary.u_count += 1,
            Ok(_) => {}
            Err(Error::SingularPoint) => summary.singular_count += 1,
            Err(Error::DegenerateTangentSection) => summary.degenerate_count += 1,
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(summary),
    }
}
