//! Exact integer-point counting on affine and projective hypersurfaces.
//!
//! * [`polyring`]: sparse integer polynomials.
//! * [`smoothcheck`]: singular points mod p, tangent-section multiplicity,
//!   hyperplane-slice search.
//! * [`census`]: affine, projective, mod-p and curve point counters, line
//!   detection.
//! * [`diophantine`]: sums of three powers and equal sums of like
//!   polynomials.
//! * [`exponents`]: closed-form growth exponents and log-log fitting.

pub mod arith;
pub mod census;
pub mod diophantine;
pub mod error;
pub mod exponents;
pub mod lattice;
pub mod polyring;
pub mod smoothcheck;

pub use error::{Error, Result};
pub use polyring::{IntPolynomial, LatticePoint, Monomial, VarStyle};
