//! Integer backends and number-theoretic helpers shared by the counters.

pub mod fp;
pub mod primes;
pub mod roots;

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact integer type an enumeration plan runs on. `i64` and `i128` are
/// only selected after an a-priori magnitude bound shows no intermediate
/// value can overflow; `BigInt` is the unconditional fallback.
pub trait ExactInt:
    Clone + Ord + Debug + Send + Sync + Integer + Signed + FromPrimitive + ToPrimitive + Roots + 'static
{
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl ExactInt for i64 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i64()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ExactInt for i128 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ExactInt for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Which integer width a computation needs, given a magnitude bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Width {
    I64,
    I128,
    Big,
}

impl Width {
    pub fn for_bound(bound: &BigInt) -> Width {
        if bound.bits() < 62 {
            Width::I64
        } else if bound.bits() < 126 {
            Width::I128
        } else {
            Width::Big
        }
    }
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// gcd of all coordinates is exactly 1.
pub fn is_primitive(xs: &[i64]) -> bool {
    let mut g = 0i64;
    for &x in xs {
        g = g.gcd(&x);
        if g == 1 {
            return true;
        }
    }
    g == 1
}
