//! JSON form: `{"arity":4,"terms":[{"e":[4,0,0,0],"c":"1"},…]}`, terms in
//! canonical order and coefficients as decimal strings.

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::IntPolynomial;

#[derive(Serialize, Deserialize)]
struct WireTerm {
    e: Vec<u32>,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct WirePoly {
    arity: usize,
    terms: Vec<WireTerm>,
}

/// Integer vector as decimal strings.
pub(crate) fn decimal_vec<S: Serializer>(v: &[BigInt], serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Integer matrix as rows of decimal strings.
pub(crate) fn decimal_matrix<S: Serializer>(
    m: &[Vec<BigInt>],
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.collect_seq(
        m.iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
    )
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        WirePoly {
            arity: self.arity,
            terms: self
                .terms()
                .map(|(m, c)| WireTerm {
                    e: m.exponents().to_vec(),
                    c: c.to_string(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = WirePoly::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(wire.terms.len());
        for t in wire.terms {
            let c: BigInt =
                t.c.parse()
                    .map_err(|_| D::Error::custom(format!("invalid coefficient `{}`", t.c)))?;
            terms.push((t.e, c));
        }
        IntPolynomial::from_terms(wire.arity, terms).map_err(D::Error::custom)
    }
}
