//! Polynomials reduced into a prime field, compiled for repeated
//! evaluation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::polyring::IntPolynomial;

#[derive(Debug, Clone)]
pub struct ModPoly {
    prime: u64,
    arity: usize,
    terms: Vec<(u64, Vec<u32>)>,
    /// `powers[v * stride + e] = v^e mod p`.
    powers: Vec<u64>,
    stride: usize,
}

impl ModPoly {
    pub fn new(poly: &IntPolynomial, prime: u64) -> ModPoly {
        let p = BigInt::from(prime);
        let terms: Vec<(u64, Vec<u32>)> = poly
            .terms()
            .filter_map(|(m, c)| {
                let r = c.mod_floor(&p).to_u64().expect("residue fits");
                (r != 0).then(|| (r, m.exponents().to_vec()))
            })
            .collect();
        let max_e = terms
            .iter()
            .flat_map(|(_, e)| e.iter().copied())
            .max()
            .unwrap_or(0) as usize;
        let stride = max_e + 1;
        let mut powers = vec![0u64; prime as usize * stride];
        for v in 0..prime {
            let mut acc = 1 % prime;
            for e in 0..stride {
                powers[v as usize * stride + e] = acc;
                acc = acc * v % prime;
            }
        }
        ModPoly {
            prime,
            arity: poly.arity(),
            terms,
            powers,
            stride,
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// True when every coefficient vanished in the reduction.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at a point with coordinates in `[0, p)`.
    pub fn eval(&self, x: &[u64]) -> u64 {
        let p = self.prime;
        let mut acc = 0u64;
        for (c, e) in &self.terms {
            let mut t = *c;
            for (xi, &ei) in x.iter().zip(e) {
                if ei > 0 {
                    t = t * self.powers[*xi as usize * self.stride + ei as usize] % p;
                }
            }
            acc += t;
            if acc >= p {
                acc -= p;
            }
        }
        acc
    }
}

/// Visits every point of `P^{arity-1}(F_p)` once, normalised so the first
/// nonzero coordinate is 1.
pub fn for_each_projective_point(arity: usize, prime: u64, mut visit: impl FnMut(&[u64])) {
    let mut x = vec![0u64; arity];
    for lead in 0..arity {
        x.iter_mut().for_each(|v| *v = 0);
        x[lead] = 1;
        let count = prime.pow((arity - lead - 1) as u32);
        for k in 0..count {
            let mut r = k;
            for i in (lead + 1..arity).rev() {
                x[i] = r % prime;
                r /= prime;
            }
            visit(&x);
        }
    }
}

/// Visits every point of `F_p^arity`.
pub fn for_each_affine_point(arity: usize, prime: u64, mut visit: impl FnMut(&[u64])) {
    let mut x = vec![0u64; arity];
    loop {
        visit(&x);
        let mut i = arity;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            x[i] += 1;
            if x[i] < prime {
                break;
            }
            x[i] = 0;
        }
    }
}
