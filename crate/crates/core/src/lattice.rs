//! Small dense integer matrices: determinants, inverses, Hermite normal
//! form and unimodular completion of a primitive row.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn from_i64(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &IntMatrix, x: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(r, v)| r * v).sum())
        .collect()
}

/// Exact inverse over the integers; fails unless `det = ±1`.
pub fn inverse(m: &IntMatrix) -> Result<IntMatrix> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect();
            r.extend((0..n).map(|j| {
                BigRational::from_integer(if i == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                })
            }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&i| !a[i][col].is_zero())
            .ok_or_else(|| Error::InvalidArgument("singular matrix".into()))?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..2 * n {
                    let delta = &f * &a[col][j];
                    a[i][j] = &a[i][j] - delta;
                }
            }
        }
    }
    a.into_iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|x| {
                    if x.is_integer() {
                        Ok(x.to_integer())
                    } else {
                        Err(Error::InvalidArgument("inverse is not integral".into()))
                    }
                })
                .collect()
        })
        .collect()
}

/// Row-style Hermite normal form: returns `(H, U)` with `U` unimodular,
/// `U · M = H`, `H` in row echelon form with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut h = m.clone();
    let mut u = identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid on column c over rows r.., accumulating into row r.
        loop {
            let nz: Vec<usize> = (r..rows).filter(|&i| !h[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz.iter().min_by_key(|&&i| h[i][c].abs()).expect("nonempty");
            h.swap(r, best);
            u.swap(r, best);
            let mut done = true;
            for i in r + 1..rows {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                row_sub(&mut h, i, r, &q);
                row_sub(&mut u, i, r, &q);
                if !h[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            if !q.is_zero() {
                row_sub(&mut h, i, r, &q);
                row_sub(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

fn row_sub(m: &mut IntMatrix, target: usize, source: usize, q: &BigInt) {
    let src = m[source].clone();
    for (x, s) in m[target].iter_mut().zip(src) {
        *x -= q * s;
    }
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for x in m[i].iter_mut() {
        *x = -&*x;
    }
}

fn row_key(row: &[BigInt]) -> (BigInt, BigInt) {
    let sup = row.iter().map(|x| x.abs()).max().unwrap_or_default();
    let l1: BigInt = row.iter().map(|x| x.abs()).sum();
    (sup, l1)
}

/// Completes the primitive vector `a` to a matrix in `SL_n(Z)` whose first
/// row is `a`. The completion comes from the Hermite transform of `a` as a
/// column; rows 2.. are then size-reduced greedily against each other.
pub fn unimodular_completion(a: &[i64]) -> Result<IntMatrix> {
    let n = a.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty direction".into()));
    }
    let column: IntMatrix = a.iter().map(|&x| vec![BigInt::from(x)]).collect();
    let (h, u) = hermite_normal_form(&column);
    if !h[0][0].is_one() {
        return Err(Error::InvalidArgument(format!(
            "direction {a:?} is not primitive"
        )));
    }
    // U a = e1, so the first column of U^{-1} is a.
    let u_inv = inverse(&u)?;
    let mut m: IntMatrix = (0..n)
        .map(|i| (0..n).map(|j| u_inv[j][i].clone()).collect())
        .collect();
    if determinant(&m).is_negative() {
        if n == 1 {
            return Err(Error::InvalidArgument(
                "no determinant-1 completion of (-1) in dimension 1".into(),
            ));
        }
        negate_row(&mut m, 1);
    }
    reduce_rows(&mut m);
    Ok(m)
}

/// Greedy size reduction of rows `1..` by `±` other rows, accepting a move
/// only when it lowers (sup-norm, l1-norm) of the modified row.
fn reduce_rows(m: &mut IntMatrix) {
    let n = m.len();
    loop {
        let mut improved = false;
        for i in 1..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                // rounded projection first, then unit steps
                let dot: BigInt = m[i].iter().zip(&m[j]).map(|(x, y)| x * y).sum();
                let norm: BigInt = m[j].iter().map(|y| y * y).sum();
                let mut candidates = Vec::new();
                if !norm.is_zero() {
                    let num: BigInt = &dot * 2 + &norm;
                    let q = num.div_floor(&(&norm * BigInt::from(2)));
                    if !q.is_zero() {
                        candidates.push(q);
                    }
                }
                candidates.push(BigInt::one());
                candidates.push(-BigInt::one());
                for q in candidates {
                    let trial: Vec<BigInt> =
                        m[i].iter().zip(&m[j]).map(|(x, y)| x - &q * y).collect();
                    if row_key(&trial) < row_key(&m[i]) {
                        m[i] = trial;
                        improved = true;
                        break;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
}
