//! Exact rational arithmetic and small dense integer/rational linear algebra.
//!
//! Everything here is exact. Matrices are tiny (intersection matrices of
//! resolution graphs), so plain Gaussian elimination over `BigRational` is
//! the whole story.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

/// A vector of exact rationals.
pub type RatVec = Vec<Rat>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// Builds a rational from a pair of machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integral rational.
pub fn rat_int(n: impl Into<BigInt>) -> Rat {
    Rat::from_integer(n.into())
}

/// Formats a rational as `a/b`, or `a` when integral. Never decimal.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `a` or `a/b`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self, LinAlgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(LinAlgError::DimensionMismatch {
                    expected: c,
                    got: row.len(),
                });
            }
            entries.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMat {
            rows: r,
            cols: c,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: impl Into<BigInt>) {
        self.entries[i * self.cols + j] = v.into();
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: impl Into<BigInt>) {
        self.entries[i * self.cols + j] += v.into();
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `M·x` for an integer vector.
    pub fn mul_int(&self, x: &[BigInt]) -> Result<Vec<BigInt>, LinAlgError> {
        self.check_len(x.len())?;
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &x[j]).sum())
            .collect())
    }

    /// `M·x` for a rational vector.
    pub fn mul_rat(&self, x: &[Rat]) -> Result<RatVec, LinAlgError> {
        self.check_len(x.len())?;
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Rat::zero(), |acc, j| {
                    acc + &x[j] * Rat::from_integer(self.get(i, j).clone())
                })
            })
            .collect())
    }

    fn check_len(&self, len: usize) -> Result<(), LinAlgError> {
        if len != self.cols {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.cols,
                got: len,
            });
        }
        Ok(())
    }

    fn to_rat_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| Rat::from_integer(self.get(i, j).clone()))
                    .collect()
            })
            .collect()
    }

    /// Exact determinant (fraction-free Bareiss elimination).
    pub fn determinant(&self) -> Result<BigInt, LinAlgError> {
        if !self.is_square() {
            return Err(LinAlgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
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
        Ok(sign * &a[n - 1][n - 1])
    }

    /// Leading principal minors `D_1, ..., D_n`.
    pub fn leading_minors(&self) -> Result<Vec<BigInt>, LinAlgError> {
        if !self.is_square() {
            return Err(LinAlgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        (1..=self.rows)
            .map(|k| {
                let mut sub = IntMat::zeros(k, k);
                for i in 0..k {
                    for j in 0..k {
                        sub.set(i, j, self.get(i, j).clone());
                    }
                }
                sub.determinant()
            })
            .collect()
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        write!(f, "IntMat{rows:?}")
    }
}

/// Solves `M·x = b` exactly.
///
/// Gaussian elimination with the largest-magnitude pivot in each column.
pub fn solve_exact(m: &IntMat, b: &[Rat]) -> Result<RatVec, LinAlgError> {
    if !m.is_square() {
        return Err(LinAlgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if b.len() != n {
        return Err(LinAlgError::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let mut a = m.to_rat_rows();
    for (row, rhs) in a.iter_mut().zip(b) {
        row.push(rhs.clone());
    }

    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .max_by(|&r, &s| a[r][col].abs().cmp(&a[s][col].abs()))
            .ok_or(LinAlgError::SingularMatrix)?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for v in a[col][col..].iter_mut() {
            *v /= &p;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, pv) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *v -= &factor * pv;
            }
        }
    }
    Ok(a.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Sylvester's criterion: the leading principal minors alternate in sign
/// starting negative.
pub fn is_negative_definite(m: &IntMat) -> Result<bool, LinAlgError> {
    if !m.is_symmetric() {
        return Err(LinAlgError::NotSymmetric);
    }
    let minors = m.leading_minors()?;
    Ok(minors.iter().enumerate().all(|(k, d)| {
        if k % 2 == 0 {
            d.is_negative()
        } else {
            d.is_positive()
        }
    }))
}
