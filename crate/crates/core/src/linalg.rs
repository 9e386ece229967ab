//! Dense exact linear algebra over the rationals. Sizes here are tiny (the
//! number of partitions of the working degree), so plain Gaussian elimination
//! with full normalization is the right tool.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rat;

/// A dense square matrix of rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMatrix {
    rows: Vec<Vec<Rat>>,
}

impl QMatrix {
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Mismatch("matrix is not square".into()));
        }
        Ok(QMatrix { rows })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        QMatrix { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
        })
    }

    /// Row-vector times matrix: `v M`.
    pub fn apply_row(&self, v: &[Rat]) -> Vec<Rat> {
        let n = self.size();
        assert_eq!(v.len(), n);
        let mut out = vec![Rat::zero(); n];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, item) in out.iter_mut().enumerate() {
                *item += vi * &self.rows[i][j];
            }
        }
        out
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.size() != other.size() {
            return Err(Error::Mismatch("matrix size mismatch".into()));
        }
        let rows = self.rows.iter().map(|r| other.apply_row(r)).collect();
        Ok(QMatrix { rows })
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn invert(&self) -> Result<QMatrix> {
        let n = self.size();
        let mut a = self.rows.clone();
        let mut inv = QMatrix::identity(n).rows;
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or_else(|| Error::Internal("singular matrix".into()))?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for x in a[col].iter_mut().chain(inv[col].iter_mut()) {
                *x /= &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for c in 0..n {
                    let t = &factor * &a[col][c];
                    a[r][c] -= t;
                    let t = &factor * &inv[col][c];
                    inv[r][c] -= t;
                }
            }
        }
        Ok(QMatrix { rows: inv })
    }
}

/// Solves `A x = b` in place by Gaussian elimination with back substitution.
pub fn solve(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Result<Vec<Rat>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::Mismatch("system shape mismatch".into()));
    }
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Internal("singular linear system".into()))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        b[col] /= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..n {
                let t = &factor * &a[col][c];
                a[r][c] -= t;
            }
            let t = &factor * &b[col];
            b[r] -= t;
        }
    }
    for col in (0..n).rev() {
        for r in 0..col {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            let t = &factor * &b[col];
            b[r] -= t;
            a[r][col] = Rat::zero();
        }
    }
    Ok(b)
}
