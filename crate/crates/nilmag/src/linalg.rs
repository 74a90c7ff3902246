//! Exact rational linear algebra.
//!
//! Gaussian elimination with the first nonzero entry as pivot — no
//! floating point anywhere. The [`Subspace`] type keeps its basis in
//! reduced row echelon form, which is canonical: two subspaces are equal
//! iff their stored bases are equal.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type RatVec = Vec<Rational>;
pub type RatMat = Vec<Vec<Rational>>;

pub fn zeros(n: usize) -> RatVec {
    vec![Rational::zero(); n]
}

pub fn identity(n: usize) -> RatMat {
    (0..n)
        .map(|i| {
            let mut row = zeros(n);
            row[i] = Rational::one();
            row
        })
        .collect()
}

pub fn mat_vec(m: &RatMat, v: &RatVec) -> RatVec {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

pub fn transpose(m: &RatMat) -> RatMat {
    if m.is_empty() {
        return Vec::new();
    }
    let rows = m.len();
    let cols = m[0].len();
    (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j].clone()).collect())
        .collect()
}

/// In-place reduced row echelon form. Pivot choice: within each column,
/// the first row (top to bottom) with a nonzero entry. Returns the pivot
/// columns.
pub fn rref(m: &mut RatMat) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] = &m[i][j] - t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &RatMat) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

pub fn det(m: &RatMat) -> Rational {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "det of non-square matrix");
    let mut work = m.clone();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !work[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            work.swap(c, p);
            d = -d;
        }
        d *= work[c][c].clone();
        let pivot = work[c][c].clone();
        for i in (c + 1)..n {
            if !work[i][c].is_zero() {
                let f = &work[i][c] / &pivot;
                for j in c..n {
                    let t = &work[c][j] * &f;
                    work[i][j] = &work[i][j] - t;
                }
            }
        }
    }
    d
}

/// Solves `A x = b` exactly. Returns `None` when the system is
/// inconsistent; when underdetermined, returns the particular solution
/// with all free variables set to zero.
pub fn solve(a: &RatMat, b: &RatVec) -> Option<RatVec> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: RatMat = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    // Inconsistent iff some pivot lands in the augmented column.
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = zeros(cols);
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Exact inverse; `None` for singular input.
pub fn inverse(m: &RatMat) -> Option<RatMat> {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n));
    let mut aug: RatMat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(identity(n)[i].iter().cloned());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Positive definiteness via leading principal minors, exactly.
pub fn is_positive_definite(m: &RatMat) -> bool {
    let n = m.len();
    for k in 1..=n {
        let minor: RatMat = (0..k).map(|i| m[i][..k].to_vec()).collect();
        if !det(&minor).is_positive() {
            return false;
        }
    }
    true
}

pub fn is_symmetric(m: &RatMat) -> bool {
    let n = m.len();
    m.iter().all(|r| r.len() == n)
        && (0..n).all(|i| (0..i).all(|j| m[i][j] == m[j][i]))
}

/// A linear subspace of Q^n with a canonical (RREF) basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: RatMat,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: identity(ambient_dim) }
    }

    /// Span of the given vectors, reduced to the canonical basis.
    pub fn from_spanning(ambient_dim: usize, vectors: &[RatVec]) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, got: v.len() });
            }
        }
        let mut m: RatMat = vectors.to_vec();
        rref(&mut m);
        m.retain(|row| row.iter().any(|x| !x.is_zero()));
        Ok(Subspace { ambient_dim, basis: m })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &RatMat {
        &self.basis
    }

    pub fn contains(&self, v: &RatVec) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        let mut m = self.basis.clone();
        m.push(v.clone());
        rref(&mut m);
        m.retain(|row| row.iter().any(|x| !x.is_zero()));
        m.len() == self.basis.len()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }
}
