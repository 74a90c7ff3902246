//! Finite-dimensional Lie algebras over the rationals, given by structure
//! constants.
//!
//! Structure constants are stored only for ordered pairs `i < j`;
//! antisymmetry is structural, never checked. Every predicate here
//! (Jacobi identity, cocycle condition, subspace ranks, nilpotency) is
//! decided exactly.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, RatMat, RatVec, Subspace};
use crate::rational::{rat, Rational};

/// A Lie algebra with a fixed ordered basis and exact structure constants:
/// `[e_i, e_j] = sum_k c_{ij}^k e_k` for `i < j`.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    labels: Vec<String>,
    /// `(i, j)` with `i < j` mapped to the coefficient vector of `[e_i, e_j]`.
    structure: BTreeMap<(usize, usize), RatVec>,
    series_cache: OnceLock<SeriesReport>,
}

/// Result of the exact Jacobi check.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub pass: bool,
    /// Max over basis triples (i<j<k) of the largest absolute coefficient of
    /// the Jacobi cyclic sum. Exactly zero iff the bracket is a Lie bracket.
    pub max_residual: Rational,
    pub worst_triple: Option<(usize, usize, usize)>,
}

/// Lower central series data: dims of g ⊇ [g,g] ⊇ [g,[g,g]] ⊇ …
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesReport {
    pub dims: Vec<usize>,
    /// First index with zero dim; `None` when the series stabilizes at a
    /// nonzero subspace (not nilpotent).
    pub step: Option<usize>,
}

/// Result of the exact cocycle check for a 2-form.
#[derive(Debug, Clone)]
pub struct CocycleReport {
    pub pass: bool,
    pub max_residual: Rational,
    pub worst_triple: Option<(usize, usize, usize)>,
}

impl LieAlgebra {
    /// Builds an algebra from bracket entries `(i, j, k, c)` meaning the
    /// `e_k`-coefficient of `[e_i, e_j]` is `c`. Either orientation of
    /// `(i, j)` is accepted and normalized; duplicate entries (after
    /// normalization) are rejected.
    pub fn from_brackets(
        labels: Vec<String>,
        entries: &[(usize, usize, usize, Rational)],
    ) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidAlgebra("empty basis".into()));
        }
        {
            let mut sorted = labels.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != dim {
                return Err(Error::InvalidAlgebra("duplicate basis labels".into()));
            }
        }
        let mut structure: BTreeMap<(usize, usize), RatVec> = BTreeMap::new();
        let mut seen: Vec<(usize, usize, usize)> = Vec::new();
        for (i, j, k, c) in entries {
            let (i, j, k) = (*i, *j, *k);
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::InvalidAlgebra(format!(
                    "bracket index out of range: ({i},{j},{k}) with dim {dim}"
                )));
            }
            if i == j {
                return Err(Error::InvalidAlgebra(format!(
                    "bracket ({i},{i},{k}) pairs a basis vector with itself"
                )));
            }
            let (lo, hi, coeff) = if i < j { (i, j, c.clone()) } else { (j, i, -c.clone()) };
            if seen.contains(&(lo, hi, k)) {
                return Err(Error::InvalidAlgebra(format!(
                    "duplicate bracket entry for ([{}, {}], {})",
                    labels[lo], labels[hi], labels[k]
                )));
            }
            seen.push((lo, hi, k));
            let row = structure
                .entry((lo, hi))
                .or_insert_with(|| linalg::zeros(dim));
            row[k] = coeff;
        }
        structure.retain(|_, v| v.iter().any(|x| !x.is_zero()));
        Ok(LieAlgebra { labels, structure, series_cache: OnceLock::new() })
    }

    pub fn abelian(labels: Vec<String>) -> Result<Self> {
        Self::from_brackets(labels, &[])
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Iterates the stored `i < j` structure rows.
    pub fn structure_entries(&self) -> impl Iterator<Item = (usize, usize, &RatVec)> {
        self.structure.iter().map(|(&(i, j), v)| (i, j, v))
    }

    /// `[e_i, e_j]` for any orientation of the pair.
    pub fn basis_bracket(&self, i: usize, j: usize) -> RatVec {
        let dim = self.dim();
        if i == j {
            return linalg::zeros(dim);
        }
        let (lo, hi) = (i.min(j), i.max(j));
        let mut v = self
            .structure
            .get(&(lo, hi))
            .cloned()
            .unwrap_or_else(|| linalg::zeros(dim));
        if i > j {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
        }
        v
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, x: &RatVec, y: &RatVec) -> Result<RatVec> {
        let dim = self.dim();
        for v in [x, y] {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
            }
        }
        let mut out = linalg::zeros(dim);
        for (i, j, coeffs) in self.structure_entries() {
            // x_i y_j - x_j y_i multiplies [e_i, e_j].
            let f = &x[i] * &y[j] - &x[j] * &y[i];
            if f.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(coeffs) {
                if !c.is_zero() {
                    *o += c * &f;
                }
            }
        }
        Ok(out)
    }

    /// Exact Jacobi check over all basis triples i < j < k.
    pub fn validate(&self) -> ValidationReport {
        let dim = self.dim();
        let mut max_residual = Rational::zero();
        let mut worst = None;
        let basis = linalg::identity(dim);
        for i in 0..dim {
            for j in (i + 1)..dim {
                for k in (j + 1)..dim {
                    let a = self
                        .bracket(&basis[i], &self.basis_bracket(j, k))
                        .expect("dims agree");
                    let b = self
                        .bracket(&basis[j], &self.basis_bracket(k, i))
                        .expect("dims agree");
                    let c = self
                        .bracket(&basis[k], &self.basis_bracket(i, j))
                        .expect("dims agree");
                    let residual = a
                        .iter()
                        .zip(&b)
                        .zip(&c)
                        .map(|((x, y), z)| (x + y + z).abs())
                        .max()
                        .unwrap_or_else(Rational::zero);
                    if residual > max_residual {
                        max_residual = residual;
                        worst = Some((i, j, k));
                    }
                }
            }
        }
        ValidationReport { pass: max_residual.is_zero(), max_residual, worst_triple: worst }
    }

    /// Matrix of `y -> [x, y]`: column `j` holds the coefficients of `[x, e_j]`.
    pub fn ad_matrix(&self, x: &RatVec) -> Result<RatMat> {
        let dim = self.dim();
        if x.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: x.len() });
        }
        let basis = linalg::identity(dim);
        let mut cols = Vec::with_capacity(dim);
        for e in &basis {
            cols.push(self.bracket(x, e)?);
        }
        Ok((0..dim)
            .map(|m| (0..dim).map(|j| cols[j][m].clone()).collect())
            .collect())
    }

    /// Canonical basis of span{[e_i, e_j]}.
    pub fn derived_algebra(&self) -> Subspace {
        let spans: Vec<RatVec> = self.structure.values().cloned().collect();
        Subspace::from_spanning(self.dim(), &spans).expect("structure rows have full width")
    }

    /// Lower central series dims and nilpotency step, by exact rank.
    pub fn lower_central_series(&self) -> SeriesReport {
        self.series_cache
            .get_or_init(|| {
                let dim = self.dim();
                let basis = linalg::identity(dim);
                let mut dims = vec![dim];
                let mut current = Subspace::full(dim);
                loop {
                    let mut spans = Vec::new();
                    for e in &basis {
                        for v in current.basis() {
                            spans.push(self.bracket(e, v).expect("dims agree"));
                        }
                    }
                    let next = Subspace::from_spanning(dim, &spans).expect("dims agree");
                    if next.dim() == current.dim() {
                        // Stabilized at a nonzero subspace: not nilpotent.
                        dims.push(next.dim());
                        return SeriesReport { dims, step: None };
                    }
                    dims.push(next.dim());
                    if next.dim() == 0 {
                        let step = dims.len() - 1;
                        return SeriesReport { dims, step: Some(step) };
                    }
                    current = next;
                }
            })
            .clone()
    }

    pub fn nilpotency_step(&self) -> Option<usize> {
        self.lower_central_series().step
    }

    /// Exact check that `ds = 0` on all basis triples:
    /// `ds(a,b,c) = -s([a,b],c) - s([b,c],a) - s([c,a],b)`.
    pub fn is_cocycle(&self, s: &TwoForm) -> CocycleReport {
        let dim = self.dim();
        let mut max_residual = Rational::zero();
        let mut worst = None;
        let basis = linalg::identity(dim);
        for i in 0..dim {
            for j in (i + 1)..dim {
                for k in (j + 1)..dim {
                    let r = -s.apply(&self.basis_bracket(i, j), &basis[k])
                        - s.apply(&self.basis_bracket(j, k), &basis[i])
                        - s.apply(&self.basis_bracket(k, i), &basis[j]);
                    let r = r.abs();
                    if r > max_residual {
                        max_residual = r;
                        worst = Some((i, j, k));
                    }
                }
            }
        }
        CocycleReport { pass: max_residual.is_zero(), max_residual, worst_triple: worst }
    }

    /// True iff `s(d, v) = 0` for every derived-algebra basis vector `d` and
    /// every basis vector `v`.
    pub fn vanishes_on_derived(&self, s: &TwoForm) -> bool {
        let basis = linalg::identity(self.dim());
        self.derived_algebra()
            .basis()
            .iter()
            .all(|d| basis.iter().all(|v| s.apply(d, v).is_zero()))
    }

    /// Exact Baker-Campbell-Hausdorff product
    /// `x + y + [x,y]/2 + ([x,[x,y]] - [y,[x,y]])/12`,
    /// valid (and exact) when the nilpotency step is at most 3, since all
    /// deeper brackets vanish.
    pub fn bch(&self, x: &RatVec, y: &RatVec) -> Result<RatVec> {
        match self.nilpotency_step() {
            None => return Err(Error::NotNilpotent),
            Some(step) if step > 3 => {
                return Err(Error::UnsupportedStep { step, max: 3 });
            }
            _ => {}
        }
        let xy = self.bracket(x, y)?;
        let xxy = self.bracket(x, &xy)?;
        let yxy = self.bracket(y, &xy)?;
        let half = rat(1, 2);
        let twelfth = rat(1, 12);
        Ok((0..self.dim())
            .map(|m| {
                &x[m] + &y[m] + &half * &xy[m] + &twelfth * (&xxy[m] - &yxy[m])
            })
            .collect())
    }
}

/// Symmetric positive definite Gram matrix of an inner product on the
/// algebra, in the chosen basis. Both properties are checked exactly at
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerProduct {
    matrix: RatMat,
}

impl InnerProduct {
    pub fn new(matrix: RatMat) -> Result<Self> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("metric matrix is not square".into()));
        }
        if !linalg::is_symmetric(&matrix) {
            return Err(Error::InvalidInput("metric matrix is not symmetric".into()));
        }
        if !linalg::is_positive_definite(&matrix) {
            return Err(Error::InvalidInput(
                "metric matrix is not positive definite".into(),
            ));
        }
        Ok(InnerProduct { matrix })
    }

    pub fn identity(n: usize) -> Self {
        InnerProduct { matrix: linalg::identity(n) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &RatMat {
        &self.matrix
    }

    /// Exact inverse Gram matrix (positive definite, hence invertible).
    pub fn inverse(&self) -> RatMat {
        linalg::inverse(&self.matrix).expect("positive definite matrices are invertible")
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == linalg::identity(self.dim())
    }
}

/// Skew-symmetric bilinear form (the value matrix of a left-invariant
/// 2-form at the identity). Exact skewness is enforced at construction;
/// closedness is a separate check (`LieAlgebra::is_cocycle`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoForm {
    matrix: RatMat,
}

impl TwoForm {
    pub fn new(matrix: RatMat) -> Result<Self> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("2-form matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..=i {
                if matrix[i][j] != -matrix[j][i].clone() {
                    return Err(Error::InvalidInput(
                        "2-form matrix is not skew-symmetric".into(),
                    ));
                }
            }
        }
        Ok(TwoForm { matrix })
    }

    pub fn zero(n: usize) -> Self {
        TwoForm { matrix: vec![linalg::zeros(n); n] }
    }

    /// Builds the skew matrix from entries `(i, j, c)` meaning
    /// `s(e_i, e_j) = c`. Duplicates (either orientation) are rejected.
    pub fn from_entries(n: usize, entries: &[(usize, usize, Rational)]) -> Result<Self> {
        let mut matrix = vec![linalg::zeros(n); n];
        let mut seen: Vec<(usize, usize)> = Vec::new();
        for (i, j, c) in entries {
            let (i, j) = (*i, *j);
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!(
                    "2-form index out of range: ({i},{j}) with dim {n}"
                )));
            }
            if i == j {
                return Err(Error::InvalidInput(
                    "2-form entry on the diagonal must be zero".into(),
                ));
            }
            let key = (i.min(j), i.max(j));
            if seen.contains(&key) {
                return Err(Error::InvalidInput(format!(
                    "duplicate 2-form entry for ({i},{j})"
                )));
            }
            seen.push(key);
            matrix[i][j] = c.clone();
            matrix[j][i] = -c.clone();
        }
        Ok(TwoForm { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &RatMat {
        &self.matrix
    }

    pub fn value(&self, i: usize, j: usize) -> &Rational {
        &self.matrix[i][j]
    }

    /// `x^T S y`, exactly.
    pub fn apply(&self, x: &RatVec, y: &RatVec) -> Rational {
        let mut acc = Rational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() && !self.matrix[i][j].is_zero() {
                    acc += xi * &self.matrix[i][j] * yj;
                }
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.matrix
            .iter()
            .all(|row| row.iter().all(|x| x.is_zero()))
    }
}

/// A basis of the lattice L ⊂ g (the Z-span of log Γ): n rational n-vectors
/// with nonzero determinant, checked exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    vectors: RatMat,
}

impl LatticeBasis {
    pub fn new(vectors: RatMat) -> Result<Self> {
        let n = vectors.len();
        if vectors.iter().any(|v| v.len() != n) {
            return Err(Error::InvalidInput(
                "lattice basis must be square (n vectors of dimension n)".into(),
            ));
        }
        if linalg::det(&vectors).is_zero() {
            return Err(Error::InvalidInput("lattice basis is degenerate".into()));
        }
        Ok(LatticeBasis { vectors })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &RatMat {
        &self.vectors
    }
}
