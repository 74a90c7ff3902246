//! Central extensions of magnetic systems.
//!
//! A magnetic system (g, metric, sigma) with closed sigma extends to the
//! algebra g ⊕ RW with bracket {X,Y} = [X',Y'] + sigma(X',Y') W, W central,
//! and the metric extended so W is a unit vector orthogonal to g. The
//! module also handles rationality of sigma against a lattice, the
//! extended lattice with W-steps of 1/(12 k^2), and a bounded exact check
//! that the extended generators close under the group product.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::liealg::{InnerProduct, LatticeBasis, LieAlgebra, TwoForm};
use crate::linalg::{self, RatMat, RatVec};
use crate::rational::Rational;

/// A left-invariant magnetic system: algebra, metric, closed 2-form,
/// optional lattice, and the default field-strength modulation.
#[derive(Debug, Clone)]
pub struct MagneticSystem {
    pub algebra: LieAlgebra,
    pub metric: InnerProduct,
    pub sigma: TwoForm,
    pub lattice: Option<LatticeBasis>,
    pub field_strength_default: f64,
}

impl MagneticSystem {
    pub fn new(
        algebra: LieAlgebra,
        metric: InnerProduct,
        sigma: TwoForm,
        lattice: Option<LatticeBasis>,
        field_strength_default: f64,
    ) -> Result<Self> {
        let n = algebra.dim();
        for (what, got) in [("metric", metric.dim()), ("sigma", sigma.dim())] {
            if got != n {
                return Err(Error::InvalidInput(format!(
                    "{what} dimension {got} does not match algebra dimension {n}"
                )));
            }
        }
        if let Some(l) = &lattice {
            if l.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: l.dim() });
            }
        }
        let validation = algebra.validate();
        if !validation.pass {
            return Err(Error::InvalidAlgebra(format!(
                "Jacobi residual {} at triple {:?}",
                validation.max_residual,
                validation.worst_triple.unwrap_or((0, 0, 0))
            )));
        }
        let cocycle = algebra.is_cocycle(&sigma);
        if !cocycle.pass {
            return Err(Error::NotCocycle {
                residual: cocycle.max_residual.to_string(),
                triple: cocycle.worst_triple.unwrap_or((0, 0, 0)),
            });
        }
        Ok(MagneticSystem { algebra, metric, sigma, lattice, field_strength_default })
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Same system with a different magnetic field (re-checks closedness).
    pub fn with_sigma(&self, sigma: TwoForm) -> Result<Self> {
        MagneticSystem::new(
            self.algebra.clone(),
            self.metric.clone(),
            sigma,
            self.lattice.clone(),
            self.field_strength_default,
        )
    }
}

/// The one-higher-dimensional central extension of a magnetic system.
/// `w_index` is the coordinate of the distinguished central vector W;
/// the dual coordinate `p_W` is the moment-map value.
#[derive(Debug, Clone)]
pub struct ExtendedSystem {
    pub algebra: LieAlgebra,
    pub metric: InnerProduct,
    pub w_index: usize,
    pub base: MagneticSystem,
}

impl ExtendedSystem {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn w_label(&self) -> &str {
        &self.algebra.labels()[self.w_index]
    }
}

/// Builds the central extension. The returned algebra always passes
/// `validate` (closedness of sigma is exactly the Jacobi identity for the
/// new bracket), and is 2-step iff sigma vanishes on the derived algebra.
pub fn extend(m: &MagneticSystem) -> Result<ExtendedSystem> {
    let n = m.dim();
    let mut labels = m.algebra.labels().to_vec();
    let mut w_label = "W".to_string();
    let mut suffix = 0usize;
    while labels.contains(&w_label) {
        suffix += 1;
        w_label = format!("W{suffix}");
    }
    labels.push(w_label);

    let mut entries: Vec<(usize, usize, usize, Rational)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let base = m.algebra.basis_bracket(i, j);
            for (k, c) in base.iter().enumerate() {
                if !c.is_zero() {
                    entries.push((i, j, k, c.clone()));
                }
            }
            let s = m.sigma.value(i, j);
            if !s.is_zero() {
                entries.push((i, j, n, s.clone()));
            }
        }
        // {e_i, W} = 0: nothing stored.
    }
    let algebra = LieAlgebra::from_brackets(labels, &entries)?;
    let validation = algebra.validate();
    if !validation.pass {
        // Unreachable when sigma is closed; MagneticSystem enforces that.
        return Err(Error::InvalidAlgebra(format!(
            "extension violates Jacobi: residual {}",
            validation.max_residual
        )));
    }

    let mut gram = m.metric.matrix().clone();
    for row in gram.iter_mut() {
        row.push(Rational::zero());
    }
    let mut w_row = linalg::zeros(n + 1);
    w_row[n] = Rational::one();
    gram.push(w_row);
    let metric = InnerProduct::new(gram)?;

    Ok(ExtendedSystem { algebra, metric, w_index: n, base: m.clone() })
}

/// Minimal positive integer k with `k * sigma(l_i, l_j)` integral for all
/// lattice basis pairs: the lcm of the denominators of the exact values
/// `sigma(L, L)`.
pub fn rationality_k(m: &MagneticSystem) -> Result<u64> {
    let lattice = m.lattice.as_ref().ok_or(Error::MissingLattice)?;
    let vs = lattice.vectors();
    let mut k = BigInt::one();
    for i in 0..vs.len() {
        for j in (i + 1)..vs.len() {
            let val = m.sigma.apply(&vs[i], &vs[j]);
            k = k.lcm(val.denom());
        }
    }
    k.abs()
        .try_into()
        .map_err(|_| Error::InvalidInput("rationality constant exceeds u64".into()))
}

/// Basis of the extended lattice: the base lattice vectors with zero
/// W-component plus the vector W / (12 k^2). Requires the supplied k to
/// equal `rationality_k`.
pub fn extended_lattice(m: &MagneticSystem, k: u64) -> Result<LatticeBasis> {
    let expected = rationality_k(m)?;
    if k != expected {
        return Err(Error::KMismatch { expected, got: k });
    }
    let lattice = m.lattice.as_ref().ok_or(Error::MissingLattice)?;
    let n = m.dim();
    let mut vectors: RatMat = lattice
        .vectors()
        .iter()
        .map(|v| {
            let mut w = v.clone();
            w.push(Rational::zero());
            w
        })
        .collect();
    let mut w_gen = linalg::zeros(n + 1);
    w_gen[n] = w_step(k);
    vectors.push(w_gen);
    LatticeBasis::new(vectors)
}

/// The W-coordinate quantum 1/(12 k^2).
pub fn w_step(k: u64) -> Rational {
    let k = BigInt::from(k);
    Rational::new(BigInt::one(), BigInt::from(12) * &k * &k)
}

/// Outcome of the bounded closure check.
#[derive(Debug, Clone)]
pub struct ClosureReport {
    pub ok: bool,
    /// First product (as generator indices; negative means inverse, 1-based)
    /// whose coordinates leave the candidate set.
    pub counterexample: Option<(Vec<i64>, RatVec)>,
}

/// Checks that all BCH products of the candidate generators and their
/// inverses, up to the given word length, have coordinates in the Z-span
/// description of the candidate set: base-lattice part integral, W-part a
/// multiple of 1/(12 k^2). Bounded check, not a proof.
pub fn verify_lattice_closure(
    ext: &ExtendedSystem,
    gens: &LatticeBasis,
    max_word_len: usize,
) -> Result<ClosureReport> {
    let n = ext.base.dim();
    if gens.dim() != n + 1 {
        return Err(Error::DimensionMismatch { expected: n + 1, got: gens.dim() });
    }
    match ext.algebra.nilpotency_step() {
        None => return Err(Error::NotNilpotent),
        Some(step) if step > 3 => return Err(Error::UnsupportedStep { step, max: 3 }),
        _ => {}
    }
    let base_lattice = ext.base.lattice.as_ref().ok_or(Error::MissingLattice)?;
    let k = rationality_k(&ext.base)?;
    let step_inv = w_step(k).recip();
    // Membership against the S-description: solve the base part against the
    // base lattice once via its exact inverse.
    let base_cols = linalg::transpose(base_lattice.vectors());
    let base_inv =
        linalg::inverse(&base_cols).expect("lattice bases have nonzero determinant");

    let in_span = |v: &RatVec| -> bool {
        let base_part: RatVec = v[..n].to_vec();
        let coords = linalg::mat_vec(&base_inv, &base_part);
        if !coords.iter().all(crate::rational::is_integer) {
            return false;
        }
        crate::rational::is_integer(&(&v[n] * &step_inv))
    };

    // Letters: generators then inverses, in deterministic order.
    let mut letters: Vec<(i64, RatVec)> = Vec::new();
    for (idx, g) in gens.vectors().iter().enumerate() {
        letters.push((idx as i64 + 1, g.clone()));
    }
    for (idx, g) in gens.vectors().iter().enumerate() {
        letters.push((-(idx as i64 + 1), g.iter().map(|c| -c.clone()).collect()));
    }

    let mut frontier: Vec<(Vec<i64>, RatVec)> = vec![(Vec::new(), linalg::zeros(n + 1))];
    for _ in 0..max_word_len {
        let mut next = Vec::with_capacity(frontier.len() * letters.len());
        for (word, point) in &frontier {
            for (sign_idx, letter) in &letters {
                let product = ext.algebra.bch(point, letter)?;
                let mut w = word.clone();
                w.push(*sign_idx);
                if !in_span(&product) {
                    return Ok(ClosureReport { ok: false, counterexample: Some((w, product)) });
                }
                next.push((w, product));
            }
        }
        frontier = next;
    }
    Ok(ClosureReport { ok: true, counterexample: None })
}

/// Splits a dual state of the extension into its base restriction and the
/// moment value c = p_W.
pub fn split_moment(ext: &ExtendedSystem, lam: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n1 = ext.dim();
    if lam.len() != n1 {
        return Err(Error::DimensionMismatch { expected: n1, got: lam.len() });
    }
    let mut base = lam.to_vec();
    let c = base.remove(ext.w_index);
    Ok((base, c))
}

/// Inverse of `split_moment`.
pub fn assemble_moment(ext: &ExtendedSystem, base: &[f64], c: f64) -> Result<Vec<f64>> {
    let n = ext.dim() - 1;
    if base.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: base.len() });
    }
    let mut lam = base.to_vec();
    lam.insert(ext.w_index, c);
    Ok(lam)
}
