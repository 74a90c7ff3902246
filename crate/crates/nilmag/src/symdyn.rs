//! Exact symbolic dynamics: subshifts of finite type, transitivity,
//! entropy, the d_lambda metric, and time-variable suspension flows.
//!
//! Sequences are restricted to the eventually-periodic class, the
//! computably exact subset that is dense in the shift space. Entropy is
//! log of the Perron root, computed by power iteration and cross-checked
//! for small matrices against the characteristic polynomial's largest
//! real root, isolated exactly with Sturm chains.

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{rat_int, Rational};

/// 0/1 transition matrix of a subshift on N >= 2 symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    n: usize,
    rows: Vec<Vec<u8>>,
}

impl TransitionMatrix {
    pub fn new(rows: Vec<Vec<u8>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::InvalidInput(
                "transition matrix needs at least 2 symbols".into(),
            ));
        }
        for row in &rows {
            if row.len() != n {
                return Err(Error::InvalidInput("transition matrix must be square".into()));
            }
            if row.iter().any(|&x| x > 1) {
                return Err(Error::InvalidInput("transition entries must be 0 or 1".into()));
            }
        }
        Ok(TransitionMatrix { n, rows })
    }

    pub fn full(n: usize) -> Result<Self> {
        TransitionMatrix::new(vec![vec![1; n]; n])
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn allows(&self, from: u8, to: u8) -> bool {
        let (i, j) = (from as usize, to as usize);
        i < self.n && j < self.n && self.rows[i][j] == 1
    }

    fn bool_mat(&self) -> Vec<bool> {
        self.rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| x == 1))
            .collect()
    }

    fn is_nilpotent(&self) -> bool {
        let n = self.n;
        let a = self.bool_mat();
        let mut power = a.clone();
        for _ in 1..n {
            if power.iter().all(|&x| !x) {
                return true;
            }
            power = bool_mul(&power, &a, n);
        }
        power.iter().all(|&x| !x)
    }
}

fn bool_mul(a: &[bool], b: &[bool], n: usize) -> Vec<bool> {
    let mut out = vec![false; n * n];
    for i in 0..n {
        for k in 0..n {
            if a[i * n + k] {
                for j in 0..n {
                    if b[k * n + j] {
                        out[i * n + j] = true;
                    }
                }
            }
        }
    }
    out
}

/// Transitivity (primitivity) decision with minimal witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitivityReport {
    pub transitive: bool,
    /// Minimal m with all entries of A^m positive, when transitive.
    pub witness: Option<usize>,
}

/// Searches m = 1 ... (N-1)^2 + 1 (the Wielandt primitivity bound) for an
/// all-positive boolean power.
pub fn is_transitive(a: &TransitionMatrix) -> TransitivityReport {
    let n = a.size();
    let base = a.bool_mat();
    let mut power = base.clone();
    let bound = (n - 1) * (n - 1) + 1;
    for m in 1..=bound {
        if power.iter().all(|&x| x) {
            return TransitivityReport { transitive: true, witness: Some(m) };
        }
        power = bool_mul(&power, &base, n);
    }
    TransitivityReport { transitive: false, witness: None }
}

fn biguint_mul(a: &[BigUint], b: &[BigUint], n: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            if !a[i * n + k].is_zero() {
                for j in 0..n {
                    if !b[k * n + j].is_zero() {
                        out[i * n + j] += &a[i * n + k] * &b[k * n + j];
                    }
                }
            }
        }
    }
    out
}

/// Number of period-p points: trace(A^p), in arbitrary precision.
pub fn count_periodic(a: &TransitionMatrix, p: usize) -> Result<BigUint> {
    if p == 0 {
        return Err(Error::InvalidInput("period must be at least 1".into()));
    }
    let n = a.size();
    let base: Vec<BigUint> = a
        .rows
        .iter()
        .flat_map(|r| r.iter().map(|&x| BigUint::from(x)))
        .collect();
    let mut power = base.clone();
    for _ in 1..p {
        power = biguint_mul(&power, &base, n);
    }
    Ok((0..n).map(|i| power[i * n + i].clone()).sum())
}

// ---------------------------------------------------------------------
// Spectral radius: power iteration with exact cross-check.
// ---------------------------------------------------------------------

/// log of the Perron root of A, or `None` for nilpotent A (empty eventual
/// subshift, entropy undefined / -infinity).
///
/// The radius is computed by power iteration on a scaled high power of
/// A + I; for N <= 6 it is cross-checked against the characteristic
/// polynomial's largest real root (exact Sturm isolation) and the two
/// must agree within 1e-10.
pub fn sft_entropy(a: &TransitionMatrix) -> Result<Option<f64>> {
    if a.is_nilpotent() {
        return Ok(None);
    }
    let rho = spectral_radius_power(a);
    if a.size() <= 6 {
        let exact = largest_real_eigenvalue_sturm(a);
        if (rho - exact).abs() > 1e-10 {
            return Err(Error::InvalidInput(format!(
                "spectral radius cross-check failed: power iteration {rho} vs charpoly root {exact}"
            )));
        }
    }
    Ok(Some(rho.ln()))
}

/// Perron root via norm-ratio iteration on a scaled (A+I)^64; the
/// squaring amplifies the spectral gap so the iteration converges fast
/// even near-degenerate cases. Returns rho(A).
fn spectral_radius_power(a: &TransitionMatrix) -> f64 {
    let n = a.size();
    // B = A + I in f64, then 6 scaled squarings: B_final * exp(log_scale)
    // = (A+I)^64.
    let mut b: Vec<f64> = a
        .rows
        .iter()
        .enumerate()
        .flat_map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(move |(j, &x)| x as f64 + if i == j { 1.0 } else { 0.0 })
        })
        .collect();
    let mut log_scale = 0.0f64;
    for _ in 0..6 {
        let mut sq = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = b[i * n + k];
                if aik != 0.0 {
                    for j in 0..n {
                        sq[i * n + j] += aik * b[k * n + j];
                    }
                }
            }
        }
        let max = sq.iter().cloned().fold(0.0f64, f64::max);
        for x in sq.iter_mut() {
            *x /= max;
        }
        log_scale = 2.0 * log_scale + max.ln();
        b = sq;
    }
    // Norm-ratio iteration with a positive start vector.
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut ratio = 1.0f64;
    let mut stable = 0u32;
    for _ in 0..200_000 {
        let mut w = vec![0.0; n];
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += b[i * n + j] * v[j];
            }
            w[i] = acc;
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let new_ratio = norm;
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / norm;
        }
        if (new_ratio - ratio).abs() <= 1e-15 * new_ratio.max(1.0) {
            stable += 1;
            if stable >= 4 {
                ratio = new_ratio;
                break;
            }
        } else {
            stable = 0;
        }
        ratio = new_ratio;
    }
    // rho(A+I)^64 = ratio * exp(log_scale); rho(A) = rho(A+I) - 1.
    let kappa = (ratio.ln() + log_scale) / 64.0;
    kappa.exp_m1()
}

// --- exact characteristic polynomial and Sturm isolation ---

/// Characteristic polynomial coefficients (ascending powers, monic) via
/// Faddeev-LeVerrier over the rationals.
fn charpoly(a: &TransitionMatrix) -> Vec<Rational> {
    let n = a.size();
    let arat: Vec<Vec<Rational>> = a
        .rows
        .iter()
        .map(|r| r.iter().map(|&x| rat_int(x as i64)).collect())
        .collect();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = arat.clone();
    for k in 1..=n {
        if k > 1 {
            // M <- A (M + c_{n-k+1} I)
            let c = coeffs[n - k + 1].clone();
            let mut shifted = m.clone();
            for (i, row) in shifted.iter_mut().enumerate() {
                row[i] += &c;
            }
            let mut next = vec![vec![Rational::zero(); n]; n];
            for i in 0..n {
                for l in 0..n {
                    if !arat[i][l].is_zero() {
                        for j in 0..n {
                            let t = &arat[i][l] * &shifted[l][j];
                            next[i][j] += t;
                        }
                    }
                }
            }
            m = next;
        }
        let trace = (0..n).fold(Rational::zero(), |acc, i| acc + &m[i][i]);
        coeffs[n - k] = -trace / rat_int(k as i64);
    }
    coeffs
}

fn poly_trim(p: &mut Vec<Rational>) {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn poly_eval(p: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn poly_derivative(p: &[Rational]) -> Vec<Rational> {
    if p.len() <= 1 {
        return vec![Rational::zero()];
    }
    let mut out: Vec<Rational> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * rat_int(i as i64))
        .collect();
    poly_trim(&mut out);
    out
}

/// Remainder of exact polynomial division.
fn poly_rem(num: &[Rational], den: &[Rational]) -> Vec<Rational> {
    let mut r = num.to_vec();
    poly_trim(&mut r);
    let mut d = den.to_vec();
    poly_trim(&mut d);
    let d_deg = d.len() - 1;
    let d_lead = d.last().expect("nonempty divisor").clone();
    while !(r.len() == 1 && r[0].is_zero()) && r.len() - 1 >= d_deg {
        let r_deg = r.len() - 1;
        let factor = r.last().expect("nonempty") / &d_lead;
        let shift = r_deg - d_deg;
        for (i, dc) in d.iter().enumerate() {
            let t = dc * &factor;
            r[i + shift] -= t;
        }
        // The leading coefficient cancels exactly in rational arithmetic.
        r.pop();
        if r.is_empty() {
            r.push(Rational::zero());
        }
        poly_trim(&mut r);
    }
    r
}

fn is_zero_poly(p: &[Rational]) -> bool {
    p.len() == 1 && p[0].is_zero()
}

fn poly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !is_zero_poly(&y) {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    // Normalize monic.
    let lead = x.last().expect("nonempty").clone();
    for c in x.iter_mut() {
        *c = &*c / &lead;
    }
    x
}

fn poly_div_exact(num: &[Rational], den: &[Rational]) -> Vec<Rational> {
    let mut r = num.to_vec();
    poly_trim(&mut r);
    let mut d = den.to_vec();
    poly_trim(&mut d);
    let d_deg = d.len() - 1;
    let d_lead = d.last().expect("nonempty divisor").clone();
    let mut q = vec![Rational::zero(); r.len().saturating_sub(d_deg)];
    while !is_zero_poly(&r) && r.len() - 1 >= d_deg {
        let r_deg = r.len() - 1;
        let factor = r.last().expect("nonempty") / &d_lead;
        let shift = r_deg - d_deg;
        q[shift] = factor.clone();
        for (i, dc) in d.iter().enumerate() {
            let t = dc * &factor;
            r[i + shift] -= t;
        }
        r.pop();
        if r.is_empty() {
            r.push(Rational::zero());
        }
        poly_trim(&mut r);
    }
    debug_assert!(is_zero_poly(&r), "division was not exact");
    poly_trim(&mut q);
    q
}

/// Sturm chain of the square-free part of p. Square-freeness keeps the
/// zero-skipping sign-change count valid at rational bisection points
/// that happen to hit a root.
fn sturm_chain(p: &[Rational]) -> Vec<Vec<Rational>> {
    let d = poly_derivative(p);
    let square_free = if is_zero_poly(&d) {
        p.to_vec()
    } else {
        let g = poly_gcd(p, &d);
        if g.len() > 1 {
            poly_div_exact(p, &g)
        } else {
            p.to_vec()
        }
    };
    let mut chain = vec![square_free.clone()];
    let d = poly_derivative(&square_free);
    if !is_zero_poly(&d) {
        chain.push(d);
    }
    loop {
        let len = chain.len();
        if len < 2 {
            break;
        }
        let rem = poly_rem(&chain[len - 2], &chain[len - 1]);
        if is_zero_poly(&rem) {
            break;
        }
        chain.push(rem.iter().map(|c| -c.clone()).collect());
    }
    chain
}

fn sign_changes(chain: &[Vec<Rational>], x: &Rational) -> usize {
    let mut changes = 0;
    let mut prev: Option<bool> = None;
    for p in chain {
        let v = poly_eval(p, x);
        if v.is_zero() {
            continue;
        }
        let s = v.is_positive();
        if let Some(ps) = prev {
            if ps != s {
                changes += 1;
            }
        }
        prev = Some(s);
    }
    changes
}

/// Largest real root of the characteristic polynomial, isolated with a
/// Sturm chain and narrowed by exact bisection to ~1e-13.
fn largest_real_eigenvalue_sturm(a: &TransitionMatrix) -> f64 {
    let p = charpoly(a);
    let chain = sturm_chain(&p);
    let n = a.size() as i64;
    // All eigenvalues lie in [-N, N]; use (lo, hi] with lo below -N.
    let mut lo = rat_int(-n - 1);
    let mut hi = rat_int(n + 1);
    let roots_in = |a: &Rational, b: &Rational| -> usize {
        sign_changes(&chain, a).saturating_sub(sign_changes(&chain, b))
    };
    debug_assert!(roots_in(&lo, &hi) >= 1);
    // Invariant: the largest real root lies in (lo, hi].
    for _ in 0..60 {
        let mid = (&lo + &hi) / rat_int(2);
        if roots_in(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    crate::rational::to_f64(&((&lo + &hi) / rat_int(2)))
}

// ---------------------------------------------------------------------
// Eventually-periodic bi-infinite sequences.
// ---------------------------------------------------------------------

/// A bi-infinite symbol sequence that is eventually periodic on both
/// sides, in canonical form: primitive period words, minimal core, and
/// (for fully periodic sequences) the anchor normalized to index 0.
/// Equality of canonical representations is equality of sequences.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolSequence {
    /// First index of the explicit core; the left-periodic region is
    /// everything below.
    i_min: i64,
    core: Vec<u8>,
    left: Vec<u8>,
    right: Vec<u8>,
}

fn primitive_root(word: &[u8]) -> Vec<u8> {
    let n = word.len();
    for q in 1..=n {
        if n % q == 0 && (q..n).all(|i| word[i] == word[i % q]) {
            return word[..q].to_vec();
        }
    }
    word.to_vec()
}

fn lcm_usize(a: usize, b: usize) -> usize {
    let gcd = {
        let (mut x, mut y) = (a, b);
        while y != 0 {
            let t = x % y;
            x = y;
            y = t;
        }
        x
    };
    a / gcd * b
}

impl SymbolSequence {
    /// Builds a sequence from raw parts: `left` repeated below `i_min`,
    /// `core` on `[i_min, i_min + core.len())`, `right` repeated above.
    pub fn from_parts(i_min: i64, left: Vec<u8>, core: Vec<u8>, right: Vec<u8>) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidInput("period words must be nonempty".into()));
        }
        let mut seq = SymbolSequence { i_min, core, left, right };
        seq.canonicalize();
        Ok(seq)
    }

    pub fn constant(symbol: u8) -> Self {
        SymbolSequence::from_parts(0, vec![symbol], Vec::new(), vec![symbol])
            .expect("constant words are nonempty")
    }

    /// The fully periodic sequence with `word` anchored at index 0
    /// (value at i is `word[i mod len]`).
    pub fn periodic(word: &[u8]) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::InvalidInput("period word must be nonempty".into()));
        }
        SymbolSequence::from_parts(0, word.to_vec(), Vec::new(), word.to_vec())
    }

    pub fn value_at(&self, i: i64) -> u8 {
        let i_max = self.i_min + self.core.len() as i64 - 1;
        if i < self.i_min {
            let m = self.left.len() as i64;
            self.left[(i - self.i_min).rem_euclid(m) as usize]
        } else if i <= i_max {
            self.core[(i - self.i_min) as usize]
        } else {
            let m = self.right.len() as i64;
            self.right[(i - i_max - 1).rem_euclid(m) as usize]
        }
    }

    pub fn core_range(&self) -> (i64, i64) {
        (self.i_min, self.i_min + self.core.len() as i64 - 1)
    }

    pub fn left_word(&self) -> &[u8] {
        &self.left
    }

    pub fn right_word(&self) -> &[u8] {
        &self.right
    }

    pub fn max_symbol(&self) -> u8 {
        self.core
            .iter()
            .chain(&self.left)
            .chain(&self.right)
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// Left pattern extended to all indices.
    fn left_pattern(&self, i: i64) -> u8 {
        let m = self.left.len() as i64;
        self.left[(i - self.i_min).rem_euclid(m) as usize]
    }

    /// Right pattern extended to all indices.
    fn right_pattern(&self, i: i64) -> u8 {
        let i_max = self.i_min + self.core.len() as i64 - 1;
        let m = self.right.len() as i64;
        self.right[(i - i_max - 1).rem_euclid(m) as usize]
    }

    fn canonicalize(&mut self) {
        self.left = primitive_root(&self.left);
        self.right = primitive_root(&self.right);
        let i_max = self.i_min + self.core.len() as i64 - 1;
        let window = lcm_usize(self.left.len(), self.right.len()) as i64;

        // First disagreement with the left pattern (scanning upward).
        let mut m_l: Option<i64> = None;
        for i in self.i_min..=(i_max + window) {
            if self.value_at(i) != self.left_pattern(i) {
                m_l = Some(i);
                break;
            }
        }
        // Last disagreement with the right pattern (scanning downward).
        let mut m_r: Option<i64> = None;
        for i in ((self.i_min - window)..=i_max).rev() {
            if self.value_at(i) != self.right_pattern(i) {
                m_r = Some(i);
                break;
            }
        }

        match (m_l, m_r) {
            (None, _) | (_, None) => {
                // Fully periodic: re-anchor the primitive word at index 0.
                let word = if m_l.is_none() { &self.left } else { &self.right };
                let q = word.len() as i64;
                let values: Vec<u8> = (0..q)
                    .map(|x| {
                        if m_l.is_none() {
                            self.left_pattern(x)
                        } else {
                            self.right_pattern(x)
                        }
                    })
                    .collect();
                self.i_min = 0;
                self.core = Vec::new();
                self.left = values.clone();
                self.right = values;
            }
            (Some(m_l), Some(m_r)) => {
                let (new_min, new_core) = if m_l <= m_r {
                    (m_l, (m_l..=m_r).map(|i| self.value_at(i)).collect())
                } else {
                    (m_r + 1, Vec::new())
                };
                let ql = self.left.len() as i64;
                let new_left: Vec<u8> = (0..ql)
                    .map(|x| self.left_pattern(new_min - ql + x))
                    .collect();
                let qr = self.right.len() as i64;
                let boundary = new_min + new_core.len() as i64; // first right index
                let new_right: Vec<u8> = (0..qr)
                    .map(|x| self.right_pattern(boundary + x))
                    .collect();
                self.i_min = new_min;
                self.core = new_core;
                self.left = new_left;
                self.right = new_right;
            }
        }
    }
}

/// Left shift by `steps` (value at i of the result is the value at
/// i + steps of the input). Invertible: shifting back restores the input.
pub fn shift_apply(w: &SymbolSequence, steps: i64) -> SymbolSequence {
    let mut out = w.clone();
    out.i_min -= steps;
    out.canonicalize();
    out
}

/// Checks all transitions of an eventually-periodic sequence against the
/// matrix: the finite window covering both periodic patterns, the core,
/// and the junctions decides the bi-infinite condition. Symbols outside
/// the alphabet make the sequence inadmissible.
pub fn admissible(w: &SymbolSequence, a: &TransitionMatrix) -> bool {
    if w.max_symbol() as usize >= a.size() {
        return false;
    }
    let (i_min, i_max) = w.core_range();
    let lo = i_min - w.left_word().len() as i64 - 1;
    let hi = i_max + w.right_word().len() as i64 + 1;
    (lo..hi).all(|i| a.allows(w.value_at(i), w.value_at(i + 1)))
}

/// The metric d_lambda(w, w') = sum |w_n - w'_n| / lambda^{|n|}, summed
/// until the geometric tail bound drops below `tol` (or exactly, when the
/// two sequences have identical tails). The returned value has certified
/// error at most `tol`.
pub fn d_lambda(w1: &SymbolSequence, w2: &SymbolSequence, lam: f64, tol: f64) -> Result<f64> {
    if !(lam > 1.0) {
        return Err(Error::InvalidInput("d_lambda needs lambda > 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let diff = |i: i64| -> f64 {
        let a = w1.value_at(i) as f64;
        let b = w2.value_at(i) as f64;
        (a - b).abs()
    };

    // Exact-tail detection: beyond the cores both sequences are periodic;
    // if the patterns agree over a full joint period, the tails
    // contribute exactly zero.
    let (min1, max1) = w1.core_range();
    let (min2, max2) = w2.core_range();
    let right_start = max1.max(max2);
    let right_window = lcm_usize(w1.right_word().len(), w2.right_word().len()) as i64;
    let right_exact =
        ((right_start + 1)..=(right_start + right_window)).all(|i| diff(i) == 0.0);
    let left_start = min1.min(min2);
    let left_window = lcm_usize(w1.left_word().len(), w2.left_word().len()) as i64;
    let left_exact = ((left_start - left_window)..left_start).all(|i| diff(i) == 0.0);

    if right_exact && left_exact {
        let mut sum = 0.0;
        for i in left_start..=right_start {
            let d = diff(i);
            if d != 0.0 {
                sum += d / lam.powi(i.unsigned_abs().min(i32::MAX as u64) as i32);
            }
        }
        return Ok(sum);
    }

    // Outward partial sums with the geometric tail bound
    // 2 D lambda^{-(m+1)} * lambda/(lambda-1), D = max symbol.
    let d_max = w1.max_symbol().max(w2.max_symbol()) as f64;
    let mut sum = diff(0);
    let mut weight = 1.0;
    let mut m: i64 = 0;
    loop {
        m += 1;
        weight /= lam;
        sum += (diff(m) + diff(-m)) * weight;
        let tail = 2.0 * d_max * (weight / lam) * (lam / (lam - 1.0));
        if tail < tol {
            return Ok(sum);
        }
        if m > 10_000_000 {
            return Err(Error::InvalidInput(
                "d_lambda failed to converge within the iteration budget".into(),
            ));
        }
    }
}

/// Roof function depending only on the symbol at index 0 (locally
/// constant on 1-cylinders); all values strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct RoofFunction {
    values: Vec<f64>,
}

impl RoofFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("roof function needs values".into()));
        }
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidInput("roof values must be positive".into()));
        }
        Ok(RoofFunction { values })
    }

    pub fn constant(n_symbols: usize, value: f64) -> Result<Self> {
        RoofFunction::new(vec![value; n_symbols])
    }

    pub fn value_for(&self, w: &SymbolSequence) -> Result<f64> {
        let s = w.value_at(0) as usize;
        self.values
            .get(s)
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("no roof value for symbol {s}")))
    }
}

/// A point of the suspension: a sequence and a height in [0, tau(w)).
#[derive(Debug, Clone, PartialEq)]
pub struct SuspensionPoint {
    pub sequence: SymbolSequence,
    pub height: f64,
}

impl SuspensionPoint {
    pub fn new(sequence: SymbolSequence, height: f64, tau: &RoofFunction) -> Result<Self> {
        let roof = tau.value_for(&sequence)?;
        if !(0.0..roof).contains(&height) {
            return Err(Error::InvalidInput(format!(
                "height {height} outside [0, {roof})"
            )));
        }
        Ok(SuspensionPoint { sequence, height })
    }
}

/// Advances a suspension point by time t (negative allowed), applying the
/// relation (x, s + tau(x)) ~ (shift(x), s) until the height lands in
/// [0, tau(w0)). Exact for dyadic roof values and times.
pub fn suspension_evolve(
    pt: &SuspensionPoint,
    t: f64,
    tau: &RoofFunction,
) -> Result<SuspensionPoint> {
    if !t.is_finite() {
        return Err(Error::InvalidInput("time must be finite".into()));
    }
    let mut seq = pt.sequence.clone();
    let mut s = pt.height + t;
    loop {
        let roof = tau.value_for(&seq)?;
        if s >= roof {
            s -= roof;
            seq = shift_apply(&seq, 1);
        } else if s < 0.0 {
            let prev = shift_apply(&seq, -1);
            let prev_roof = tau.value_for(&prev)?;
            s += prev_roof;
            seq = prev;
        } else {
            return Ok(SuspensionPoint { sequence: seq, height: s });
        }
    }
}
