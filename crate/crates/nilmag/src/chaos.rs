//! Lyapunov-exponent estimation along Euler trajectories.
//!
//! The maximal exponent is the numerical chaos proxy used to exhibit the
//! zero-entropy vs positive-entropy dichotomy; no rigorous topological
//! entropy is computed for flows. State and tangent vectors are advanced
//! jointly by RK4 through the variational equation, with periodic
//! renormalization and a discarded transient.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler::{hamiltonian, CompiledField, FieldSpec};
use crate::magext::MagneticSystem;
use crate::orbits::{orbit_sample, seeded_state};

/// Parameters of a Lyapunov run. `check_convergence` reruns the estimate
/// at half the step; the report is flagged converged only when the two
/// values agree within 30% relative.
#[derive(Debug, Clone, Copy)]
pub struct LyapunovConfig {
    pub step: f64,
    pub renorm_interval: f64,
    pub transient_fraction: f64,
    pub seed: u64,
    pub check_convergence: bool,
}

impl Default for LyapunovConfig {
    fn default() -> Self {
        LyapunovConfig {
            step: crate::defaults::STEP,
            renorm_interval: crate::defaults::RENORM_INTERVAL,
            transient_fraction: crate::defaults::TRANSIENT_FRACTION,
            seed: crate::defaults::SEED,
            check_convergence: true,
        }
    }
}

impl LyapunovConfig {
    fn validate(&self, t_end: f64) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidInput("step must be positive".into()));
        }
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::InvalidInput("t_end must be positive".into()));
        }
        if !(self.renorm_interval > 0.0 && self.renorm_interval.is_finite()) {
            return Err(Error::InvalidInput("renorm interval must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.transient_fraction) {
            return Err(Error::InvalidInput("transient fraction must be in [0, 1)".into()));
        }
        Ok(())
    }
}

/// Lyapunov estimate. `spectrum`, when present, is sorted non-increasing.
/// `converged` is true only when the step-halving check ran and passed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LyapunovReport {
    pub mle: f64,
    pub spectrum: Option<Vec<f64>>,
    pub fit_window: (f64, f64),
    pub renorm_interval: f64,
    pub seed: u64,
    pub converged: bool,
    pub t_end: f64,
    pub step: f64,
}

/// Seeded unit tangent vector.
fn seeded_tangent(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

/// Seeded orthonormal frame (rows), via Gram-Schmidt on random vectors.
fn seeded_frame(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut frame = vec![0.0; dim * dim];
    let mut row = 0;
    while row < dim {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        for prev in 0..row {
            let dot: f64 = (0..dim).map(|i| v[i] * frame[prev * dim + i]).sum();
            for i in 0..dim {
                v[i] -= dot * frame[prev * dim + i];
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for i in 0..dim {
                frame[row * dim + i] = v[i] / norm;
            }
            row += 1;
        }
    }
    frame
}

/// Scratch for the joint state/tangent RK4 step.
struct JointScratch {
    s1: Vec<f64>,
    s2: Vec<f64>,
    s3: Vec<f64>,
    s4: Vec<f64>,
    xm: Vec<f64>,
    u: Vec<f64>,
    jac: Vec<f64>,
    l1: Vec<f64>,
    l2: Vec<f64>,
    l3: Vec<f64>,
    l4: Vec<f64>,
    vm: Vec<f64>,
}

impl JointScratch {
    fn new(n: usize, k: usize) -> Self {
        JointScratch {
            s1: vec![0.0; n],
            s2: vec![0.0; n],
            s3: vec![0.0; n],
            s4: vec![0.0; n],
            xm: vec![0.0; n],
            u: vec![0.0; n],
            jac: vec![0.0; 4 * n * n],
            l1: vec![0.0; k * n],
            l2: vec![0.0; k * n],
            l3: vec![0.0; k * n],
            l4: vec![0.0; k * n],
            vm: vec![0.0; k * n],
        }
    }
}

#[inline]
fn mat_vec_flat(jac: &[f64], n: usize, v: &[f64], out: &mut [f64]) {
    for r in 0..n {
        let mut acc = 0.0;
        let row = &jac[r * n..(r + 1) * n];
        for (a, &vi) in row.iter().zip(v) {
            acc += a * vi;
        }
        out[r] = acc;
    }
}

/// One RK4 step of the state together with k tangent vectors through the
/// variational equation.
fn joint_step(
    field: &CompiledField,
    h: f64,
    x: &mut [f64],
    tangents: &mut [f64],
    k: usize,
    s: &mut JointScratch,
) {
    let n = x.len();
    let kn = k * n;
    let (j1, rest) = s.jac.split_at_mut(n * n);
    let (j2, rest) = rest.split_at_mut(n * n);
    let (j3, j4) = rest.split_at_mut(n * n);

    field.velocity_into(x, &mut s.u, &mut s.s1);
    field.jacobian_into(x, &mut s.u, j1);
    for j in 0..k {
        mat_vec_flat(j1, n, &tangents[j * n..(j + 1) * n], &mut s.l1[j * n..(j + 1) * n]);
    }

    for i in 0..n {
        s.xm[i] = x[i] + 0.5 * h * s.s1[i];
    }
    field.velocity_into(&s.xm, &mut s.u, &mut s.s2);
    field.jacobian_into(&s.xm, &mut s.u, j2);
    for i in 0..kn {
        s.vm[i] = tangents[i] + 0.5 * h * s.l1[i];
    }
    for j in 0..k {
        mat_vec_flat(j2, n, &s.vm[j * n..(j + 1) * n], &mut s.l2[j * n..(j + 1) * n]);
    }

    for i in 0..n {
        s.xm[i] = x[i] + 0.5 * h * s.s2[i];
    }
    field.velocity_into(&s.xm, &mut s.u, &mut s.s3);
    field.jacobian_into(&s.xm, &mut s.u, j3);
    for i in 0..kn {
        s.vm[i] = tangents[i] + 0.5 * h * s.l2[i];
    }
    for j in 0..k {
        mat_vec_flat(j3, n, &s.vm[j * n..(j + 1) * n], &mut s.l3[j * n..(j + 1) * n]);
    }

    for i in 0..n {
        s.xm[i] = x[i] + h * s.s3[i];
    }
    field.velocity_into(&s.xm, &mut s.u, &mut s.s4);
    field.jacobian_into(&s.xm, &mut s.u, j4);
    for i in 0..kn {
        s.vm[i] = tangents[i] + h * s.l3[i];
    }
    for j in 0..k {
        mat_vec_flat(j4, n, &s.vm[j * n..(j + 1) * n], &mut s.l4[j * n..(j + 1) * n]);
    }

    for i in 0..n {
        x[i] += h / 6.0 * (s.s1[i] + 2.0 * s.s2[i] + 2.0 * s.s3[i] + s.s4[i]);
    }
    for i in 0..kn {
        tangents[i] += h / 6.0 * (s.l1[i] + 2.0 * s.l2[i] + 2.0 * s.l3[i] + s.l4[i]);
    }
}

/// Modified Gram-Schmidt on k rows; returns the accumulated log norms of
/// the diagonal (growth factors).
fn renormalize(tangents: &mut [f64], k: usize, n: usize, logs: &mut [f64]) -> Result<()> {
    for j in 0..k {
        for prev in 0..j {
            let mut dot = 0.0;
            for i in 0..n {
                dot += tangents[j * n + i] * tangents[prev * n + i];
            }
            for i in 0..n {
                tangents[j * n + i] -= dot * tangents[prev * n + i];
            }
        }
        let mut norm2 = 0.0;
        for i in 0..n {
            norm2 += tangents[j * n + i] * tangents[j * n + i];
        }
        let norm = norm2.sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidInput(
                "tangent frame degenerated during renormalization".into(),
            ));
        }
        logs[j] += norm.ln();
        for i in 0..n {
            tangents[j * n + i] /= norm;
        }
    }
    Ok(())
}

/// Core run: evolves k tangent vectors and returns the per-vector average
/// log growth rates over the fit window.
fn run_exponents(
    field: &CompiledField,
    lam0: &[f64],
    t_end: f64,
    cfg: &LyapunovConfig,
    k: usize,
    step: f64,
) -> Result<(Vec<f64>, (f64, f64))> {
    let n = field.dim();
    let n_total = (t_end / step).round().max(1.0) as u64;
    let n_skip = (cfg.transient_fraction * t_end / step).round() as u64;
    let renorm_every = (cfg.renorm_interval / step).round().max(1.0) as u64;

    let mut x = lam0.to_vec();
    let mut tangents = if k == 1 {
        seeded_tangent(n, cfg.seed)
    } else {
        seeded_frame(n, cfg.seed)
    };
    let mut scratch = JointScratch::new(n, k);
    let mut logs = vec![0.0; k];
    let mut discard = vec![0.0; k];
    let mut steps_since_renorm = 0u64;

    for step_idx in 1..=n_total {
        joint_step(field, step, &mut x, &mut tangents, k, &mut scratch);
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { t: step_idx as f64 * step });
        }
        steps_since_renorm += 1;
        let at_boundary = step_idx == n_skip || step_idx == n_total;
        if steps_since_renorm == renorm_every || at_boundary {
            let sink = if step_idx <= n_skip { &mut discard } else { &mut logs };
            renormalize(&mut tangents, k, n, sink)?;
            steps_since_renorm = 0;
        }
    }

    let window = (n_total - n_skip) as f64 * step;
    let exponents: Vec<f64> = logs.iter().map(|l| l / window).collect();
    Ok((exponents, (n_skip as f64 * step, n_total as f64 * step)))
}

fn relative_change(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Maximal Lyapunov exponent by tangent-vector renormalization.
/// Deterministic per seed (the initial tangent direction is seeded).
pub fn mle_benettin(
    spec: &FieldSpec,
    lam0: &[f64],
    t_end: f64,
    cfg: &LyapunovConfig,
) -> Result<LyapunovReport> {
    cfg.validate(t_end)?;
    if lam0.len() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), got: lam0.len() });
    }
    let field = spec.compile();
    let (exps, fit_window) = run_exponents(&field, lam0, t_end, cfg, 1, cfg.step)?;
    let mle = exps[0];
    let converged = if cfg.check_convergence {
        let (halved, _) = run_exponents(&field, lam0, t_end, cfg, 1, cfg.step / 2.0)?;
        relative_change(mle, halved[0]) < crate::defaults::CONVERGENCE_REL_TOL
    } else {
        false
    };
    Ok(LyapunovReport {
        mle,
        spectrum: None,
        fit_window,
        renorm_interval: cfg.renorm_interval,
        seed: cfg.seed,
        converged,
        t_end,
        step: cfg.step,
    })
}

/// Full Lyapunov spectrum by QR (modified Gram-Schmidt)
/// reorthonormalization of a tangent frame. Exponents sorted descending.
pub fn lyapunov_spectrum(
    spec: &FieldSpec,
    lam0: &[f64],
    t_end: f64,
    cfg: &LyapunovConfig,
) -> Result<LyapunovReport> {
    cfg.validate(t_end)?;
    let n = spec.dim();
    if lam0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: lam0.len() });
    }
    let field = spec.compile();
    let (mut exps, fit_window) = run_exponents(&field, lam0, t_end, cfg, n, cfg.step)?;
    exps.sort_by(|a, b| b.partial_cmp(a).expect("finite exponents"));
    let mle = exps[0];
    let converged = if cfg.check_convergence {
        let (halved, _) = run_exponents(&field, lam0, t_end, cfg, n, cfg.step / 2.0)?;
        let top = halved
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        relative_change(mle, top) < crate::defaults::CONVERGENCE_REL_TOL
    } else {
        false
    };
    Ok(LyapunovReport {
        mle,
        spectrum: Some(exps),
        fit_window,
        renorm_interval: cfg.renorm_interval,
        seed: cfg.seed,
        converged,
        t_end,
        step: cfg.step,
    })
}

/// Grid kinds for sweeps: coadjoint-orbit coordinates for the
/// six-dimensional extension scenario, or field strength and energy for a
/// magnetic scenario.
#[derive(Debug, Clone)]
pub enum SweepGrid {
    Orbit { k1: Vec<f64>, k2: Vec<f64> },
    FieldEnergy { c: Vec<f64>, energy: Vec<f64> },
}

impl SweepGrid {
    pub fn coord_names(&self) -> (&'static str, &'static str) {
        match self {
            SweepGrid::Orbit { .. } => ("k1", "k2"),
            SweepGrid::FieldEnergy { .. } => ("c", "energy"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub coord1: f64,
    pub coord2: f64,
    pub seed: u64,
    /// `None` when this grid point diverged; see `error`.
    pub mle: Option<f64>,
    pub converged: bool,
    pub t_end: f64,
    pub step: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepTable {
    pub coord_names: (&'static str, &'static str),
    pub rows: Vec<SweepRow>,
}

/// Runs one Lyapunov estimate per grid point per seed, in deterministic
/// order (grid row-major, then seed). Individual divergences are recorded
/// in their row; the sweep continues.
pub fn sweep(
    system: &MagneticSystem,
    grid: &SweepGrid,
    t_end: f64,
    cfg: &LyapunovConfig,
    seeds: &[u64],
) -> Result<SweepTable> {
    cfg.validate(t_end)?;
    if seeds.is_empty() {
        return Err(Error::InvalidInput("sweep needs at least one seed".into()));
    }
    let mut rows = Vec::new();
    match grid {
        SweepGrid::Orbit { k1, k2 } => {
            if system.dim() != 6 {
                return Err(Error::InvalidInput(format!(
                    "orbit grids need the six-dimensional extension scenario, got dim {}",
                    system.dim()
                )));
            }
            let spec = FieldSpec::from_system(system, None)?;
            for &a in k1 {
                for &b in k2 {
                    for &seed in seeds {
                        let run_cfg = LyapunovConfig { seed, ..*cfg };
                        let outcome = orbit_sample(a, b, seed)
                            .and_then(|lam0| mle_benettin(&spec, &lam0, t_end, &run_cfg));
                        rows.push(row_from(a, b, seed, t_end, cfg.step, outcome));
                    }
                }
            }
        }
        SweepGrid::FieldEnergy { c, energy } => {
            for &cv in c {
                let spec = FieldSpec::from_system(system, Some(cv))?;
                for &ev in energy {
                    for &seed in seeds {
                        let run_cfg = LyapunovConfig { seed, ..*cfg };
                        let outcome = energy_state(system, ev, seed)
                            .and_then(|lam0| mle_benettin(&spec, &lam0, t_end, &run_cfg));
                        rows.push(row_from(cv, ev, seed, t_end, cfg.step, outcome));
                    }
                }
            }
        }
    }
    Ok(SweepTable { coord_names: grid.coord_names(), rows })
}

/// Seeded state rescaled onto the requested energy level.
fn energy_state(system: &MagneticSystem, energy: f64, seed: u64) -> Result<Vec<f64>> {
    if !(energy > 0.0) {
        return Err(Error::InvalidInput("energy must be positive".into()));
    }
    let raw = seeded_state(system.dim(), seed);
    let h = hamiltonian(&system.metric, &raw)?;
    if h <= 0.0 {
        return Err(Error::InvalidInput("seeded state has zero energy".into()));
    }
    let scale = (energy / h).sqrt();
    Ok(raw.iter().map(|x| x * scale).collect())
}

fn row_from(
    coord1: f64,
    coord2: f64,
    seed: u64,
    t_end: f64,
    step: f64,
    outcome: Result<LyapunovReport>,
) -> SweepRow {
    match outcome {
        Ok(report) => SweepRow {
            coord1,
            coord2,
            seed,
            mle: Some(report.mle),
            converged: report.converged,
            t_end,
            step,
            error: None,
        },
        Err(e) => SweepRow {
            coord1,
            coord2,
            seed,
            mle: None,
            converged: false,
            t_end,
            step,
            error: Some(e.category().to_string()),
        },
    }
}
