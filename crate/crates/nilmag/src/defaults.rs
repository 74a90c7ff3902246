//! Single source of truth for run defaults and acceptance thresholds.

/// Integrator step for all fixed-step runs.
pub const STEP: f64 = 1e-3;

/// Default horizon for trajectory integration.
pub const INTEGRATE_T_END: f64 = 10.0;

/// Default sampling stride (in steps) for trajectory output.
pub const SAMPLE_STRIDE: usize = 10;

/// Default horizon for Lyapunov estimation.
pub const LYAPUNOV_T_END: f64 = 2000.0;

/// Tangent renormalization cadence (time units).
pub const RENORM_INTERVAL: f64 = 1.0;

/// Leading fraction of a Lyapunov run discarded as transient.
pub const TRANSIENT_FRACTION: f64 = 0.10;

/// Relative change under step halving below which a run counts as
/// converged.
pub const CONVERGENCE_REL_TOL: f64 = 0.30;

/// Bounded word length for the lattice closure check.
pub const MAX_WORD_LEN: usize = 3;

/// Default RNG seed.
pub const SEED: u64 = 0;

/// Default number of seeds per sweep grid point.
pub const SWEEP_SEEDS: u64 = 5;

/// Calibrated threshold: an MLE above this counts as chaotic.
pub const MLE_POSITIVE_THRESHOLD: f64 = 0.01;

/// Calibrated threshold: zero-entropy runs must stay below this in
/// absolute value.
pub const MLE_ZERO_THRESHOLD: f64 = 0.02;
