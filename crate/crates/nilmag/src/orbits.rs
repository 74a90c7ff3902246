//! Coadjoint-orbit bookkeeping for the six-dimensional extension with
//! basis order (U, V, X, Y, Z, W).
//!
//! The two independent Casimirs are K1 = p_W and K2 = p_W p_Y - p_Z p_U;
//! their joint level sets are the coadjoint orbits, regular when
//! k1 k2 != 0. The alpha invariant sqrt((k2 - k1^2)/(k2 + k1^2)) is real
//! and nonzero exactly in the chaotic regime.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::euler::Observable;

/// Coordinate indices for the (U, V, X, Y, Z, W) basis order.
pub const IDX_U: usize = 0;
pub const IDX_V: usize = 1;
pub const IDX_X: usize = 2;
pub const IDX_Y: usize = 3;
pub const IDX_Z: usize = 4;
pub const IDX_W: usize = 5;

const DIM: usize = 6;

/// Range of the free coordinates drawn by `orbit_sample` and
/// `seeded_state`.
pub const SAMPLE_RANGE: (f64, f64) = (-2.0, 2.0);

/// A classified coadjoint orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSpec {
    pub k1: f64,
    pub k2: f64,
    /// `None` exactly at the pole k2 + k1^2 = 0 where alpha is undefined.
    pub alpha: Option<Complex64>,
    pub regular: bool,
}

impl OrbitSpec {
    pub fn new(k1: f64, k2: f64) -> Self {
        OrbitSpec {
            k1,
            k2,
            alpha: alpha(k1, k2).ok(),
            regular: k1 * k2 != 0.0,
        }
    }
}

impl Serialize for OrbitSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("OrbitSpec", 5)?;
        s.serialize_field("k1", &self.k1)?;
        s.serialize_field("k2", &self.k2)?;
        s.serialize_field("alpha_re", &self.alpha.map(|a| a.re))?;
        s.serialize_field("alpha_im", &self.alpha.map(|a| a.im))?;
        s.serialize_field("regular", &self.regular)?;
        s.end()
    }
}

/// Moment level c, base speed d, and the extension energy b = (d^2+c^2)/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelSpec {
    pub c: f64,
    pub d: f64,
    pub b: f64,
}

fn check_dim6(lam: &[f64]) -> Result<()> {
    if lam.len() != DIM {
        return Err(Error::DimensionMismatch { expected: DIM, got: lam.len() });
    }
    Ok(())
}

/// The Casimir pair (K1, K2) = (p_W, p_W p_Y - p_Z p_U).
pub fn casimirs_t4(lam: &[f64]) -> Result<(f64, f64)> {
    check_dim6(lam)?;
    let k1 = lam[IDX_W];
    let k2 = lam[IDX_W] * lam[IDX_Y] - lam[IDX_Z] * lam[IDX_U];
    Ok((k1, k2))
}

/// Casimir observables for drift tracking along trajectories.
pub fn casimir_observables() -> Vec<Observable> {
    vec![
        Observable::new("K1", |p: &[f64]| p[IDX_W]),
        Observable::new("K2", |p: &[f64]| p[IDX_W] * p[IDX_Y] - p[IDX_Z] * p[IDX_U]),
    ]
}

/// Principal square root of (k2 - k1^2)/(k2 + k1^2). Real and positive
/// iff k2 > k1^2; purely imaginary when the ratio is negative.
pub fn alpha(k1: f64, k2: f64) -> Result<Complex64> {
    let denom = k2 + k1 * k1;
    if denom == 0.0 {
        return Err(Error::Pole(format!(
            "alpha undefined: k2 + k1^2 = 0 at (k1, k2) = ({k1}, {k2})"
        )));
    }
    let ratio = (k2 - k1 * k1) / denom;
    if ratio >= 0.0 {
        Ok(Complex64::new(ratio.sqrt(), 0.0))
    } else {
        Ok(Complex64::new(0.0, (-ratio).sqrt()))
    }
}

/// Deterministic sample on the orbit (k1, k2): fixes p_W = k1, draws
/// p_U, p_Z, p_X, p_V uniformly from the sample range, and solves
/// p_Y = (k2 + p_Z p_U)/k1.
pub fn orbit_sample(k1: f64, k2: f64, seed: u64) -> Result<Vec<f64>> {
    if k1 == 0.0 {
        return Err(Error::InvalidInput(
            "orbit sampling needs k1 != 0 to solve for p_Y".into(),
        ));
    }
    if !(k1.is_finite() && k2.is_finite()) {
        return Err(Error::InvalidInput("non-finite Casimir values".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || rng.random_range(SAMPLE_RANGE.0..SAMPLE_RANGE.1);
    let p_u = draw();
    let p_z = draw();
    let p_x = draw();
    let p_v = draw();
    let p_y = (k2 + p_z * p_u) / k1;
    let mut lam = vec![0.0; DIM];
    lam[IDX_U] = p_u;
    lam[IDX_V] = p_v;
    lam[IDX_X] = p_x;
    lam[IDX_Y] = p_y;
    lam[IDX_Z] = p_z;
    lam[IDX_W] = k1;
    Ok(lam)
}

/// Seeded generic initial state: all coordinates uniform on the sample
/// range. Used for zero-entropy consistency runs on arbitrary scenarios.
pub fn seeded_state(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dim)
        .map(|_| rng.random_range(SAMPLE_RANGE.0..SAMPLE_RANGE.1))
        .collect()
}

/// Level data for moment level c and base speed d.
pub fn level_spec(c: f64, d: f64) -> Result<LevelSpec> {
    if !(c > 0.0 && d > 0.0) {
        return Err(Error::InvalidInput("level spec needs c, d > 0".into()));
    }
    Ok(LevelSpec { c, d, b: (d * d + c * c) / 2.0 })
}

/// The Casimir value k2 whose orbit reaches base speed D at k1 = 1:
/// sqrt(2 k2 - 1) = D, so k2 = (D^2 + 1)/2.
pub fn k2_for_target_speed(big_d: f64) -> Result<f64> {
    if !(big_d > 0.0) {
        return Err(Error::InvalidInput("target speed must be positive".into()));
    }
    Ok((big_d * big_d + 1.0) / 2.0)
}

/// Base speed on extension energy level b at k1 = 1: d = sqrt(2b - 1).
pub fn speed_for_energy(b: f64) -> Result<f64> {
    if !(2.0 * b - 1.0 >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "energy {b} below the moment floor at k1 = 1"
        )));
    }
    Ok((2.0 * b - 1.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::hamiltonian;
    use crate::liealg::InnerProduct;

    #[test]
    fn casimir_examples() {
        let mut lam = vec![0.0; 6];
        lam[IDX_W] = 1.0;
        assert_eq!(casimirs_t4(&lam).unwrap(), (1.0, 0.0));
        lam[IDX_Y] = 5.0;
        assert_eq!(casimirs_t4(&lam).unwrap(), (1.0, 5.0));
        assert_eq!(casimirs_t4(&vec![0.0; 6]).unwrap(), (0.0, 0.0));
        assert!(casimirs_t4(&[0.0; 5]).is_err());
    }

    #[test]
    fn alpha_examples() {
        let a = alpha(1.0, 1.0).unwrap();
        assert_eq!(a, Complex64::new(0.0, 0.0));

        let a = alpha(1.0, 5.0).unwrap();
        assert!((a.re - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((a.re - 0.81650).abs() < 1e-5);
        assert_eq!(a.im, 0.0);

        let a = alpha(1.0, 0.0).unwrap();
        assert_eq!(a.re, 0.0);
        assert_eq!(a.im, 1.0);

        assert!(matches!(alpha(1.0, -1.0), Err(Error::Pole(_))));
    }

    #[test]
    fn orbit_spec_regular_grid() {
        for k1 in [-2.0, -1.0, 0.0, 1.0, 2.0] {
            for k2 in [-1.0, 0.0, 0.5, 1.0, 3.0] {
                let spec = OrbitSpec::new(k1, k2);
                assert_eq!(spec.regular, k1 * k2 != 0.0, "at ({k1}, {k2})");
                if k2 + k1 * k1 != 0.0 {
                    let a = spec.alpha.unwrap();
                    // alpha^2 = (k2 - k1^2)/(k2 + k1^2)
                    let sq = a * a;
                    let expected = (k2 - k1 * k1) / (k2 + k1 * k1);
                    assert!((sq.re - expected).abs() < 1e-12);
                    assert!(sq.im.abs() < 1e-12);
                } else {
                    assert!(spec.alpha.is_none());
                }
            }
        }
    }

    #[test]
    fn orbit_sample_hits_casimirs_deterministically() {
        for seed in 0..20u64 {
            let lam = orbit_sample(1.0, 5.0, seed).unwrap();
            let (k1, k2) = casimirs_t4(&lam).unwrap();
            assert_eq!(k1, 1.0);
            assert!((k2 - 5.0).abs() <= 1e-12);
            assert_eq!(lam, orbit_sample(1.0, 5.0, seed).unwrap());
            // h >= K2 on every sample.
            let h = hamiltonian(&InnerProduct::identity(6), &lam).unwrap();
            assert!(h >= k2);
        }
        assert_ne!(
            orbit_sample(1.0, 5.0, 1).unwrap(),
            orbit_sample(1.0, 5.0, 2).unwrap()
        );
        assert!(orbit_sample(0.0, 5.0, 1).is_err());
    }

    #[test]
    fn alpha_depends_only_on_the_orbit() {
        // Samples with equal (k1, k2) always classify identically.
        let reference = OrbitSpec::new(1.0, 5.0);
        for seed in 0..10u64 {
            let lam = orbit_sample(1.0, 5.0, seed).unwrap();
            let (k1, k2) = casimirs_t4(&lam).unwrap();
            let spec = OrbitSpec::new(k1, (k2 * 1e12).round() / 1e12);
            assert_eq!(spec.alpha, reference.alpha);
        }
    }

    #[test]
    fn level_examples() {
        assert_eq!(level_spec(1.0, 1.0).unwrap().b, 1.0);
        assert_eq!(k2_for_target_speed(3.0).unwrap(), 5.0);
        assert_eq!(speed_for_energy(13.0).unwrap(), 5.0);
        assert!(level_spec(0.0, 1.0).is_err());
        assert!(k2_for_target_speed(-1.0).is_err());
    }

    #[test]
    fn energy_reach_grows_with_k2() {
        // For k1 = 1 the energy of an orbit through the horseshoe regime
        // is at least k2, so the reachable base speed d = sqrt(2b-1)
        // dominates the target D = sqrt(2 k2 - 1).
        for big_d in [3.0, 9.9498743710662, 31.606961258558215] {
            let k2 = k2_for_target_speed(big_d).unwrap();
            for seed in 0..5u64 {
                let lam = orbit_sample(1.0, k2, seed).unwrap();
                let b = hamiltonian(&InnerProduct::identity(6), &lam).unwrap();
                assert!(b >= k2);
                let d = speed_for_energy(b).unwrap();
                assert!(d >= big_d, "d = {d} < D = {big_d}");
            }
        }
    }

    #[test]
    fn seeded_state_is_deterministic_and_in_range() {
        let a = seeded_state(5, 42);
        let b = seeded_state(5, 42);
        assert_eq!(a, b);
        assert!(a.iter().all(|&x| (SAMPLE_RANGE.0..SAMPLE_RANGE.1).contains(&x)));
        assert_ne!(seeded_state(5, 1), seeded_state(5, 2));
    }
}
