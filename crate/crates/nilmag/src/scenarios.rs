//! Built-in scenario registry.
//!
//! Four named systems cover both sides of the entropy dichotomy:
//!
//! - `abelian2`: 2-dim abelian with sigma(X,Y) = 1; the extension is the
//!   Heisenberg algebra and the magnetic flow is uniform rotation.
//! - `heisenberg`: [X,Y] = Z with sigma(X,Y) = 1 (vanishes on the
//!   derived algebra: the zero-entropy regime), unit lattice.
//! - `paper5d`: the five-dimensional system [X,Y] = Z, [Y,V] = U with
//!   sigma(X,U) = sigma(Z,V) = 1 (does not vanish on the derived
//!   algebra), lattice spanned by {U/2, V, X, Y, Z/2} so that k = 2.
//! - `t4ext`: the six-dimensional central extension of `paper5d`, with
//!   its extended lattice; its geodesic Euler flow carries the chaotic
//!   coadjoint orbits.

use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::magext::{self, MagneticSystem};
use crate::rational::{rat, rat_int};

/// A loaded scenario: name, parsed configuration, and the built system.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub config: ScenarioConfig,
    pub system: MagneticSystem,
}

impl Scenario {
    /// Canonical configuration text (input for the config hash).
    pub fn canonical_text(&self) -> String {
        self.config.emit()
    }
}

pub const BUILTIN_NAMES: [&str; 4] = ["abelian2", "heisenberg", "paper5d", "t4ext"];

fn abelian2_config() -> ScenarioConfig {
    ScenarioConfig {
        dim: 2,
        labels: vec!["X".into(), "Y".into()],
        brackets: vec![],
        metric: crate::config::MetricSection::Identity,
        sigma_entries: vec![("X".into(), "Y".into(), rat_int(1))],
        strength: 1.0,
        lattice: None,
        w_label: None,
        seed: None,
        integrate: None,
        chaos: None,
        sweep: None,
    }
}

fn heisenberg_config() -> ScenarioConfig {
    ScenarioConfig {
        dim: 3,
        labels: vec!["X".into(), "Y".into(), "Z".into()],
        brackets: vec![("X".into(), "Y".into(), "Z".into(), rat_int(1))],
        metric: crate::config::MetricSection::Identity,
        sigma_entries: vec![("X".into(), "Y".into(), rat_int(1))],
        strength: 1.0,
        lattice: Some(crate::linalg::identity(3)),
        w_label: None,
        seed: None,
        integrate: None,
        chaos: None,
        sweep: None,
    }
}

fn paper5d_config() -> ScenarioConfig {
    let mut lattice = crate::linalg::identity(5);
    lattice[0][0] = rat(1, 2); // U/2
    lattice[4][4] = rat(1, 2); // Z/2
    ScenarioConfig {
        dim: 5,
        labels: ["U", "V", "X", "Y", "Z"].map(String::from).to_vec(),
        brackets: vec![
            ("X".into(), "Y".into(), "Z".into(), rat_int(1)),
            ("Y".into(), "V".into(), "U".into(), rat_int(1)),
        ],
        metric: crate::config::MetricSection::Identity,
        sigma_entries: vec![
            ("X".into(), "U".into(), rat_int(1)),
            ("Z".into(), "V".into(), rat_int(1)),
        ],
        strength: 1.0,
        lattice: Some(lattice),
        w_label: None,
        seed: None,
        integrate: None,
        chaos: None,
        sweep: None,
    }
}

fn t4ext_config() -> Result<ScenarioConfig> {
    let base_cfg = paper5d_config();
    let base = base_cfg.to_system()?;
    let ext = magext::extend(&base)?;
    let k = magext::rationality_k(&base)?;
    let lattice = magext::extended_lattice(&base, k)?;
    let system = MagneticSystem::new(
        ext.algebra.clone(),
        ext.metric.clone(),
        crate::liealg::TwoForm::zero(ext.dim()),
        Some(lattice),
        0.0,
    )?;
    Ok(ScenarioConfig::from_system(
        &system,
        Some(ext.w_label().to_string()),
    ))
}

/// Loads a built-in scenario by name, or parses a configuration file at
/// the given path. The configuration is normalized through a canonical
/// emit/parse round trip.
pub fn load_scenario(name_or_path: &str) -> Result<Scenario> {
    let (name, config) = match name_or_path {
        "abelian2" => ("abelian2".to_string(), abelian2_config()),
        "heisenberg" => ("heisenberg".to_string(), heisenberg_config()),
        "paper5d" => ("paper5d".to_string(), paper5d_config()),
        "t4ext" => ("t4ext".to_string(), t4ext_config()?),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::InvalidInput(format!(
                    "{path:?} is not a built-in scenario ({}) and could not be read: {e}",
                    BUILTIN_NAMES.join(", ")
                ))
            })?;
            let stem = std::path::Path::new(path)
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.to_string());
            (stem, ScenarioConfig::parse(&text)?)
        }
    };
    // Normalize: canonical emission must reparse to the same config.
    let canonical = ScenarioConfig::parse(&config.emit())?;
    let system = canonical.to_system()?;
    Ok(Scenario { name, config: canonical, system })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper5d_scenario_checks_out() {
        let s = load_scenario("paper5d").unwrap();
        assert!(s.system.algebra.validate().pass);
        assert_eq!(s.system.algebra.nilpotency_step(), Some(2));
        assert!(!s.system.algebra.vanishes_on_derived(&s.system.sigma));
        assert_eq!(magext::rationality_k(&s.system).unwrap(), 2);
    }

    #[test]
    fn t4ext_scenario_is_step_three() {
        let s = load_scenario("t4ext").unwrap();
        assert_eq!(s.system.dim(), 6);
        assert_eq!(s.system.algebra.nilpotency_step(), Some(3));
        assert_eq!(
            s.system.algebra.lower_central_series().dims,
            vec![6, 3, 1, 0]
        );
        assert_eq!(s.config.w_label.as_deref(), Some("W"));
        // The extended lattice carries the W/48 generator.
        let lattice = s.system.lattice.as_ref().unwrap();
        assert_eq!(lattice.vectors()[5][5], rat(1, 48));
        // Geodesic by default.
        assert!(s.system.sigma.is_zero());
        assert_eq!(s.system.field_strength_default, 0.0);
    }

    #[test]
    fn heisenberg_scenario_vanishes_on_derived() {
        let s = load_scenario("heisenberg").unwrap();
        assert!(s.system.algebra.vanishes_on_derived(&s.system.sigma));
        assert_eq!(magext::rationality_k(&s.system).unwrap(), 1);
    }

    #[test]
    fn abelian2_loads() {
        let s = load_scenario("abelian2").unwrap();
        assert_eq!(s.system.dim(), 2);
        assert_eq!(s.system.algebra.nilpotency_step(), Some(1));
    }

    #[test]
    fn canonical_text_is_stable() {
        for name in BUILTIN_NAMES {
            let s = load_scenario(name).unwrap();
            let text = s.canonical_text();
            let reparsed = ScenarioConfig::parse(&text).unwrap();
            assert_eq!(reparsed.emit(), text, "{name} emission unstable");
        }
    }

    #[test]
    fn scenario_from_file_and_unknown_name() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("custom.cfg");
        std::fs::write(&path, load_scenario("heisenberg").unwrap().canonical_text())
            .unwrap();
        let loaded = load_scenario(path.to_str().unwrap()).unwrap();
        assert_eq!(loaded.name, "custom");
        assert_eq!(loaded.system.dim(), 3);

        assert!(load_scenario("does-not-exist").is_err());
    }

    #[test]
    fn extension_round_trip_preserves_structure() {
        // Emit the extension of paper5d as a config, re-ingest, and compare
        // validate/series outcomes.
        let base = load_scenario("paper5d").unwrap();
        let ext = magext::extend(&base.system).unwrap();
        let k = magext::rationality_k(&base.system).unwrap();
        let lattice = magext::extended_lattice(&base.system, k).unwrap();
        let as_system = MagneticSystem::new(
            ext.algebra.clone(),
            ext.metric.clone(),
            crate::liealg::TwoForm::zero(6),
            Some(lattice),
            0.0,
        )
        .unwrap();
        let cfg = ScenarioConfig::from_system(&as_system, Some(ext.w_label().to_string()));
        let text = cfg.emit();

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ext.cfg");
        std::fs::write(&path, &text).unwrap();
        let again = load_scenario(path.to_str().unwrap()).unwrap();
        assert!(again.system.algebra.validate().pass);
        assert_eq!(
            again.system.algebra.lower_central_series().dims,
            ext.algebra.lower_central_series().dims
        );
        // And it matches the built-in t4ext scenario.
        let builtin = load_scenario("t4ext").unwrap();
        assert_eq!(again.canonical_text(), builtin.canonical_text());
    }
}
