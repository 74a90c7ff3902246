//! Scenario configuration: a line-oriented text format with named
//! sections and `key = value` pairs.
//!
//! Grammar (see the repository README for the full reference):
//!
//! ```text
//! # comment
//! [algebra]
//! dim = 5
//! labels = U V X Y Z
//! bracket = X Y Z 1          # the Z-coefficient of [X, Y] is 1 (rational)
//! [metric]
//! identity                   # or n lines: row = 1 0 0 ...
//! [sigma]
//! entry = X U 1              # sigma(X, U) = 1 (rational)
//! strength = 1               # default field strength c
//! [lattice]                  # optional
//! vector = 1/2 0 0 0 0
//! [extension]                # optional; present on emitted extensions
//! w_label = W
//! [run]                      # optional
//! seed = 7
//! [integrate] / [chaos] / [sweep]   # optional run sections
//! ```
//!
//! Rationals are exact `p` or `p/q` strings; floats are ordinary decimal
//! literals. Unknown sections and keys are rejected with the offending
//! line number, as are duplicate scalar keys and duplicate bracket,
//! sigma, or row entries.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::defaults;
use crate::error::{Error, Result};
use crate::liealg::{InnerProduct, LatticeBasis, LieAlgebra, TwoForm};
use crate::linalg::RatMat;
use crate::magext::MagneticSystem;
use crate::rational::{format_rational, parse_rational, Rational};

/// Metric section contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricSection {
    Identity,
    Rows(RatMat),
}

/// Integration run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrateParams {
    pub step: f64,
    pub t_end: f64,
    pub sample_stride: usize,
    pub c: Option<f64>,
}

impl Default for IntegrateParams {
    fn default() -> Self {
        IntegrateParams {
            step: defaults::STEP,
            t_end: defaults::INTEGRATE_T_END,
            sample_stride: defaults::SAMPLE_STRIDE,
            c: None,
        }
    }
}

/// Lyapunov run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaosParams {
    pub step: f64,
    pub t_end: f64,
    pub renorm_interval: f64,
    pub transient_fraction: f64,
    pub check_convergence: bool,
    pub c: Option<f64>,
}

impl Default for ChaosParams {
    fn default() -> Self {
        ChaosParams {
            step: defaults::STEP,
            t_end: defaults::LYAPUNOV_T_END,
            renorm_interval: defaults::RENORM_INTERVAL,
            transient_fraction: defaults::TRANSIENT_FRACTION,
            check_convergence: true,
            c: None,
        }
    }
}

/// Sweep grid parameters: exactly one of the orbit pair (k1, k2) or the
/// field pair (c, energy) may be populated.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepParams {
    pub k1: Vec<f64>,
    pub k2: Vec<f64>,
    pub c: Vec<f64>,
    pub energy: Vec<f64>,
    pub seeds: Option<u64>,
    pub t_end: Option<f64>,
    pub step: Option<f64>,
}

/// Parsed scenario configuration. `to_system` performs the semantic
/// checks (Jacobi, cocycle, positive definiteness).
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub dim: usize,
    pub labels: Vec<String>,
    /// Bracket quadruples (label_i, label_j, label_k, coefficient).
    pub brackets: Vec<(String, String, String, Rational)>,
    pub metric: MetricSection,
    pub sigma_entries: Vec<(String, String, Rational)>,
    pub strength: f64,
    pub lattice: Option<RatMat>,
    pub w_label: Option<String>,
    pub seed: Option<u64>,
    pub integrate: Option<IntegrateParams>,
    pub chaos: Option<ChaosParams>,
    pub sweep: Option<SweepParams>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_f64(line: usize, s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| perr(line, format!("bad float {s:?}")))
}

fn parse_usize(line: usize, s: &str) -> Result<usize> {
    s.parse::<usize>()
        .map_err(|_| perr(line, format!("bad integer {s:?}")))
}

fn parse_u64(line: usize, s: &str) -> Result<u64> {
    s.parse::<u64>()
        .map_err(|_| perr(line, format!("bad integer {s:?}")))
}

fn parse_bool(line: usize, s: &str) -> Result<bool> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(perr(line, format!("bad boolean {s:?} (use true/false)"))),
    }
}

fn parse_f64_list(line: usize, tokens: &[&str]) -> Result<Vec<f64>> {
    if tokens.is_empty() {
        return Err(perr(line, "expected at least one value"));
    }
    tokens.iter().map(|t| parse_f64(line, t)).collect()
}

fn rational_row(line: usize, tokens: &[&str]) -> Result<Vec<Rational>> {
    tokens
        .iter()
        .map(|t| parse_rational(t).map_err(|e| perr(line, e.to_string())))
        .collect()
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut dim: Option<usize> = None;
        let mut labels: Option<Vec<String>> = None;
        let mut brackets = Vec::new();
        let mut metric: Option<MetricSection> = None;
        let mut metric_rows: RatMat = Vec::new();
        let mut sigma_entries = Vec::new();
        let mut strength: Option<f64> = None;
        let mut lattice_rows: RatMat = Vec::new();
        let mut saw_lattice = false;
        let mut w_label: Option<String> = None;
        let mut seed: Option<u64> = None;
        let mut integrate: Option<IntegrateParams> = None;
        let mut chaos: Option<ChaosParams> = None;
        let mut sweep: Option<SweepParams> = None;

        let mut current_section: Option<String> = None;
        let mut seen_sections: Vec<String> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| perr(line_no, "unterminated section header"))?
                    .trim();
                if seen_sections.iter().any(|s| s == name) {
                    return Err(perr(line_no, format!("duplicate section [{name}]")));
                }
                seen_sections.push(name.to_string());
                match name {
                    "algebra" | "metric" | "sigma" | "lattice" | "extension" | "run" => {}
                    "integrate" => integrate = Some(IntegrateParams::default()),
                    "chaos" => chaos = Some(ChaosParams::default()),
                    "sweep" => sweep = Some(SweepParams::default()),
                    other => {
                        return Err(perr(line_no, format!("unknown section [{other}]")));
                    }
                }
                current_section = Some(name.to_string());
                continue;
            }
            let section = current_section
                .as_deref()
                .ok_or_else(|| perr(line_no, "content before the first section header"))?;

            // The metric section allows the bare keyword `identity`.
            if section == "metric" && line == "identity" {
                if metric.is_some() || !metric_rows.is_empty() {
                    return Err(perr(line_no, "metric given more than once"));
                }
                metric = Some(MetricSection::Identity);
                continue;
            }

            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| perr(line_no, format!("expected key = value, got {line:?}")))?;
            let key = key.trim();
            let tokens: Vec<&str> = value.split_whitespace().collect();
            let single = |line_no: usize| -> Result<&str> {
                if tokens.len() == 1 {
                    Ok(tokens[0])
                } else {
                    Err(perr(line_no, format!("key {key} expects exactly one value")))
                }
            };

            match (section, key) {
                ("algebra", "dim") => {
                    if dim.is_some() {
                        return Err(perr(line_no, "duplicate key dim"));
                    }
                    dim = Some(parse_usize(line_no, single(line_no)?)?);
                }
                ("algebra", "labels") => {
                    if labels.is_some() {
                        return Err(perr(line_no, "duplicate key labels"));
                    }
                    labels = Some(tokens.iter().map(|s| s.to_string()).collect());
                }
                ("algebra", "bracket") => {
                    if tokens.len() != 4 {
                        return Err(perr(
                            line_no,
                            "bracket expects: label_i label_j label_k rational",
                        ));
                    }
                    let c = parse_rational(tokens[3])
                        .map_err(|e| perr(line_no, e.to_string()))?;
                    brackets.push((
                        tokens[0].to_string(),
                        tokens[1].to_string(),
                        tokens[2].to_string(),
                        c,
                    ));
                }
                ("metric", "row") => {
                    if metric.is_some() {
                        return Err(perr(line_no, "metric rows after `identity`"));
                    }
                    metric_rows.push(rational_row(line_no, &tokens)?);
                }
                ("sigma", "entry") => {
                    if tokens.len() != 3 {
                        return Err(perr(
                            line_no,
                            "entry expects: label_i label_j rational",
                        ));
                    }
                    let c = parse_rational(tokens[2])
                        .map_err(|e| perr(line_no, e.to_string()))?;
                    sigma_entries.push((tokens[0].to_string(), tokens[1].to_string(), c));
                }
                ("sigma", "strength") => {
                    if strength.is_some() {
                        return Err(perr(line_no, "duplicate key strength"));
                    }
                    strength = Some(parse_f64(line_no, single(line_no)?)?);
                }
                ("lattice", "vector") => {
                    saw_lattice = true;
                    lattice_rows.push(rational_row(line_no, &tokens)?);
                }
                ("extension", "w_label") => {
                    if w_label.is_some() {
                        return Err(perr(line_no, "duplicate key w_label"));
                    }
                    w_label = Some(single(line_no)?.to_string());
                }
                ("run", "seed") => {
                    if seed.is_some() {
                        return Err(perr(line_no, "duplicate key seed"));
                    }
                    seed = Some(parse_u64(line_no, single(line_no)?)?);
                }
                ("integrate", k) => {
                    let p = integrate.as_mut().expect("section initialized");
                    match k {
                        "step" => p.step = parse_f64(line_no, single(line_no)?)?,
                        "t_end" => p.t_end = parse_f64(line_no, single(line_no)?)?,
                        "sample_stride" => {
                            p.sample_stride = parse_usize(line_no, single(line_no)?)?
                        }
                        "c" => p.c = Some(parse_f64(line_no, single(line_no)?)?),
                        other => {
                            return Err(perr(
                                line_no,
                                format!("unknown key {other} in [integrate]"),
                            ))
                        }
                    }
                }
                ("chaos", k) => {
                    let p = chaos.as_mut().expect("section initialized");
                    match k {
                        "step" => p.step = parse_f64(line_no, single(line_no)?)?,
                        "t_end" => p.t_end = parse_f64(line_no, single(line_no)?)?,
                        "renorm_interval" => {
                            p.renorm_interval = parse_f64(line_no, single(line_no)?)?
                        }
                        "transient_fraction" => {
                            p.transient_fraction = parse_f64(line_no, single(line_no)?)?
                        }
                        "check_convergence" => {
                            p.check_convergence = parse_bool(line_no, single(line_no)?)?
                        }
                        "c" => p.c = Some(parse_f64(line_no, single(line_no)?)?),
                        other => {
                            return Err(perr(
                                line_no,
                                format!("unknown key {other} in [chaos]"),
                            ))
                        }
                    }
                }
                ("sweep", k) => {
                    let p = sweep.as_mut().expect("section initialized");
                    match k {
                        "k1" => p.k1 = parse_f64_list(line_no, &tokens)?,
                        "k2" => p.k2 = parse_f64_list(line_no, &tokens)?,
                        "c" => p.c = parse_f64_list(line_no, &tokens)?,
                        "energy" => p.energy = parse_f64_list(line_no, &tokens)?,
                        "seeds" => {
                            p.seeds = Some(parse_u64(line_no, single(line_no)?)?)
                        }
                        "t_end" => {
                            p.t_end = Some(parse_f64(line_no, single(line_no)?)?)
                        }
                        "step" => p.step = Some(parse_f64(line_no, single(line_no)?)?),
                        other => {
                            return Err(perr(
                                line_no,
                                format!("unknown key {other} in [sweep]"),
                            ))
                        }
                    }
                }
                (section, key) => {
                    return Err(perr(
                        line_no,
                        format!("unknown key {key} in [{section}]"),
                    ));
                }
            }
        }

        let dim = dim.ok_or_else(|| perr(0, "missing [algebra] dim"))?;
        let labels = labels.ok_or_else(|| perr(0, "missing [algebra] labels"))?;
        if labels.len() != dim {
            return Err(perr(
                0,
                format!("dim = {dim} but {} labels given", labels.len()),
            ));
        }
        let metric = match metric {
            Some(m) => m,
            None if !metric_rows.is_empty() => MetricSection::Rows(metric_rows),
            None if seen_sections.iter().any(|s| s == "metric") => {
                return Err(perr(0, "[metric] section needs `identity` or row entries"))
            }
            None => MetricSection::Identity,
        };
        Ok(ScenarioConfig {
            dim,
            labels,
            brackets,
            metric,
            sigma_entries,
            strength: strength.unwrap_or(1.0),
            lattice: if saw_lattice { Some(lattice_rows) } else { None },
            w_label,
            seed,
            integrate,
            chaos,
            sweep,
        })
    }

    fn label_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::InvalidInput(format!("unknown basis label {label:?}")))
    }

    /// Builds the magnetic system, running the exact semantic checks.
    pub fn to_system(&self) -> Result<MagneticSystem> {
        let mut entries = Vec::new();
        for (a, b, c, coeff) in &self.brackets {
            entries.push((
                self.label_index(a)?,
                self.label_index(b)?,
                self.label_index(c)?,
                coeff.clone(),
            ));
        }
        let algebra = LieAlgebra::from_brackets(self.labels.clone(), &entries)?;
        let metric = match &self.metric {
            MetricSection::Identity => InnerProduct::identity(self.dim),
            MetricSection::Rows(rows) => InnerProduct::new(rows.clone())?,
        };
        let mut sigma_entries = Vec::new();
        for (a, b, coeff) in &self.sigma_entries {
            sigma_entries.push((self.label_index(a)?, self.label_index(b)?, coeff.clone()));
        }
        let sigma = TwoForm::from_entries(self.dim, &sigma_entries)?;
        let lattice = match &self.lattice {
            Some(rows) => Some(LatticeBasis::new(rows.clone())?),
            None => None,
        };
        MagneticSystem::new(algebra, metric, sigma, lattice, self.strength)
    }

    /// Canonical emission: fixed section and key order, reduced rationals,
    /// shortest-round-trip floats. Parsing the output reproduces the
    /// configuration.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "[algebra]");
        let _ = writeln!(out, "dim = {}", self.dim);
        let _ = writeln!(out, "labels = {}", self.labels.join(" "));
        for (a, b, c, coeff) in &self.brackets {
            let _ = writeln!(out, "bracket = {a} {b} {c} {}", format_rational(coeff));
        }
        let _ = writeln!(out, "\n[metric]");
        match &self.metric {
            MetricSection::Identity => {
                let _ = writeln!(out, "identity");
            }
            MetricSection::Rows(rows) => {
                for row in rows {
                    let cells: Vec<String> = row.iter().map(format_rational).collect();
                    let _ = writeln!(out, "row = {}", cells.join(" "));
                }
            }
        }
        let _ = writeln!(out, "\n[sigma]");
        for (a, b, coeff) in &self.sigma_entries {
            let _ = writeln!(out, "entry = {a} {b} {}", format_rational(coeff));
        }
        let _ = writeln!(out, "strength = {}", self.strength);
        if let Some(rows) = &self.lattice {
            let _ = writeln!(out, "\n[lattice]");
            for row in rows {
                let cells: Vec<String> = row.iter().map(format_rational).collect();
                let _ = writeln!(out, "vector = {}", cells.join(" "));
            }
        }
        if let Some(w) = &self.w_label {
            let _ = writeln!(out, "\n[extension]");
            let _ = writeln!(out, "w_label = {w}");
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "\n[run]");
            let _ = writeln!(out, "seed = {seed}");
        }
        if let Some(p) = &self.integrate {
            let _ = writeln!(out, "\n[integrate]");
            let _ = writeln!(out, "step = {}", p.step);
            let _ = writeln!(out, "t_end = {}", p.t_end);
            let _ = writeln!(out, "sample_stride = {}", p.sample_stride);
            if let Some(c) = p.c {
                let _ = writeln!(out, "c = {c}");
            }
        }
        if let Some(p) = &self.chaos {
            let _ = writeln!(out, "\n[chaos]");
            let _ = writeln!(out, "step = {}", p.step);
            let _ = writeln!(out, "t_end = {}", p.t_end);
            let _ = writeln!(out, "renorm_interval = {}", p.renorm_interval);
            let _ = writeln!(out, "transient_fraction = {}", p.transient_fraction);
            let _ = writeln!(out, "check_convergence = {}", p.check_convergence);
            if let Some(c) = p.c {
                let _ = writeln!(out, "c = {c}");
            }
        }
        if let Some(p) = &self.sweep {
            let _ = writeln!(out, "\n[sweep]");
            let list = |values: &[f64]| -> String {
                values
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            if !p.k1.is_empty() {
                let _ = writeln!(out, "k1 = {}", list(&p.k1));
            }
            if !p.k2.is_empty() {
                let _ = writeln!(out, "k2 = {}", list(&p.k2));
            }
            if !p.c.is_empty() {
                let _ = writeln!(out, "c = {}", list(&p.c));
            }
            if !p.energy.is_empty() {
                let _ = writeln!(out, "energy = {}", list(&p.energy));
            }
            if let Some(s) = p.seeds {
                let _ = writeln!(out, "seeds = {s}");
            }
            if let Some(t) = p.t_end {
                let _ = writeln!(out, "t_end = {t}");
            }
            if let Some(s) = p.step {
                let _ = writeln!(out, "step = {s}");
            }
        }
        out
    }

    /// Configuration describing a magnetic system (used to re-emit
    /// extensions as first-class scenarios).
    pub fn from_system(system: &MagneticSystem, w_label: Option<String>) -> Self {
        let algebra = &system.algebra;
        let labels = algebra.labels().to_vec();
        let mut brackets = Vec::new();
        for (i, j, coeffs) in algebra.structure_entries() {
            for (k, c) in coeffs.iter().enumerate() {
                if !num_traits::Zero::is_zero(c) {
                    brackets.push((
                        labels[i].clone(),
                        labels[j].clone(),
                        labels[k].clone(),
                        c.clone(),
                    ));
                }
            }
        }
        let metric = if system.metric.is_identity() {
            MetricSection::Identity
        } else {
            MetricSection::Rows(system.metric.matrix().clone())
        };
        let n = system.dim();
        let mut sigma_entries = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let v = system.sigma.value(i, j);
                if !num_traits::Zero::is_zero(v) {
                    sigma_entries.push((labels[i].clone(), labels[j].clone(), v.clone()));
                }
            }
        }
        ScenarioConfig {
            dim: n,
            labels,
            brackets,
            metric,
            sigma_entries,
            strength: system.field_strength_default,
            lattice: system.lattice.as_ref().map(|l| l.vectors().clone()),
            w_label,
            seed: None,
            integrate: None,
            chaos: None,
            sweep: None,
        }
    }
}

/// Summary of per-scenario structural checks, as printed by `check`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckReport {
    pub validate_pass: bool,
    pub max_jacobi_residual: String,
    pub series_dims: Vec<usize>,
    pub nilpotency_step: Option<usize>,
    pub derived_dim: usize,
    pub cocycle_pass: bool,
    pub vanishes_on_derived: bool,
    pub rationality_k: Option<u64>,
}

/// Runs the structural check battery on a system.
pub fn check_system(system: &MagneticSystem) -> CheckReport {
    let validation = system.algebra.validate();
    let series = system.algebra.lower_central_series();
    let cocycle = system.algebra.is_cocycle(&system.sigma);
    let k = system
        .lattice
        .as_ref()
        .and_then(|_| crate::magext::rationality_k(system).ok());
    CheckReport {
        validate_pass: validation.pass,
        max_jacobi_residual: validation.max_residual.to_string(),
        series_dims: series.dims.clone(),
        nilpotency_step: series.step,
        derived_dim: system.algebra.derived_algebra().dim(),
        cocycle_pass: cocycle.pass,
        vanishes_on_derived: system.algebra.vanishes_on_derived(&system.sigma),
        rationality_k: k,
    }
}

/// Sorted-key map form used for JSON output.
pub type JsonMap = BTreeMap<String, serde_json::Value>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    const FIVE_DIM: &str = "
# the five-dimensional example
[algebra]
dim = 5
labels = U V X Y Z
bracket = X Y Z 1
bracket = Y V U 1

[metric]
identity

[sigma]
entry = X U 1
entry = Z V 1
strength = 1

[lattice]
vector = 1/2 0 0 0 0
vector = 0 1 0 0 0
vector = 0 0 1 0 0
vector = 0 0 0 1 0
vector = 0 0 0 0 1/2

[run]
seed = 7
";

    #[test]
    fn parse_and_build_five_dim() {
        let cfg = ScenarioConfig::parse(FIVE_DIM).unwrap();
        assert_eq!(cfg.dim, 5);
        assert_eq!(cfg.seed, Some(7));
        assert_eq!(cfg.lattice.as_ref().unwrap()[0][0], rat(1, 2));
        let system = cfg.to_system().unwrap();
        assert!(system.algebra.validate().pass);
        assert_eq!(system.algebra.nilpotency_step(), Some(2));
        assert!(!system.algebra.vanishes_on_derived(&system.sigma));
        assert_eq!(crate::magext::rationality_k(&system).unwrap(), 2);
    }

    #[test]
    fn emit_round_trips() {
        let cfg = ScenarioConfig::parse(FIVE_DIM).unwrap();
        let emitted = cfg.emit();
        let reparsed = ScenarioConfig::parse(&emitted).unwrap();
        assert_eq!(cfg, reparsed);
        // Emission is canonical: emitting the reparse is byte-identical.
        assert_eq!(emitted, reparsed.emit());
    }

    #[test]
    fn run_sections_round_trip() {
        let text = format!(
            "{FIVE_DIM}\n[integrate]\nstep = 0.002\nt_end = 5\n\n[chaos]\nt_end = 100\ncheck_convergence = false\n\n[sweep]\nk1 = 1\nk2 = 5 50\nseeds = 3\n"
        );
        let cfg = ScenarioConfig::parse(&text).unwrap();
        let integrate = cfg.integrate.as_ref().unwrap();
        assert_eq!(integrate.step, 0.002);
        assert_eq!(integrate.t_end, 5.0);
        assert_eq!(integrate.sample_stride, defaults::SAMPLE_STRIDE);
        let chaos = cfg.chaos.as_ref().unwrap();
        assert_eq!(chaos.t_end, 100.0);
        assert!(!chaos.check_convergence);
        let sweep = cfg.sweep.as_ref().unwrap();
        assert_eq!(sweep.k2, vec![5.0, 50.0]);
        assert_eq!(sweep.seeds, Some(3));
        let reparsed = ScenarioConfig::parse(&cfg.emit()).unwrap();
        assert_eq!(cfg, reparsed);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "[algebra]\ndim = 3\nlabels = X Y Z\nbogus = 1\n";
        match ScenarioConfig::parse(bad) {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 4);
                assert!(msg.contains("bogus"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_section_rejected() {
        let bad = "[algebra]\ndim = 2\nlabels = X Y\n[nonsense]\nfoo = 1\n";
        assert!(matches!(
            ScenarioConfig::parse(bad),
            Err(Error::Parse { line: 4, .. })
        ));
    }

    #[test]
    fn duplicate_bracket_rejected_at_build() {
        let text = "
[algebra]
dim = 3
labels = X Y Z
bracket = X Y Z 1
bracket = Y X Z -1
[metric]
identity
[sigma]
";
        let cfg = ScenarioConfig::parse(text).unwrap();
        assert!(cfg.to_system().is_err());
    }

    #[test]
    fn non_closed_sigma_fails_validation() {
        let text = "
[algebra]
dim = 5
labels = U V X Y Z
bracket = X Y Z 1
bracket = Y V U 1
[metric]
identity
[sigma]
entry = Z V 1
";
        let cfg = ScenarioConfig::parse(text).unwrap();
        assert!(matches!(cfg.to_system(), Err(Error::NotCocycle { .. })));
    }

    #[test]
    fn metric_rows_parse() {
        let text = "
[algebra]
dim = 2
labels = X Y
[metric]
row = 2 1
row = 1 2
[sigma]
entry = X Y 1
";
        let cfg = ScenarioConfig::parse(text).unwrap();
        let system = cfg.to_system().unwrap();
        assert!(!system.metric.is_identity());
        // Round trip keeps the rows.
        let reparsed = ScenarioConfig::parse(&cfg.emit()).unwrap();
        assert_eq!(cfg, reparsed);
    }

    #[test]
    fn check_report_for_five_dim() {
        let system = ScenarioConfig::parse(FIVE_DIM).unwrap().to_system().unwrap();
        let report = check_system(&system);
        assert!(report.validate_pass);
        assert_eq!(report.series_dims, vec![5, 2, 0]);
        assert_eq!(report.nilpotency_step, Some(2));
        assert_eq!(report.derived_dim, 2);
        assert!(report.cocycle_pass);
        assert!(!report.vanishes_on_derived);
        assert_eq!(report.rationality_k, Some(2));
    }
}
