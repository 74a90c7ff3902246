//! `nilmag`: scenario checks, extensions, integration, Lyapunov
//! estimation, sweeps, and subshift analysis from the command line.
//!
//! Every run writes its artifacts plus a `summary.json` (scenario id,
//! config hash, check results, output paths, wall time) into the output
//! directory. Errors exit nonzero with a machine-readable category on
//! stderr: parse = 2, validation = 3, divergence = 4,
//! unsupported-step = 5, io = 6.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use nilmag::chaos::{self, LyapunovConfig, SweepGrid};
use nilmag::config::ScenarioConfig;
use nilmag::defaults;
use nilmag::error::Error;
use nilmag::euler::{integrate, FieldSpec, IntegratorConfig, Observable};
use nilmag::export;
use nilmag::magext;
use nilmag::orbits;
use nilmag::scenarios::{load_scenario, Scenario};
use nilmag::symdyn::{self, TransitionMatrix};

#[derive(Parser)]
#[command(name = "nilmag", about = "Left-invariant magnetic systems on nilpotent Lie groups", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Directory for artifact files.
    #[arg(long, default_value = "nilmag-out")]
    out_dir: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Run the structural check battery on a scenario and print a table.
    Check {
        /// Built-in scenario name or config file path.
        scenario: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Build the central extension and emit it as a re-ingestable config.
    Extend {
        scenario: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Integrate the (magnetic) Euler flow; writes trajectory CSV and a
    /// drift summary JSON.
    Integrate {
        scenario: String,
        /// Initial state as comma-separated floats (default: seeded).
        #[arg(long)]
        state: Option<String>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        stride: Option<usize>,
        /// Field strength (default: scenario strength).
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Estimate the maximal Lyapunov exponent; writes a report JSON.
    Lyapunov {
        scenario: String,
        /// Coadjoint-orbit sample (six-dimensional scenarios only).
        #[arg(long, requires = "k2")]
        k1: Option<f64>,
        #[arg(long, requires = "k1")]
        k2: Option<f64>,
        /// Initial state as comma-separated floats.
        #[arg(long, conflicts_with = "k1")]
        state: Option<String>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also compute the full exponent spectrum.
        #[arg(long)]
        spectrum: bool,
        /// Skip the step-halving convergence check.
        #[arg(long)]
        no_convergence_check: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Lyapunov estimates over a grid; writes CSV and summary JSON.
    Sweep {
        scenario: String,
        /// Orbit grid: comma-separated k1 values.
        #[arg(long)]
        k1: Option<String>,
        /// Orbit grid: comma-separated k2 values.
        #[arg(long)]
        k2: Option<String>,
        /// Field grid: comma-separated field strengths.
        #[arg(long)]
        c: Option<String>,
        /// Field grid: comma-separated energy levels.
        #[arg(long)]
        energy: Option<String>,
        /// Number of seeds per grid point.
        #[arg(long)]
        seeds: Option<u64>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Analyze a 0/1 transition matrix: entropy, transitivity, periodic
    /// counts.
    Sft {
        /// Matrix rows as 0/1 digit strings, comma-separated: "11,10".
        #[arg(long, conflicts_with = "matrix_file")]
        matrix: Option<String>,
        /// File with one 0/1 digit row per line.
        #[arg(long)]
        matrix_file: Option<PathBuf>,
        /// Report periodic counts for p = 1..=max_period.
        #[arg(long, default_value_t = 8)]
        max_period: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            let category = e.category();
            let payload = serde_json::json!({
                "category": category,
                "message": e.to_string(),
            });
            eprintln!("{payload}");
            let code = match category {
                "parse" => 2,
                "validation" => 3,
                "divergence" => 4,
                "unsupported-step" => 5,
                "io" => 6,
                _ => 1,
            };
            std::process::exit(code);
        }
    }
}

struct RunContext {
    scenario: String,
    config_hash: String,
    started: Instant,
    out_dir: PathBuf,
    outputs: Vec<String>,
    checks: serde_json::Map<String, serde_json::Value>,
}

impl RunContext {
    fn new(scenario: &str, canonical_text: &str, out: &OutputArgs) -> Result<Self, Error> {
        std::fs::create_dir_all(&out.out_dir)?;
        let hash = Sha256::digest(canonical_text.as_bytes());
        let config_hash = hash.iter().map(|b| format!("{b:02x}")).collect();
        Ok(RunContext {
            scenario: scenario.to_string(),
            config_hash,
            started: Instant::now(),
            out_dir: out.out_dir.clone(),
            outputs: Vec::new(),
            checks: serde_json::Map::new(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf, Error> {
        let path = self.out_dir.join(name);
        std::fs::write(&path, contents)?;
        self.outputs.push(path.display().to_string());
        Ok(path)
    }

    fn note(&mut self, key: &str, value: serde_json::Value) {
        self.checks.insert(key.to_string(), value);
    }

    fn finish(mut self) -> Result<(), Error> {
        let wall_ms = self.started.elapsed().as_millis() as u64;
        let summary = serde_json::json!({
            "scenario": self.scenario,
            "config_hash": self.config_hash,
            "checks": serde_json::Value::Object(std::mem::take(&mut self.checks)),
            "outputs": self.outputs,
            "wall_ms": wall_ms,
        });
        let text = export::to_json_string(&summary)?;
        let path = self.out_dir.join("summary.json");
        std::fs::write(&path, text)?;
        println!("summary: {}", path.display());
        Ok(())
    }
}

fn resolve_seed(flag: Option<u64>, config_seed: Option<u64>) -> Result<u64, Error> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Ok(env) = std::env::var("NILMAG_SEED") {
        return env
            .parse::<u64>()
            .map_err(|_| Error::InvalidInput(format!("bad NILMAG_SEED value {env:?}")));
    }
    Ok(config_seed.unwrap_or(defaults::SEED))
}

fn parse_float_list(what: &str, s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad {what} value {t:?}")))
        })
        .collect()
}

fn initial_state(
    scenario: &Scenario,
    state_flag: &Option<String>,
    seed: u64,
) -> Result<Vec<f64>, Error> {
    match state_flag {
        Some(text) => {
            let state = parse_float_list("state", text)?;
            if state.len() != scenario.system.dim() {
                return Err(Error::DimensionMismatch {
                    expected: scenario.system.dim(),
                    got: state.len(),
                });
            }
            Ok(state)
        }
        None => Ok(orbits::seeded_state(scenario.system.dim(), seed)),
    }
}

/// Standard observable set: the Hamiltonian, the moment coordinate when
/// the scenario is an emitted extension, and the Casimir pair on the
/// six-dimensional (U, V, X, Y, Z, W) scenario.
fn observables_for(scenario: &Scenario) -> Vec<Observable> {
    let mut obs = vec![Observable::hamiltonian(&scenario.system.metric)];
    if let Some(w) = &scenario.config.w_label {
        if let Some(idx) = scenario.system.algebra.label_index(w) {
            obs.push(Observable::coordinate(idx, format!("p_{w}")));
        }
    }
    let t4_labels = ["U", "V", "X", "Y", "Z", "W"];
    if scenario.system.algebra.labels() == t4_labels {
        obs.extend(orbits::casimir_observables());
    }
    obs
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Check { scenario, out } => {
            let s = load_scenario(&scenario)?;
            let mut ctx = RunContext::new(&s.name, &s.canonical_text(), &out)?;
            let report = nilmag::config::check_system(&s.system);
            let rows = [
                ("validate", if report.validate_pass { "pass".to_string() } else { "FAIL".to_string() }),
                ("jacobi_residual", report.max_jacobi_residual.clone()),
                (
                    "series_dims",
                    format!(
                        "[{}]",
                        report
                            .series_dims
                            .iter()
                            .map(|d| d.to_string())
                            .collect::<Vec<_>>()
                            .join(", ")
                    ),
                ),
                (
                    "nilpotency_step",
                    report
                        .nilpotency_step
                        .map(|s| s.to_string())
                        .unwrap_or_else(|| "not nilpotent".to_string()),
                ),
                ("derived_dim", report.derived_dim.to_string()),
                ("cocycle", if report.cocycle_pass { "pass".to_string() } else { "FAIL".to_string() }),
                ("vanishes_on_derived", report.vanishes_on_derived.to_string()),
                (
                    "rationality_k",
                    report
                        .rationality_k
                        .map(|k| k.to_string())
                        .unwrap_or_else(|| "- (no lattice)".to_string()),
                ),
            ];
            println!("scenario: {}", s.name);
            for (key, value) in &rows {
                println!("{key:>20}  {value}");
            }
            ctx.note("check", serde_json::to_value(&report).unwrap());
            ctx.finish()
        }

        Command::Extend { scenario, out } => {
            let s = load_scenario(&scenario)?;
            let mut ctx = RunContext::new(&s.name, &s.canonical_text(), &out)?;
            let ext = magext::extend(&s.system)?;
            let lattice = match &s.system.lattice {
                Some(_) => {
                    let k = magext::rationality_k(&s.system)?;
                    ctx.note("rationality_k", serde_json::json!(k));
                    Some(magext::extended_lattice(&s.system, k)?)
                }
                None => None,
            };
            let as_system = nilmag::magext::MagneticSystem::new(
                ext.algebra.clone(),
                ext.metric.clone(),
                nilmag::liealg::TwoForm::zero(ext.dim()),
                lattice,
                0.0,
            )?;
            let cfg = ScenarioConfig::from_system(&as_system, Some(ext.w_label().to_string()));
            let path = ctx.write(&format!("{}-extension.cfg", s.name), &cfg.emit())?;
            let series = ext.algebra.lower_central_series();
            ctx.note("extension_dim", serde_json::json!(ext.dim()));
            ctx.note("extension_step", serde_json::json!(series.step));
            ctx.note("extension_series_dims", serde_json::json!(series.dims));
            println!("extension written to {}", path.display());
            ctx.finish()
        }

        Command::Integrate { scenario, state, step, t_end, stride, c, seed, out } => {
            let s = load_scenario(&scenario)?;
            let mut ctx = RunContext::new(&s.name, &s.canonical_text(), &out)?;
            let params = s.config.integrate.clone().unwrap_or_default();
            let cfg = IntegratorConfig::new(
                step.unwrap_or(params.step),
                t_end.unwrap_or(params.t_end),
                stride.unwrap_or(params.sample_stride),
            )?;
            let seed = resolve_seed(seed, s.config.seed)?;
            let lam0 = initial_state(&s, &state, seed)?;
            let c = c.or(params.c);
            let spec = FieldSpec::from_system(&s.system, c)?;
            let obs = observables_for(&s);
            let trajectory = integrate(&spec, &lam0, &cfg, &obs)?;
            let csv = export::trajectory_csv(&trajectory);
            let path = ctx.write("trajectory.csv", &csv)?;
            let drift_path = ctx.write("drifts.json", &export::drift_json(&trajectory)?)?;
            ctx.note("seed", serde_json::json!(seed));
            ctx.note("steps", serde_json::json!(cfg.n_steps()));
            ctx.note(
                "drifts",
                serde_json::from_str(&export::drift_json(&trajectory)?).unwrap(),
            );
            println!("trajectory: {}", path.display());
            println!("drifts: {}", drift_path.display());
            ctx.finish()
        }

        Command::Lyapunov {
            scenario,
            k1,
            k2,
            state,
            step,
            t_end,
            c,
            seed,
            spectrum,
            no_convergence_check,
            out,
        } => {
            let s = load_scenario(&scenario)?;
            let mut ctx = RunContext::new(&s.name, &s.canonical_text(), &out)?;
            let params = s.config.chaos.clone().unwrap_or_default();
            let seed = resolve_seed(seed, s.config.seed)?;
            let lam0 = match (k1, k2) {
                (Some(a), Some(b)) => {
                    if s.system.dim() != 6 {
                        return Err(Error::InvalidInput(
                            "orbit sampling (--k1/--k2) needs a six-dimensional scenario".into(),
                        ));
                    }
                    orbits::orbit_sample(a, b, seed)?
                }
                _ => initial_state(&s, &state, seed)?,
            };
            let c = c.or(params.c);
            let spec = FieldSpec::from_system(&s.system, c)?;
            let lyap_cfg = LyapunovConfig {
                step: step.unwrap_or(params.step),
                renorm_interval: params.renorm_interval,
                transient_fraction: params.transient_fraction,
                seed,
                check_convergence: !no_convergence_check && params.check_convergence,
            };
            let t_end = t_end.unwrap_or(params.t_end);
            let report = if spectrum {
                chaos::lyapunov_spectrum(&spec, &lam0, t_end, &lyap_cfg)?
            } else {
                chaos::mle_benettin(&spec, &lam0, t_end, &lyap_cfg)?
            };
            if let (Some(a), Some(b)) = (k1, k2) {
                ctx.note("orbit", serde_json::to_value(orbits::OrbitSpec::new(a, b)).unwrap());
            }
            let json = export::lyapunov_json(&report)?;
            let path = ctx.write("lyapunov.json", &json)?;
            ctx.note("mle", serde_json::json!(report.mle));
            ctx.note("converged", serde_json::json!(report.converged));
            println!("mle = {} (converged: {})", report.mle, report.converged);
            println!("report: {}", path.display());
            ctx.finish()
        }

        Command::Sweep { scenario, k1, k2, c, energy, seeds, step, t_end, out } => {
            let s = load_scenario(&scenario)?;
            let mut ctx = RunContext::new(&s.name, &s.canonical_text(), &out)?;
            let params = s.config.sweep.clone().unwrap_or_default();
            let chaos_params = s.config.chaos.clone().unwrap_or_default();
            let k1 = match k1 {
                Some(t) => parse_float_list("k1", &t)?,
                None => params.k1.clone(),
            };
            let k2 = match k2 {
                Some(t) => parse_float_list("k2", &t)?,
                None => params.k2.clone(),
            };
            let c = match c {
                Some(t) => parse_float_list("c", &t)?,
                None => params.c.clone(),
            };
            let energy = match energy {
                Some(t) => parse_float_list("energy", &t)?,
                None => params.energy.clone(),
            };
            let grid = match (!k1.is_empty() && !k2.is_empty(), !c.is_empty() && !energy.is_empty()) {
                (true, false) => SweepGrid::Orbit { k1, k2 },
                (false, true) => SweepGrid::FieldEnergy { c, energy },
                _ => {
                    return Err(Error::InvalidInput(
                        "sweep needs either --k1 and --k2 or --c and --energy".into(),
                    ))
                }
            };
            let n_seeds = seeds.or(params.seeds).unwrap_or(defaults::SWEEP_SEEDS);
            let base_seed = resolve_seed(None, s.config.seed)?;
            let seed_list: Vec<u64> = (0..n_seeds).map(|i| base_seed + i).collect();
            let lyap_cfg = LyapunovConfig {
                step: step.or(params.step).unwrap_or(chaos_params.step),
                renorm_interval: chaos_params.renorm_interval,
                transient_fraction: chaos_params.transient_fraction,
                seed: base_seed,
                check_convergence: chaos_params.check_convergence,
            };
            let t_end = t_end.or(params.t_end).unwrap_or(chaos_params.t_end);
            let table = chaos::sweep(&s.system, &grid, t_end, &lyap_cfg, &seed_list)?;
            let csv_path = ctx.write("sweep.csv", &export::sweep_csv(&table))?;
            let json_path = ctx.write("sweep.json", &export::sweep_json(&table)?)?;
            ctx.note("rows", serde_json::json!(table.rows.len()));
            println!("sweep table: {}", csv_path.display());
            println!("sweep summary: {}", json_path.display());
            ctx.finish()
        }

        Command::Sft { matrix, matrix_file, max_period, out } => {
            let rows_text = match (matrix, matrix_file) {
                (Some(m), None) => m.split(',').map(|s| s.trim().to_string()).collect::<Vec<_>>(),
                (None, Some(path)) => std::fs::read_to_string(path)?
                    .lines()
                    .map(|l| l.trim().to_string())
                    .filter(|l| !l.is_empty())
                    .collect(),
                _ => {
                    return Err(Error::InvalidInput(
                        "sft needs exactly one of --matrix or --matrix-file".into(),
                    ))
                }
            };
            let rows: Vec<Vec<u8>> = rows_text
                .iter()
                .map(|row| {
                    row.chars()
                        .map(|ch| match ch {
                            '0' => Ok(0u8),
                            '1' => Ok(1u8),
                            other => Err(Error::Parse {
                                line: 0,
                                msg: format!("matrix entries must be 0/1 digits, got {other:?}"),
                            }),
                        })
                        .collect()
                })
                .collect::<Result<_, _>>()?;
            let a = TransitionMatrix::new(rows)?;
            let matrix_text: String = rows_text.join(",");
            let mut ctx = RunContext::new("sft", &matrix_text, &out)?;

            let entropy = symdyn::sft_entropy(&a)?;
            let transitivity = symdyn::is_transitive(&a);
            let counts: Vec<String> = (1..=max_period)
                .map(|p| symdyn::count_periodic(&a, p).map(|c| c.to_string()))
                .collect::<Result<_, _>>()?;
            let doc = serde_json::json!({
                "matrix": rows_text,
                "n": a.size(),
                "entropy": entropy,
                "entropy_defined": entropy.is_some(),
                "transitive": transitivity.transitive,
                "witness": transitivity.witness,
                "periodic_counts": counts,
            });
            let json = export::to_json_string(&doc)?;
            let path = ctx.write("sft.json", &json)?;
            match entropy {
                Some(h) => println!("entropy = {h}"),
                None => println!("entropy undefined (nilpotent matrix, empty subshift)"),
            }
            println!(
                "transitive = {} (witness m = {:?})",
                transitivity.transitive, transitivity.witness
            );
            println!("report: {}", path.display());
            ctx.note("entropy", serde_json::json!(entropy));
            ctx.note("transitive", serde_json::json!(transitivity.transitive));
            ctx.finish()
        }
    }
}
