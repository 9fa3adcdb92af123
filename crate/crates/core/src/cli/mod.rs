//! Job-file driven front end: parse, dispatch, report.

mod job;

pub use job::*;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::boundary::{check_symmetry_condition, DEFAULT_SYMMETRY_TOL};
use crate::clifford::verify_clifford;
use crate::halfline::{
    boundary_residual, decaying_solution, model_discrete_spectrum, model_essential_spectrum, nullity, ode_residual,
    ModelProblem,
};
use crate::lopatinsky::{certify_ls, grid_rows, CertifyOptions, GridRow, LsMode};
use crate::oracle::{
    compare_with, default_window, CompareOptions, HalflineGrid, Scheme, DEFAULT_COMPARE_TOL, DEFAULT_CONVERGENCE_TOL,
    DEFAULT_NODES, DEFAULT_Z,
};
use crate::spectrum::{
    default_schedule, essential_spectrum_conic_mit, essential_spectrum_exterior, estimate_asymptotics, spectral_gap,
    AsymptoticEstimate, AsymptoticsOptions, DEFAULT_SO1_THRESHOLD,
};
use crate::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Largest ODE or boundary residual accepted for a closed-form eigenfunction.
pub const SOLUTION_RESIDUAL_TOL: f64 = 1e-10;
pub const DEFAULT_PROFILE: ZSamples = ZSamples { z_max: 10.0, n: 21 };

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid job file: {0}")]
    Json(serde_json::Error),
    #[error("invalid job: {0}")]
    Schema(String),
    #[error(transparent)]
    Library(#[from] Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_INPUT
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub command: Command,
    pub input_sha256: String,
    pub seed: Option<u64>,
    /// Every setting actually used, defaults filled in.
    pub defaults: Value,
    pub verdicts: BTreeMap<String, bool>,
    pub passed: bool,
    pub result: Value,
    pub warnings: Vec<String>,
    /// Human-readable summary, not part of the JSON report.
    #[serde(skip)]
    pub table: Option<String>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    /// Directory that relative paths in the job resolve against.
    pub base_dir: PathBuf,
    pub dump_grid: Option<PathBuf>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Parse and run a job given as JSON text.
pub fn run_text(text: &str, opts: &RunOptions) -> Result<Report, CliError> {
    let job = JobSpec::parse(text)?;
    run(&job, &sha256_hex(text.as_bytes()), opts)
}

pub fn run(job: &JobSpec, input_sha256: &str, opts: &RunOptions) -> Result<Report, CliError> {
    if opts.dump_grid.is_some() && job.command != Command::CheckLs {
        return Err(CliError::Schema("--dump-grid is only valid with `check-ls`".into()));
    }
    let out = match job.command {
        Command::VerifyClifford => run_clifford(),
        Command::CheckLs => run_check_ls(job, opts)?,
        Command::Spectrum => run_spectrum(job)?,
        Command::Asymptotics => run_asymptotics(job)?,
        Command::ModelEigen => run_model_eigen(job)?,
        Command::OracleCompare => run_oracle(job)?,
    };
    let passed = out.verdicts.values().all(|v| *v);
    Ok(Report {
        version: env!("CARGO_PKG_VERSION"),
        command: job.command,
        input_sha256: input_sha256.to_string(),
        seed: opts.seed,
        defaults: out.defaults,
        verdicts: out.verdicts,
        passed,
        result: out.result,
        warnings: out.warnings,
        table: out.table,
    })
}

#[derive(Default)]
struct Outcome {
    defaults: Value,
    verdicts: BTreeMap<String, bool>,
    result: Value,
    warnings: Vec<String>,
    table: Option<String>,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("result serializes")
}

fn run_clifford() -> Outcome {
    let r = verify_clifford();
    let mut verdicts = BTreeMap::new();
    verdicts.insert("clifford".to_string(), r.passed());
    Outcome {
        defaults: json!({}),
        verdicts,
        result: to_value(&r),
        ..Default::default()
    }
}

fn run_check_ls(job: &JobSpec, opts: &RunOptions) -> Result<Outcome, CliError> {
    let cmd = job.command;
    let sampler = require(&job.domain, "domain", cmd)?.sampler(&opts.base_dir)?;
    let bc = require(&job.boundary, "boundary", cmd)?.condition()?;
    let knobs = job.ls.unwrap_or_default();
    let mode = knobs.mode.unwrap_or(LsMode::Parameter);
    let mut copts = CertifyOptions::new(mode);
    if let Some(n) = knobs.n_sphere {
        copts = copts.with_nodes(n);
    }
    if let Some(e) = knobs.epsilon {
        copts = copts.with_epsilon(e);
    }
    if knobs.refine == Some(false) {
        copts = copts.without_refinement();
    }
    let sym = job.symmetry.unwrap_or_default();
    let sym_enabled = sym.enabled.unwrap_or(true);
    let sym_tol = sym.tol.unwrap_or(DEFAULT_SYMMETRY_TOL);

    let cert = certify_ls(&bc, &sampler, &copts)?;
    let mut verdicts = BTreeMap::new();
    let mut warnings = Vec::new();
    verdicts.insert("lopatinsky_shapiro".to_string(), cert.certified());
    let symmetry = if sym_enabled {
        match check_symmetry_condition(&bc, &sampler, sym_tol) {
            Ok(r) => {
                verdicts.insert("symmetry".to_string(), r.passed);
                Some(r)
            }
            Err(e @ Error::NonNormalizable { .. }) => {
                warnings.push(format!("symmetry condition not evaluated: {e}"));
                None
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    if let Some(path) = &opts.dump_grid {
        dump_grid(path, &grid_rows(&bc, &sampler, mode, copts.n_nodes))?;
    }
    Ok(Outcome {
        defaults: json!({
            "ls": {
                "mode": mode,
                "n_sphere": copts.n_nodes,
                "epsilon": copts.epsilon,
                "refine": copts.refine,
            },
            "symmetry": { "enabled": sym_enabled, "tol": sym_tol },
        }),
        verdicts,
        result: json!({
            "boundary_family": bc.family(),
            "sampler": { "kind": sampler.kind(), "n_points": sampler.len() },
            "certificate": cert,
            "symmetry": symmetry,
        }),
        warnings,
        table: None,
    })
}

/// Write the LS grid as CSV with header
/// `point_id,xi1,xi2,mu,re_det,im_det,abs_det`.
pub fn dump_grid(path: &Path, rows: &[GridRow]) -> Result<(), CliError> {
    let err = |e: csv::Error| CliError::Csv {
        path: path.to_path_buf(),
        source: e,
    };
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    for r in rows {
        w.serialize(r).map_err(err)?;
    }
    w.flush().map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

struct ResolvedAsymptotics {
    schedule: Vec<f64>,
    n_shells: usize,
    n_directions: usize,
    radii_per_shell: usize,
    so1_threshold: f64,
}

impl ResolvedAsymptotics {
    fn from_knobs(k: Option<&AsymptoticsKnobs>) -> Self {
        let k = k.cloned().unwrap_or_default();
        let schedule = k.schedule.unwrap_or_else(default_schedule);
        let base = AsymptoticsOptions::new(&schedule);
        Self {
            n_shells: k.n_shells.unwrap_or(base.n_shells),
            n_directions: k.n_directions.unwrap_or(base.n_directions),
            radii_per_shell: k.radii_per_shell.unwrap_or(base.radii_per_shell),
            so1_threshold: k.so1_threshold.unwrap_or(DEFAULT_SO1_THRESHOLD),
            schedule,
        }
    }

    fn estimate(&self, potential: &PotentialSpec) -> Result<AsymptoticEstimate<f64>, CliError> {
        let field = potential.field()?;
        let mut o = AsymptoticsOptions::new(&self.schedule);
        o.n_shells = self.n_shells;
        o.n_directions = self.n_directions;
        o.radii_per_shell = self.radii_per_shell;
        Ok(estimate_asymptotics(&field, &o)?)
    }

    fn echo(&self) -> Value {
        json!({
            "schedule": self.schedule,
            "n_shells": self.n_shells,
            "n_directions": self.n_directions,
            "radii_per_shell": self.radii_per_shell,
            "so1_threshold": self.so1_threshold,
        })
    }
}

fn run_asymptotics(job: &JobSpec) -> Result<Outcome, CliError> {
    let potential = require(&job.potential, "potential", job.command)?;
    let a = ResolvedAsymptotics::from_knobs(job.asymptotics.as_ref());
    let est = a.estimate(potential)?;
    let mut verdicts = BTreeMap::new();
    let so1 = est.so1_residual <= a.so1_threshold
        && est.magnetic_so1_residual.is_none_or(|g| g <= a.so1_threshold);
    verdicts.insert("slowly_oscillating".to_string(), so1);
    Ok(Outcome {
        defaults: json!({ "asymptotics": a.echo() }),
        verdicts,
        warnings: est.warnings(a.so1_threshold),
        result: to_value(&est),
        table: None,
    })
}

fn run_spectrum(job: &JobSpec) -> Result<Outcome, CliError> {
    let knobs = require(&job.spectrum, "spectrum", job.command)?;
    let mut warnings = Vec::new();
    let mut defaults = serde_json::Map::new();
    let (est, estimated) = match (knobs.m_sup, knobs.m_inf, &job.potential) {
        (Some(sup), Some(inf), None) => (AsymptoticEstimate::from_bounds(sup, inf)?, false),
        (None, None, Some(p)) => {
            let a = ResolvedAsymptotics::from_knobs(job.asymptotics.as_ref());
            let est = a.estimate(p)?;
            warnings.extend(est.warnings(a.so1_threshold));
            defaults.insert("asymptotics".into(), a.echo());
            (est, true)
        }
        _ => {
            return Err(CliError::Schema(
                "`spectrum` needs either both `spectrum.m_sup` and `spectrum.m_inf` or a `potential` section".into(),
            ))
        }
    };
    let m = knobs.m;
    if !m.is_finite() {
        return Err(Error::NonFinite("spectrum.m").into());
    }
    let set = match knobs.geometry {
        SpectrumGeometry::Exterior => essential_spectrum_exterior(&est, m),
        SpectrumGeometry::ConicMit => essential_spectrum_conic_mit(&est, m),
    };
    let gap = if set.is_real_line() { None } else { spectral_gap(&est, m) };
    defaults.insert("geometry".into(), to_value(&knobs.geometry));
    Ok(Outcome {
        defaults: Value::Object(defaults),
        verdicts: BTreeMap::new(),
        result: json!({
            "m": m,
            "m_sup": est.m_sup,
            "m_inf": est.m_inf,
            "estimated": estimated,
            "intervals": set.intervals(),
            "eigenvalues": set.eigenvalues(),
            "gap": gap,
        }),
        warnings,
        table: None,
    })
}

fn model_problem(job: &JobSpec) -> Result<(&ModelSpec, ModelProblem<f64>), CliError> {
    let spec = require(&job.model, "model", job.command)?;
    if !(spec.xi.iter().all(|x| x.is_finite()) && spec.m.is_finite()) {
        return Err(Error::NonFinite("model").into());
    }
    Ok((spec, ModelProblem::new(spec.xi, spec.m)))
}

fn run_model_eigen(job: &JobSpec) -> Result<Outcome, CliError> {
    let (spec, p) = model_problem(job)?;
    let zs = spec.z_samples.unwrap_or(DEFAULT_PROFILE);
    if !(zs.z_max.is_finite() && zs.z_max > 0.0 && zs.n >= 2) {
        return Err(CliError::Schema("model.z_samples needs z_max > 0 and n ≥ 2".into()));
    }
    let z: Vec<f64> = (0..zs.n)
        .map(|i| zs.z_max * i as f64 / (zs.n - 1) as f64)
        .collect();
    let mut eigen = Vec::new();
    let mut worst: f64 = 0.0;
    for lambda in model_discrete_spectrum(&p) {
        let sol = decaying_solution(&p, lambda, &z)?;
        let ode = ode_residual(&p, &sol);
        let bdry = boundary_residual(&sol);
        worst = worst.max(ode).max(bdry);
        eigen.push(json!({
            "lambda": lambda,
            "rho": sol.rho,
            "nullity": nullity(&p, lambda)?,
            "ode_residual": ode,
            "boundary_residual": bdry,
            "solution": sol,
        }));
    }
    let mut verdicts = BTreeMap::new();
    verdicts.insert("eigenfunction_residuals".to_string(), worst <= SOLUTION_RESIDUAL_TOL);
    Ok(Outcome {
        defaults: json!({ "model": { "z_samples": zs, "residual_tol": SOLUTION_RESIDUAL_TOL } }),
        verdicts,
        result: json!({
            "problem": p,
            "gap_edge": p.gap_edge(),
            "essential_spectrum": model_essential_spectrum(&p),
            "eigenvalues": eigen,
        }),
        warnings: Vec::new(),
        table: None,
    })
}

fn run_oracle(job: &JobSpec) -> Result<Outcome, CliError> {
    let (_, p) = model_problem(job)?;
    let k = job.oracle.unwrap_or_default();
    let z_max = k.z_max.unwrap_or(DEFAULT_Z);
    let n = k.n.unwrap_or(DEFAULT_NODES);
    let tol = k.tol.unwrap_or(DEFAULT_COMPARE_TOL);
    let convergence_tol = k.convergence_tol.unwrap_or(DEFAULT_CONVERGENCE_TOL);
    let window = k.window.map_or_else(|| default_window(&p), |[lo, hi]| (lo, hi));
    let grid = HalflineGrid::new(z_max, n, Scheme::StaggeredFd)?;
    let r = compare_with(
        &p,
        &grid,
        tol,
        &CompareOptions {
            window: Some(window),
            convergence_tol,
        },
    )?;
    let mut warnings = Vec::new();
    if r.fd.convergence_suspect {
        warnings.push(format!(
            "finite-difference eigenvalues moved by more than {:e} under grid doubling (N = {})",
            10.0 * convergence_tol,
            n
        ));
    }
    let mut verdicts = BTreeMap::new();
    verdicts.insert("oracle_agreement".to_string(), r.passed);
    Ok(Outcome {
        defaults: json!({
            "oracle": {
                "z_max": z_max,
                "n": n,
                "tol": tol,
                "convergence_tol": convergence_tol,
                "window": [window.0, window.1],
            }
        }),
        verdicts,
        table: Some(r.table()),
        result: to_value(&r),
        warnings,
    })
}
