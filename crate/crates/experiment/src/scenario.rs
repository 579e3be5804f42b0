//! Scenario orchestration: initial data, Picard solve, optional oracle
//! cross-check, diagnostics and artifact emission.
//!
//! Artifacts are staged in a hidden sibling directory and renamed into place
//! only once the manifest is written, so an interrupted run leaves nothing
//! behind in the output directory.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use gns_core::diagnostics::{
    bound_report, eta_j, fmt_num, x_norm, y_norm, zeta_j, BoundMode, BoundReport, DiagnosticsError,
};
use gns_core::mild::{
    etd_integrate_guarded, picard_solve, read_trajectory, write_trajectory, MildError,
    PicardReport, Trajectory,
};
use gns_core::operator::{navier_stokes_coeffs, QCoefficients, VelocityField};
use serde::{Deserialize, Serialize};

use crate::config::{CoeffSource, Format, ScenarioConfig};
use crate::initial_data::{make_initial_data, DataError, DataParams};
use crate::plot;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const RUN_FORMAT: &str = "gns-run/1";

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const NONCONVERGENCE: i32 = 3;
    pub const ORACLE: i32 = 4;
    pub const INCONCLUSIVE: i32 = 5;
}

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),
    #[error("initial data: {0}")]
    Data(#[from] DataError),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Mild(#[from] MildError),
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
    #[error(transparent)]
    Operator(#[from] gns_core::operator::OperatorError),
    #[error(transparent)]
    Spectral(#[from] gns_core::spectral::SpectralError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl ScenarioError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Config(_) | ScenarioError::Data(_) | ScenarioError::Invalid(_) => {
                exit::CONFIG
            }
            _ => exit::IO,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ScenarioError + '_ {
    move |source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    NonConvergence,
    OracleDisagreement,
    Inconclusive,
}

impl RunStatus {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunStatus::Ok => exit::OK,
            RunStatus::NonConvergence => exit::NONCONVERGENCE,
            RunStatus::OracleDisagreement => exit::ORACLE,
            RunStatus::Inconclusive => exit::INCONCLUSIVE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    /// `‖u_picard(T) - u_oracle(T)‖_{L²} / ‖u_oracle(T)‖_{L²}`.
    pub rel_l2: f64,
    pub tol: f64,
    pub dt: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub command: String,
    pub status: RunStatus,
    pub exit_code: i32,
    pub config_hash: String,
    /// Canonical config text; re-parses to the config that was run.
    pub config: String,
    pub versions: Versions,
    pub threads: usize,
    pub wall_clock_seconds: f64,
    pub files: Vec<String>,
    pub picard: Option<PicardSummary>,
    pub oracle: Option<OracleCheck>,
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Versions {
    pub gns_core: String,
    pub gns_experiment: String,
    pub parallel: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicardSummary {
    pub iterates: usize,
    pub converged: bool,
    pub residual: f64,
    pub per_iterate_delta: Vec<f64>,
}

impl From<&PicardReport> for PicardSummary {
    fn from(r: &PicardReport) -> Self {
        Self {
            iterates: r.iterates,
            converged: r.converged,
            residual: r.residual,
            per_iterate_delta: r.per_iterate_delta.clone(),
        }
    }
}

/// A finished run: where it lives and what it recorded.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub dir: PathBuf,
    pub manifest: Manifest,
}

impl RunArtifacts {
    pub fn exit_code(&self) -> i32 {
        self.manifest.exit_code
    }
}

/// Temporary directory renamed onto the target on commit and removed on drop otherwise.
struct Stage {
    tmp: PathBuf,
    target: PathBuf,
    committed: bool,
}

impl Stage {
    fn new(target: &Path) -> Result<Self, ScenarioError> {
        let name = target
            .file_name()
            .ok_or_else(|| ScenarioError::Invalid(format!("output dir {} has no name", target.display())))?
            .to_string_lossy()
            .into_owned();
        let parent = target.parent().map(Path::to_path_buf).unwrap_or_default();
        let parent = if parent.as_os_str().is_empty() { PathBuf::from(".") } else { parent };
        std::fs::create_dir_all(&parent).map_err(io_err(&parent))?;
        let tmp = parent.join(format!(".{name}.tmp-{}", std::process::id()));
        if tmp.exists() {
            std::fs::remove_dir_all(&tmp).map_err(io_err(&tmp))?;
        }
        std::fs::create_dir(&tmp).map_err(io_err(&tmp))?;
        Ok(Self {
            tmp,
            target: target.to_path_buf(),
            committed: false,
        })
    }

    fn path(&self, file: &str) -> PathBuf {
        self.tmp.join(file)
    }

    fn write(&self, file: &str, contents: &str) -> Result<(), ScenarioError> {
        let p = self.path(file);
        std::fs::write(&p, contents).map_err(io_err(&p))
    }

    /// Replaces an earlier run at the target; anything else in the way is an error.
    fn commit(mut self) -> Result<PathBuf, ScenarioError> {
        if self.target.exists() {
            if !self.target.join(MANIFEST_FILE).is_file() {
                return Err(ScenarioError::Invalid(format!(
                    "{} exists and is not a run directory",
                    self.target.display()
                )));
            }
            std::fs::remove_dir_all(&self.target).map_err(io_err(&self.target))?;
        }
        std::fs::rename(&self.tmp, &self.target).map_err(io_err(&self.target))?;
        self.committed = true;
        Ok(self.target.clone())
    }
}

impl Drop for Stage {
    fn drop(&mut self) {
        if !self.committed {
            let _ = std::fs::remove_dir_all(&self.tmp);
        }
    }
}

pub fn load_coeffs(cfg: &ScenarioConfig) -> Result<QCoefficients, ScenarioError> {
    Ok(match &cfg.physics.coeffs {
        CoeffSource::NavierStokes => navier_stokes_coeffs(),
        CoeffSource::Zero => QCoefficients::zeros(),
        CoeffSource::File(p) => QCoefficients::load(p)?,
    })
}

pub fn initial_data(cfg: &ScenarioConfig) -> Result<VelocityField, ScenarioError> {
    let grid = cfg.grid.build().map_err(ScenarioError::Invalid)?;
    let d = &cfg.data;
    let params = DataParams {
        amplitude: d.amplitude,
        exponent: d.spectral_exponent.unwrap_or(cfg.physics.gamma + 1.5),
        band_lo: d.band_lo,
        band_hi: d.band_hi,
        mode: d.mode,
        k_cut: d.k_cut,
    };
    Ok(make_initial_data(d.kind, grid, &params, d.seed)?)
}

fn new_manifest(cfg: &ScenarioConfig, command: &str) -> Manifest {
    Manifest {
        format: RUN_FORMAT.into(),
        command: command.into(),
        status: RunStatus::Ok,
        exit_code: exit::OK,
        config_hash: cfg.hash(),
        config: cfg.to_text(),
        versions: Versions {
            gns_core: gns_core::VERSION.into(),
            gns_experiment: env!("CARGO_PKG_VERSION").into(),
            parallel: gns_core::par::is_parallel(),
        },
        threads: current_threads(),
        wall_clock_seconds: 0.0,
        files: Vec::new(),
        picard: None,
        oracle: None,
        errors: Vec::new(),
    }
}

fn current_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

fn finish(
    stage: Stage,
    mut manifest: Manifest,
    start: Instant,
) -> Result<RunArtifacts, ScenarioError> {
    manifest.exit_code = manifest.status.exit_code();
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    manifest.files.push(MANIFEST_FILE.into());
    stage.write(MANIFEST_FILE, &serde_json::to_string_pretty(&manifest)?)?;
    let dir = stage.commit()?;
    Ok(RunArtifacts { dir, manifest })
}

/// Solves the scenario and writes its artifacts to `cfg.output.dir`.
///
/// Solver non-convergence, oracle disagreement and inconclusive radius fits
/// still produce a committed run directory; they are reported through
/// [`Manifest::status`] and the matching exit code.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunArtifacts, ScenarioError> {
    let start = Instant::now();
    let coeffs = load_coeffs(cfg)?;
    let u0 = initial_data(cfg)?;
    let stage = Stage::new(&cfg.output.dir)?;
    let mut m = new_manifest(cfg, "solve");
    stage.write("config.txt", &m.config)?;
    m.files.push("config.txt".into());

    let traj = match picard_solve(&u0, &coeffs, &cfg.solver_config()) {
        Ok((traj, report)) => {
            stage.write("picard_report.json", &serde_json::to_string_pretty(&report)?)?;
            m.picard = Some(PicardSummary::from(&report));
            traj
        }
        Err(MildError::NonConvergence(report)) => {
            stage.write("picard_report.json", &serde_json::to_string_pretty(&report)?)?;
            m.files.push("picard_report.json".into());
            m.picard = Some(PicardSummary::from(report.as_ref()));
            m.status = RunStatus::NonConvergence;
            m.errors.push(format!(
                "Picard iteration did not converge after {} iterates",
                report.iterates
            ));
            return finish(stage, m, start);
        }
        Err(e) => return Err(e.into()),
    };
    m.files.push("picard_report.json".into());

    if cfg.output.checkpoint {
        let sub = strided(&traj, cfg.output.checkpoint_stride)?;
        write_trajectory(&stage.tmp, "trajectory", &sub, &m.config_hash)?;
        m.files.push("trajectory.bin".into());
        m.files.push("trajectory.json".into());
    }

    if cfg.solver.oracle {
        let oracle = etd_integrate_guarded(
            &u0,
            &coeffs,
            cfg.solver.t_final,
            cfg.solver.dt,
            cfg.solver.blowup_guard,
        )?;
        let last = traj.states().last().expect("trajectory is nonempty");
        let reference = oracle.states().last().expect("trajectory is nonempty");
        let denom = reference.l2_norm();
        let diff = last.sub(reference).l2_norm();
        let rel_l2 = if denom > 0.0 { diff / denom } else { diff };
        let check = OracleCheck {
            rel_l2,
            tol: cfg.solver.oracle_tol,
            dt: cfg.solver.dt,
            passed: rel_l2 <= cfg.solver.oracle_tol,
        };
        stage.write("oracle.json", &serde_json::to_string_pretty(&check)?)?;
        m.files.push("oracle.json".into());
        if !check.passed {
            m.status = RunStatus::OracleDisagreement;
            m.errors.push(format!(
                "oracle disagreement {rel_l2:e} exceeds tolerance {:e}",
                check.tol
            ));
        }
        m.oracle = Some(check);
    }

    diagnose_into(&stage, cfg, &traj, &mut m)?;
    finish(stage, m, start)
}

/// Runs the diagnostics on a checkpointed trajectory and writes a fresh run
/// directory for them.
pub fn run_diagnose(manifest_path: &Path, cfg: &ScenarioConfig) -> Result<RunArtifacts, ScenarioError> {
    let start = Instant::now();
    let (traj, _) = read_trajectory(manifest_path)?;
    let grid = cfg.grid.build().map_err(ScenarioError::Invalid)?;
    if *traj.grid() != grid {
        return Err(ScenarioError::Invalid(format!(
            "trajectory grid ({}³, L = {}) differs from the config grid ({}³, L = {})",
            traj.grid().n(),
            traj.grid().period(),
            grid.n(),
            grid.period()
        )));
    }
    let stage = Stage::new(&cfg.output.dir)?;
    let mut m = new_manifest(cfg, "diagnose");
    stage.write("config.txt", &m.config)?;
    m.files.push("config.txt".into());
    diagnose_into(&stage, cfg, &traj, &mut m)?;
    finish(stage, m, start)
}

fn strided(traj: &Trajectory, stride: usize) -> Result<Trajectory, ScenarioError> {
    let n = traj.len();
    let mut idx: Vec<usize> = (0..n).step_by(stride.max(1)).collect();
    if idx.last() != Some(&(n - 1)) {
        idx.push(n - 1);
    }
    let times = idx.iter().map(|&i| traj.times()[i]).collect();
    let states = idx.iter().map(|&i| traj.states()[i].clone()).collect();
    Ok(Trajectory::new(times, states)?)
}

fn norms_csv(traj: &Trajectory, gamma: f64) -> Result<String, ScenarioError> {
    let mut s = String::from("t,l2,h_gamma,divergence_defect\n");
    for (t, u) in traj.times().iter().zip(traj.states()) {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            fmt_num(*t),
            fmt_num(u.l2_norm()),
            fmt_num(u.sobolev_norm(gamma, false)?),
            fmt_num(u.divergence_defect()),
        );
    }
    Ok(s)
}

fn tails_csv(label: &str, tails: &[(f64, f64)]) -> String {
    let mut s = format!("j,{label}\n");
    for (j, v) in tails {
        let _ = writeln!(s, "{},{}", fmt_num(*j), fmt_num(*v));
    }
    s
}

fn num_json(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::json!(x)
    } else {
        serde_json::json!(fmt_num(x))
    }
}

fn diagnose_into(
    stage: &Stage,
    cfg: &ScenarioConfig,
    traj: &Trajectory,
    m: &mut Manifest,
) -> Result<(), ScenarioError> {
    let gamma = cfg.physics.gamma;
    let csv = cfg.output.formats.contains(&Format::Csv);
    let json = cfg.output.formats.contains(&Format::Json);
    let horizon = traj.horizon();

    if csv {
        stage.write("norms.csv", &norms_csv(traj, gamma)?)?;
        m.files.push("norms.csv".into());
    }
    if json {
        let mut params = cfg.norm_params();
        params.t_final = horizon;
        let v = serde_json::json!({
            "params": params,
            "x_norm": x_norm(traj, &params).map(num_json).unwrap_or(serde_json::Value::Null),
            "y_norm": y_norm(traj, &params).map(num_json).unwrap_or(serde_json::Value::Null),
        });
        stage.write("working_norms.json", &serde_json::to_string_pretty(&v)?)?;
        m.files.push("working_norms.json".into());
    }

    let (label, tails) = tail_table(cfg, traj)?;
    if csv {
        stage.write("tails.csv", &tails_csv(label, &tails))?;
        m.files.push("tails.csv".into());
    }

    let grid = *traj.grid();
    let report = match bound_report(
        traj,
        gamma,
        cfg.diagnostics.mode,
        cfg.fit_window(&grid),
        &cfg.diagnostics.sample_times,
        &cfg.radius_options(),
    ) {
        Ok(r) => r,
        Err(DiagnosticsError::Inconclusive(fit)) => {
            stage.write("inconclusive.json", &serde_json::to_string_pretty(&fit)?)?;
            m.files.push("inconclusive.json".into());
            m.status = RunStatus::Inconclusive;
            m.errors.push(format!("inconclusive radius fit: {}", fit.reason));
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    write_report(stage, cfg, &report, m)?;
    let files = plot::emit_plot_data(&stage.tmp, &report, label, horizon, &tails)
        .map_err(io_err(&stage.tmp))?;
    m.files.extend(files);
    Ok(())
}

/// `η_J` (subcritical) or `ζ_J` (critical) at the horizon for every configured `J`.
pub fn tail_table(
    cfg: &ScenarioConfig,
    traj: &Trajectory,
) -> Result<(&'static str, Vec<(f64, f64)>), ScenarioError> {
    let gamma = cfg.physics.gamma;
    let t = traj.horizon();
    let (label, f): (&str, fn(&Trajectory, f64, f64, f64) -> Result<f64, DiagnosticsError>) =
        match cfg.diagnostics.mode {
            BoundMode::Subcritical => ("eta", eta_j),
            BoundMode::Critical => ("zeta", zeta_j),
        };
    let tails = cfg
        .diagnostics
        .eta_j
        .iter()
        .map(|&j| Ok((j, f(traj, j, gamma, t)?)))
        .collect::<Result<Vec<_>, ScenarioError>>()?;
    Ok((label, tails))
}

fn write_report(
    stage: &Stage,
    cfg: &ScenarioConfig,
    report: &BoundReport,
    m: &mut Manifest,
) -> Result<(), ScenarioError> {
    if cfg.output.formats.contains(&Format::Csv) {
        stage.write("bound_report.csv", &report.to_csv())?;
        m.files.push("bound_report.csv".into());
    }
    if cfg.output.formats.contains(&Format::Json) {
        stage.write("bound_report.json", &report.to_json())?;
        m.files.push("bound_report.json".into());
    }
    Ok(())
}

pub fn read_manifest(dir: &Path) -> Result<Manifest, ScenarioError> {
    let p = dir.join(MANIFEST_FILE);
    let text = std::fs::read_to_string(&p).map_err(io_err(&p))?;
    Ok(serde_json::from_str(&text)?)
}

fn parse_tails_csv(text: &str) -> Option<(String, Vec<(f64, f64)>)> {
    let mut lines = text.lines();
    let label = lines.next()?.split_once(',')?.1.to_string();
    let rows = lines
        .map(|l| {
            let (a, b) = l.split_once(',')?;
            Some((a.parse().ok()?, b.parse().ok()?))
        })
        .collect::<Option<Vec<_>>>()?;
    Some((label, rows))
}

/// Regenerates the plot series of an existing run directory from its JSON
/// bound report and returns a printable summary.
pub fn report_dir(dir: &Path) -> Result<String, ScenarioError> {
    let manifest = read_manifest(dir)?;
    let p = dir.join("bound_report.json");
    let text = std::fs::read_to_string(&p).map_err(io_err(&p))?;
    let report = BoundReport::from_json(&text)?;
    let tails_path = dir.join("tails.csv");
    let (label, tails) = match std::fs::read_to_string(&tails_path) {
        Ok(t) => parse_tails_csv(&t).ok_or_else(|| {
            ScenarioError::Invalid(format!("{}: malformed tails table", tails_path.display()))
        })?,
        Err(_) => ("eta".to_string(), Vec::new()),
    };
    let horizon = crate::config::parse_str(&manifest.config, dir)
        .map(|c| c.solver.t_final)
        .unwrap_or(f64::NAN);
    plot::emit_plot_data(dir, &report, &label, horizon, &tails).map_err(io_err(dir))?;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "run {} ({}, status {:?}, config {})",
        dir.display(),
        manifest.command,
        manifest.status,
        &manifest.config_hash[..12.min(manifest.config_hash.len())]
    );
    let _ = writeln!(
        s,
        "{:>10} {:>12} {:>12} {:>12} {:>10} {:>6}",
        "t", "measured", "predictor", "ratio", "r2", "capped"
    );
    for i in 0..report.len() {
        let _ = writeln!(
            s,
            "{:>10} {:>12} {:>12} {:>12} {:>10} {:>6}",
            fmt_num(report.times[i]),
            short(report.measured_radius[i]),
            short(report.predictor[i]),
            short(report.ratio[i]),
            short(report.r2[i]),
            report.capped[i]
        );
    }
    for e in &manifest.errors {
        let _ = writeln!(s, "error: {e}");
    }
    Ok(s)
}

fn short(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.4e}")
    } else {
        fmt_num(x)
    }
}
