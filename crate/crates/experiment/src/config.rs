//! Flat `key.path = value` scenario configuration.
//!
//! The grammar and every key are documented in `docs/config.md`. Parsing
//! collects every violation before failing, and unknown keys are errors.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use gns_core::diagnostics::{BoundMode, FitModel, RadiusOptions};
use gns_core::mild::{SolverConfig, TimeLattice};
use gns_core::spectral::{Grid, DEFAULT_DEALIAS_FRACTION};
use sha2::{Digest, Sha256};

use crate::initial_data::DataKind;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Invalid(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridBlock {
    pub n: usize,
    pub period: f64,
    pub dealias: f64,
}

impl GridBlock {
    pub fn build(&self) -> Result<Grid, String> {
        Grid::new(self.n, self.period)
            .and_then(|g| g.with_dealias_fraction(self.dealias))
            .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverBlock {
    pub t_final: f64,
    pub n_times: usize,
    pub quad_order: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub dt: f64,
    pub lattice: TimeLattice,
    pub blowup_guard: f64,
    /// Cross-check the Picard trajectory against the integrating-factor RK4 run.
    pub oracle: bool,
    pub oracle_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoeffSource {
    NavierStokes,
    Zero,
    /// JSON file with the 729 coefficients, stored as given after resolving
    /// against the config file's directory.
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicsBlock {
    pub coeffs: CoeffSource,
    pub gamma: f64,
    pub delta: f64,
    pub eta0: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataBlock {
    pub kind: DataKind,
    pub amplitude: f64,
    pub seed: u64,
    /// Decay exponent `s` in `|k|^{-s}`; `None` means `γ + 3/2`.
    pub spectral_exponent: Option<f64>,
    pub band_lo: f64,
    /// `None` means the largest wavenumber on the grid axis.
    pub band_hi: Option<f64>,
    pub mode: [i64; 3],
    pub k_cut: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsBlock {
    pub sample_times: Vec<f64>,
    pub fit_lo: Option<f64>,
    pub fit_hi: Option<f64>,
    pub n_shells: Option<usize>,
    pub mode: BoundMode,
    pub fit_model: FitModel,
    pub eta_j: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn as_str(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputBlock {
    pub dir: PathBuf,
    pub formats: Vec<Format>,
    pub checkpoint: bool,
    pub checkpoint_stride: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub grid: GridBlock,
    pub solver: SolverBlock,
    pub physics: PhysicsBlock,
    pub data: DataBlock,
    pub diagnostics: DiagnosticsBlock,
    pub output: OutputBlock,
}

pub const DEFAULT_SAMPLE_TIMES: [f64; 5] = [1e-4, 3e-4, 1e-3, 3e-3, 1e-2];
pub const DEFAULT_ETA_J: [f64; 5] = [4.0, 8.0, 16.0, 32.0, 64.0];

pub const KEYS: &[&str] = &[
    "grid.n",
    "grid.L",
    "grid.dealias",
    "solver.T",
    "solver.n_times",
    "solver.quad_order",
    "solver.tol",
    "solver.max_iter",
    "solver.dt",
    "solver.lattice",
    "solver.anchors",
    "solver.segment_steps",
    "solver.blowup_guard",
    "solver.oracle",
    "solver.oracle_tol",
    "physics.coeffs",
    "physics.gamma",
    "physics.delta",
    "physics.eta0",
    "physics.lambda",
    "data.kind",
    "data.amplitude",
    "data.seed",
    "data.spectral_exponent",
    "data.band_lo",
    "data.band_hi",
    "data.mode",
    "data.k_cut",
    "diagnostics.sample_times",
    "diagnostics.fit_lo",
    "diagnostics.fit_hi",
    "diagnostics.n_shells",
    "diagnostics.mode",
    "diagnostics.fit_model",
    "diagnostics.eta_j",
    "output.dir",
    "output.formats",
    "output.checkpoint",
    "output.checkpoint_stride",
];

pub fn parse_config(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_str(&text, base)
}

/// Parses config text; relative coefficient paths resolve against `base`.
pub fn parse_str(text: &str, base: &Path) -> Result<ScenarioConfig, ConfigError> {
    let mut errs = Vec::new();
    let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            errs.push(format!("line {}: expected `key = value`, got {line:?}", i + 1));
            continue;
        };
        let (k, v) = (k.trim().to_string(), v.trim().to_string());
        if !KEYS.contains(&k.as_str()) {
            errs.push(format!("line {}: unknown key {k:?}", i + 1));
            continue;
        }
        if let Some((prev, _)) = entries.insert(k.clone(), (i + 1, v)) {
            errs.push(format!("line {}: {k} already set on line {prev}", i + 1));
        }
    }
    let mut r = Reader {
        entries: &entries,
        errs: &mut errs,
    };

    let grid = GridBlock {
        n: r.req("grid.n", parse_usize).unwrap_or(0),
        period: r.get("grid.L", parse_f64).unwrap_or(2.0 * PI),
        dealias: r.get("grid.dealias", parse_f64).unwrap_or(DEFAULT_DEALIAS_FRACTION),
    };

    let d = SolverConfig::default();
    let lattice = match r.get("solver.lattice", parse_str_value).as_deref() {
        None | Some("uniform") => TimeLattice::Uniform,
        Some("graded") => TimeLattice::Graded {
            anchors: r.get("solver.anchors", parse_f64_list).unwrap_or_default(),
            segment_steps: r.get("solver.segment_steps", parse_usize).unwrap_or(10),
        },
        Some(other) => {
            r.errs.push(format!("solver.lattice: expected uniform|graded, got {other:?}"));
            TimeLattice::Uniform
        }
    };
    if matches!(lattice, TimeLattice::Uniform) {
        for k in ["solver.anchors", "solver.segment_steps"] {
            if r.entries.contains_key(k) {
                r.errs.push(format!("{k}: only valid with solver.lattice = graded"));
            }
        }
    }
    let solver = SolverBlock {
        t_final: r.get("solver.T", parse_f64).unwrap_or(d.t_final),
        n_times: r.get("solver.n_times", parse_usize).unwrap_or(d.n_times),
        quad_order: r.get("solver.quad_order", parse_usize).unwrap_or(d.quad_order),
        tol: r.get("solver.tol", parse_f64).unwrap_or(d.tol),
        max_iter: r.get("solver.max_iter", parse_usize).unwrap_or(d.max_iter),
        dt: r.get("solver.dt", parse_f64).unwrap_or(d.dt),
        lattice,
        blowup_guard: r.get("solver.blowup_guard", parse_f64).unwrap_or(d.blowup_guard),
        oracle: r.get("solver.oracle", parse_bool).unwrap_or(false),
        oracle_tol: r.get("solver.oracle_tol", parse_f64).unwrap_or(1e-6),
    };

    let coeffs = match r.get("physics.coeffs", parse_str_value).as_deref() {
        None | Some("navier_stokes") => CoeffSource::NavierStokes,
        Some("zero") => CoeffSource::Zero,
        Some(p) => {
            let path = base.join(p);
            if !path.is_file() {
                r.errs.push(format!("physics.coeffs: file {} does not exist", path.display()));
            }
            CoeffSource::File(path)
        }
    };
    let physics = PhysicsBlock {
        coeffs,
        gamma: r.get("physics.gamma", parse_f64).unwrap_or(1.0),
        delta: r.get("physics.delta", parse_f64).unwrap_or(0.1),
        eta0: r.get("physics.eta0", parse_f64).unwrap_or(gns_core::diagnostics::DEFAULT_ETA0),
        lambda: r.get("physics.lambda", parse_f64).unwrap_or(1.0),
    };

    let data = DataBlock {
        kind: r
            .req("data.kind", |s| parse_str_value(s)?.parse::<DataKind>())
            .unwrap_or(DataKind::TaylorGreen),
        amplitude: r.get("data.amplitude", parse_f64).unwrap_or(1.0),
        seed: r.get("data.seed", parse_u64).unwrap_or(0),
        spectral_exponent: r.get("data.spectral_exponent", parse_f64),
        band_lo: r.get("data.band_lo", parse_f64).unwrap_or(1.0),
        band_hi: r.get("data.band_hi", parse_f64),
        mode: r.get("data.mode", parse_mode).unwrap_or([1, 0, 0]),
        k_cut: r.get("data.k_cut", parse_f64).unwrap_or(2.0),
    };

    let diagnostics = DiagnosticsBlock {
        sample_times: r
            .get("diagnostics.sample_times", parse_f64_list)
            .unwrap_or_else(|| DEFAULT_SAMPLE_TIMES.to_vec()),
        fit_lo: r.get("diagnostics.fit_lo", parse_f64),
        fit_hi: r.get("diagnostics.fit_hi", parse_f64),
        n_shells: r.get("diagnostics.n_shells", parse_usize),
        mode: r
            .get("diagnostics.mode", |s| parse_str_value(s)?.parse::<BoundMode>())
            .unwrap_or(BoundMode::Subcritical),
        fit_model: r
            .get("diagnostics.fit_model", |s| parse_fit_model(&parse_str_value(s)?))
            .unwrap_or(FitModel::PowerExponential),
        eta_j: r
            .get("diagnostics.eta_j", parse_f64_list)
            .unwrap_or_else(|| DEFAULT_ETA_J.to_vec()),
    };

    let output = OutputBlock {
        dir: PathBuf::from(r.get("output.dir", parse_str_value).unwrap_or_else(|| "runs/scenario".into())),
        formats: r
            .get("output.formats", parse_formats)
            .unwrap_or_else(|| vec![Format::Csv, Format::Json]),
        checkpoint: r.get("output.checkpoint", parse_bool).unwrap_or(false),
        checkpoint_stride: r.get("output.checkpoint_stride", parse_usize).unwrap_or(1),
    };

    let cfg = ScenarioConfig {
        grid,
        solver,
        physics,
        data,
        diagnostics,
        output,
    };
    // Fields that failed to parse hold defaults here, so their range checks
    // are silent and only the parse error is reported.
    let missing_grid = !entries.contains_key("grid.n");
    errs.extend(
        cfg.violations()
            .into_iter()
            .filter(|v| !(missing_grid && v.starts_with("grid:"))),
    );
    if errs.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigError::Invalid(errs))
    }
}

struct Reader<'a> {
    entries: &'a BTreeMap<String, (usize, String)>,
    errs: &'a mut Vec<String>,
}

impl Reader<'_> {
    fn get<T>(&mut self, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> Option<T> {
        let (line, v) = self.entries.get(key)?;
        match parse(v) {
            Ok(x) => Some(x),
            Err(e) => {
                self.errs.push(format!("line {line}: {key}: {e}"));
                None
            }
        }
    }

    fn req<T>(&mut self, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> Option<T> {
        if !self.entries.contains_key(key) {
            self.errs.push(format!("{key}: required key is missing"));
            return None;
        }
        self.get(key, parse)
    }
}

fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

fn parse_str_value(s: &str) -> Result<String, String> {
    if let Some(inner) = s.strip_prefix('"') {
        inner
            .strip_suffix('"')
            .filter(|x| !x.contains('"'))
            .map(str::to_string)
            .ok_or_else(|| format!("unterminated string {s:?}"))
    } else if s.is_empty() {
        Err("empty value".into())
    } else {
        Ok(s.to_string())
    }
}

/// A decimal number, optionally followed by `pi` (`2pi`, `0.5*pi`, `pi`).
fn parse_f64(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let (num, scale) = match t.strip_suffix("pi") {
        Some(head) => {
            let head = head.trim_end().trim_end_matches('*').trim_end();
            (if head.is_empty() { "1" } else { head }, PI)
        }
        None => (t, 1.0),
    };
    let x: f64 = num.parse().map_err(|_| format!("expected a number, got {s:?}"))?;
    let x = x * scale;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("expected a finite number, got {s:?}"))
    }
}

fn parse_usize(s: &str) -> Result<usize, String> {
    s.parse().map_err(|_| format!("expected a nonnegative integer, got {s:?}"))
}

fn parse_u64(s: &str) -> Result<u64, String> {
    s.parse().map_err(|_| format!("expected a nonnegative integer, got {s:?}"))
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("expected true|false, got {s:?}")),
    }
}

fn list_items(s: &str) -> Vec<&str> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    inner.split(',').map(str::trim).filter(|x| !x.is_empty()).collect()
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    list_items(s).into_iter().map(parse_f64).collect()
}

fn parse_mode(s: &str) -> Result<[i64; 3], String> {
    let v: Vec<i64> = list_items(s)
        .into_iter()
        .map(|x| x.parse().map_err(|_| format!("expected an integer, got {x:?}")))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| format!("expected three integers, got {s:?}"))
}

fn parse_fit_model(s: &str) -> Result<FitModel, String> {
    match s {
        "exponential" => Ok(FitModel::Exponential),
        "power_exponential" => Ok(FitModel::PowerExponential),
        _ => Err(format!("expected exponential|power_exponential, got {s:?}")),
    }
}

fn parse_formats(s: &str) -> Result<Vec<Format>, String> {
    list_items(s)
        .into_iter()
        .map(|x| match x {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {x:?} (csv|json)")),
        })
        .collect()
}

fn fmt_list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
    format!("[{}]", items.join(", "))
}

impl ScenarioConfig {
    /// Range and cross-field violations, each prefixed with its key path.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let grid = match self.grid.build() {
            Ok(g) => Some(g),
            Err(e) => {
                v.push(format!("grid: {e}"));
                None
            }
        };

        let s = &self.solver;
        for e in self.solver_config().violations() {
            v.push(format!("solver: {e}"));
        }
        if !(s.oracle_tol > 0.0) {
            v.push(format!("solver.oracle_tol: must be positive, got {}", s.oracle_tol));
        }

        let p = &self.physics;
        if !(p.delta > 0.0) {
            v.push(format!("physics.delta: must be positive, got {}", p.delta));
        }
        match self.diagnostics.mode {
            BoundMode::Subcritical if !(p.gamma > 0.5 + 2.0 * p.delta) => v.push(format!(
                "physics.gamma: subcritical mode needs gamma > 1/2 + 2 delta = {}, got {}",
                0.5 + 2.0 * p.delta,
                p.gamma
            )),
            BoundMode::Critical if p.gamma != 0.5 => {
                v.push(format!("physics.gamma: critical mode needs gamma = 0.5, got {}", p.gamma))
            }
            _ => {}
        }
        if !(p.eta0 > 0.0 && p.eta0 < 1.0) {
            v.push(format!("physics.eta0: must lie in (0, 1), got {}", p.eta0));
        }
        if !(p.lambda >= 0.0) {
            v.push(format!("physics.lambda: must be nonnegative, got {}", p.lambda));
        }

        let d = &self.data;
        if !(d.amplitude >= 0.0) {
            v.push(format!("data.amplitude: must be nonnegative, got {}", d.amplitude));
        }
        if let Some(e) = d.spectral_exponent {
            if !(e >= 0.0) {
                v.push(format!("data.spectral_exponent: must be nonnegative, got {e}"));
            }
        }
        if !(d.band_lo >= 0.0) {
            v.push(format!("data.band_lo: must be nonnegative, got {}", d.band_lo));
        }
        if let Some(g) = &grid {
            let kmax = g.k_max_axis();
            let hi = d.band_hi.unwrap_or(kmax);
            if matches!(d.kind, DataKind::RandomSobolevTail) {
                if hi > kmax + 1e-12 {
                    v.push(format!("data.band_hi: {hi} exceeds the grid's axis k_max {kmax}"));
                }
                if !(hi > d.band_lo) {
                    v.push(format!("data.band_hi: must exceed data.band_lo = {}, got {hi}", d.band_lo));
                }
            }
            if matches!(d.kind, DataKind::CompactSpectrum) {
                if !(d.k_cut > d.band_lo) {
                    v.push(format!("data.k_cut: must exceed data.band_lo = {}, got {}", d.band_lo, d.k_cut));
                }
                if d.k_cut > kmax + 1e-12 {
                    v.push(format!("data.k_cut: {} exceeds the grid's axis k_max {kmax}", d.k_cut));
                }
            }
            if matches!(d.kind, DataKind::SingleMode) {
                let lim = (g.n() / 2) as i64;
                if d.mode == [0, 0, 0] || d.mode.iter().any(|m| m.abs() >= lim) {
                    v.push(format!(
                        "data.mode: must be nonzero with entries in (-{lim}, {lim}), got {:?}",
                        d.mode
                    ));
                }
            }
        }

        let g = &self.diagnostics;
        if g.sample_times.is_empty() {
            v.push("diagnostics.sample_times: must not be empty".into());
        }
        let t_max = match g.mode {
            BoundMode::Subcritical => (-1.0f64).exp(),
            BoundMode::Critical => 1.0,
        };
        for &t in &g.sample_times {
            if !(t > 0.0 && t <= s.t_final && t < t_max) {
                v.push(format!(
                    "diagnostics.sample_times: {t} must lie in (0, min(solver.T, {t_max:.4}))"
                ));
            }
        }
        if let Some(g0) = &grid {
            let (lo, hi) = self.fit_window(g0);
            if !(lo >= 0.0 && hi > lo) {
                v.push(format!("diagnostics.fit_lo/fit_hi: need 0 <= fit_lo < fit_hi, got ({lo}, {hi})"));
            }
            if hi > g0.k_max() + 1e-12 {
                v.push(format!("diagnostics.fit_hi: {hi} exceeds the grid's k_max {}", g0.k_max()));
            }
        }
        if let Some(n) = g.n_shells {
            if n < 2 {
                v.push(format!("diagnostics.n_shells: must be at least 2, got {n}"));
            }
        }
        if g.eta_j.iter().any(|&j| !(j > 0.0)) {
            v.push("diagnostics.eta_j: cutoffs must be positive".into());
        }

        let o = &self.output;
        if o.formats.is_empty() {
            v.push("output.formats: must list at least one of csv, json".into());
        }
        if o.checkpoint_stride == 0 {
            v.push("output.checkpoint_stride: must be positive".into());
        }
        if o.dir.as_os_str().is_empty() {
            v.push("output.dir: must not be empty".into());
        }
        v
    }

    pub fn solver_config(&self) -> SolverConfig {
        let s = &self.solver;
        SolverConfig {
            t_final: s.t_final,
            n_times: s.n_times,
            quad_order: s.quad_order,
            tol: s.tol,
            gamma: self.physics.gamma,
            max_iter: s.max_iter,
            dt: s.dt,
            lattice: s.lattice.clone(),
            blowup_guard: s.blowup_guard,
        }
    }

    pub fn norm_params(&self) -> gns_core::diagnostics::NormParams {
        let p = &self.physics;
        gns_core::diagnostics::NormParams {
            gamma: p.gamma,
            delta: p.delta,
            t_final: self.solver.t_final,
            lambda: p.lambda,
            eta0: p.eta0,
        }
    }

    pub fn radius_options(&self) -> RadiusOptions {
        RadiusOptions {
            n_shells: self.diagnostics.n_shells,
            model: self.diagnostics.fit_model,
            ..RadiusOptions::default()
        }
    }

    /// Fit window, defaulting to `[2Δk, k_max_axis]`.
    pub fn fit_window(&self, grid: &Grid) -> (f64, f64) {
        (
            self.diagnostics.fit_lo.unwrap_or(2.0 * grid.dk()),
            self.diagnostics.fit_hi.unwrap_or(grid.k_max_axis()),
        )
    }

    /// Canonical text form: every key that has a value, in schema order.
    /// Parsing it yields an equal config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("grid.n", self.grid.n.to_string());
        put("grid.L", format!("{:?}", self.grid.period));
        put("grid.dealias", format!("{:?}", self.grid.dealias));
        let sv = &self.solver;
        put("solver.T", format!("{:?}", sv.t_final));
        put("solver.n_times", sv.n_times.to_string());
        put("solver.quad_order", sv.quad_order.to_string());
        put("solver.tol", format!("{:?}", sv.tol));
        put("solver.max_iter", sv.max_iter.to_string());
        put("solver.dt", format!("{:?}", sv.dt));
        match &sv.lattice {
            TimeLattice::Uniform => put("solver.lattice", "uniform".into()),
            TimeLattice::Graded {
                anchors,
                segment_steps,
            } => {
                put("solver.lattice", "graded".into());
                put("solver.anchors", fmt_list(anchors));
                put("solver.segment_steps", segment_steps.to_string());
            }
        }
        put("solver.blowup_guard", format!("{:?}", sv.blowup_guard));
        put("solver.oracle", sv.oracle.to_string());
        put("solver.oracle_tol", format!("{:?}", sv.oracle_tol));
        let p = &self.physics;
        put(
            "physics.coeffs",
            match &p.coeffs {
                CoeffSource::NavierStokes => "navier_stokes".into(),
                CoeffSource::Zero => "zero".into(),
                CoeffSource::File(path) => format!("\"{}\"", path.display()),
            },
        );
        put("physics.gamma", format!("{:?}", p.gamma));
        put("physics.delta", format!("{:?}", p.delta));
        put("physics.eta0", format!("{:?}", p.eta0));
        put("physics.lambda", format!("{:?}", p.lambda));
        let d = &self.data;
        put("data.kind", d.kind.as_str().into());
        put("data.amplitude", format!("{:?}", d.amplitude));
        put("data.seed", d.seed.to_string());
        if let Some(e) = d.spectral_exponent {
            put("data.spectral_exponent", format!("{e:?}"));
        }
        put("data.band_lo", format!("{:?}", d.band_lo));
        if let Some(h) = d.band_hi {
            put("data.band_hi", format!("{h:?}"));
        }
        put("data.mode", format!("[{}, {}, {}]", d.mode[0], d.mode[1], d.mode[2]));
        put("data.k_cut", format!("{:?}", d.k_cut));
        let g = &self.diagnostics;
        put("diagnostics.sample_times", fmt_list(&g.sample_times));
        if let Some(x) = g.fit_lo {
            put("diagnostics.fit_lo", format!("{x:?}"));
        }
        if let Some(x) = g.fit_hi {
            put("diagnostics.fit_hi", format!("{x:?}"));
        }
        if let Some(n) = g.n_shells {
            put("diagnostics.n_shells", n.to_string());
        }
        put("diagnostics.mode", g.mode.as_str().into());
        put(
            "diagnostics.fit_model",
            match g.fit_model {
                FitModel::Exponential => "exponential".into(),
                FitModel::PowerExponential => "power_exponential".into(),
            },
        );
        put("diagnostics.eta_j", fmt_list(&g.eta_j));
        let o = &self.output;
        put("output.dir", format!("\"{}\"", o.dir.display()));
        let f: Vec<&str> = o.formats.iter().map(Format::as_str).collect();
        put("output.formats", format!("[{}]", f.join(", ")));
        put("output.checkpoint", o.checkpoint.to_string());
        put("output.checkpoint_stride", o.checkpoint_stride.to_string());
        s
    }

    /// Hex SHA-256 of [`ScenarioConfig::to_text`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
