use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use super::formulas::{beta, k_t, lambda_critical, lambda_subcritical};
use super::radius::{estimate_radius_with, RadiusOptions};
use super::tails::{eta_j, zeta_j};
use super::DiagnosticsError;
use crate::mild::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMode {
    Subcritical,
    Critical,
}

impl BoundMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundMode::Subcritical => "subcritical",
            BoundMode::Critical => "critical",
        }
    }
}

impl std::str::FromStr for BoundMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "subcritical" => Ok(BoundMode::Subcritical),
            "critical" => Ok(BoundMode::Critical),
            other => Err(format!("unknown mode {other:?} (subcritical|critical)")),
        }
    }
}

/// Echo of the inputs that produced a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundParameters {
    pub mode: BoundMode,
    pub gamma: f64,
    pub fit_window: (f64, f64),
    pub radius_options: RadiusOptions,
    pub n_per_axis: usize,
    pub period: f64,
    pub k_max: f64,
}

/// Measured radius against the predictor `λ(t)√t` at each sample time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub parameters: BoundParameters,
    pub times: Vec<f64>,
    /// `η^γ_{t^{-1/2}}(t)` (subcritical) or `ζ^{1/2}_{t^{-1/4}}(t)` (critical).
    pub eta_or_zeta: Vec<f64>,
    /// `β(t)`; `NaN` in critical mode, where it is not defined.
    pub beta: Vec<f64>,
    pub lambda: Vec<f64>,
    pub predictor: Vec<f64>,
    pub measured_radius: Vec<f64>,
    /// `measured / predictor`; `+∞` for capped radii.
    pub ratio: Vec<f64>,
    pub capped: Vec<bool>,
    pub r2: Vec<f64>,
    /// `K_t = 3β/(2γ-1)` (subcritical); `NaN` otherwise.
    pub k_t: Vec<f64>,
    /// Tail cutoff `0.01 t^{-1/2}` or `t^{-1/4}` lies beyond `k_max`.
    pub cutoff_beyond_grid: Vec<bool>,
    /// Critical mode with `ζ ≥ 1`, where the predictor formula is used literally.
    pub tail_at_least_one: Vec<bool>,
}

/// Number formatting shared by the CSV and plot files: shortest round-trip
/// decimal, `inf`/`nan` for non-finite values.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:e}")
    }
}

impl BoundReport {
    pub const CSV_HEADER: &'static str =
        "t,eta_or_zeta,beta,lambda,predictor,measured_radius,ratio,capped,r2";

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(Self::CSV_HEADER);
        s.push('\n');
        for i in 0..self.len() {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                fmt_num(self.times[i]),
                fmt_num(self.eta_or_zeta[i]),
                fmt_num(self.beta[i]),
                fmt_num(self.lambda[i]),
                fmt_num(self.predictor[i]),
                fmt_num(self.measured_radius[i]),
                fmt_num(self.ratio[i]),
                self.capped[i],
                fmt_num(self.r2[i]),
            );
        }
        s
    }

    /// JSON mirror; non-finite numbers are written as strings (`"inf"`, `"nan"`).
    pub fn to_json(&self) -> String {
        let nums = |v: &[f64]| -> serde_json::Value {
            v.iter()
                .map(|&x| {
                    if x.is_finite() {
                        serde_json::json!(x)
                    } else {
                        serde_json::json!(fmt_num(x))
                    }
                })
                .collect()
        };
        let v = serde_json::json!({
            "parameters": self.parameters,
            "times": nums(&self.times),
            "eta_or_zeta": nums(&self.eta_or_zeta),
            "beta": nums(&self.beta),
            "lambda": nums(&self.lambda),
            "predictor": nums(&self.predictor),
            "measured_radius": nums(&self.measured_radius),
            "ratio": nums(&self.ratio),
            "capped": self.capped,
            "r2": nums(&self.r2),
            "k_t": nums(&self.k_t),
            "cutoff_beyond_grid": self.cutoff_beyond_grid,
            "tail_at_least_one": self.tail_at_least_one,
        });
        serde_json::to_string_pretty(&v).expect("serializable")
    }

    /// Inverse of [`BoundReport::to_json`].
    pub fn from_json(text: &str) -> Result<Self, DiagnosticsError> {
        let bad = |what: &str| DiagnosticsError::Domain(format!("bound report json: {what}"));
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
        let nums = |key: &str| -> Result<Vec<f64>, DiagnosticsError> {
            let arr = v[key].as_array().ok_or_else(|| bad(&format!("missing array {key:?}")))?;
            arr.iter()
                .map(|x| match x {
                    serde_json::Value::Number(n) => n.as_f64().ok_or_else(|| bad(key)),
                    serde_json::Value::String(s) => match s.as_str() {
                        "inf" => Ok(f64::INFINITY),
                        "-inf" => Ok(f64::NEG_INFINITY),
                        "nan" => Ok(f64::NAN),
                        _ => Err(bad(&format!("bad number {s:?} in {key:?}"))),
                    },
                    _ => Err(bad(&format!("bad entry in {key:?}"))),
                })
                .collect()
        };
        let flags = |key: &str| -> Result<Vec<bool>, DiagnosticsError> {
            serde_json::from_value(v[key].clone()).map_err(|e| bad(&format!("{key}: {e}")))
        };
        let r = BoundReport {
            parameters: serde_json::from_value(v["parameters"].clone())
                .map_err(|e| bad(&format!("parameters: {e}")))?,
            times: nums("times")?,
            eta_or_zeta: nums("eta_or_zeta")?,
            beta: nums("beta")?,
            lambda: nums("lambda")?,
            predictor: nums("predictor")?,
            measured_radius: nums("measured_radius")?,
            ratio: nums("ratio")?,
            capped: flags("capped")?,
            r2: nums("r2")?,
            k_t: nums("k_t")?,
            cutoff_beyond_grid: flags("cutoff_beyond_grid")?,
            tail_at_least_one: flags("tail_at_least_one")?,
        };
        let n = r.times.len();
        let lens = [
            r.eta_or_zeta.len(),
            r.beta.len(),
            r.lambda.len(),
            r.predictor.len(),
            r.measured_radius.len(),
            r.ratio.len(),
            r.capped.len(),
            r.r2.len(),
            r.k_t.len(),
            r.cutoff_beyond_grid.len(),
            r.tail_at_least_one.len(),
        ];
        if lens.iter().any(|&l| l != n) {
            return Err(bad("column lengths differ"));
        }
        Ok(r)
    }
}

/// Builds the report at each sample time (which must lie in `(0, 1/e)` for
/// subcritical mode, `(0, 1)` for critical mode, and within the trajectory).
/// Sample times between lattice points use the interpolated state.
pub fn bound_report(
    traj: &Trajectory,
    gamma: f64,
    mode: BoundMode,
    fit_window: (f64, f64),
    sample_times: &[f64],
    opts: &RadiusOptions,
) -> Result<BoundReport, DiagnosticsError> {
    match mode {
        BoundMode::Subcritical if !(gamma > 0.5) => {
            return Err(DiagnosticsError::Domain(format!(
                "subcritical mode needs gamma > 1/2, got {gamma}"
            )))
        }
        BoundMode::Critical if gamma != 0.5 => {
            return Err(DiagnosticsError::Domain(format!(
                "critical mode needs gamma = 1/2, got {gamma}"
            )))
        }
        _ => {}
    }
    let grid = *traj.grid();
    let k_max = grid.k_max();
    let rows = crate::par::map_indexed(sample_times.len(), |i| {
        let t = sample_times[i];
        let (tail, cutoff, lam, b, kt) = match mode {
            BoundMode::Subcritical => {
                let j = t.powf(-0.5);
                let eta = eta_j(traj, j, gamma, t)?;
                let b = beta(t, gamma, eta)?;
                let lam = lambda_subcritical(t, gamma, b)?;
                (eta, 0.01 * j, lam, b, k_t(b, gamma)?)
            }
            BoundMode::Critical => {
                let j = t.powf(-0.25);
                let zeta = zeta_j(traj, j, gamma, t)?;
                (zeta, j, lambda_critical(t, zeta)?, f64::NAN, f64::NAN)
            }
        };
        let predictor = lam * t.sqrt();
        let state = traj.state_at(t)?;
        let est = estimate_radius_with(&state, fit_window.0, fit_window.1, opts)?;
        let ratio = if est.capped {
            f64::INFINITY
        } else {
            est.radius / predictor
        };
        Ok::<_, DiagnosticsError>((tail, b, lam, predictor, est, ratio, kt, cutoff > k_max))
    });
    let mut r = BoundReport {
        parameters: BoundParameters {
            mode,
            gamma,
            fit_window,
            radius_options: *opts,
            n_per_axis: grid.n(),
            period: grid.period(),
            k_max,
        },
        times: sample_times.to_vec(),
        eta_or_zeta: vec![],
        beta: vec![],
        lambda: vec![],
        predictor: vec![],
        measured_radius: vec![],
        ratio: vec![],
        capped: vec![],
        r2: vec![],
        k_t: vec![],
        cutoff_beyond_grid: vec![],
        tail_at_least_one: vec![],
    };
    for row in rows {
        let (tail, b, lam, predictor, est, ratio, kt, beyond) = row?;
        r.eta_or_zeta.push(tail);
        r.beta.push(b);
        r.lambda.push(lam);
        r.predictor.push(predictor);
        r.measured_radius.push(est.radius);
        r.ratio.push(ratio);
        r.capped.push(est.capped);
        r.r2.push(est.r2);
        r.k_t.push(kt);
        r.cutoff_beyond_grid.push(beyond);
        r.tail_at_least_one.push(mode == BoundMode::Critical && tail >= 1.0);
    }
    Ok(r)
}
