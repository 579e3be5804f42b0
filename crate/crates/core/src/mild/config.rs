use serde::{Deserialize, Serialize};

use super::MildError;

/// How the trajectory time lattice is laid out on `[0, T]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimeLattice {
    /// `n_times` equally spaced samples including `0` and `T`.
    Uniform,
    /// Piecewise uniform: the anchors (and `T`) end segments that are each
    /// split into `segment_steps` equal steps. Keeps the relative step
    /// `Δt/t` bounded when diagnostics span several decades of `t`.
    Graded {
        anchors: Vec<f64>,
        segment_steps: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub t_final: f64,
    pub n_times: usize,
    pub quad_order: usize,
    pub tol: f64,
    pub gamma: f64,
    pub max_iter: usize,
    /// Step of the integrating-factor oracle.
    pub dt: f64,
    pub lattice: TimeLattice,
    /// Picard aborts once a delta exceeds this multiple of `1 + ‖u₀‖_{H^γ}`;
    /// the oracle aborts once `‖u‖_{L²}` exceeds this multiple of its initial value.
    pub blowup_guard: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            t_final: 0.01,
            n_times: 101,
            quad_order: 2,
            tol: 1e-8,
            gamma: 1.0,
            max_iter: 30,
            dt: 1e-4,
            lattice: TimeLattice::Uniform,
            blowup_guard: 1e6,
        }
    }
}

impl SolverConfig {
    /// All violations, empty when the configuration is usable.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            v.push(format!("t_final must be positive, got {}", self.t_final));
        }
        if self.n_times < 2 {
            v.push(format!("n_times must be at least 2, got {}", self.n_times));
        }
        if self.quad_order == 0 || self.quad_order > 32 {
            v.push(format!("quad_order must be in 1..=32, got {}", self.quad_order));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            v.push(format!("tol must lie in (0, 1), got {}", self.tol));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            v.push(format!("gamma must be positive, got {}", self.gamma));
        }
        if self.max_iter == 0 {
            v.push("max_iter must be positive".into());
        }
        if !(self.dt > 0.0 && self.dt <= self.t_final) {
            v.push(format!("dt must lie in (0, t_final], got {}", self.dt));
        }
        if !(self.blowup_guard > 1.0) {
            v.push(format!("blowup_guard must exceed 1, got {}", self.blowup_guard));
        }
        if let TimeLattice::Graded {
            anchors,
            segment_steps,
        } = &self.lattice
        {
            if *segment_steps == 0 {
                v.push("segment_steps must be positive".into());
            }
            let mut prev = 0.0;
            for &a in anchors {
                if !(a > prev && a < self.t_final) {
                    v.push(format!(
                        "anchors must increase strictly inside (0, t_final), got {a}"
                    ));
                    break;
                }
                prev = a;
            }
        }
        v
    }

    pub fn validate(&self) -> Result<(), MildError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(MildError::InvalidConfig(v.join("; ")))
        }
    }

    /// The lattice times, starting at `0` and ending at `t_final`.
    pub fn times(&self) -> Vec<f64> {
        match &self.lattice {
            TimeLattice::Uniform => {
                let m = self.n_times - 1;
                (0..=m)
                    .map(|i| {
                        if i == m {
                            self.t_final
                        } else {
                            self.t_final * i as f64 / m as f64
                        }
                    })
                    .collect()
            }
            TimeLattice::Graded {
                anchors,
                segment_steps,
            } => {
                let mut out = vec![0.0];
                let mut a = 0.0;
                for &b in anchors.iter().chain(std::iter::once(&self.t_final)) {
                    for s in 1..=*segment_steps {
                        out.push(if s == *segment_steps {
                            b
                        } else {
                            a + (b - a) * s as f64 / *segment_steps as f64
                        });
                    }
                    a = b;
                }
                out
            }
        }
    }
}
