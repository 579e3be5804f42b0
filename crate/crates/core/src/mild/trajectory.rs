use super::MildError;
use crate::operator::VelocityField;
use crate::spectral::Grid;

/// Velocity states on a strictly increasing time lattice starting at `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<VelocityField>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, states: Vec<VelocityField>) -> Result<Self, MildError> {
        if times.is_empty() || times.len() != states.len() {
            return Err(MildError::InvalidTrajectory(format!(
                "{} times for {} states",
                times.len(),
                states.len()
            )));
        }
        if times[0] != 0.0 {
            return Err(MildError::InvalidTrajectory(format!(
                "first time is {}, expected 0",
                times[0]
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return Err(MildError::InvalidTrajectory(
                "times must be finite and strictly increasing".into(),
            ));
        }
        let g = *states[0].grid();
        if states.iter().any(|s| *s.grid() != g) {
            return Err(MildError::GridMismatch);
        }
        Ok(Self { times, states })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[VelocityField] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &VelocityField {
        &self.states[i]
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn grid(&self) -> &Grid {
        self.states[0].grid()
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().expect("nonempty")
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<VelocityField>) {
        (self.times, self.states)
    }

    /// Index of a lattice time within a relative tolerance of `1e-9`.
    pub fn lattice_index(&self, t: f64) -> Option<usize> {
        let tol = 1e-9 * self.horizon().max(f64::MIN_POSITIVE);
        let i = self.times.partition_point(|&s| s < t - tol);
        (i < self.len() && (self.times[i] - t).abs() <= tol).then_some(i)
    }

    /// Interval `i` with `times[i] ≤ t ≤ times[i+1]` and the fraction of the
    /// way through it.
    pub(crate) fn locate(&self, t: f64) -> Result<(usize, f64), MildError> {
        if !(t >= 0.0 && t <= self.horizon()) {
            return Err(MildError::TimeOutOfRange {
                t,
                horizon: self.horizon(),
            });
        }
        if let Some(i) = self.lattice_index(t) {
            return Ok((i, 0.0));
        }
        let i = self.times.partition_point(|&s| s <= t) - 1;
        let x = (t - self.times[i]) / (self.times[i + 1] - self.times[i]);
        Ok((i, x))
    }

    /// State at `t`, interpolated linearly between lattice samples.
    pub fn state_at(&self, t: f64) -> Result<VelocityField, MildError> {
        let (i, x) = self.locate(t)?;
        if x == 0.0 {
            return Ok(self.states[i].clone());
        }
        Ok(VelocityField::lin_comb(
            1.0 - x,
            &self.states[i],
            x,
            &self.states[i + 1],
        ))
    }

    /// Whether both trajectories use the same grid and time lattice.
    pub fn compatible(&self, other: &Trajectory) -> bool {
        self.grid() == other.grid() && self.times == other.times
    }
}
