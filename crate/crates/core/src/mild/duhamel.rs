use super::quadrature::gauss_legendre_unit;
use super::{MildError, Trajectory};
use crate::operator::{
    heat_factors, heat_semigroup, multiply_real, QCoefficients, QOperator, VelocityField,
};
use crate::spectral::Grid;

type Physical = [Vec<f64>; 3];

/// Composite Gauss–Legendre evaluation of `∫ e^{(t-s)Δ} Q(u(s), v(s)) ds`
/// with `u`, `v` linear in time between lattice samples.
#[derive(Debug, Clone)]
pub struct DuhamelIntegrator {
    op: QOperator,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl DuhamelIntegrator {
    pub fn new(coeffs: &QCoefficients, quad_order: usize) -> Self {
        let (nodes, weights) = gauss_legendre_unit(quad_order.max(1));
        Self {
            op: QOperator::new(coeffs),
            nodes,
            weights,
        }
    }

    pub fn operator(&self) -> &QOperator {
        &self.op
    }

    /// `∫_a^{a+h} e^{(a+h-s)Δ} Q(u(s), v(s)) ds` from the physical endpoint
    /// values; `v = None` means `v = u`.
    pub(crate) fn interval(
        &self,
        grid: Grid,
        h: f64,
        u: (&Physical, &Physical),
        v: Option<(&Physical, &Physical)>,
    ) -> VelocityField {
        let mut acc = VelocityField::zeros(grid);
        if self.op.is_zero() {
            return acc;
        }
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let ui = interpolate(u.0, u.1, x);
            let vi = v.map(|(a, b)| interpolate(a, b, x));
            let mut q = self.op.apply_physical(grid, &ui, vi.as_ref());
            let f = heat_factors(&grid, (1.0 - x) * h);
            for j in 0..3 {
                multiply_real(q.component_mut(j).coeffs_mut(), &f);
            }
            acc.axpy(h * w, &q);
        }
        acc
    }

    /// Calls `visit(i, B(t_i))` for every lattice time in order, where
    /// `B(t) = ∫_0^t e^{(t-s)Δ} Q(u(s), v(s)) ds`.
    pub fn sweep<F>(
        &self,
        u: &Trajectory,
        v: Option<&Trajectory>,
        mut visit: F,
    ) -> Result<(), MildError>
    where
        F: FnMut(usize, &VelocityField) -> Result<(), MildError>,
    {
        if let Some(v) = v {
            if !u.compatible(v) {
                return Err(MildError::GridMismatch);
            }
        }
        let grid = *u.grid();
        let times = u.times();
        let mut b = VelocityField::zeros(grid);
        visit(0, &b)?;
        let mut up = u.state(0).to_physical()?;
        let mut vp = v.map(|v| v.state(0).to_physical()).transpose()?;
        for i in 0..times.len() - 1 {
            let h = times[i + 1] - times[i];
            let un = u.state(i + 1).to_physical()?;
            let vn = v.map(|v| v.state(i + 1).to_physical()).transpose()?;
            let vpair = match (&vp, &vn) {
                (Some(a), Some(b)) => Some((a, b)),
                _ => None,
            };
            let inc = self.interval(grid, h, (&up, &un), vpair);
            b = heat_semigroup(&b, h)?;
            b.axpy(1.0, &inc);
            visit(i + 1, &b)?;
            up = un;
            vp = vn;
        }
        Ok(())
    }
}

fn interpolate(a: &Physical, b: &Physical, x: f64) -> Physical {
    let mix = |p: &Vec<f64>, q: &Vec<f64>| -> Vec<f64> {
        p.iter().zip(q).map(|(p, q)| (1.0 - x) * p + x * q).collect()
    };
    [mix(&a[0], &b[0]), mix(&a[1], &b[1]), mix(&a[2], &b[2])]
}

/// `B(u, v)(t_eval)` for trajectories on a shared grid and lattice.
///
/// Lattice intervals below `t_eval` are integrated whole; the interval that
/// contains `t_eval` is cut at `t_eval`, with the states there obtained by
/// linear interpolation.
pub fn duhamel_b(
    coeffs: &QCoefficients,
    u: &Trajectory,
    v: &Trajectory,
    t_eval: f64,
    quad_order: usize,
) -> Result<VelocityField, MildError> {
    if !u.compatible(v) {
        return Err(MildError::GridMismatch);
    }
    let (last, frac) = u.locate(t_eval)?;
    let grid = *u.grid();
    let integ = DuhamelIntegrator::new(coeffs, quad_order);
    let mut seg_times: Vec<f64> = u.times()[..=last].to_vec();
    let mut us: Vec<VelocityField> = u.states()[..=last].to_vec();
    let mut vs: Vec<VelocityField> = v.states()[..=last].to_vec();
    if frac > 0.0 {
        seg_times.push(t_eval);
        us.push(u.state_at(t_eval)?);
        vs.push(v.state_at(t_eval)?);
    }
    if seg_times.len() == 1 {
        return Ok(VelocityField::zeros(grid));
    }
    let ut = Trajectory::new(seg_times.clone(), us)?;
    let vt = Trajectory::new(seg_times, vs)?;
    let mut out = None;
    let n = ut.len();
    integ.sweep(&ut, Some(&vt), |i, b| {
        if i + 1 == n {
            out = Some(b.clone());
        }
        Ok(())
    })?;
    Ok(out.expect("sweep visits the last time"))
}

/// `B(u, v)` at every lattice time.
pub fn duhamel_series(
    coeffs: &QCoefficients,
    u: &Trajectory,
    v: &Trajectory,
    quad_order: usize,
) -> Result<Vec<VelocityField>, MildError> {
    let integ = DuhamelIntegrator::new(coeffs, quad_order);
    let mut out = Vec::with_capacity(u.len());
    integ.sweep(u, Some(v), |_, b| {
        out.push(b.clone());
        Ok(())
    })?;
    Ok(out)
}
