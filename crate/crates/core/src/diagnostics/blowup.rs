use alloc::vec::Vec;

use crate::dynamics::SimState;
use crate::{Error, Result};

/// Running blow-up functional `∫_0^t ‖∇u‖_∞ dt'` (left rectangle rule) and
/// `sup ‖u‖_∞`. Bounded values are consistent with continuation past `t`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BlowupMonitor {
    times: Vec<f64>,
    gradient_sup: Vec<f64>,
    integral: Vec<f64>,
    velocity_sup: f64,
}

impl BlowupMonitor {
    /// Empty monitor.
    pub fn new() -> Self {
        Self::default()
    }

    /// Record the next sample; times must increase strictly.
    pub fn push(&mut self, state: &SimState) -> Result<()> {
        let g = state.u.gradient_sup();
        let umax = state.u.lp_norm(f64::INFINITY)?;
        self.push_values(state.t, g, umax)
    }

    /// Record precomputed `‖∇u(t)‖_∞` and `‖u(t)‖_∞`.
    pub fn push_values(&mut self, t: f64, gradient_sup: f64, velocity_sup: f64) -> Result<()> {
        let integral = match (self.times.last(), self.gradient_sup.last(), self.integral.last()) {
            (Some(&t0), Some(&g0), Some(&i0)) => {
                if !(t > t0) {
                    return Err(Error::InvalidParameter("sample times must increase strictly"));
                }
                i0 + (t - t0) * g0
            }
            _ => 0.0,
        };
        self.times.push(t);
        self.gradient_sup.push(gradient_sup);
        self.integral.push(integral);
        self.velocity_sup = self.velocity_sup.max(velocity_sup);
        Ok(())
    }

    /// Sample times.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// `‖∇u(t_k)‖_∞` (Frobenius norm of the Jacobian).
    pub fn gradient_sup(&self) -> &[f64] {
        &self.gradient_sup
    }

    /// `∫_0^{t_k} ‖∇u‖_∞` at every sample.
    pub fn integral(&self) -> &[f64] {
        &self.integral
    }

    /// Integral up to the last sample.
    pub fn total(&self) -> f64 {
        self.integral.last().copied().unwrap_or(0.0)
    }

    /// `sup_t ‖u(t)‖_∞`.
    pub fn velocity_sup(&self) -> f64 {
        self.velocity_sup
    }

    /// `‖u‖_{L^∞_T(L^∞)} + ∫_0^T ‖∇u‖_∞`, the functional for `p₁ = ∞`.
    pub fn functional_with_sup(&self) -> f64 {
        self.velocity_sup + self.total()
    }

    /// First sample time at which the integral exceeds `threshold`.
    pub fn first_exceeding(&self, threshold: f64) -> Option<f64> {
        self.times
            .iter()
            .zip(&self.integral)
            .find(|(_, i)| **i > threshold)
            .map(|(t, _)| *t)
    }

    /// True while every recorded value is finite.
    pub fn is_finite(&self) -> bool {
        self.total().is_finite() && self.velocity_sup.is_finite()
    }
}

/// Blow-up functional over a whole trajectory.
pub fn blowup_monitor(trajectory: &[SimState]) -> Result<BlowupMonitor> {
    if trajectory.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut m = BlowupMonitor::new();
    for s in trajectory {
        m.push(s)?;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::taylor_green;
    use crate::{Field, Grid, VectorField};
    use core::f64::consts::TAU;

    fn frozen(grid: &Grid, u: &VectorField, times: &[f64]) -> Vec<SimState> {
        let z = Field::zeros(grid);
        times
            .iter()
            .map(|&t| {
                let mut s = SimState::new(u.clone(), z.clone(), z.clone(), 0.0).unwrap();
                s.t = t;
                s
            })
            .collect()
    }

    #[test]
    fn zero_velocity() {
        let grid = Grid::new(2, 16, TAU).unwrap();
        let traj = frozen(&grid, &VectorField::zeros(&grid), &[0.0, 0.5, 1.0]);
        assert_eq!(blowup_monitor(&traj).unwrap().total(), 0.0);
    }

    #[test]
    fn frozen_field_integrates_linearly() {
        let grid = Grid::new(2, 16, TAU).unwrap();
        let u = taylor_green(&grid);
        let times: Vec<f64> = (0..=10).map(|k| 0.1 * k as f64).collect();
        let m = blowup_monitor(&frozen(&grid, &u, &times)).unwrap();
        let g = u.gradient_sup();
        assert!((m.total() - 1.0 * g).abs() < 1e-12);
        // Taylor-Green: |∇u| peaks at √2 where cos x cos y = ±1
        assert!((g - core::f64::consts::SQRT_2).abs() < 1e-12);
        assert!((m.velocity_sup() - 1.0).abs() < 1e-12);
        assert!((m.first_exceeding(0.55 * g).unwrap() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn additivity() {
        let mut whole = BlowupMonitor::new();
        let mut first = BlowupMonitor::new();
        let mut second = BlowupMonitor::new();
        for k in 0..=20 {
            let t = 0.05 * k as f64;
            let g = 1.0 + libm::sin(3.0 * t);
            whole.push_values(t, g, 1.0).unwrap();
            if k <= 10 {
                first.push_values(t, g, 1.0).unwrap();
            }
            if k >= 10 {
                second.push_values(t, g, 1.0).unwrap();
            }
        }
        assert!((whole.total() - first.total() - second.total()).abs() < 1e-12);
        assert!(whole.push_values(0.5, 1.0, 1.0).is_err());
    }
}
