use super::{picard_solve, Dynamics, IterationReport, PicardOptions, SimState};
use crate::littlewood_paley::{besov_norm, DyadicPartition};
use crate::{BesovSpec, Error, Result};

/// Besov indices `(s₁, p₁, r₁)` for the velocity and `(s₂, p₂, r₂)` for the
/// charges.
///
/// The default `(2.6, 2, 2)`, `(1.6, 2, 2)` takes `p₂ = 2` on the
/// two-dimensional torus, where `∇(-Δ)^{-1}` is bounded on zero-mean data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureIndices {
    /// Velocity regularity.
    pub s1: f64,
    /// Velocity integrability.
    pub p1: f64,
    /// Velocity summation exponent.
    pub r1: f64,
    /// Charge regularity.
    pub s2: f64,
    /// Charge integrability.
    pub p2: f64,
    /// Charge summation exponent.
    pub r2: f64,
}

impl Default for MeasureIndices {
    fn default() -> Self {
        Self {
            s1: 2.6,
            p1: 2.0,
            r1: 2.0,
            s2: 1.6,
            p2: 2.0,
            r2: 2.0,
        }
    }
}

impl MeasureIndices {
    /// `B^{s₁}_{p₁,r₁}`.
    pub fn velocity(&self) -> Result<BesovSpec> {
        BesovSpec::new(self.s1, self.p1, self.r1)
    }

    /// `B^{s₂}_{p₂,r₂}`.
    pub fn charge(&self) -> Result<BesovSpec> {
        BesovSpec::new(self.s2, self.p2, self.r2)
    }

    /// `B^{s₁'}_{p₂,r₂}` with `s₁' = s₁ - 1`, the velocity norm of differences.
    pub fn velocity_difference(&self) -> Result<BesovSpec> {
        BesovSpec::new(self.s1 - 1.0, self.p2, self.r2)
    }

    /// `B^{s₂-1}_{p₂,r₂}`, the charge norm of differences.
    pub fn charge_difference(&self) -> Result<BesovSpec> {
        BesovSpec::new(self.s2 - 1.0, self.p2, self.r2)
    }

    /// `‖u₀‖_{B^{s₁}} + ‖n₀‖_{B^{s₂}} + ‖p₀‖_{B^{s₂}}`.
    pub fn initial_energy(&self, partition: &DyadicPartition, state: &SimState) -> Result<f64> {
        let cs = self.charge()?;
        Ok(besov_norm(partition, &state.u, self.velocity()?)?
            + besov_norm(partition, &state.n, cs)?
            + besov_norm(partition, &state.p, cs)?)
    }
}

/// `c / (1 + E₀^r)` with `E₀` the [`MeasureIndices::initial_energy`].
pub fn lifespan_lower_bound(
    partition: &DyadicPartition,
    state: &SimState,
    c: f64,
    r: f64,
    indices: &MeasureIndices,
) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter("lifespan constant c must be positive"));
    }
    if !(r >= 4.0) || !r.is_finite() {
        return Err(Error::InvalidParameter("lifespan exponent r must be at least 4"));
    }
    let e0 = indices.initial_energy(partition, state)?;
    Ok(c / (1.0 + libm::pow(e0, r)))
}

/// Outcome of [`calibrate_lifespan`].
#[derive(Debug, Clone)]
pub struct LifespanCalibration {
    /// Largest tried horizon on which every contraction ratio was at most ½.
    pub horizon: f64,
    /// `horizon · (1 + E₀^r)`, the constant that makes the bound equal `horizon`.
    pub c: f64,
    /// `E₀`.
    pub initial_energy: f64,
    /// Halvings applied to the starting horizon.
    pub halvings: usize,
    /// Picard report at the calibrated horizon.
    pub report: IterationReport,
}

/// Halve the horizon of `options` until the Picard iteration contracts with
/// every ratio `F^{m+1}/F^m ≤ ½`, then read off `c`.
pub fn calibrate_lifespan(
    dynamics: &Dynamics,
    initial: &SimState,
    options: &PicardOptions,
    r: f64,
    max_halvings: usize,
) -> Result<LifespanCalibration> {
    if !(r >= 4.0) || !r.is_finite() {
        return Err(Error::InvalidParameter("lifespan exponent r must be at least 4"));
    }
    let e0 = options.indices.initial_energy(dynamics.partition(), initial)?;
    let mut opts = options.clone();
    for halvings in 0..=max_halvings {
        let solution = picard_solve(dynamics, initial, &opts)?;
        let report = solution.report;
        if report.converged && report.ratios().iter().all(|q| *q <= 0.5) {
            return Ok(LifespanCalibration {
                horizon: opts.horizon,
                c: opts.horizon * (1.0 + libm::pow(e0, r)),
                initial_energy: e0,
                halvings,
                report,
            });
        }
        opts.horizon *= 0.5;
    }
    Err(Error::InvalidParameter("no contracting horizon within the allowed halvings"))
}
