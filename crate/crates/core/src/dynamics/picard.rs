//! The Picard scheme: iterate `m + 1` solves the linear system
//!
//! ```text
//! u_t + u^m·∇u + Π(u^m, u^m) = P((n - p)^m ψ^m) + νΔu
//! n_t - Δn = -(T_{u^m}∇n^m + T_{∇n^m}u^m + div R(u^m, n^m)) - div(n^m ψ^m)
//! p_t - Δp = -(T_{u^m}∇p^m + T_{∇p^m}u^m + div R(u^m, p^m)) + div(p^m ψ^m)
//! ```
//!
//! from the initial data, starting at `(u₀, e^{tΔ}n₀, e^{tΔ}p₀)`. Each linear
//! solve uses the stepper's exponential Heun scheme with coefficients frozen
//! from iterate `m`: the predictor stage reads sample `k`, the corrector
//! sample `k + 1`. The fixed point therefore differs from the directly
//! stepped solution by `O(dt²)`.

use alloc::vec::Vec;

use super::rhs::{electro, transport_pieces};
use super::stepper::diffuse;
use super::{Dynamics, MeasureIndices, SimState};
use crate::littlewood_paley::BlockSeries;
use crate::operators::{check_neutral, pi_bilinear};
use crate::{Error, Field, Result, VectorField};

/// Parameters of [`picard_solve`].
#[derive(Debug, Clone)]
pub struct PicardOptions {
    /// Horizon `T`.
    pub horizon: f64,
    /// Time steps on `[0, T]`.
    pub steps: usize,
    /// Largest number of new iterates.
    pub max_iterations: usize,
    /// Stop once `F^m` drops below this.
    pub tolerance: f64,
    /// Norm indices for `E^m` and `F^m`.
    pub indices: MeasureIndices,
}

impl PicardOptions {
    /// Defaults: 20 iterations, tolerance `1e-8`, default indices.
    pub fn new(horizon: f64, steps: usize) -> Self {
        Self {
            horizon,
            steps,
            max_iterations: 20,
            tolerance: 1e-8,
            indices: MeasureIndices::default(),
        }
    }

    fn dt(&self) -> f64 {
        self.horizon / self.steps as f64
    }
}

/// Energies and differences of the Picard sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationReport {
    /// `E^m(T)` for `m = 0, 1, …`.
    pub energies: Vec<f64>,
    /// `F^m(T) = ‖(u, n, p)^{m+1} - (u, n, p)^m‖` for `m = 0, 1, …`.
    pub differences: Vec<f64>,
    /// `F^m` fell below the tolerance.
    pub converged: bool,
    /// Iterates computed beyond iterate 0.
    pub iterations: usize,
    /// Three consecutive ratios `F^{m+1}/F^m ≥ 1` were seen.
    pub non_contracting: bool,
}

impl IterationReport {
    /// `F^{m+1}/F^m`, skipping pairs where `F^m = 0`.
    pub fn ratios(&self) -> Vec<f64> {
        self.differences
            .windows(2)
            .filter(|w| w[0] > 0.0)
            .map(|w| w[1] / w[0])
            .collect()
    }
}

/// Final iterate and its report.
#[derive(Debug, Clone)]
pub struct PicardSolution {
    /// Samples `t_k = k T / steps`, `k = 0..=steps`, of the last iterate.
    pub trajectory: Vec<SimState>,
    /// Convergence history.
    pub report: IterationReport,
}

struct Trajectory {
    u: Vec<VectorField>,
    n: Vec<Field>,
    p: Vec<Field>,
}

/// Frozen sources of one iterate at one sample.
struct Sources {
    advecting: VectorField,
    force: VectorField,
    n: Field,
    p: Field,
}

const SOLENOIDAL_TOL: f64 = 1e-8;

/// Run the Picard iteration on `[0, options.horizon]` from `initial`.
///
/// Non-contraction is reported in the result rather than raised.
pub fn picard_solve(dynamics: &Dynamics, initial: &SimState, options: &PicardOptions) -> Result<PicardSolution> {
    dynamics.check_state(initial)?;
    if !(options.horizon > 0.0) || !options.horizon.is_finite() || options.steps == 0 {
        return Err(Error::InvalidParameter("Picard horizon and step count must be positive"));
    }
    if !(options.tolerance > 0.0) {
        return Err(Error::InvalidParameter("Picard tolerance must be positive"));
    }
    check_neutral(&initial.n, &initial.p)?;
    let div = initial.u.divergence().lp_norm(2.0)?;
    if div > SOLENOIDAL_TOL * initial.u.lp_norm(2.0)?.max(1.0) {
        return Err(Error::NotDivergenceFree(div));
    }

    let dt = options.dt();
    let samples = options.steps + 1;
    let mut current = Trajectory {
        u: alloc::vec![initial.u.clone(); samples],
        n: (0..samples).map(|k| diffuse(&initial.n, k as f64 * dt)).collect(),
        p: (0..samples).map(|k| diffuse(&initial.p, k as f64 * dt)).collect(),
    };
    let mut report = IterationReport {
        energies: alloc::vec![energy(dynamics, &current, dt, &options.indices)?],
        differences: Vec::new(),
        converged: false,
        iterations: 0,
        non_contracting: false,
    };
    let mut streak = 0;
    while report.iterations < options.max_iterations {
        let next = linear_solve(dynamics, initial, &current, dt)?;
        let f = difference(dynamics, &next, &current, dt, &options.indices)?;
        if !f.is_finite() {
            return Err(Error::NonFinite(options.horizon));
        }
        report.iterations += 1;
        report.energies.push(energy(dynamics, &next, dt, &options.indices)?);
        if let Some(&prev) = report.differences.last() {
            streak = if prev > 0.0 && f >= prev { streak + 1 } else { 0 };
        }
        report.differences.push(f);
        current = next;
        if f < options.tolerance {
            report.converged = true;
            break;
        }
        if streak >= 3 {
            report.non_contracting = true;
            break;
        }
    }
    let trajectory = (0..samples)
        .map(|k| SimState {
            u: current.u[k].clone(),
            n: current.n[k].clone(),
            p: current.p[k].clone(),
            t: initial.t + k as f64 * dt,
            nu: initial.nu,
        })
        .collect();
    Ok(PicardSolution { trajectory, report })
}

fn sources(dynamics: &Dynamics, traj: &Trajectory, k: usize) -> Result<Sources> {
    let part = dynamics.partition();
    let (u, n, p) = (&traj.u[k], &traj.n[k], &traj.p[k]);
    let e = electro(n, p)?;
    let force = &e.force - &pi_bilinear(part, u, u)?;
    let tn = transport_pieces(part, u, n)?.sum();
    let tp = transport_pieces(part, u, p)?.sum();
    Ok(Sources {
        advecting: u.clone(),
        force,
        n: -&(&tn + &e.flux_n),
        p: &e.flux_p - &tp,
    })
}

fn linear_solve(dynamics: &Dynamics, initial: &SimState, frozen: &Trajectory, dt: f64) -> Result<Trajectory> {
    let samples = frozen.u.len();
    let nu = initial.nu;
    let mut out = Trajectory {
        u: Vec::with_capacity(samples),
        n: Vec::with_capacity(samples),
        p: Vec::with_capacity(samples),
    };
    let (mut u, mut n, mut p) = (initial.u.clone(), initial.n.clone(), initial.p.clone());
    let mut here = sources(dynamics, frozen, 0)?;
    out.u.push(u.clone());
    out.n.push(n.clone());
    out.p.push(p.clone());
    for k in 0..samples - 1 {
        let there = sources(dynamics, frozen, k + 1)?;
        let du0 = &here.force - &here.advecting.advect(&u)?;
        let ut = diffuse_vector(&(&u + &du0.scaled(dt)), nu * dt);
        let du1 = &there.force - &there.advecting.advect(&ut)?;
        u = &diffuse_vector(&(&u + &du0.scaled(0.5 * dt)), nu * dt) + &du1.scaled(0.5 * dt);
        n = &diffuse(&(&n + &here.n.scaled(0.5 * dt)), dt) + &there.n.scaled(0.5 * dt);
        p = &diffuse(&(&p + &here.p.scaled(0.5 * dt)), dt) + &there.p.scaled(0.5 * dt);
        u = u.dealias();
        n = n.dealias();
        p = p.dealias();
        out.u.push(u.clone());
        out.n.push(n.clone());
        out.p.push(p.clone());
        here = there;
    }
    Ok(out)
}

fn diffuse_vector(v: &VectorField, t: f64) -> VectorField {
    v.map(|c| diffuse(c, t))
}

/// `‖u‖_{L̃^∞(B^{s₁})} + Σ_{n,p} (‖·‖_{L̃^∞(B^{s₂})} + ‖·‖_{L̃^1(B^{s₂+2})})`.
fn energy(dynamics: &Dynamics, traj: &Trajectory, dt: f64, idx: &MeasureIndices) -> Result<f64> {
    let part = dynamics.partition();
    let vs = idx.velocity()?;
    let cs = idx.charge()?;
    let mut total = BlockSeries::uniform(part, &traj.u, dt, vs.p)?.timespace_norm(vs.s, f64::INFINITY, vs.r)?;
    for series in [&traj.n, &traj.p] {
        let b = BlockSeries::uniform(part, series, dt, cs.p)?;
        total += b.timespace_norm(cs.s, f64::INFINITY, cs.r)? + b.timespace_norm(cs.s + 2.0, 1.0, cs.r)?;
    }
    Ok(total)
}

/// `‖δu‖_{L̃^∞(B^{s₁-1})} + Σ_{n,p} (‖δ·‖_{L̃^∞(B^{s₂-1})} + ‖δ·‖_{L̃^1(B^{s₂+1})})`.
fn difference(dynamics: &Dynamics, a: &Trajectory, b: &Trajectory, dt: f64, idx: &MeasureIndices) -> Result<f64> {
    let part = dynamics.partition();
    let vs = idx.velocity_difference()?;
    let cs = idx.charge_difference()?;
    let du: Vec<VectorField> = a.u.iter().zip(&b.u).map(|(x, y)| x - y).collect();
    let mut total = BlockSeries::uniform(part, &du, dt, vs.p)?.timespace_norm(vs.s, f64::INFINITY, vs.r)?;
    for (x, y) in [(&a.n, &b.n), (&a.p, &b.p)] {
        let d: Vec<Field> = x.iter().zip(y).map(|(f, g)| f - g).collect();
        let s = BlockSeries::uniform(part, &d, dt, cs.p)?;
        total += s.timespace_norm(cs.s, f64::INFINITY, cs.r)? + s.timespace_norm(cs.s + 2.0, 1.0, cs.r)?;
    }
    Ok(total)
}
