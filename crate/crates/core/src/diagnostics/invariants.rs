use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::dynamics::SimState;
use crate::littlewood_paley::{besov_norm, DyadicPartition};
use crate::operators::{solve_potential, ChargePolicy};
use crate::{BesovSpec, Error, Result};

/// Exponents `a` whose `Σ_{n,p} ∫|·|^a` is tracked.
pub const LP_EXPONENTS: [f64; 2] = [2.0, 4.0];

/// Thresholds for the invariant checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// `‖div u‖_2 ≤ divergence · max(‖u‖_2, 1)`.
    pub divergence: f64,
    /// Mass drift relative to the initial `L¹` norm.
    pub mass: f64,
    /// Allowed undershoot below zero, relative to the initial maximum.
    pub positivity: f64,
    /// Relative growth of the `L^a` sums allowed per sample.
    pub lp_slack: f64,
    /// Relative slack on `‖∇φ‖_2 ≤ (L/2π)‖n - p‖_2`.
    pub potential: f64,
    /// Relative growth of the kinetic energy allowed per sample.
    pub energy_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            divergence: 1e-8,
            mass: 1e-10,
            positivity: 1e-6,
            lp_slack: 1e-6,
            potential: 1e-10,
            energy_slack: 1e-6,
        }
    }
}

/// The monitored properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Invariant {
    /// `div u = 0`.
    Divergence,
    /// `∫n` conserved.
    MassN,
    /// `∫p` conserved.
    MassP,
    /// `n ≥ 0` (checked only for nonnegative initial data).
    PositivityN,
    /// `p ≥ 0` (checked only for nonnegative initial data).
    PositivityP,
    /// `Σ_{n,p} ‖·‖_a^a` nonincreasing; the index points into [`LP_EXPONENTS`].
    LpDecay(usize),
    /// Poincaré bound on the electric field.
    Potential,
    /// Kinetic energy nonincreasing (viscous, charge-free runs only).
    KineticEnergy,
}

/// First time an invariant failed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    /// Which check.
    pub invariant: Invariant,
    /// Sample time.
    pub t: f64,
    /// Measured value.
    pub value: f64,
    /// The bound it crossed.
    pub bound: f64,
}

/// Diagnostics of one state.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    /// Time.
    pub t: f64,
    /// `‖div u‖_2`.
    pub div_u: f64,
    /// `min n`.
    pub min_n: f64,
    /// `min p`.
    pub min_p: f64,
    /// `∫n`.
    pub mass_n: f64,
    /// `∫p`.
    pub mass_p: f64,
    /// `‖n‖_a^a + ‖p‖_a^a` for each of [`LP_EXPONENTS`].
    pub lp_sums: [f64; 2],
    /// `‖∇φ‖_2`.
    pub grad_phi_l2: f64,
    /// `‖∇φ‖_∞`.
    pub grad_phi_linf: f64,
    /// `½‖u‖_2²`.
    pub kinetic_energy: f64,
    /// `[‖u‖, ‖n‖, ‖p‖]` in each requested Besov norm.
    pub besov: Vec<[f64; 3]>,
}

/// Samples plus the first violation of each invariant, in detection order.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantReport {
    /// One entry per pushed state.
    pub samples: Vec<Sample>,
    /// First violations.
    pub violations: Vec<Violation>,
    /// Besov norms recorded in [`Sample::besov`].
    pub specs: Vec<BesovSpec>,
}

impl InvariantReport {
    /// No invariant failed.
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// First violation of `invariant`, if any.
    pub fn violation(&self, invariant: Invariant) -> Option<&Violation> {
        self.violations.iter().find(|v| v.invariant == invariant)
    }
}

#[derive(Debug, Clone, Copy)]
struct Reference {
    mass: [f64; 2],
    l1: [f64; 2],
    nonnegative: bool,
    max_initial: f64,
    energy_checked: bool,
}

/// Incremental invariant checker; feed states in time order.
#[derive(Debug, Clone)]
pub struct InvariantMonitor<'a> {
    partition: &'a DyadicPartition,
    tol: Tolerances,
    reference: Option<Reference>,
    report: InvariantReport,
}

impl<'a> InvariantMonitor<'a> {
    /// Monitor recording the Besov norms in `specs`.
    pub fn new(partition: &'a DyadicPartition, specs: &[BesovSpec], tol: Tolerances) -> Self {
        Self {
            partition,
            tol,
            reference: None,
            report: InvariantReport {
                samples: Vec::new(),
                violations: Vec::new(),
                specs: specs.to_vec(),
            },
        }
    }

    /// Violations so far.
    pub fn violations(&self) -> &[Violation] {
        &self.report.violations
    }

    /// Measure `state` and check it against the previous sample.
    pub fn push(&mut self, state: &SimState) -> Result<()> {
        self.partition.grid().check_same(state.grid())?;
        if let Some(last) = self.report.samples.last() {
            if !(state.t > last.t) {
                return Err(Error::InvalidParameter("sample times must increase strictly"));
            }
        }
        if !state.is_finite() {
            return Err(Error::NonFinite(state.t));
        }
        let sample = self.measure(state)?;
        let reference = *self.reference.get_or_insert_with(|| {
            let (n, p) = (&state.n, &state.p);
            let charge = (n - p).lp_norm(f64::INFINITY).expect("valid exponent");
            let scale = n.lp_norm(f64::INFINITY).expect("valid exponent").max(1.0);
            Reference {
                mass: [sample.mass_n, sample.mass_p],
                l1: [
                    n.lp_norm(1.0).expect("valid exponent"),
                    p.lp_norm(1.0).expect("valid exponent"),
                ],
                nonnegative: sample.min_n >= 0.0 && sample.min_p >= 0.0,
                max_initial: n.max().max(p.max()),
                energy_checked: state.nu > 0.0 && charge <= 1e-12 * scale,
            }
        });
        self.check(state, &sample, &reference);
        self.report.samples.push(sample);
        Ok(())
    }

    /// The accumulated report.
    pub fn finish(self) -> InvariantReport {
        self.report
    }

    fn measure(&self, state: &SimState) -> Result<Sample> {
        let (u, n, p) = (&state.u, &state.n, &state.p);
        let potential = solve_potential(n, p, ChargePolicy::Renormalize)?;
        let mut lp_sums = [0.0; 2];
        for (sum, a) in lp_sums.iter_mut().zip(LP_EXPONENTS) {
            *sum = libm::pow(n.lp_norm(a)?, a) + libm::pow(p.lp_norm(a)?, a);
        }
        let besov = self
            .report
            .specs
            .iter()
            .map(|spec| {
                Ok([
                    besov_norm(self.partition, u, *spec)?,
                    besov_norm(self.partition, n, *spec)?,
                    besov_norm(self.partition, p, *spec)?,
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Sample {
            t: state.t,
            div_u: u.divergence().lp_norm(2.0)?,
            min_n: n.min(),
            min_p: p.min(),
            mass_n: n.integral(),
            mass_p: p.integral(),
            lp_sums,
            grad_phi_l2: potential.grad_phi.lp_norm(2.0)?,
            grad_phi_linf: potential.grad_phi.lp_norm(f64::INFINITY)?,
            kinetic_energy: u.kinetic_energy(),
            besov,
        })
    }

    fn flag(&mut self, invariant: Invariant, t: f64, value: f64, bound: f64) {
        if self.report.violation(invariant).is_none() {
            self.report.violations.push(Violation {
                invariant,
                t,
                value,
                bound,
            });
        }
    }

    fn check(&mut self, state: &SimState, s: &Sample, r: &Reference) {
        let tol = self.tol;
        let t = s.t;

        let u_l2 = state.u.lp_norm(2.0).expect("valid exponent");
        let bound = tol.divergence * u_l2.max(1.0);
        if s.div_u > bound {
            self.flag(Invariant::Divergence, t, s.div_u, bound);
        }

        for (k, (inv, mass)) in [(Invariant::MassN, s.mass_n), (Invariant::MassP, s.mass_p)]
            .into_iter()
            .enumerate()
        {
            let drift = (mass - r.mass[k]).abs();
            let bound = tol.mass * r.l1[k].max(f64::MIN_POSITIVE);
            if drift > bound {
                self.flag(inv, t, drift, bound);
            }
        }

        if r.nonnegative {
            let floor = -tol.positivity * r.max_initial;
            if s.min_n < floor {
                self.flag(Invariant::PositivityN, t, s.min_n, floor);
            }
            if s.min_p < floor {
                self.flag(Invariant::PositivityP, t, s.min_p, floor);
            }
        }

        let previous = self.report.samples.last().cloned();
        if let Some(prev) = &previous {
            if r.nonnegative {
                for k in 0..LP_EXPONENTS.len() {
                    let bound = prev.lp_sums[k] * (1.0 + tol.lp_slack);
                    if s.lp_sums[k] > bound {
                        self.flag(Invariant::LpDecay(k), t, s.lp_sums[k], bound);
                    }
                }
            }
            if r.energy_checked {
                let bound = prev.kinetic_energy * (1.0 + tol.energy_slack);
                if s.kinetic_energy > bound {
                    self.flag(Invariant::KineticEnergy, t, s.kinetic_energy, bound);
                }
            }
        }

        let length = state.grid().length();
        let charge = (&state.n - &state.p).shifted(state.p.mean() - state.n.mean());
        let bound = length / TAU * charge.lp_norm(2.0).expect("valid exponent") * (1.0 + tol.potential);
        if s.grad_phi_l2 > bound {
            self.flag(Invariant::Potential, t, s.grad_phi_l2, bound);
        }
    }
}

/// Check a stored trajectory in one go.
pub fn invariant_report(
    partition: &DyadicPartition,
    trajectory: &[SimState],
    specs: &[BesovSpec],
    tol: Tolerances,
) -> Result<InvariantReport> {
    if trajectory.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut monitor = InvariantMonitor::new(partition, specs, tol);
    for state in trajectory {
        monitor.push(state)?;
    }
    Ok(monitor.finish())
}
