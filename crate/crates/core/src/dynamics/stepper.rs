use super::{SimState, Tendencies};
use crate::littlewood_paley::DyadicPartition;
use crate::operators::leray_project;
use crate::{Error, Field, Grid, Result, VectorField};

/// Default advective Courant number.
pub const DEFAULT_CFL: f64 = 0.5;

/// Which form of the momentum and charge equations to integrate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Formulation {
    /// Leray-projected advection and plain products.
    #[default]
    Original,
    /// `Π(u, u)` and Bony-decomposed charge transport.
    Modified,
}

/// Solver context: grid, dyadic partition, formulation and Courant number.
#[derive(Debug, Clone)]
pub struct Dynamics {
    grid: Grid,
    partition: DyadicPartition,
    formulation: Formulation,
    cfl: f64,
}

/// `e^{tΔ} f`, symbol `e^{-t|k̃|²}`.
pub fn heat_propagate(f: &Field, t: f64) -> Result<Field> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter("heat propagation time must be finite and nonnegative"));
    }
    Ok(diffuse(f, t))
}

pub(crate) fn diffuse(f: &Field, t: f64) -> Field {
    if t == 0.0 {
        return f.clone();
    }
    let grid = f.grid().clone();
    f.apply_real_multiplier(|s| libm::exp(-t * grid.resolved_sq(s)))
}

impl Dynamics {
    /// Original formulation with Courant number [`DEFAULT_CFL`].
    pub fn new(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            partition: DyadicPartition::new(grid),
            formulation: Formulation::Original,
            cfl: DEFAULT_CFL,
        }
    }

    /// Select the formulation.
    pub fn with_formulation(mut self, formulation: Formulation) -> Self {
        self.formulation = formulation;
        self
    }

    /// Set the Courant number.
    pub fn with_cfl(mut self, cfl: f64) -> Result<Self> {
        if !(cfl > 0.0) || !cfl.is_finite() {
            return Err(Error::InvalidParameter("CFL number must be positive"));
        }
        self.cfl = cfl;
        Ok(self)
    }

    /// Grid.
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Dyadic partition of the grid.
    pub fn partition(&self) -> &DyadicPartition {
        &self.partition
    }

    /// Formulation in use.
    pub fn formulation(&self) -> Formulation {
        self.formulation
    }

    /// Courant number.
    pub fn cfl(&self) -> f64 {
        self.cfl
    }

    pub(crate) fn check_state(&self, state: &SimState) -> Result<()> {
        self.grid.check_same(state.grid())?;
        if state.u.dim() != self.grid.dim() {
            return Err(Error::ComponentMismatch {
                expected: self.grid.dim(),
                found: state.u.dim(),
            });
        }
        Ok(())
    }

    /// Largest admissible step `cfl · (L/N) / max(‖u‖_∞, 1)`.
    pub fn cfl_limit(&self, state: &SimState) -> f64 {
        let umax = state.u.lp_norm(f64::INFINITY).expect("valid exponent");
        self.cfl * self.grid.spacing() / umax.max(1.0)
    }

    /// One integrating-factor Heun step: diffusion exact in Fourier space,
    /// nonlinear terms by the explicit trapezoidal predictor-corrector,
    ///
    /// ```text
    /// ỹ  = E(y₀ + dt N(y₀))
    /// y₁ = E(y₀ + dt/2 N(y₀)) + dt/2 N(ỹ),    E = e^{dt L}
    /// ```
    ///
    /// followed by dealiasing and a Leray projection of `u`.
    pub fn step(&self, state: &SimState, dt: f64) -> Result<SimState> {
        self.check_state(state)?;
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidParameter("time step must be positive"));
        }
        let limit = self.cfl_limit(state);
        if dt > limit * (1.0 + 1e-12) {
            return Err(Error::CflViolation { dt, limit });
        }
        let n0 = self.nonlinear(state)?;
        let mut predictor = self.combine(state, &n0, dt, dt);
        predictor.t = state.t + dt;
        let n1 = self.nonlinear(&predictor)?;
        let mut next = self.combine(state, &n0, 0.5 * dt, dt);
        next.u = &next.u + &n1.du.scaled(0.5 * dt);
        next.n = &next.n + &n1.dn.scaled(0.5 * dt);
        next.p = &next.p + &n1.dp.scaled(0.5 * dt);
        next.u = leray_project(&next.u).dealias();
        next.n = next.n.dealias();
        next.p = next.p.dealias();
        next.t = state.t + dt;
        if !next.is_finite() {
            return Err(Error::NonFinite(next.t));
        }
        Ok(next)
    }

    /// `E(y + weight · N)` over a step of length `dt`.
    fn combine(&self, state: &SimState, tend: &Tendencies, weight: f64, dt: f64) -> SimState {
        let u = VectorField::new(
            state
                .u
                .components()
                .iter()
                .zip(tend.du.components())
                .map(|(c, d)| diffuse(&(c + &d.scaled(weight)), state.nu * dt))
                .collect(),
        )
        .expect("shared grid");
        let n = diffuse(&(&state.n + &tend.dn.scaled(weight)), dt);
        let p = diffuse(&(&state.p + &tend.dp.scaled(weight)), dt);
        state.with_fields(u, n, p)
    }

    /// `steps` calls to [`Dynamics::step`].
    pub fn advance(&self, state: &SimState, dt: f64, steps: usize) -> Result<SimState> {
        let mut s = state.clone();
        for _ in 0..steps {
            s = self.step(&s, dt)?;
        }
        Ok(s)
    }
}
