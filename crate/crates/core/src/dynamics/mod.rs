//! Right-hand sides of the ENPP/NSNPP system, the exponential Heun stepper,
//! the Picard scheme and the lifespan bound.
//!
//! The system on the torus, with `ψ = ∇φ = ∇(-Δ)^{-1}(p - n)`:
//!
//! ```text
//! u_t = P(-u·∇u + (n - p)ψ) + νΔu
//! n_t = -u·∇n + Δn - div(nψ)
//! p_t = -u·∇p + Δp + div(pψ)
//! ```

mod lifespan;
mod picard;
mod rhs;
mod state;
mod stepper;

pub use lifespan::{calibrate_lifespan, lifespan_lower_bound, LifespanCalibration, MeasureIndices};
pub use picard::{picard_solve, IterationReport, PicardOptions, PicardSolution};
pub use rhs::{ModifiedPieces, TransportPieces};
pub use state::{SimState, Tendencies};
pub use stepper::{heat_propagate, Dynamics, Formulation, DEFAULT_CFL};
