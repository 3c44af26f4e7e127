//! Pseudo-spectral harmonic analysis and time integration for the
//! Euler/Navier-Stokes-Nernst-Planck-Poisson (ENPP/NSNPP) system on the
//! periodic torus `[0, L)^d`, `d ∈ {2, 3}`.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. It is organised
//! bottom-up:
//!
//! * [`grid`], [`fft`], [`field`], [`norms`]: the torus discretization, the
//!   radix-2 transforms, scalar/vector fields and Lebesgue norms.
//! * [`littlewood_paley`]: the dyadic partition of unity, the blocks `Δ_j`
//!   and `S_j`, Besov and time-space Besov norms, Bernstein checks.
//! * [`operators`]: Bony decomposition, Leray projector, the pressure-encoding
//!   bilinear operator `Π`, the transport commutator and the Poisson solve.
//! * [`dynamics`]: right-hand sides of both formulations, the exponential
//!   Heun stepper, the Picard scheme and the lifespan bound.
//! * [`diagnostics`]: invariant reports, the blow-up functional and Besov
//!   trajectories.
//!
//! ```
//! use enpp_core::{Grid, Field};
//!
//! let grid = Grid::new(2, 16, core::f64::consts::TAU).unwrap();
//! let f = Field::from_fn(&grid, |x| libm::sin(x[0]));
//! assert!((f.lp_norm(2.0).unwrap() - core::f64::consts::SQRT_2 * core::f64::consts::PI).abs() < 1e-12);
//! ```
#![no_std]
#![warn(missing_docs)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod diagnostics;
pub mod dynamics;
mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod littlewood_paley;
pub mod norms;
pub mod operators;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use field::{Field, VectorField};
pub use grid::Grid;
pub use littlewood_paley::{BesovSpec, DyadicPartition};
pub use num_complex::Complex64;
