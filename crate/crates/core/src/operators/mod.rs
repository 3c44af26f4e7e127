//! Fourier-multiplier and block-product operators on the torus.
//!
//! Every inverse Laplacian here returns zero on the mean mode; `(-Δ)^{-1}` is
//! undefined there and the mean of the velocity is conserved by the dynamics
//! on its own.

mod bony;
mod commutator;
mod leray;
mod pi;
mod potential;

pub use bony::{bony_decompose, paraproduct, paraproduct_terms, remainder, BlockDecomposition, BonyParts};
pub use commutator::{commutator, commutator_estimate, CommutatorEstimate};
pub use leray::leray_project;
pub use pi::{pi_bilinear, pi_decompose, pi_divergence_identity, trace_product, PiParts};
pub use potential::{
    check_neutral, grad_inv_laplacian, inv_laplacian, renormalize_charge, solve_potential, ChargePolicy, Potential,
};
