//! Littlewood-Paley theory on the torus: the dyadic partition of unity,
//! the blocks `Δ_j` and cut-offs `S_j`, Besov norms and Bernstein checks.

mod besov;
mod bernstein;
mod partition;

pub use besov::{
    besov_norm, lebesgue_time_besov_norm, timespace_besov_norm, timespace_besov_norm_weighted, BesovSpec,
    BlockNorms, BlockSeries,
};
pub use bernstein::{check_bernstein, check_bernstein_like, BernsteinLikeReport, BernsteinReport};
pub use partition::{chi, phi, DyadicPartition, ANNULUS_INNER, ANNULUS_OUTER, BALL_RADIUS};
