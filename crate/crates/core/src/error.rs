use thiserror::Error;

/// Errors produced by the spectral toolkit and the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Grid parameters outside the supported range.
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    /// A buffer does not hold one value per grid site.
    #[error("size mismatch: expected {expected} values, found {found}")]
    SizeMismatch {
        /// Number of grid sites.
        expected: usize,
        /// Length of the offending buffer.
        found: usize,
    },
    /// Two operands live on different grids.
    #[error("operands are defined on different grids")]
    GridMismatch,
    /// A vector field with the wrong number of components.
    #[error("vector field needs {expected} components, found {found}")]
    ComponentMismatch {
        /// Grid dimension.
        expected: usize,
        /// Components supplied.
        found: usize,
    },
    /// Lebesgue/summation exponent outside `[1, ∞]`.
    #[error("exponent {0} outside [1, inf]")]
    InvalidExponent(f64),
    /// Dyadic block index outside `-1..=j_max`.
    #[error("block index {j} outside -1..={j_max}")]
    BlockOutOfRange {
        /// Requested index.
        j: i32,
        /// Highest resolved block.
        j_max: i32,
    },
    /// Field has spectral content outside the requested annulus.
    #[error("field is not band-limited to block {j} (relative leakage {leakage:e})")]
    NotBandLimited {
        /// Block index.
        j: i32,
        /// Relative spectral energy outside the annulus.
        leakage: f64,
    },
    /// Total negative and positive charge differ; torus Poisson has no solution.
    #[error("charges are not neutral: mean(n) = {mean_n}, mean(p) = {mean_p}")]
    NonNeutral {
        /// Mean of the negative charge density.
        mean_n: f64,
        /// Mean of the positive charge density.
        mean_p: f64,
    },
    /// An operator that needs a zero-mean input received a nonzero mean.
    #[error("input has nonzero mean {0:e}")]
    NonzeroMean(f64),
    /// An operator that needs solenoidal input received a divergent field.
    #[error("input is not divergence-free (|div| = {0:e})")]
    NotDivergenceFree(f64),
    /// Time step exceeds the advective CFL bound.
    #[error("time step {dt} exceeds CFL limit {limit}")]
    CflViolation {
        /// Requested step.
        dt: f64,
        /// Largest admissible step.
        limit: f64,
    },
    /// The state became non-finite.
    #[error("non-finite values encountered at t = {0}")]
    NonFinite(f64),
    /// Empty time series.
    #[error("time series is empty")]
    EmptySeries,
    /// Any other parameter outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

/// Crate-wide result alias.
pub type Result<T, E = Error> = core::result::Result<T, E>;
