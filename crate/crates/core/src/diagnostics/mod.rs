//! Monitored time series: invariant reports with violation flags, the
//! blow-up functional `∫‖∇u‖_∞` and Besov-norm trajectories.
//!
//! Time integrals use the left rectangle rule throughout, and every monitor
//! can be fed one state at a time so long runs need not be kept in memory.

mod besov_table;
mod blowup;
mod invariants;

pub use besov_table::{besov_trajectory, BesovTable, Quantity};
pub use blowup::{blowup_monitor, BlowupMonitor};
pub use invariants::{
    invariant_report, Invariant, InvariantMonitor, InvariantReport, Sample, Tolerances, Violation, LP_EXPONENTS,
};
