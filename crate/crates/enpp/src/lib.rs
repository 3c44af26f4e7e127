//! File formats, configuration and experiment drivers around `enpp-core`.
//!
//! The `enpp` binary is a thin front end over [`run`] and [`invlimit`]; the
//! library is what the integration tests drive.

pub mod config;
pub mod error;
pub mod invlimit;
pub mod presets;
pub mod report;
pub mod run;
pub mod snapshot;

pub use config::{parse_config, parse_config_str, RunConfig};
pub use error::{AppError, AppResult, ConfigError};
