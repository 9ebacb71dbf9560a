//! The verification suite behind the `hardy` binary: a registry of claim
//! checks, parameter sweeps, and JSON/CSV report emission.

pub mod claims;
pub mod config;
pub mod golden;
pub mod record;
pub mod sweep;

pub use claims::{registry, run_suite, Claim, Context, Topic};
pub use config::{ConfigError, Format, SuiteConfig};
pub use record::{ClaimRecord, SuiteReport};
