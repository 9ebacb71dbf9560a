//! Continuous and discrete Hardy operators, their mean-zero corrections, and
//! the logarithmically weighted norms that govern integrability of the image.

pub mod cont_ops;
pub mod envelope;
pub mod error;
pub mod funcspace;
pub mod numeric;
pub mod quad;
pub mod report;
pub mod seq_ops;
pub mod syntax;

pub use error::{HardyError, Result};
