//! The discrete operators
//!
//! ```text
//! (Γa)_n = (1/n) Σ_{k≤n} a_k        (Γ̃a)_n = (Γa)_n - (Σ a_k)/(n+1)
//! ```
//!
//! on rational lists, exactly, and on generated sequences with bounded tails.

mod catalog;
mod checks;
mod harmonic;
mod ops;
mod rational;
mod seq;
mod series;

pub use catalog::{parse_sequence_text, read_sequence_file, sequence, SequenceCatalog, SequenceFamily};
pub use checks::{
    disc_equivalence_ratio, disc_mean_check, DiscEquivalence, DiscMeanReport, DiscReport, Increment,
    DISC_REPORT_SCHEMA, INCREMENT_BAND, INCREMENT_SCALES,
};
pub use harmonic::{gamma_residual, gamma_residuals, harmonic, harmonic_dd, harmonic_real, EULER_GAMMA};
pub use ops::{
    cesaro, hardy_ratio, j1_sum, j2_sum, l1_log_weight, l1_norm_mod, lp_norm, modified_cesaro, total_sum,
    DiscHardyRatio, PreparedSeq, Scalar, EXACT_LIMIT,
};
pub use rational::Rational;
pub use seq::{DecayClass, SeqSpec};
pub use series::{SeqConfig, Series, SeriesResult};
