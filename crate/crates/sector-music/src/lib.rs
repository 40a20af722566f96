//! Direction-of-arrival estimation for uniform linear arrays with MUSIC,
//! with and without a DPSS (prolate sequence) sector prefilter, plus the
//! closed-form SNR resolution threshold for two equal-power sources and a
//! Monte Carlo harness that measures the empirical threshold.

// Validation guards use negated comparisons (`!(x > 0.0)`) so NaN fails closed.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod array;
pub mod beamspace;
pub mod dpss;
pub mod error;
pub mod harness;
pub mod music;
pub mod signal;
pub mod threshold;

pub use error::{Error, Result};
