//! Exact weight spectra of Generalized Reed-Muller codes `RM_p(r, m)`,
//! density gaps around non-p-rational targets, and the polynomial
//! rank/regularity machinery used to compress a low-degree polynomial to a
//! function of boundedly many inputs.

pub mod budget;
pub mod cli;
pub mod density;
pub mod distributions;
mod error;
pub mod field_poly;
pub mod ratio;
pub mod spectrum;
pub mod structure;

pub use budget::Budget;
pub use error::{GrmError, Result};

/// Version stamped into cache files and spectrum documents.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
