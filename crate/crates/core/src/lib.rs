//! Bigelow generators, the R grading and the ρ-filtered hat-Floer complex
//! of the branched double cover of a plat-closed braid.

pub mod braid;
pub mod cli;
pub mod cover;
pub mod curve;
pub mod error;
pub mod filtered;
pub mod fork;
pub mod grading;
pub mod linalg;
pub mod pipeline;
pub mod scalar;
pub mod twist;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default exact scalar.
pub type Rat = num_rational::BigRational;
