//! Normal integral bases for the cyclic quintic fields of Emma Lehmer.

pub mod error;
pub mod factor;
pub mod fixtures;
pub mod invariants;
pub mod nib;
pub mod nib_enum;
pub mod integral_basis;
mod linalg;
pub mod quintic_field;
pub mod report;
pub mod zeta5;

pub use error::{Error, Result};
