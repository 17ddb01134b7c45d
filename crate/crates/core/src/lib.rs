//! Constrained Nevanlinna-Pick interpolation.
//!
//! Decides whether data `(z_i, W_i)` admit an interpolant in the unit ball of
//! `ℂ + B·H∞` (for a finite Blaschke product `B`, by default `z²`), builds the
//! Pick-type matrices involved, describes solution sets as matrix balls,
//! computes interpolation bodies and, for scalar data, constructs and
//! verifies actual interpolants.

pub mod body;
pub mod data;
pub mod error;
pub mod feasibility;
pub mod interpolant;
pub mod linalg;
pub mod kernels;
pub mod pick;
mod search;

pub use data::{BlaschkeSpec, DataSet};
pub use error::{Error, Result};
pub use linalg::{CMat, ToleranceConfig};
pub use num_complex::Complex64;
