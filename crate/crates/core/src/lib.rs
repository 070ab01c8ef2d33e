//! Exact local theory of binary quadratic forms over `Z_p` and the mean
//! value of `h_F R_F` over quadratic fields with local conditions.
//!
//! The local side counts orbits, stabilizers and congruence solutions over
//! `Z/p^n` and evaluates orbital volumes exactly; the global side sweeps
//! fundamental discriminants, computing class numbers and regulators, and
//! compares the conditioned sums with the predicted constants.

pub mod algebra;
pub mod cli;
pub mod densities;
pub mod error;
pub mod global;
pub mod mean_value;
pub mod orbits;
pub mod residue;

pub use error::{Error, Result};
