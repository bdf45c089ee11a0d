//! Exact computer algebra for walled Brauer-Clifford superalgebras `BC_{r,t}`,
//! their affine versions `BC^aff_{r,t}` and cyclotomic quotients.
//!
//! All arithmetic is exact: coefficients are polynomials over the rationals in
//! the odd parameters `w1, w3, ...` (see [`scalar`]).

pub mod affine;
pub mod bc;
pub mod clifford;
pub mod cyclotomic;
pub mod diagram;
pub mod error;
pub mod oracle;
pub mod perm;
pub mod relation;
pub mod scalar;
mod text;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;
