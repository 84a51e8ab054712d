//! Rankin-Cohen brackets of vector-valued modular forms, their Jacobi and
//! skew-holomorphic Jacobi counterparts, and closed-form Petersson pairings
//! against Poincare series.
//!
//! Forms are stored as truncated q-expansions with exact rational
//! coefficients or complex MPFR floats. Pairing values come back as exact
//! symbolic expressions whenever the inputs are exact.

pub mod error;
pub mod fixtures;
pub mod jacobi;
pub mod numcheck;
pub mod number;
pub mod pairing;
pub mod qseries;
pub mod skewjacobi;
pub mod suites;
pub mod symbolic;
pub mod vvforms;

pub use error::{Error, Result};
pub use number::{Backend, BigComplex, Coeff};
pub use qseries::FourierSeries;
pub use vvforms::{MultiplierData, VVForm};
