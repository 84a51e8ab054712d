//! Command-line front end for `rcvv`: JSON persistence of forms and the
//! bracket, pairing, adjoint and verification commands.

pub mod commands;
pub mod error;
pub mod format;

pub use error::CliError;
