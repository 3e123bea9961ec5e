//! Verification and derivation engine for Ramanujan-type series attached to
//! CM points on the Shimura curve X6*.
//!
//! The crate checks the archimedean identities to hundreds of digits, the
//! 5-adic analogues to tens of digits, and rebuilds the algebraic chain that
//! turns a table of Hecke eigen-data into root certificates for the linear
//! coefficients of the series.

pub mod arith;
pub mod datafile;
pub mod driver;
pub mod error;
pub mod gamma;
pub mod hecke;
pub mod hyperseries;
pub mod numkernel;
pub mod padic;
pub mod polys;
pub mod quaternion;

pub use error::{Error, Result};
