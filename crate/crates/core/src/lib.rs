//! Exact structure-constant algebra for Courant algebroids, 1-truncated
//! conformal algebras, and the graded vertex Poisson algebras built from them.

pub mod cli;
pub mod courant;
pub mod error;
pub mod format;
pub mod forward;
pub mod linear;
pub mod par;
pub mod quotient;
pub mod report;
pub mod scalar;
pub mod selftest;
pub mod tca;
pub mod vlie;
pub mod vpa;

pub use error::{Error, Result};
