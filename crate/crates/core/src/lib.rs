//! Finite-dimensional quantum dynamics.
//!
//! Closed systems are integrated with the implicit midpoint rule; open systems
//! follow the Lindblad equation in vectorized form. Around those sit measurement,
//! the rotating wave approximation with its error bounds, and entanglement
//! diagnostics. Everything is dense and in units where hbar = 1.

// `!(x <= tol)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod closed;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod open;
pub mod quantum;
pub mod random;

pub use error::{QdynError, Result};
