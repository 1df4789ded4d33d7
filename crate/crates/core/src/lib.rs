//! Globally hyperbolic moment equations for the 1D Boltzmann-BGK equation.
//!
//! The crate covers the characteristic structure of Grad's moment system and
//! its hyperbolic regularization (exact characteristic polynomials,
//! closed-form eigenvectors, Riemann invariants, wave classification) and a
//! first-order path-conservative finite-volume solver, together with a
//! discrete-velocity BGK reference solver.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod dvm;
pub mod error;
pub mod hermite;
pub mod hme;
pub mod moment;
pub mod ode;
pub mod poly;
pub mod solver;

pub use error::{Error, Result};
