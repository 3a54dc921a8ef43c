//! Nonuniform Alikhanov (L2-1σ) time stepping for two-dimensional
//! time-fractional sub-diffusion and diffusion-wave equations with
//! time-space dependent coefficients.
//!
//! The crate is organised bottom-up:
//!
//! * [`timegrid`] builds graded or custom time meshes and checks the mesh assumption.
//! * [`kernels`] computes the discrete Caputo coefficients, complementary kernels,
//!   the sum-of-exponentials fast path and the kernel inequalities.
//! * [`coefficients`] holds the variable coefficients and the positive weight fields.
//! * [`spatial`] assembles the sparse finite-difference operators and solves linear systems.
//! * [`steppers`] marches the two problem classes in time.
//! * [`harness`] provides manufactured problems, convergence studies and table output.

pub mod coefficients;
pub mod error;
pub mod harness;
pub mod kernels;
pub mod spatial;
pub mod special;
pub mod steppers;
pub mod timegrid;

pub use error::{FracError, Result};
