//! Numerical laboratory for fourth-order parabolic problems.
//!
//! The crate is `no_std` with `alloc`. It contains:
//!
//! - [`holder`]: sampled space-time functions, finite-difference derivatives
//!   and discrete (pairwise) parabolic Hölder seminorms and norms.
//! - [`spectral`]: the Neumann eigenbasis of the Laplace–Beltrami operator on
//!   the upper half-sphere, product quadrature, projection and the
//!   kernel/complement split.
//! - [`evolution`]: mode-exact solutions of `∂ₜu + Lu = f` for
//!   `L ∈ {Δ², ½Δ(Δ+2)}` with piecewise-linear forcing, and the spectral
//!   inverse of `Δ²`.
//! - [`geometry`]: parabolic balls, T-uniform coverings, subadditivity and
//!   absorption checks, the oblique reflection map and difference quotients.
//! - [`experiments`]: decay, Schauder-ratio and interpolation experiments.
//! - [`interval`]: the flat oracle on `[0, π]` with a cosine basis and an
//!   independent finite-difference stepper.
//!
//! IO, file formats and the command line live in the `parabolic-lab` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod evolution;
pub mod linalg;
pub mod spectral;
pub(crate) mod math;

pub mod experiments;
pub mod geometry;
pub mod holder;
pub mod interval;

pub use error::{Error, Result};
