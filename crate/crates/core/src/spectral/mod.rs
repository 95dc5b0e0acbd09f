//! Neumann eigenbasis of the Laplace–Beltrami operator on the closed upper
//! half-sphere `S²₊ = {ω ∈ S² : ω₃ ≥ 0}`.
//!
//! The eigenfunctions are the real spherical harmonics that are even under
//! `ω₃ → −ω₃` (`l + |m|` even), rescaled by `√2` so that they are orthonormal
//! in `L²(S²₊)`. Evenness is what makes the normal derivative vanish on the
//! equator. With this convention `φ_(0,0) = 1/√(2π)`, `φ_(1,1) = √(3/(2π)) ω₁`
//! and `φ_(1,−1) = √(3/(2π)) ω₂`.

mod basis;
mod diagnostics;
mod field;
mod legendre;
mod quadrature;

pub use basis::{eval_full_sphere, eval_mode, Eigenmode, ModeBasis, MAX_DEGREE};
pub use diagnostics::{equator_normal_derivative, is_even_at, laplace_beltrami_fd, spectral_norms, SpectralNorms};
pub use field::{Projector, SpectralField, KERNEL_MODES};
pub use legendre::{gauss_legendre, reduced_legendre};
pub use quadrature::QuadratureRule;
