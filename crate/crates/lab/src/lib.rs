//! Command line, file formats and reports for `parabolic-lab-core`.
//!
//! - [`canonical`]: byte-stable JSON.
//! - [`io`]: grid-function, quadrature and trajectory CSV; spectral-field JSON.
//! - [`descriptor`]: textual initial data for half-sphere fields.
//! - [`report`]: the envelope every subcommand writes.
//! - [`cli`]: argument parsing and the subcommands.

pub mod canonical;
pub mod cli;
pub mod descriptor;
pub mod io;
pub mod report;
