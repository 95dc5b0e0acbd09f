//! Sampled space-time functions and discrete parabolic Hölder machinery.
//!
//! Seminorms are maxima over pairs of grid samples, so they bound the
//! continuum seminorms from below and obey the parabolic scaling law exactly.

mod analytic;
mod fd;
mod grid;
mod seminorm;

pub use analytic::{AnalyticFunction, BandLimited};
pub use fd::{fd_derivative, fornberg_weights, multi_indices, required_points, DerivativeTable};
pub use grid::{GridAxis, GridFunction, Region, SpaceTimeGrid, MIN_AXIS_POINTS};
pub use seminorm::{
    c41gamma_from_table, c41gamma_norm, d41_from_table, d41_seminorm, parabolic_seminorm,
    spatial_seminorm, spatial_seminorm_over, spatial_seminorm_sampled, spatial_witness,
    temporal_seminorm, temporal_seminorm_over, temporal_seminorm_sampled, temporal_witness,
    PairWitness,
};

use serde::{Deserialize, Serialize};

use crate::{math, Error, Result};

/// Default Hölder exponent.
pub const DEFAULT_GAMMA: f64 = 0.5;

/// `max(|x − y|, |t − s|^{1/4})`.
pub fn parabolic_distance(p: (&[f64], f64), q: (&[f64], f64)) -> Result<f64> {
    if p.0.len() != q.0.len() {
        return Err(Error::DimensionMismatch { expected: p.0.len(), found: q.0.len() });
    }
    let d2: f64 = p.0.iter().zip(q.0).map(|(a, b)| (a - b) * (a - b)).sum();
    let dt = math::sqrt(math::sqrt((p.1 - q.1).abs()));
    Ok(math::sqrt(d2).max(dt))
}

/// Hölder exponent `γ ∈ (0, 1)` together with a parabolic order `m ≤ 4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderExponents {
    gamma: f64,
    m: u32,
}

impl HolderExponents {
    pub fn new(gamma: f64, m: u32) -> Result<Self> {
        check_gamma(gamma)?;
        if m > 4 {
            return Err(Error::InvalidParameter(alloc::format!("parabolic order {m} exceeds 4")));
        }
        Ok(Self { gamma, m })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Derivative orders `(j, k)` whose spatial `γ`-seminorm enters `[u]^{(m)}`.
    pub fn spatial_terms(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..=self.m / 4).map(move |j| (j, self.m - 4 * j))
    }

    /// `(j, k, β)` with `β = (m + γ − k)/4 − j ∈ (0, 1)`, the temporal terms.
    pub fn temporal_terms(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        let m = self.m;
        (0..=m / 4).flat_map(move |j| {
            (0..=m - 4 * j).filter_map(move |k| {
                let beta = (m as f64 + self.gamma - k as f64) / 4.0 - j as f64;
                (beta > 0.0 && beta < 1.0).then_some((j, k, beta))
            })
        })
    }
}

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(alloc::format!("Hölder exponent {gamma} outside (0, 1)")))
    }
}
