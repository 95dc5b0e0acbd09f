//! Decay of homogeneous solutions of `∂ₜu + ½Δ(Δ+2)u = 0` on the half-sphere.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::evolution::{evolve, EvolutionOperator};
use crate::linalg::line_fit;
use crate::spectral::{Projector, SpectralField};
use crate::{math, Error, Result};

/// Fit window for the perpendicular norm, relative to its initial value.
pub const FIT_WINDOW: (f64, f64) = (1e-10, 1e-1);
/// Absolute floor below which a perpendicular norm is never fitted.
pub const FIT_FLOOR: f64 = 1e-13;
/// Smallest nonzero rate `½λ(λ−2)` over the complement of the kernel.
pub const SPECTRAL_GAP: f64 = 12.0;
const ENERGY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayNorm {
    L2,
    /// Largest absolute value on the projector's quadrature nodes.
    SupOnNodes,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub norm: DecayNorm,
    pub times: Vec<f64>,
    pub perp_norms: Vec<f64>,
    pub parallel_norms: Vec<f64>,
    pub total_norms: Vec<f64>,
    /// `−slope` of `log‖u⊥‖`; `None` when fewer than two usable points.
    pub fitted_rate: Option<f64>,
    pub fit_points: usize,
    /// Total norm at the last time.
    pub plateau: f64,
    /// `max |‖u∥(t)‖ − ‖u∥(0)‖|`.
    pub parallel_drift: f64,
    /// `e^{12t}‖u⊥(t)‖_{L²}` is non-increasing along the grid.
    pub energy_monotone: bool,
    pub zero_initial: bool,
}

/// Evolves `u0` without forcing and records the norms of the kernel part and
/// its complement. The grid must reach `t ≥ 1`.
pub fn decay_experiment(u0: &SpectralField, t_grid: &[f64], norm: DecayNorm) -> Result<DecayReport> {
    match t_grid.last() {
        Some(&t) if t >= 1.0 => {}
        _ => return Err(Error::InvalidTimeGrid("the grid must reach t ≥ 1".into())),
    }
    let traj = evolve(u0, None, EvolutionOperator::HalfDeltaDeltaPlus2, t_grid)?;
    let projector = match norm {
        DecayNorm::L2 => None,
        DecayNorm::SupOnNodes => Some(Projector::for_basis(u0.basis().clone())?),
    };
    let measure = |f: &SpectralField| -> Result<f64> {
        match &projector {
            None => Ok(f.l2_norm()),
            Some(p) => p.sup_on_nodes(f),
        }
    };
    let n = t_grid.len();
    let (mut perp_norms, mut parallel_norms, mut total_norms) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    let mut energy_monotone = true;
    let mut prev_energy = f64::INFINITY;
    for (state, &t) in traj.states.iter().zip(t_grid) {
        let (par, perp) = state.split_parallel_perp()?;
        perp_norms.push(measure(&perp)?);
        parallel_norms.push(measure(&par)?);
        total_norms.push(measure(state)?);
        let energy = math::exp(SPECTRAL_GAP * t) * perp.l2_norm();
        if energy > prev_energy * (1.0 + ENERGY_SLACK) + f64::MIN_POSITIVE {
            energy_monotone = false;
        }
        prev_energy = energy;
    }
    let parallel_drift = parallel_norms.iter().map(|v| (v - parallel_norms[0]).abs()).fold(0.0, f64::max);
    let (fitted_rate, fit_points) = fit_rate(t_grid, &perp_norms);
    Ok(DecayReport {
        norm,
        times: t_grid.to_vec(),
        plateau: *total_norms.last().expect("grid is nonempty"),
        perp_norms,
        parallel_norms,
        total_norms,
        fitted_rate,
        fit_points,
        parallel_drift,
        energy_monotone,
        zero_initial: u0.coeffs().iter().all(|&c| c == 0.0),
    })
}

/// Least squares on `log‖u⊥‖` inside [`FIT_WINDOW`], else on every point
/// above [`FIT_FLOOR`].
fn fit_rate(times: &[f64], perp: &[f64]) -> (Option<f64>, usize) {
    let initial = perp[0];
    let select = |keep: &dyn Fn(f64) -> bool| -> (Vec<f64>, Vec<f64>) {
        times.iter().zip(perp).filter(|(_, &p)| p > FIT_FLOOR && keep(p)).map(|(&t, &p)| (t, math::ln(p))).unzip()
    };
    let (mut xs, mut ys) = select(&|p| p >= FIT_WINDOW.0 * initial && p <= FIT_WINDOW.1 * initial);
    if xs.len() < 2 {
        (xs, ys) = select(&|_| true);
    }
    if xs.len() < 2 {
        return (None, xs.len());
    }
    (line_fit(&xs, &ys).map(|(slope, _)| -slope), xs.len())
}
