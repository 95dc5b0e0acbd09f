//! Mode-exact solutions of `∂ₜu + Lu = f` on `S²₊` with zero canonical
//! boundary data, and the spectral inverse of `Δ²`.
//!
//! Each coefficient obeys `ċ = −μ c + f_k` with `μ` the mode rate of `L`.
//! Forcing is piecewise linear in time, so the Duhamel integral is evaluated
//! in closed form segment by segment:
//!
//! `c(s₀+Δ) = e^{−z} c(s₀) + Δ·φ₁(z)·a + Δ²·ψ(z)·b`, `z = μΔ`,
//!
//! with `a` the forcing at `s₀`, `b` its slope, `φ₁(z) = (1 − e^{−z})/z` and
//! `ψ(z) = (z − 1 + e^{−z})/z²`.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::spectral::SpectralField;
use crate::{math, Error, Result};

/// Below this `z` the Duhamel weight `φ₁` uses its Taylor polynomial.
pub const PHI1_TAYLOR_BELOW: f64 = 1e-8;
/// Below this `z` the weight `ψ` is summed as a power series, which avoids
/// the cancellation in `z − 1 + e^{−z}`.
pub const PSI_SERIES_BELOW: f64 = 0.1;

const MEAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvolutionOperator {
    /// `L = Δ²`, rate `λ²`.
    BiLaplacian,
    /// `L = ½Δ(Δ + 2)`, rate `½λ(λ − 2)`; zero on `{0, 2}`, 12 on `λ = 6`.
    HalfDeltaDeltaPlus2,
}

impl EvolutionOperator {
    pub fn mode_rate(&self, lambda: f64) -> f64 {
        match self {
            Self::BiLaplacian => lambda * lambda,
            Self::HalfDeltaDeltaPlus2 => 0.5 * lambda * (lambda - 2.0),
        }
    }

    /// `L f`, mode by mode.
    pub fn apply(&self, f: &SpectralField) -> SpectralField {
        let mut out = f.clone();
        for (c, m) in out.coeffs_mut().iter_mut().zip(f.basis().modes()) {
            *c *= self.mode_rate(m.lambda);
        }
        out
    }
}

/// `(1 − e^{−z})/z`.
pub fn phi1(z: f64) -> f64 {
    if z.abs() < PHI1_TAYLOR_BELOW {
        1.0 - 0.5 * z + z * z / 6.0
    } else {
        -math::expm1(-z) / z
    }
}

/// `(z − 1 + e^{−z})/z² = Σₙ (−z)ⁿ/(n+2)!`.
pub fn psi(z: f64) -> f64 {
    if z.abs() < PSI_SERIES_BELOW {
        let (mut term, mut sum) = (0.5, 0.5);
        for n in 1..30 {
            term *= -z / (n + 2) as f64;
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        (z + math::expm1(-z)) / (z * z)
    }
}

/// Coefficient samples interpolated linearly in time; held constant outside
/// the sampled range.
#[derive(Debug, Clone, PartialEq)]
pub struct ForcingSignal {
    times: Vec<f64>,
    samples: Vec<SpectralField>,
}

impl ForcingSignal {
    pub fn new(times: Vec<f64>, samples: Vec<SpectralField>) -> Result<Self> {
        if times.is_empty() || times.len() != samples.len() {
            return Err(Error::InvalidTimeGrid("forcing needs one sample per time point, at least one".into()));
        }
        if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidTimeGrid("forcing times must be strictly increasing".into()));
        }
        if samples.iter().any(|s| !s.same_basis(&samples[0])) {
            return Err(Error::BasisMismatch);
        }
        Ok(Self { times, samples })
    }

    /// Time-independent forcing.
    pub fn constant(f: SpectralField) -> Self {
        Self { times: alloc::vec![0.0], samples: alloc::vec![f] }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn samples(&self) -> &[SpectralField] {
        &self.samples
    }

    /// Coefficient `k` at time `t`.
    pub fn coeff_at(&self, k: usize, t: f64) -> f64 {
        let n = self.times.len();
        if t <= self.times[0] {
            return self.samples[0].coeffs()[k];
        }
        if t >= self.times[n - 1] {
            return self.samples[n - 1].coeffs()[k];
        }
        let i = self.times.partition_point(|&s| s <= t) - 1;
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let (a, b) = (self.samples[i].coeffs()[k], self.samples[i + 1].coeffs()[k]);
        a + (b - a) * (t - t0) / (t1 - t0)
    }

    pub fn at(&self, t: f64) -> SpectralField {
        let mut f = self.samples[0].clone();
        for (k, c) in f.coeffs_mut().iter_mut().enumerate() {
            *c = self.coeff_at(k, t);
        }
        f
    }
}

/// States on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
}

impl Trajectory {
    pub fn last(&self) -> &SpectralField {
        self.states.last().expect("trajectories are non-empty")
    }
}

pub(crate) fn check_time_grid(t_grid: &[f64]) -> Result<()> {
    if let Some(&t) = t_grid.iter().find(|t| **t < 0.0) {
        return Err(Error::NegativeTime(t));
    }
    if t_grid.first() != Some(&0.0) {
        return Err(Error::InvalidTimeGrid("time grid must start at 0".into()));
    }
    if t_grid.iter().any(|t| !t.is_finite()) || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidTimeGrid("time grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Exact mode-wise solution on `t_grid` (which starts at 0).
pub fn evolve(u0: &SpectralField, forcing: Option<&ForcingSignal>, op: EvolutionOperator, t_grid: &[f64]) -> Result<Trajectory> {
    check_time_grid(t_grid)?;
    if let Some(f) = forcing {
        if !f.samples[0].same_basis(u0) {
            return Err(Error::BasisMismatch);
        }
    }
    let rates: Vec<f64> = u0.basis().modes().iter().map(|m| op.mode_rate(m.lambda)).collect();
    let mut states = Vec::with_capacity(t_grid.len());
    let mut cur = u0.clone();
    states.push(cur.clone());
    let mut knots = Vec::new();
    for w in t_grid.windows(2) {
        let (ta, tb) = (w[0], w[1]);
        knots.clear();
        knots.push(ta);
        if let Some(f) = forcing {
            knots.extend(f.times.iter().copied().filter(|&s| s > ta && s < tb));
        }
        knots.push(tb);
        for seg in knots.windows(2) {
            let (s0, s1) = (seg[0], seg[1]);
            let dt = s1 - s0;
            for (k, c) in cur.coeffs_mut().iter_mut().enumerate() {
                let z = rates[k] * dt;
                let mut next = math::exp(-z) * *c;
                if let Some(f) = forcing {
                    let a = f.coeff_at(k, s0);
                    let b = (f.coeff_at(k, s1) - a) / dt;
                    next += dt * phi1(z) * a + dt * dt * psi(z) * b;
                }
                *c = next;
            }
        }
        states.push(cur.clone());
    }
    Ok(Trajectory { times: t_grid.to_vec(), states })
}

/// `u` with `Δ²u = f` and zero mean: `u_k = c_k/λ_k²`, `u_0 = 0`. Rejects
/// `f` whose constant-mode coefficient exceeds `1e-10`.
pub fn elliptic_solve(f: &SpectralField) -> Result<SpectralField> {
    let mut u = f.clone();
    for (c, m) in u.coeffs_mut().iter_mut().zip(f.basis().modes()) {
        if m.lambda == 0.0 {
            if c.abs() > MEAN_TOL {
                return Err(Error::NonzeroMean(*c));
            }
            *c = 0.0;
        } else {
            *c /= m.lambda * m.lambda;
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::ModeBasis;
    use alloc::sync::Arc;
    use alloc::vec;

    fn basis(l: u32) -> Arc<ModeBasis> {
        Arc::new(ModeBasis::enumerate(l).unwrap())
    }

    #[test]
    fn rates() {
        let op = EvolutionOperator::HalfDeltaDeltaPlus2;
        assert_eq!(op.mode_rate(0.0), 0.0);
        assert_eq!(op.mode_rate(2.0), 0.0);
        assert_eq!(op.mode_rate(6.0), 12.0);
        assert_eq!(EvolutionOperator::BiLaplacian.mode_rate(6.0), 36.0);
        assert_eq!(EvolutionOperator::BiLaplacian.mode_rate(0.0), 0.0);
    }

    #[test]
    fn weights_are_continuous_across_thresholds() {
        for z in [0.5, 1.0, 2.0].map(|s| s * PHI1_TAYLOR_BELOW) {
            assert!((phi1(z) - (-(-z).exp_m1() / z)).abs() < 1e-15);
        }
        for z in [0.05, 0.0999, 0.1, 0.1001, 0.2] {
            // Reference: the full series, convergent for every z.
            let (mut term, mut sum) = (0.5f64, 0.5f64);
            for n in 1..40 {
                term *= -z / (n + 2) as f64;
                sum += term;
            }
            assert!((psi(z) - sum).abs() < 1e-15, "{z}");
        }
        assert_eq!(phi1(0.0), 1.0);
        assert_eq!(psi(0.0), 0.5);
        assert!((psi(2.0) - (1.0 + (-2.0f64).exp()) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn homogeneous_decay_of_a_six_mode() {
        let u0 = SpectralField::mode(basis(2), 2, 0).unwrap();
        let tr = evolve(&u0, None, EvolutionOperator::HalfDeltaDeltaPlus2, &[0.0, 0.1]).unwrap();
        let k = u0.basis().index_of(2, 0).unwrap();
        assert!((tr.last().coeffs()[k] - (-1.2f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn kernel_data_is_stationary() {
        let b = basis(2);
        let u0 = SpectralField::new(b, vec![0.3, -1.0, 2.0, 0.0, 0.0, 0.0]).unwrap();
        let tr = evolve(&u0, None, EvolutionOperator::HalfDeltaDeltaPlus2, &[0.0, 0.5, 3.0]).unwrap();
        assert!(tr.states.iter().all(|s| *s == u0));
    }

    #[test]
    fn constant_forcing_closed_forms() {
        let b = basis(2);
        let c = 0.7;
        let mut f = SpectralField::zeros(b.clone());
        f.coeffs_mut()[0] = c;
        f.coeffs_mut()[1] = c;
        let force = ForcingSignal::constant(f);
        let t_grid: Vec<f64> = (0..11).map(|i| 0.05 * i as f64).collect();
        let tr = evolve(&SpectralField::zeros(b), Some(&force), EvolutionOperator::BiLaplacian, &t_grid).unwrap();
        for (t, s) in tr.times.iter().zip(&tr.states) {
            assert!((s.coeffs()[0] - c * t).abs() <= 1e-12 * (c * t));
            let mu = 4.0;
            let exact = c / mu * (1.0 - (-mu * t).exp());
            assert!((s.coeffs()[1] - exact).abs() <= 1e-10 * exact.abs());
        }
    }

    #[test]
    fn linear_forcing_matches_quadrature() {
        let b = basis(1);
        let mut f0 = SpectralField::zeros(b.clone());
        let mut f1 = f0.clone();
        f0.coeffs_mut()[1] = 1.0;
        f1.coeffs_mut()[1] = -2.0;
        let force = ForcingSignal::new(vec![0.0, 1.0], vec![f0, f1]).unwrap();
        let tr = evolve(&SpectralField::zeros(b), Some(&force), EvolutionOperator::BiLaplacian, &[0.0, 0.7]).unwrap();
        // ∫₀^0.7 e^{−4(0.7−s)} (1 − 3s) ds by composite Simpson.
        let n = 2000;
        let h = 0.7 / n as f64;
        let g = |s: f64| (-4.0 * (0.7 - s)).exp() * (1.0 - 3.0 * s);
        let mut q = g(0.0) + g(0.7);
        for i in 1..n {
            q += if i % 2 == 1 { 4.0 } else { 2.0 } * g(i as f64 * h);
        }
        q *= h / 3.0;
        assert!((tr.last().coeffs()[1] - q).abs() < 1e-12);
    }

    #[test]
    fn semigroup_and_linearity() {
        let b = basis(3);
        let u0 = SpectralField::new(b.clone(), (0..b.len()).map(|i| (i as f64 * 0.37).sin()).collect()).unwrap();
        let v0 = SpectralField::new(b.clone(), (0..b.len()).map(|i| (i as f64 * 1.1).cos()).collect()).unwrap();
        for op in [EvolutionOperator::BiLaplacian, EvolutionOperator::HalfDeltaDeltaPlus2] {
            let a = evolve(&u0, None, op, &[0.0, 0.03]).unwrap();
            let ab = evolve(a.last(), None, op, &[0.0, 0.05]).unwrap();
            let direct = evolve(&u0, None, op, &[0.0, 0.08]).unwrap();
            for (x, y) in ab.last().coeffs().iter().zip(direct.last().coeffs()) {
                assert!((x - y).abs() < 1e-12);
            }
            let lhs = evolve(&u0.combine(2.0, &v0, -3.0).unwrap(), None, op, &[0.0, 0.02]).unwrap();
            let ru = evolve(&u0, None, op, &[0.0, 0.02]).unwrap();
            let rv = evolve(&v0, None, op, &[0.0, 0.02]).unwrap();
            let rhs = ru.last().combine(2.0, rv.last(), -3.0).unwrap();
            for (x, y) in lhs.last().coeffs().iter().zip(rhs.coeffs()) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn time_grid_validation() {
        let u0 = SpectralField::zeros(basis(1));
        let op = EvolutionOperator::BiLaplacian;
        assert!(matches!(evolve(&u0, None, op, &[0.0, -1.0]), Err(Error::NegativeTime(_))));
        assert!(matches!(evolve(&u0, None, op, &[0.5, 1.0]), Err(Error::InvalidTimeGrid(_))));
        assert!(matches!(evolve(&u0, None, op, &[0.0, 1.0, 1.0]), Err(Error::InvalidTimeGrid(_))));
        let other = ForcingSignal::constant(SpectralField::zeros(basis(2)));
        assert_eq!(evolve(&u0, Some(&other), op, &[0.0, 1.0]), Err(Error::BasisMismatch));
    }

    #[test]
    fn elliptic_examples() {
        let b = basis(2);
        let f = SpectralField::mode(b.clone(), 1, 1).unwrap();
        let u = elliptic_solve(&f).unwrap();
        assert_eq!(u, f.scaled(0.25));
        let back = EvolutionOperator::BiLaplacian.apply(&u);
        assert_eq!(back, f);
        let c = SpectralField::mode(b, 0, 0).unwrap();
        assert!(matches!(elliptic_solve(&c), Err(Error::NonzeroMean(_))));
    }
}
