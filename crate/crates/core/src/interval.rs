//! The flat oracle: `∂ₜu + ∂ₓ⁴u = f` on `[0, π]` with `∂ₓu = ∂ₓ³u = 0` at
//! both ends.
//!
//! Two independent solvers. The spectral one expands in the orthonormal
//! cosine basis and reuses the closed-form Duhamel step with rates `k⁴`. The
//! finite-difference one is an implicit trapezoidal stepper on a uniform grid
//! whose ghost values are the even reflection of the interior, which keeps
//! both Neumann conditions for even data.

use alloc::vec::Vec;

use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::evolution::{check_time_grid, phi1, psi};
use crate::holder::{fornberg_weights, GridAxis, GridFunction, SpaceTimeGrid};
use crate::linalg::BandLu;
use crate::{math, Error, Result};

/// Spectral and FD solutions must agree to this on `k ≤ 4` data at `t = 0.1`.
pub const FD_AGREEMENT_TOL: f64 = 1e-4;
/// One-sided `∂ₓu` and `∂ₓ³u` at the ends stay below this.
pub const BOUNDARY_TOL: f64 = 1e-6;
/// Trapezoid Gram matrix deviation allowed by [`interval_project`].
pub const GRAM_TOL: f64 = 1e-10;

/// `cos(kx)` normalized in `L²(0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalMode {
    pub k: u32,
}

impl IntervalMode {
    pub fn lambda(&self) -> f64 {
        let k = self.k as f64;
        k * k
    }

    pub fn rate(&self) -> f64 {
        self.lambda() * self.lambda()
    }

    fn norm(&self) -> f64 {
        if self.k == 0 {
            1.0 / math::sqrt(PI)
        } else {
            math::sqrt(2.0 / PI)
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.norm() * math::cos(self.k as f64 * x)
    }

    /// `dⁿ/dxⁿ` of the normalized mode.
    pub fn derivative(&self, order: u32, x: f64) -> f64 {
        let k = self.k as f64;
        let kx = k * x;
        let trig = match order % 4 {
            0 => math::cos(kx),
            1 => -math::sin(kx),
            2 => -math::cos(kx),
            _ => math::sin(kx),
        };
        self.norm() * math::powi(k, order as i32) * trig
    }
}

/// Modes `k = 0..=k_max` in order.
pub fn interval_modes(k_max: u32) -> Vec<IntervalMode> {
    (0..=k_max).map(|k| IntervalMode { k }).collect()
}

/// Coefficients on `interval_modes(coeffs.len() − 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalField {
    pub coeffs: Vec<f64>,
}

impl IntervalField {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("an interval field needs at least the constant mode".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn zeros(k_max: u32) -> Self {
        Self { coeffs: alloc::vec![0.0; k_max as usize + 1] }
    }

    /// `c·φ_k` on modes `0..=k_max`.
    pub fn single(k_max: u32, k: u32, c: f64) -> Self {
        let mut f = Self::zeros(k_max.max(k));
        f.coeffs[k as usize] = c;
        f
    }

    pub fn k_max(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    fn modes(&self) -> impl Iterator<Item = (IntervalMode, f64)> + '_ {
        self.coeffs.iter().enumerate().map(|(k, &c)| (IntervalMode { k: k as u32 }, c))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.modes().map(|(m, c)| c * m.eval(x)).sum()
    }

    pub fn derivative(&self, order: u32, x: f64) -> f64 {
        self.modes().map(|(m, c)| c * m.derivative(order, x)).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        math::sqrt(self.coeffs.iter().map(|c| c * c).sum())
    }
}

/// Uniform nodes on `[0, π]`.
pub fn interval_nodes(points: usize) -> Vec<f64> {
    let h = PI / (points - 1) as f64;
    (0..points).map(|i| i as f64 * h).collect()
}

fn trapezoid_weights(points: usize) -> Vec<f64> {
    let h = PI / (points - 1) as f64;
    let mut w = alloc::vec![h; points];
    w[0] = 0.5 * h;
    w[points - 1] = 0.5 * h;
    w
}

/// Max entry of `G − I` for the trapezoid Gram matrix of modes `0..=k_max`.
pub fn gram_deviation(k_max: u32, points: usize) -> f64 {
    let (x, w) = (interval_nodes(points), trapezoid_weights(points));
    let modes = interval_modes(k_max);
    let vals: Vec<Vec<f64>> = modes.iter().map(|m| x.iter().map(|&xi| m.eval(xi)).collect()).collect();
    let mut dev: f64 = 0.0;
    for (a, va) in vals.iter().enumerate() {
        for (b, vb) in vals.iter().enumerate().skip(a) {
            let g: f64 = va.iter().zip(vb).zip(&w).map(|((p, q), wi)| p * q * wi).sum();
            let target = if a == b { 1.0 } else { 0.0 };
            dev = dev.max((g - target).abs());
        }
    }
    dev
}

/// Trapezoid projection of `f` onto modes `0..=k_max` with `points` nodes.
/// Needs `points ≥ k_max + 2`, below which the rule aliases `cos(kx)cos(jx)`.
pub fn interval_project(f: impl Fn(f64) -> f64, k_max: u32, points: usize) -> Result<IntervalField> {
    if points < k_max as usize + 2 {
        return Err(Error::InvalidParameter("projection needs at least k_max + 2 nodes".into()));
    }
    let deviation = gram_deviation(k_max, points);
    if deviation > GRAM_TOL {
        return Err(Error::InsufficientQuadrature { deviation });
    }
    let (x, w) = (interval_nodes(points), trapezoid_weights(points));
    let fx: Vec<f64> = x.iter().map(|&xi| f(xi)).collect();
    let coeffs = interval_modes(k_max)
        .iter()
        .map(|m| x.iter().zip(&fx).zip(&w).map(|((&xi, fi), wi)| fi * m.eval(xi) * wi).sum())
        .collect();
    Ok(IntervalField { coeffs })
}

/// Coefficient samples interpolated linearly in time, held outside the range.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalForcing {
    times: Vec<f64>,
    samples: Vec<IntervalField>,
}

impl IntervalForcing {
    pub fn new(times: Vec<f64>, samples: Vec<IntervalField>) -> Result<Self> {
        if times.is_empty() || times.len() != samples.len() {
            return Err(Error::InvalidTimeGrid("forcing needs one sample per time point, at least one".into()));
        }
        if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidTimeGrid("forcing times must be strictly increasing".into()));
        }
        if samples.iter().any(|s| s.coeffs.len() != samples[0].coeffs.len()) {
            return Err(Error::BasisMismatch);
        }
        Ok(Self { times, samples })
    }

    pub fn constant(f: IntervalField) -> Self {
        Self { times: alloc::vec![0.0], samples: alloc::vec![f] }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn coeff_at(&self, k: usize, t: f64) -> f64 {
        let n = self.times.len();
        if t <= self.times[0] {
            return self.samples[0].coeffs[k];
        }
        if t >= self.times[n - 1] {
            return self.samples[n - 1].coeffs[k];
        }
        let i = self.times.partition_point(|&s| s <= t) - 1;
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let (a, b) = (self.samples[i].coeffs[k], self.samples[i + 1].coeffs[k]);
        a + (b - a) * (t - t0) / (t1 - t0)
    }

    pub fn at(&self, t: f64) -> IntervalField {
        let coeffs = (0..self.samples[0].coeffs.len()).map(|k| self.coeff_at(k, t)).collect();
        IntervalField { coeffs }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<IntervalField>,
}

impl IntervalTrajectory {
    pub fn last(&self) -> &IntervalField {
        self.states.last().expect("trajectories are non-empty")
    }
}

/// Exact mode-wise solution on `t_grid` (which starts at 0).
pub fn interval_evolve(u0: &IntervalField, forcing: Option<&IntervalForcing>, t_grid: &[f64]) -> Result<IntervalTrajectory> {
    check_time_grid(t_grid)?;
    if let Some(f) = forcing {
        if f.samples[0].coeffs.len() != u0.coeffs.len() {
            return Err(Error::BasisMismatch);
        }
    }
    let rates: Vec<f64> = interval_modes(u0.k_max()).iter().map(IntervalMode::rate).collect();
    let mut cur = u0.clone();
    let mut states = alloc::vec![cur.clone()];
    let mut knots = Vec::new();
    for w in t_grid.windows(2) {
        knots.clear();
        knots.push(w[0]);
        if let Some(f) = forcing {
            knots.extend(f.times.iter().copied().filter(|&s| s > w[0] && s < w[1]));
        }
        knots.push(w[1]);
        for seg in knots.windows(2) {
            let (s0, s1) = (seg[0], seg[1]);
            let dt = s1 - s0;
            for (k, c) in cur.coeffs.iter_mut().enumerate() {
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
    Ok(IntervalTrajectory { times: t_grid.to_vec(), states })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdConfig {
    pub points: usize,
    pub dt: f64,
}

impl Default for FdConfig {
    fn default() -> Self {
        Self { points: 401, dt: 1e-4 }
    }
}

/// `∂ₓ⁴` on the grid with even ghosts `u₋ⱼ = uⱼ`, `u_{N−1+j} = u_{N−1−j}`.
/// Row `i` as `(column, weight·h⁴)` pairs.
fn d4_row(i: usize, n: usize) -> [(usize, f64); 5] {
    let reflect = |j: isize| -> usize {
        let last = (n - 1) as isize;
        let r = if j < 0 { -j } else if j > last { 2 * last - j } else { j };
        r as usize
    };
    let w = [1.0, -4.0, 6.0, -4.0, 1.0];
    let mut row = [(0, 0.0); 5];
    for (s, (slot, wi)) in row.iter_mut().zip(w).enumerate() {
        *slot = (reflect(i as isize + s as isize - 2), wi);
    }
    row
}

fn apply_d4(u: &[f64], h4: f64, out: &mut [f64]) {
    let n = u.len();
    for (i, o) in out.iter_mut().enumerate() {
        *o = d4_row(i, n).iter().map(|&(j, w)| w * u[j]).sum::<f64>() / h4;
    }
}

/// Implicit trapezoidal stepper for the FD system.
///
/// With the reflected ghosts the matrix `A` is not symmetric but `WA` is, for
/// `W = diag(½, 1, …, 1, ½)`, and `WA` is positive semidefinite. So the step
/// solves `(W + ½Δt·WA) uⁿ⁺¹ = W[(I − ½Δt·A) uⁿ + ½Δt(fⁿ + fⁿ⁺¹)]` with an
/// unpivoted band LU.
#[derive(Debug, Clone)]
pub struct FdStepper {
    config: FdConfig,
    x: Vec<f64>,
    h4: f64,
    w: Vec<f64>,
    lu: BandLu,
}

impl FdStepper {
    pub fn new(config: FdConfig) -> Result<Self> {
        if config.points < 5 {
            return Err(Error::InvalidGrid("the FD stepper needs at least 5 points".into()));
        }
        if !(config.dt > 0.0 && config.dt.is_finite()) {
            return Err(Error::InvalidParameter("the FD time step must be positive".into()));
        }
        let n = config.points;
        let x = interval_nodes(n);
        let h = x[1];
        let h4 = h * h * h * h;
        let mut w = alloc::vec![1.0; n];
        w[0] = 0.5;
        w[n - 1] = 0.5;
        let mut m = BandLu::zeros(n, 2);
        for i in 0..n {
            m.add(i, i, w[i]);
            for (j, a) in d4_row(i, n) {
                m.add(i, j, 0.5 * config.dt * w[i] * a / h4);
            }
        }
        Ok(Self { config, x, h4, w, lu: m.factor()? })
    }

    pub fn config(&self) -> FdConfig {
        self.config
    }

    pub fn nodes(&self) -> &[f64] {
        &self.x
    }

    fn forcing_on_grid(&self, f: &IntervalForcing, t: f64, out: &mut [f64]) {
        let field = f.at(t);
        for (o, &xi) in out.iter_mut().zip(&self.x) {
            *o = field.eval(xi);
        }
    }

    /// Advances `u` from `t` over `steps` steps.
    pub fn advance(&self, u: &mut [f64], t: f64, steps: usize, forcing: Option<&IntervalForcing>) {
        let n = u.len();
        let dt = self.config.dt;
        let mut au = alloc::vec![0.0; n];
        let (mut f0, mut f1) = (alloc::vec![0.0; n], alloc::vec![0.0; n]);
        for s in 0..steps {
            let ts = t + s as f64 * dt;
            apply_d4(u, self.h4, &mut au);
            if let Some(f) = forcing {
                self.forcing_on_grid(f, ts, &mut f0);
                self.forcing_on_grid(f, ts + dt, &mut f1);
            }
            for i in 0..n {
                u[i] = self.w[i] * (u[i] - 0.5 * dt * au[i] + 0.5 * dt * (f0[i] + f1[i]));
            }
            self.lu.solve(u);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FdTrajectory {
    pub x: Vec<f64>,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

/// FD solution from `u0` sampled on the grid. Every time in `t_grid` must be
/// a whole number of steps.
pub fn fd_evolve(u0: &IntervalField, forcing: Option<&IntervalForcing>, config: FdConfig, t_grid: &[f64]) -> Result<FdTrajectory> {
    check_time_grid(t_grid)?;
    let stepper = FdStepper::new(config)?;
    let mut u: Vec<f64> = stepper.x.iter().map(|&xi| u0.eval(xi)).collect();
    let mut states = alloc::vec![u.clone()];
    let mut done = 0usize;
    for &t in &t_grid[1..] {
        let steps = math::round(t / config.dt);
        if (steps * config.dt - t).abs() > 1e-9 * t.max(1.0) {
            return Err(Error::InvalidTimeGrid(alloc::format!("time {t} is not a multiple of the FD step {}", config.dt)));
        }
        let steps = steps as usize;
        stepper.advance(&mut u, done as f64 * config.dt, steps - done, forcing);
        done = steps;
        states.push(u.clone());
    }
    Ok(FdTrajectory { x: stepper.x, times: t_grid.to_vec(), states })
}

/// One-sided `dᵒʳᵈᵉʳ/dxᵒʳᵈᵉʳ` at both ends of uniform samples. The stencil has
/// `order + 6` points; its leading error term is then an odd derivative,
/// which vanishes at an end where the data is even.
pub fn one_sided_derivatives(u: &[f64], h: f64, order: usize) -> Result<(f64, f64)> {
    let p = order + 6;
    if u.len() < p {
        return Err(Error::GridTooCoarse { axis: 0, points: u.len(), needed: p });
    }
    let nodes: Vec<f64> = (0..p).map(|i| i as f64 * h).collect();
    let w = fornberg_weights(0.0, &nodes, order).swap_remove(order);
    let left: f64 = w.iter().zip(u).map(|(a, b)| a * b).sum();
    let right: f64 = w.iter().zip(u.iter().rev()).map(|(a, b)| a * b).sum();
    // mirrored nodes flip the sign of odd derivatives
    let sign = if order % 2 == 1 { -1.0 } else { 1.0 };
    Ok((left, sign * right))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub config: FdConfig,
    pub times: Vec<f64>,
    /// Max over nodes of `|u_spectral − u_fd|` at each time.
    pub sup_differences: Vec<f64>,
    pub max_difference: f64,
    /// Max over times and ends of the one-sided `|∂ₓu|` of the FD solution.
    pub boundary_d1: f64,
    pub boundary_d3: f64,
}

impl OracleComparison {
    pub fn agrees(&self, tol: f64) -> bool {
        self.max_difference < tol
    }

    pub fn boundary_holds(&self, tol: f64) -> bool {
        self.boundary_d1 < tol && self.boundary_d3 < tol
    }
}

/// Runs both solvers on `t_grid` and compares them on the FD nodes.
pub fn fd_vs_spectral(u0: &IntervalField, forcing: Option<&IntervalForcing>, config: FdConfig, t_grid: &[f64]) -> Result<OracleComparison> {
    let exact = interval_evolve(u0, forcing, t_grid)?;
    let fd = fd_evolve(u0, forcing, config, t_grid)?;
    let h = fd.x[1];
    let mut sup_differences = Vec::with_capacity(t_grid.len());
    let (mut boundary_d1, mut boundary_d3) = (0.0f64, 0.0f64);
    for (spec, num) in exact.states.iter().zip(&fd.states) {
        let d = fd.x.iter().zip(num).map(|(&xi, v)| (spec.eval(xi) - v).abs()).fold(0.0, f64::max);
        sup_differences.push(d);
        let (l1, r1) = one_sided_derivatives(num, h, 1)?;
        let (l3, r3) = one_sided_derivatives(num, h, 3)?;
        boundary_d1 = boundary_d1.max(l1.abs()).max(r1.abs());
        boundary_d3 = boundary_d3.max(l3.abs()).max(r3.abs());
    }
    let max_difference = sup_differences.iter().copied().fold(0.0, f64::max);
    Ok(OracleComparison { config, times: t_grid.to_vec(), sup_differences, max_difference, boundary_d1, boundary_d3 })
}

/// The free solution from `u0` sampled on `x_points` uniform nodes of
/// `[0, π]` at `times`.
pub fn sample_solution(u0: &IntervalField, x_points: usize, times: Vec<f64>) -> Result<GridFunction> {
    let axis = GridAxis::spanning(0.0, PI, x_points);
    let grid = SpaceTimeGrid::new(alloc::vec![axis], times)?;
    let modes = interval_modes(u0.k_max());
    GridFunction::from_fn(grid, |x, t| {
        modes.iter().zip(&u0.coeffs).map(|(m, c)| c * math::exp(-m.rate() * t) * m.eval(x[0])).sum()
    })
}
