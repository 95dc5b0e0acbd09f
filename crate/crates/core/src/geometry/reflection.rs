//! The oblique reflection `R(x) = x − 2xₙv` adapted to a constant elliptic
//! matrix, and even extension of grid functions across `xₙ = 0`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::holder::{fd_derivative, fornberg_weights, GridAxis, GridFunction, SpaceTimeGrid};
use crate::linalg::symmetric_eigen;
use crate::{math, Error, Result};

pub const SYMMETRY_TOL: f64 = 1e-12;
/// Lagrange interpolation width along tangential axes.
pub const INTERP_POINTS: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipticCoefficients {
    n: usize,
    a: Vec<f64>,
    theta: f64,
    lambda: f64,
}

impl EllipticCoefficients {
    /// Row-major `n × n` matrix; `θ` is its smallest eigenvalue, `Λ` its
    /// largest entry in modulus.
    pub fn new(a: Vec<f64>, n: usize) -> Result<Self> {
        if n == 0 || a.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: a.len() });
        }
        for i in 0..n {
            for j in 0..i {
                let d = (a[i * n + j] - a[j * n + i]).abs();
                if !(d <= SYMMETRY_TOL) {
                    return Err(Error::NotElliptic(format!("asymmetric entry ({i},{j}): {d:e}")));
                }
            }
        }
        let (values, _) = symmetric_eigen(&a, n)?;
        let theta = values[0];
        if !(theta > 0.0) {
            return Err(Error::NotElliptic(format!("smallest eigenvalue {theta:e}")));
        }
        let lambda = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(Self { n, a, theta, lambda })
    }

    pub fn identity(n: usize) -> Self {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 1.0;
        }
        Self { n, a, theta: 1.0, lambda: 1.0 }
    }

    /// `BBᵀ + I/2` with `B` uniform in `[−1, 1]`.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v: f64 = (0..n).map(|k| b[i * n + k] * b[j * n + k]).sum::<f64>() + if i == j { 0.5 } else { 0.0 };
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        Self::new(a, n).expect("BBᵀ + I/2 is positive definite")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.a
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `v = a^{n·}/a^{nn}`; `vₙ = 1`.
    pub fn reflection_vector(&self) -> Vec<f64> {
        let n = self.n - 1;
        let ann = self.entry(n, n);
        let mut v: Vec<f64> = (0..self.n).map(|i| self.entry(n, i) / ann).collect();
        v[n] = 1.0;
        v
    }

    /// `max_{ab} |Σ a^{ij} Jᵢₐ Jⱼ_b − a^{ab}|` with `J = I − 2eₙvᵀ`.
    pub fn pushforward_deviation(&self) -> f64 {
        let n = self.n;
        let v = self.reflection_vector();
        let jac = |i: usize, a: usize| (i == a) as u8 as f64 - if i == n - 1 { 2.0 * v[a] } else { 0.0 };
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        s += self.entry(i, j) * jac(i, a) * jac(j, b);
                    }
                }
                worst = worst.max((s - self.entry(a, b)).abs());
            }
        }
        worst
    }
}

/// `x − 2xₙv`.
pub fn reflection_map(coeffs: &EllipticCoefficients, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != coeffs.dim() {
        return Err(Error::DimensionMismatch { expected: coeffs.dim(), found: x.len() });
    }
    let v = coeffs.reflection_vector();
    let xn = x[x.len() - 1];
    Ok(x.iter().zip(&v).map(|(xi, vi)| xi - 2.0 * xn * vi).collect())
}

/// `G(x' − xₙv', xₙ², t)` for a fixed smooth `G`, with `x'` the tangential
/// coordinates. It is invariant under [`reflection_map`], so `B₁u` and `B₂u`
/// vanish and the even extension is the function itself.
pub fn manufactured_solution(coeffs: &EllipticCoefficients, grid: SpaceTimeGrid) -> Result<GridFunction> {
    let n = coeffs.dim();
    if grid.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: grid.dim() });
    }
    let v = coeffs.reflection_vector();
    GridFunction::from_fn(grid, |x, t| {
        let xn = x[n - 1];
        let y: f64 = (0..n - 1).map(|a| (1.0 + 0.3 * a as f64) * (x[a] - xn * v[a])).sum();
        let s = xn * xn;
        math::sin(1.3 * y + 0.7 * s + 0.5 * t) + math::cos(0.4 * y - 0.9 * s)
    })
}

/// Largest `|B₁u|` and `|B₂u|` over the samples on `xₙ = 0`, where
/// `B₁u = a^{ni}∂ᵢu` and `B₂u = a^{ni}a^{kl}∂ᵢₖₗu`.
pub fn boundary_residuals(u: &GridFunction, coeffs: &EllipticCoefficients) -> Result<(f64, f64)> {
    let grid = u.grid();
    let n = grid.dim();
    if n != coeffs.dim() {
        return Err(Error::DimensionMismatch { expected: n, found: coeffs.dim() });
    }
    let last = n - 1;
    let nt = grid.time_len();
    let boundary: Vec<usize> = {
        let mut idx = vec![0usize; n];
        (0..grid.space_len())
            .filter(|&s| {
                grid.multi_index(s, &mut idx);
                idx[last] == 0
            })
            .collect()
    };
    let mut b1 = vec![0.0; boundary.len() * nt];
    let mut b2 = vec![0.0; boundary.len() * nt];
    let mut alpha = vec![0usize; n];
    let step = grid.axes()[last].step;
    let mut idx = vec![0usize; n];
    // Tangential part by grid stencils, normal part by a one-sided stencil
    // with `order + 4` points at xₙ = 0.
    let mut accumulate = |alpha: &[usize], weight: f64, out: &mut [f64]| -> Result<()> {
        let normal = alpha[last];
        let mut tangential = alpha.to_vec();
        tangential[last] = 0;
        let d = if tangential.iter().all(|&a| a == 0) { u.clone() } else { fd_derivative(u, &tangential, 0)? };
        let width = normal + 4;
        if grid.axes()[last].len < width {
            return Err(Error::GridTooCoarse { axis: last, points: grid.axes()[last].len, needed: width });
        }
        let nodes: Vec<f64> = (0..width).map(|i| i as f64 * step).collect();
        let w = fornberg_weights(0.0, &nodes, normal).swap_remove(normal);
        for (bi, &s) in boundary.iter().enumerate() {
            grid.multi_index(s, &mut idx);
            for (i, wi) in w.iter().enumerate() {
                idx[last] = i;
                let src = grid.flat_index(&idx);
                for k in 0..nt {
                    out[bi * nt + k] += weight * wi * d.at(src, k);
                }
            }
        }
        Ok(())
    };
    for i in 0..n {
        let ani = coeffs.entry(last, i);
        if ani == 0.0 {
            continue;
        }
        alpha.iter_mut().for_each(|a| *a = 0);
        alpha[i] = 1;
        accumulate(&alpha, ani, &mut b1)?;
        for k in 0..n {
            for l in 0..n {
                let akl = coeffs.entry(k, l);
                if akl == 0.0 {
                    continue;
                }
                alpha.iter_mut().for_each(|a| *a = 0);
                alpha[i] += 1;
                alpha[k] += 1;
                alpha[l] += 1;
                accumulate(&alpha, ani * akl, &mut b2)?;
            }
        }
    }
    let sup = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok((sup(&b1), sup(&b2)))
}

/// One-sided jump of `∂ₙᵏũ` across `xₙ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpRow {
    pub order: usize,
    pub max_jump: f64,
    /// Largest one-sided value from above, for scale.
    pub max_above: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reflected {
    pub function: GridFunction,
    pub b1_residual: f64,
    pub b2_residual: f64,
    pub jumps: Vec<JumpRow>,
}

/// Nodes of a `INTERP_POINTS`-wide window on `axis` around coordinate `y`.
fn window(axis: &GridAxis, y: f64) -> (usize, Vec<f64>) {
    let pos = (y - axis.start) / axis.step;
    let first = (math::floor(pos) as i64 - (INTERP_POINTS as i64 / 2 - 1)).clamp(0, (axis.len - INTERP_POINTS) as i64) as usize;
    let nodes = (first..first + INTERP_POINTS).map(|i| axis.coord(i)).collect();
    (first, nodes)
}

/// Extends `u`, given on a grid whose last axis starts at `xₙ = 0`, by
/// `ũ(x, t) = u(R(x), t)` for `xₙ < 0`. Tangential axes are trimmed so that
/// every preimage stays inside the grid. Refuses when either boundary
/// residual exceeds `tolerance`.
pub fn reflect_extend(u: &GridFunction, coeffs: &EllipticCoefficients, tolerance: f64) -> Result<Reflected> {
    let grid = u.grid();
    let n = grid.dim();
    if n != coeffs.dim() {
        return Err(Error::DimensionMismatch { expected: n, found: coeffs.dim() });
    }
    let last = n - 1;
    let axes = grid.axes();
    if axes[last].start.abs() > 1e-12 * axes[last].step {
        return Err(Error::InvalidGrid("last axis must start at xₙ = 0".into()));
    }
    for (i, ax) in axes.iter().enumerate().take(last) {
        if ax.len < INTERP_POINTS {
            return Err(Error::GridTooCoarse { axis: i, points: ax.len, needed: INTERP_POINTS });
        }
    }
    let (b1, b2) = boundary_residuals(u, coeffs)?;
    if b1 > tolerance {
        return Err(Error::BoundaryConditionViolated { which: 1, residual: b1, tolerance });
    }
    if b2 > tolerance {
        return Err(Error::BoundaryConditionViolated { which: 2, residual: b2, tolerance });
    }

    let v = coeffs.reflection_vector();
    let depth = axes[last].end();
    let mut trims = vec![0usize; n];
    let mut out_axes = Vec::with_capacity(n);
    for i in 0..last {
        let ax = axes[i];
        let t = math::ceil(2.0 * depth * v[i].abs() / ax.step - 1e-9).max(0.0) as usize;
        if ax.len < 2 * t + crate::holder::MIN_AXIS_POINTS {
            return Err(Error::InvalidGrid(format!("axis {i} too short for the reflection shift")));
        }
        trims[i] = t;
        out_axes.push(GridAxis::new(ax.coord(t), ax.step, ax.len - 2 * t));
    }
    let nl = axes[last].len;
    out_axes.push(GridAxis::new(-depth, axes[last].step, 2 * nl - 1));
    let out_grid = SpaceTimeGrid::new(out_axes, grid.times().to_vec())?;

    let nt = grid.time_len();
    let mut values = vec![0.0; out_grid.space_len() * nt];
    let mut oidx = vec![0usize; n];
    let mut iidx = vec![0usize; n];
    let mut x = vec![0.0; n];
    let tangential = last;
    let combos = (0..tangential).fold(1usize, |a, _| a * INTERP_POINTS);
    for s in 0..out_grid.space_len() {
        out_grid.multi_index(s, &mut oidx);
        out_grid.point(s, &mut x);
        let row = &mut values[s * nt..(s + 1) * nt];
        if oidx[last] + 1 >= nl {
            for i in 0..last {
                iidx[i] = oidx[i] + trims[i];
            }
            iidx[last] = oidx[last] + 1 - nl;
            let src = grid.flat_index(&iidx);
            for (k, r) in row.iter_mut().enumerate() {
                *r = u.at(src, k);
            }
            continue;
        }
        let pre = reflection_map(coeffs, &x)?;
        iidx[last] = nl - 1 - oidx[last];
        let mut firsts = Vec::with_capacity(tangential);
        let mut weights = Vec::with_capacity(tangential);
        for i in 0..tangential {
            let (first, nodes) = window(&axes[i], pre[i]);
            firsts.push(first);
            weights.push(fornberg_weights(pre[i], &nodes, 0).swap_remove(0));
        }
        for c in 0..combos {
            let mut rest = c;
            let mut w = 1.0;
            for i in (0..tangential).rev() {
                let o = rest % INTERP_POINTS;
                rest /= INTERP_POINTS;
                iidx[i] = firsts[i] + o;
                w *= weights[i][o];
            }
            let src = grid.flat_index(&iidx);
            for (k, r) in row.iter_mut().enumerate() {
                *r += w * u.at(src, k);
            }
        }
    }
    let function = GridFunction::new(out_grid, values)?;
    let jumps = jump_report(&function)?;
    Ok(Reflected { function, b1_residual: b1, b2_residual: b2, jumps })
}

/// Jumps of `∂ₙᵏf` across `xₙ = 0` for `k = 0..=3`, each side from a
/// one-sided stencil with `k + 4` points.
pub fn jump_report(f: &GridFunction) -> Result<Vec<JumpRow>> {
    let grid = f.grid();
    let n = grid.dim();
    let last = n - 1;
    let ax = grid.axes()[last];
    let zero = math::round(-ax.start / ax.step);
    if zero < 0.0 || (ax.start + zero * ax.step).abs() > 1e-9 * ax.step {
        return Err(Error::InvalidGrid("last axis has no node at xₙ = 0".into()));
    }
    let zero = zero as usize;
    let nt = grid.time_len();
    let mut idx = vec![0usize; n];
    let mut rows = Vec::with_capacity(4);
    for order in 0..=3usize {
        let width = order + 4;
        if zero + 1 < width || zero + width > ax.len {
            return Err(Error::GridTooCoarse { axis: last, points: ax.len, needed: 2 * width - 1 });
        }
        let above: Vec<f64> = (0..width).map(|i| i as f64 * ax.step).collect();
        let below: Vec<f64> = (0..width).map(|i| -(i as f64) * ax.step).collect();
        let wa = fornberg_weights(0.0, &above, order).swap_remove(order);
        let wb = fornberg_weights(0.0, &below, order).swap_remove(order);
        let (mut max_jump, mut max_above) = (0.0f64, 0.0f64);
        for s in 0..grid.space_len() {
            grid.multi_index(s, &mut idx);
            if idx[last] != zero {
                continue;
            }
            for k in 0..nt {
                let (mut da, mut db) = (0.0, 0.0);
                for i in 0..width {
                    idx[last] = zero + i;
                    da += wa[i] * f.at(grid.flat_index(&idx), k);
                    idx[last] = zero - i;
                    db += wb[i] * f.at(grid.flat_index(&idx), k);
                }
                idx[last] = zero;
                max_jump = max_jump.max((da - db).abs());
                max_above = max_above.max(da.abs());
            }
        }
        rows.push(JumpRow { order, max_jump, max_above });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_negates_the_last_coordinate() {
        let c = EllipticCoefficients::identity(3);
        assert_eq!(reflection_map(&c, &[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, -3.0]);
        assert!(reflection_map(&c, &[1.0]).is_err());
    }

    #[test]
    fn involution_and_fixed_plane() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for seed in 0..100 {
            let c = EllipticCoefficients::random(3, seed);
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
            let back = reflection_map(&c, &reflection_map(&c, &x).unwrap()).unwrap();
            assert!(back.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-12));
            let plane = [x[0], x[1], 0.0];
            assert_eq!(reflection_map(&c, &plane).unwrap(), plane.to_vec());
        }
    }

    #[test]
    fn pushforward_preserves_the_matrix() {
        for seed in 0..100 {
            let c = EllipticCoefficients::random(3, seed);
            assert!(c.pushforward_deviation() < 1e-12, "{seed}: {}", c.pushforward_deviation());
        }
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(matches!(EllipticCoefficients::new(vec![1.0, 0.5, 0.4, 1.0], 2), Err(Error::NotElliptic(_))));
        assert!(matches!(EllipticCoefficients::new(vec![1.0, 2.0, 2.0, 1.0], 2), Err(Error::NotElliptic(_))));
        let c = EllipticCoefficients::new(vec![2.0, 1.0, 1.0, 2.0], 2).unwrap();
        assert!((c.theta() - 1.0).abs() < 1e-12);
        assert_eq!(c.lambda(), 2.0);
    }

    fn half_grid(n: usize, len: usize, depth: f64) -> SpaceTimeGrid {
        let h = depth / (len - 1) as f64;
        let mut axes = vec![GridAxis::new(-1.5, h, math::round(3.0 / h) as usize + 1); n - 1];
        axes.push(GridAxis::new(0.0, h, len));
        SpaceTimeGrid::new(axes, vec![0.0, 0.5]).unwrap()
    }

    #[test]
    fn constant_extends_to_constant() {
        let g = half_grid(2, 11, 0.5);
        let u = GridFunction::from_fn(g, |_, _| 1.0).unwrap();
        let r = reflect_extend(&u, &EllipticCoefficients::random(2, 4), 1e-9).unwrap();
        assert!(r.function.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert!(r.jumps.iter().all(|j| j.max_jump < 1e-9));
    }

    #[test]
    fn even_profile_has_small_jumps() {
        let g = half_grid(2, 21, 0.5);
        let u = GridFunction::from_fn(g, |x, t| math::cos(x[1]) * math::sin(x[0] + t)).unwrap();
        let r = reflect_extend(&u, &EllipticCoefficients::identity(2), 1e-3).unwrap();
        for j in &r.jumps {
            assert!(j.max_jump < 1e-4, "{j:?}");
        }
    }

    #[test]
    fn refuses_violated_conditions() {
        let g = half_grid(1, 21, 0.5);
        let u = GridFunction::from_fn(g, |x, _| x[0]).unwrap();
        let e = reflect_extend(&u, &EllipticCoefficients::identity(1), 1e-6).unwrap_err();
        assert!(matches!(e, Error::BoundaryConditionViolated { which: 1, .. }));
    }
}
