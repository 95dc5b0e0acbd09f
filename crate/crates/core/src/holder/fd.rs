//! Finite-difference derivatives on [`GridFunction`]s.
//!
//! Spatial derivatives of order `d` along one axis use the second-order
//! central stencil in the interior (3 points for `d ≤ 2`, 5 points for
//! `d ≤ 4`) and a one-sided window of `d + 2` points within two cells of
//! either end, which is also second order. Time derivatives use three-point
//! stencils on the (possibly non-uniform) time nodes. Every stencil is exact
//! on polynomials of degree below its width.

use alloc::vec;
use alloc::vec::Vec;

use super::grid::{GridFunction, SpaceTimeGrid};
use crate::{Error, Result};

/// Fornberg's recursion: weights `w[k][j]` for the `k`-th derivative at `z`
/// from values at `nodes[j]`, for all `k ≤ max_order`.
pub fn fornberg_weights(z: f64, nodes: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    if n == 0 {
        return c;
    }
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Stencil for one output position: first node index and weights.
#[derive(Debug, Clone)]
struct Stencil {
    first: usize,
    weights: Vec<f64>,
}

fn central_width(order: usize) -> usize {
    // Second-order central differences: 3 points for d ≤ 2, 5 for d ≤ 4.
    2 * order.div_ceil(2) + 1
}

/// Number of points a uniform axis needs for a derivative of `order`.
pub fn required_points(order: usize) -> usize {
    if order == 0 {
        1
    } else {
        central_width(order).max(order + 2)
    }
}

fn uniform_stencils(len: usize, step: f64, order: usize) -> Vec<Stencil> {
    let cw = central_width(order);
    let half = cw / 2;
    let ow = order + 2;
    let scale = crate::math::powi(step, order as i32);
    (0..len)
        .map(|i| {
            let (first, width) = if i >= half && i + half < len {
                (i - half, cw)
            } else if i < half {
                (0, ow)
            } else {
                (len - ow, ow)
            };
            let nodes: Vec<f64> = (first..first + width).map(|j| j as f64).collect();
            let w = fornberg_weights(i as f64, &nodes, order);
            Stencil { first, weights: w[order].iter().map(|x| x / scale).collect() }
        })
        .collect()
}

fn time_stencils(times: &[f64], order: usize) -> Vec<Stencil> {
    let n = times.len();
    let width = order + 2;
    let half = width / 2;
    (0..n)
        .map(|i| {
            let first = i.saturating_sub(half).min(n - width);
            let w = fornberg_weights(times[i], &times[first..first + width], order);
            Stencil { first, weights: w[order].clone() }
        })
        .collect()
}

fn apply_axis(grid: &SpaceTimeGrid, values: &[f64], axis: usize, order: usize) -> Result<Vec<f64>> {
    let ax = grid.axes()[axis];
    let needed = required_points(order);
    if ax.len < needed {
        return Err(Error::GridTooCoarse { axis, points: ax.len, needed });
    }
    let stencils = uniform_stencils(ax.len, ax.step, order);
    let nt = grid.time_len();
    let stride = grid.strides()[axis] * nt;
    let mut out = vec![0.0; values.len()];
    let mut idx = vec![0usize; grid.dim()];
    for s in 0..grid.space_len() {
        grid.multi_index(s, &mut idx);
        let i = idx[axis];
        let st = &stencils[i];
        let base = (s - i * grid.strides()[axis]) * nt;
        for k in 0..nt {
            let mut acc = 0.0;
            for (j, w) in st.weights.iter().enumerate() {
                acc += w * values[base + (st.first + j) * stride + k];
            }
            out[s * nt + k] = acc;
        }
    }
    Ok(out)
}

fn apply_time(grid: &SpaceTimeGrid, values: &[f64], order: usize) -> Result<Vec<f64>> {
    let nt = grid.time_len();
    let needed = order + 2;
    if nt < needed {
        return Err(Error::InvalidGrid(alloc::format!(
            "time derivative of order {order} needs {needed} time points, grid has {nt}"
        )));
    }
    let stencils = time_stencils(grid.times(), order);
    let mut out = vec![0.0; values.len()];
    for s in 0..grid.space_len() {
        let row = &values[s * nt..(s + 1) * nt];
        for (k, st) in stencils.iter().enumerate() {
            out[s * nt + k] = st.weights.iter().zip(&row[st.first..]).map(|(w, v)| w * v).sum();
        }
    }
    Ok(out)
}

/// `∂ₜʲ ∇_α u` by finite differences, with `|α| ≤ 4` and `j ≤ 1`.
pub fn fd_derivative(u: &GridFunction, alpha: &[usize], j: usize) -> Result<GridFunction> {
    let grid = u.grid();
    if alpha.len() != grid.dim() {
        return Err(Error::DimensionMismatch { expected: grid.dim(), found: alpha.len() });
    }
    if alpha.iter().sum::<usize>() > 4 {
        return Err(Error::InvalidParameter("spatial derivative order above 4".into()));
    }
    if j > 1 {
        return Err(Error::InvalidParameter("time derivative order above 1".into()));
    }
    let mut values = u.values().to_vec();
    for (axis, &order) in alpha.iter().enumerate() {
        if order > 0 {
            values = apply_axis(grid, &values, axis, order)?;
        }
    }
    if j > 0 {
        values = apply_time(grid, &values, j)?;
    }
    Ok(GridFunction::from_raw(grid.clone(), values))
}

/// All multi-indices `α ∈ ℕ₀ⁿ` with `|α| = order`, in lexicographically
/// decreasing order of the first component (`(k,0,…)` first).
pub fn multi_indices(dim: usize, order: usize) -> Vec<Vec<usize>> {
    fn rec(dim: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == dim {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in (0..=left).rev() {
            cur.push(first);
            rec(dim, left - first, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if dim == 0 {
        return out;
    }
    rec(dim, order, &mut Vec::with_capacity(dim), &mut out);
    out
}

/// All derivative fields `∂ₜʲ∇_α u` with `4j + |α| ≤ 4`, computed once.
#[derive(Debug, Clone)]
pub struct DerivativeTable {
    entries: Vec<(Vec<usize>, usize, GridFunction)>,
    dim: usize,
}

impl DerivativeTable {
    /// Spatial derivatives up to order 4 and, when the grid has at least
    /// three time points, the first time derivative.
    pub fn new(u: &GridFunction) -> Result<Self> {
        let dim = u.grid().dim();
        let mut entries = Vec::new();
        for k in 0..=4 {
            for alpha in multi_indices(dim, k) {
                let d = fd_derivative(u, &alpha, 0)?;
                entries.push((alpha, 0, d));
            }
        }
        if u.grid().time_len() >= 3 {
            let zero = vec![0; dim];
            let d = fd_derivative(u, &zero, 1)?;
            entries.push((zero, 1, d));
        }
        Ok(Self { entries, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn has_time_derivative(&self) -> bool {
        self.entries.iter().any(|e| e.1 == 1)
    }

    pub fn get(&self, alpha: &[usize], j: usize) -> Option<&GridFunction> {
        self.entries.iter().find(|e| e.0 == alpha && e.1 == j).map(|e| &e.2)
    }

    pub fn base(&self) -> &GridFunction {
        &self.entries[0].2
    }

    /// Fields `∇_α u` with `|α| = order` (time order 0).
    pub fn spatial(&self, order: usize) -> impl Iterator<Item = &GridFunction> {
        self.entries.iter().filter(move |e| e.1 == 0 && e.0.iter().sum::<usize>() == order).map(|e| &e.2)
    }

    pub fn time_derivative(&self) -> Option<&GridFunction> {
        self.entries.iter().find(|e| e.1 == 1).map(|e| &e.2)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], usize, &GridFunction)> {
        self.entries.iter().map(|e| (e.0.as_slice(), e.1, &e.2))
    }
}
