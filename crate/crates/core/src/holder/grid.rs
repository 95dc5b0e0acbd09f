use alloc::format;
use alloc::vec::Vec;
use core::ops::Range;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Minimum number of samples per spatial axis.
pub const MIN_AXIS_POINTS: usize = 5;

/// One uniformly spaced coordinate axis: `start + i * step` for `i < len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl GridAxis {
    pub fn new(start: f64, step: f64, len: usize) -> Self {
        Self { start, step, len }
    }

    /// `len` equally spaced samples covering the closed interval `[a, b]`.
    pub fn spanning(a: f64, b: f64, len: usize) -> Self {
        let step = if len > 1 { (b - a) / (len - 1) as f64 } else { 1.0 };
        Self { start: a, step, len }
    }

    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.coord(self.len.saturating_sub(1))
    }

    /// Indices `i` with `lo <= coord(i) <= hi`.
    pub fn index_range(&self, lo: f64, hi: f64) -> Range<usize> {
        let mut a = 0;
        while a < self.len && self.coord(a) < lo {
            a += 1;
        }
        let mut b = a;
        while b < self.len && self.coord(b) <= hi {
            b += 1;
        }
        a..b
    }
}

/// Axis-aligned product grid in space times a strictly increasing list of
/// sample times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimeGrid {
    axes: Vec<GridAxis>,
    times: Vec<f64>,
}

impl SpaceTimeGrid {
    pub fn new(axes: Vec<GridAxis>, times: Vec<f64>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidGrid("spatial dimension must be positive".into()));
        }
        for (i, ax) in axes.iter().enumerate() {
            if !(ax.step > 0.0) || !ax.step.is_finite() || !ax.start.is_finite() {
                return Err(Error::InvalidGrid(format!("axis {i}: spacing must be positive and finite")));
            }
            if ax.len < MIN_AXIS_POINTS {
                return Err(Error::InvalidGrid(format!(
                    "axis {i}: {} points, at least {MIN_AXIS_POINTS} required",
                    ax.len
                )));
            }
        }
        if times.is_empty() {
            return Err(Error::InvalidGrid("at least one time point required".into()));
        }
        if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("time points must be finite and strictly increasing".into()));
        }
        Ok(Self { axes, times })
    }

    /// Cube `[a, b]^dim` with `len` points per axis and the given times.
    pub fn cube(dim: usize, a: f64, b: f64, len: usize, times: Vec<f64>) -> Result<Self> {
        Self::new(alloc::vec![GridAxis::spanning(a, b, len); dim], times)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[GridAxis] {
        &self.axes
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Number of spatial sample points.
    pub fn space_len(&self) -> usize {
        self.axes.iter().map(|a| a.len).product()
    }

    pub fn time_len(&self) -> usize {
        self.times.len()
    }

    /// Row-major strides (last axis fastest).
    pub fn strides(&self) -> Vec<usize> {
        let mut s = alloc::vec![1usize; self.dim()];
        for a in (0..self.dim().saturating_sub(1)).rev() {
            s[a] = s[a + 1] * self.axes[a + 1].len;
        }
        s
    }

    pub fn multi_index(&self, mut flat: usize, out: &mut [usize]) {
        for a in (0..self.dim()).rev() {
            let len = self.axes[a].len;
            out[a] = flat % len;
            flat /= len;
        }
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.axes).fold(0, |acc, (&i, ax)| acc * ax.len + i)
    }

    /// Coordinates of spatial point `flat`.
    pub fn point(&self, flat: usize, out: &mut [f64]) {
        let mut rem = flat;
        for a in (0..self.dim()).rev() {
            let len = self.axes[a].len;
            out[a] = self.axes[a].coord(rem % len);
            rem /= len;
        }
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out = alloc::vec![0.0; self.space_len() * n];
        for (s, chunk) in out.chunks_mut(n).enumerate() {
            self.point(s, chunk);
        }
        out
    }

    /// Grid sampled at `(λx, λ⁴t)` for every original sample `(x, t)`: the
    /// grid of `u_λ(x, t) = u(λx, λ⁴t)` carrying the same values.
    pub fn rescaled(&self, lambda: f64) -> Self {
        let axes = self
            .axes
            .iter()
            .map(|a| GridAxis::new(a.start / lambda, a.step / lambda, a.len))
            .collect();
        let l4 = lambda * lambda * lambda * lambda;
        let times = self.times.iter().map(|t| t / l4).collect();
        Self { axes, times }
    }

    /// Same spatial grid with other sample times.
    pub fn with_times(&self, times: Vec<f64>) -> Result<Self> {
        Self::new(self.axes.clone(), times)
    }

    /// Indices of sample times in the interval `lo..hi`, with the ends
    /// included or excluded as requested.
    pub fn time_range(&self, lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Range<usize> {
        let a = self
            .times
            .partition_point(|&t| if lo_closed { t < lo } else { t <= lo });
        let b = self
            .times
            .partition_point(|&t| if hi_closed { t <= hi } else { t < hi });
        a..b.max(a)
    }

    pub fn full_region(&self) -> Region {
        Region { space: (0..self.space_len()).collect(), time: 0..self.time_len() }
    }

    /// Region of all samples whose spatial point satisfies `pred`.
    pub fn region_where(&self, time: Range<usize>, mut pred: impl FnMut(&[f64]) -> bool) -> Region {
        let mut buf = alloc::vec![0.0; self.dim()];
        let space = (0..self.space_len())
            .filter(|&s| {
                self.point(s, &mut buf);
                pred(&buf)
            })
            .collect();
        Region { space, time }
    }
}

/// Product subset of a grid: a list of spatial indices times a contiguous
/// range of time indices. Parabolic balls and their truncations restrict to
/// sets of this form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Region {
    pub space: Vec<usize>,
    pub time: Range<usize>,
}

impl Region {
    pub fn is_empty(&self) -> bool {
        self.space.is_empty() || self.time.is_empty()
    }

    pub fn sample_count(&self) -> usize {
        self.space.len() * self.time.len()
    }
}

/// Sampled `u(x, t)` on a [`SpaceTimeGrid`]. Values are stored space-major:
/// `values[s * time_len + k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    grid: SpaceTimeGrid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: SpaceTimeGrid, values: Vec<f64>) -> Result<Self> {
        let expected = grid.space_len() * grid.time_len();
        if values.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: values.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("grid function values must be finite".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: SpaceTimeGrid, mut f: impl FnMut(&[f64], f64) -> f64) -> Result<Self> {
        let nt = grid.time_len();
        let mut values = Vec::with_capacity(grid.space_len() * nt);
        let mut x = alloc::vec![0.0; grid.dim()];
        for s in 0..grid.space_len() {
            grid.point(s, &mut x);
            for &t in grid.times() {
                values.push(f(&x, t));
            }
        }
        Self::new(grid, values)
    }

    pub(crate) fn from_raw(grid: SpaceTimeGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.space_len() * grid.time_len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &SpaceTimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn at(&self, space: usize, time: usize) -> f64 {
        self.values[space * self.grid.time_len() + time]
    }

    /// Same values on the `λ`-rescaled grid, i.e. `u_λ(x, t) = u(λx, λ⁴t)`.
    pub fn rescaled(&self, lambda: f64) -> Self {
        Self { grid: self.grid.rescaled(lambda), values: self.values.clone() }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|v| v * factor).collect() }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn sup_over(&self, region: &Region) -> f64 {
        let mut m: f64 = 0.0;
        for &s in &region.space {
            for k in region.time.clone() {
                m = m.max(self.at(s, k).abs());
            }
        }
        m
    }

    /// Snapshot at time index `k` as a single-time grid function.
    pub fn time_slice(&self, k: usize) -> Self {
        let grid = SpaceTimeGrid { axes: self.grid.axes.clone(), times: alloc::vec![self.grid.times[k]] };
        let values = (0..self.grid.space_len()).map(|s| self.at(s, k)).collect();
        Self { grid, values }
    }

    /// Restriction to a sub-block of the grid: index ranges per axis and in time.
    pub fn sub_grid(&self, axes: &[Range<usize>], time: Range<usize>) -> Result<Self> {
        if axes.len() != self.grid.dim() {
            return Err(Error::DimensionMismatch { expected: self.grid.dim(), found: axes.len() });
        }
        let new_axes: Vec<GridAxis> = axes
            .iter()
            .zip(&self.grid.axes)
            .map(|(r, ax)| GridAxis::new(ax.coord(r.start), ax.step, r.len()))
            .collect();
        let grid = SpaceTimeGrid::new(new_axes, self.grid.times[time.clone()].to_vec())?;
        let mut idx = alloc::vec![0usize; self.grid.dim()];
        let mut values = Vec::with_capacity(grid.space_len() * grid.time_len());
        for s in 0..grid.space_len() {
            grid.multi_index(s, &mut idx);
            for (i, r) in idx.iter_mut().zip(axes) {
                *i += r.start;
            }
            let src = self.grid.flat_index(&idx);
            for k in time.clone() {
                values.push(self.at(src, k));
            }
        }
        Self::new(grid, values)
    }
}
