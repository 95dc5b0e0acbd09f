//! Seminorms over `V × [0, T]` against their values on the pieces of a covering.

use serde::{Deserialize, Serialize};

use super::covering::Covering;
use crate::holder::{spatial_seminorm_over, temporal_seminorm_over, GridFunction, Region};
use crate::{math, Error, Result};

/// Relative slack for comparing sums of floating-point seminorms.
const SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubadditivityReport {
    pub alpha: f64,
    pub beta: f64,
    pub pieces: usize,
    pub global_space: f64,
    pub global_time: f64,
    pub sum_space: f64,
    pub sum_time: f64,
    pub max_space: f64,
    pub max_time: f64,
    pub max_sup: f64,
    /// `N·max[u]^space + (2/ρ^α)·max‖u‖`.
    pub bound_space: f64,
    /// `4·max[u]^time + (2/ρ^{4β})·max‖u‖`.
    pub bound_time: f64,
    /// Smallest `C` with `global ≤ N·max + C·max‖u‖`; `0` when `max‖u‖ = 0`.
    pub realized_c_space: f64,
    pub realized_c_time: f64,
    pub holds_sum: bool,
    pub holds_sharpened: bool,
}

fn le(a: f64, b: f64) -> bool {
    a <= b + SLACK * (1.0 + b.abs())
}

fn realized(global: f64, lead: f64, sup: f64) -> f64 {
    if sup > 0.0 {
        ((global - lead) / sup).max(0.0)
    } else {
        0.0
    }
}

/// Compares `[u]` over the samples of `V̄ × [0, T]` with the sum over the
/// `ρ`-pieces, and with the sharpened bounds. `u` must be sampled on a grid
/// whose spatial extent contains the pieces.
pub fn cover_subadditivity_check(u: &GridFunction, cover: &Covering, alpha: f64, beta: f64) -> Result<SubadditivityReport> {
    let grid = u.grid();
    if grid.dim() != cover.dim() {
        return Err(Error::DimensionMismatch { expected: cover.dim(), found: grid.dim() });
    }
    if !(alpha > 0.0 && alpha <= 1.0 && beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidParameter("exponents must lie in (0, 1]".into()));
    }
    let time = grid.time_range(0.0, cover.t_final, true, true);
    let global: Region = grid.region_where(time, |x| cover.v.contains_closed(x));
    if global.is_empty() {
        return Err(Error::InvalidGrid("no samples in V × [0, T]".into()));
    }
    let global_space = spatial_seminorm_over(u, &global, alpha);
    let global_time = temporal_seminorm_over(u, &global, beta);

    let (mut sum_space, mut sum_time, mut max_space, mut max_time, mut max_sup) = (0.0, 0.0, 0.0f64, 0.0f64, 0.0f64);
    let mut pieces = 0;
    for piece in cover.pieces() {
        let region = piece.small.region(grid);
        pieces += 1;
        if region.is_empty() {
            continue;
        }
        let s = spatial_seminorm_over(u, &region, alpha);
        let t = temporal_seminorm_over(u, &region, beta);
        sum_space += s;
        sum_time += t;
        max_space = max_space.max(s);
        max_time = max_time.max(t);
        max_sup = max_sup.max(u.sup_over(&region));
    }
    let n = cover.spatial_count() as f64;
    let c_space = 2.0 / math::powf(cover.rho, alpha);
    let c_time = 2.0 / math::powf(cover.rho, 4.0 * beta);
    let bound_space = n * max_space + c_space * max_sup;
    let bound_time = 4.0 * max_time + c_time * max_sup;
    Ok(SubadditivityReport {
        alpha,
        beta,
        pieces,
        global_space,
        global_time,
        sum_space,
        sum_time,
        max_space,
        max_time,
        max_sup,
        bound_space,
        bound_time,
        realized_c_space: realized(global_space, n * max_space, max_sup),
        realized_c_time: realized(global_time, 4.0 * max_time, max_sup),
        holds_sum: le(global_space, sum_space) && le(global_time, sum_time),
        holds_sharpened: le(global_space, bound_space) && le(global_time, bound_time),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_covering, BoundaryMode, BoxDomain};
    use crate::holder::SpaceTimeGrid;
    use alloc::vec::Vec;

    fn setup() -> (Covering, SpaceTimeGrid) {
        let v = BoxDomain::cube(1, -1.0, 1.0).unwrap();
        let vp = BoxDomain::cube(1, -2.0, 2.0).unwrap();
        let c = build_covering(&v, &vp, 4.0, 4.0, BoundaryMode::Interior).unwrap();
        let times: Vec<f64> = (0..=1280).map(|i| i as f64 / 320.0).collect();
        (c, SpaceTimeGrid::cube(1, -2.0, 2.0, 41, times).unwrap())
    }

    #[test]
    fn constant_gives_zero() {
        let (c, g) = setup();
        let u = GridFunction::from_fn(g, |_, _| 3.0).unwrap();
        let r = cover_subadditivity_check(&u, &c, 0.5, 0.125).unwrap();
        assert_eq!((r.global_space, r.sum_space, r.global_time, r.sum_time), (0.0, 0.0, 0.0, 0.0));
        assert!(r.holds_sum && r.holds_sharpened);
    }

    #[test]
    fn linear_holds_strictly() {
        let (c, g) = setup();
        let u = GridFunction::from_fn(g, |x, _| x[0]).unwrap();
        let r = cover_subadditivity_check(&u, &c, 0.5, 0.125).unwrap();
        assert!((r.global_space - math::sqrt(2.0)).abs() < 1e-12);
        assert!(r.global_space < r.sum_space);
        assert!(r.holds_sharpened);
    }
}
