//! Forward difference quotients `D^ε_i f = (f(x + εeᵢ) − f(x))/ε` and their
//! integral representations.

use alloc::vec;
use alloc::vec::Vec;

use crate::holder::{GridAxis, GridFunction, SpaceTimeGrid};
use crate::{math, Error, Result};

/// Relative tolerance for `ε` being a multiple of the spacing.
const ALIGN_TOL: f64 = 1e-9;

fn steps_for(axis: &GridAxis, eps: f64, index: usize) -> Result<usize> {
    let ratio = eps / axis.step;
    let steps = math::round(ratio);
    if !(eps > 0.0) || steps < 1.0 || (ratio - steps).abs() > ALIGN_TOL * ratio.max(1.0) {
        return Err(Error::MisalignedStep { eps, spacing: axis.step, axis: index });
    }
    Ok(steps as usize)
}

fn forward_once(u: &GridFunction, axis: usize, eps: f64) -> Result<GridFunction> {
    let grid = u.grid();
    let n = grid.dim();
    if axis >= n {
        return Err(Error::DimensionMismatch { expected: n, found: axis + 1 });
    }
    let src = grid.axes()[axis];
    let steps = steps_for(&src, eps, axis)?;
    if steps >= src.len {
        return Err(Error::InvalidGrid(alloc::format!("axis {axis}: shift of {steps} steps leaves no points")));
    }
    let mut axes = grid.axes().to_vec();
    axes[axis] = GridAxis::new(src.start, src.step, src.len - steps);
    let out = SpaceTimeGrid::new(axes, grid.times().to_vec())?;
    let nt = grid.time_len();
    let mut values = vec![0.0; out.space_len() * nt];
    let mut idx = vec![0usize; n];
    for s in 0..out.space_len() {
        out.multi_index(s, &mut idx);
        let base = grid.flat_index(&idx);
        idx[axis] += steps;
        let shifted = grid.flat_index(&idx);
        for k in 0..nt {
            values[s * nt + k] = (u.at(shifted, k) - u.at(base, k)) / eps;
        }
    }
    GridFunction::new(out, values)
}

/// Iterated quotient `D^ε_{i₁…i_k} u`. The grid loses `ε/h` points at the
/// upper end of each differenced axis, once per occurrence.
pub fn difference_quotient(u: &GridFunction, dirs: &[usize], eps: f64) -> Result<GridFunction> {
    let mut out = u.clone();
    for &d in dirs.iter().rev() {
        out = forward_once(&out, d, eps)?;
    }
    Ok(out)
}

/// `D^ε_{i₁…i_k} f(x)` evaluated directly from a point function.
pub fn difference_quotient_at(f: impl Fn(&[f64]) -> f64, x: &[f64], dirs: &[usize], eps: f64) -> f64 {
    let k = dirs.len();
    let mut y = x.to_vec();
    let mut total = 0.0;
    for mask in 0..(1usize << k) {
        y.copy_from_slice(x);
        for (bit, &d) in dirs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                y[d] += eps;
            }
        }
        let sign = if (k - mask.count_ones() as usize) % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * f(&y);
    }
    total / math::powi(eps, k as i32)
}

/// Midpoint rule with `nodes` points per direction for
/// `ε^{−k} ∫_{[0,ε]^k} ∂_{i₁…i_k} f(x + Σρₘe_{iₘ}) dρ`, where `df` evaluates the
/// mixed derivative.
pub fn quotient_integral(df: impl Fn(&[f64]) -> f64, x: &[f64], dirs: &[usize], eps: f64, nodes: usize) -> f64 {
    let k = dirs.len();
    let total_nodes = (0..k).fold(1usize, |a, _| a * nodes);
    let mut y = x.to_vec();
    let mut sum = 0.0;
    for c in 0..total_nodes {
        y.copy_from_slice(x);
        let mut rest = c;
        for &d in dirs {
            let i = rest % nodes;
            rest /= nodes;
            y[d] += eps * (i as f64 + 0.5) / nodes as f64;
        }
        sum += df(&y);
    }
    sum / total_nodes as f64
}

/// Largest gap between the direct quotient and its integral representation
/// at the given points.
pub fn integral_representation_gap(
    f: impl Fn(&[f64]) -> f64,
    df: impl Fn(&[f64]) -> f64,
    points: &[Vec<f64>],
    dirs: &[usize],
    eps: f64,
    nodes: usize,
) -> f64 {
    points
        .iter()
        .map(|x| (difference_quotient_at(&f, x, dirs, eps) - quotient_integral(&df, x, dirs, eps, nodes)).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holder::BandLimited;

    fn grid() -> SpaceTimeGrid {
        SpaceTimeGrid::cube(2, -1.0, 1.0, 41, vec![0.0, 1.0]).unwrap()
    }

    #[test]
    fn linear_is_exact() {
        let u = GridFunction::from_fn(grid(), |x, t| 3.0 * x[0] - 2.0 * x[1] + t).unwrap();
        let d = difference_quotient(&u, &[1], 0.1).unwrap();
        assert!(d.values().iter().all(|v| (v + 2.0).abs() < 1e-12));
        assert_eq!(d.grid().axes()[1].len, 39);
        assert_eq!(d.grid().axes()[0].len, 41);
    }

    #[test]
    fn square_has_constant_second_quotient() {
        let u = GridFunction::from_fn(grid(), |x, _| x[0] * x[0]).unwrap();
        let d = difference_quotient(&u, &[0, 0], 0.25).unwrap();
        assert!(d.values().iter().all(|v| (v - 2.0).abs() < 1e-12));
        assert_eq!(d.grid().axes()[0].len, 31);
    }

    #[test]
    fn constant_gives_zero() {
        let u = GridFunction::from_fn(grid(), |_, _| 5.0).unwrap();
        let d = difference_quotient(&u, &[0, 1, 0], 0.05).unwrap();
        assert!(d.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn misaligned_step_is_rejected() {
        let u = GridFunction::from_fn(grid(), |_, _| 0.0).unwrap();
        assert!(matches!(difference_quotient(&u, &[0], 0.07), Err(Error::MisalignedStep { axis: 0, .. })));
        assert!(difference_quotient(&u, &[2], 0.05).is_err());
    }

    #[test]
    fn grid_and_point_quotients_agree() {
        let f = BandLimited::random(2, 2, 4, 2.0, 1.0);
        let u = GridFunction::from_fn(grid(), |x, t| f.eval(x, t)).unwrap();
        let d = difference_quotient(&u, &[0, 1], 0.1).unwrap();
        let mut x = [0.0; 2];
        for s in (0..d.grid().space_len()).step_by(37) {
            d.grid().point(s, &mut x);
            let direct = difference_quotient_at(|y| f.eval(y, 1.0), &x, &[0, 1], 0.1);
            assert!((d.at(s, 1) - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn integral_representations_hold() {
        let f = BandLimited::random(5, 3, 6, 2.0, 1.0);
        let points: Vec<Vec<f64>> = (0..20).map(|i| vec![0.1 * i as f64 - 1.0, 0.3, -0.2]).collect();
        for dirs in [vec![0], vec![0, 2], vec![1, 1, 2]] {
            let mut alpha = [0usize; 3];
            dirs.iter().for_each(|&d| alpha[d] += 1);
            let gap = integral_representation_gap(
                |y| f.eval(y, 0.0),
                |y| f.derivative(&alpha, 0, y, 0.0),
                &points,
                &dirs,
                0.05,
                64,
            );
            assert!(gap < 1e-6, "{dirs:?}: {gap:e}");
        }
    }
}
