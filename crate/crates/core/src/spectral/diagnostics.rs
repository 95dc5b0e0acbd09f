//! Finite-difference and spectral diagnostics for half-sphere fields.

use serde::{Deserialize, Serialize};

use super::basis::{eval_full_sphere, eval_mode, Eigenmode};
use super::field::SpectralField;
use crate::holder::fornberg_weights;
use crate::{math, Result};

fn unit(theta: f64, phi: f64) -> [f64; 3] {
    let s = math::sin(theta);
    [s * math::cos(phi), s * math::sin(phi), math::cos(theta)]
}

/// `Δf = f_θθ + cot θ f_θ + f_φφ / sin²θ` by central differences of step
/// `h` in both angles; `f` is evaluated on the whole sphere.
pub fn laplace_beltrami_fd(mut f: impl FnMut(&[f64; 3]) -> Result<f64>, theta: f64, phi: f64, h: f64) -> Result<f64> {
    let c = f(&unit(theta, phi))?;
    let tp = f(&unit(theta + h, phi))?;
    let tm = f(&unit(theta - h, phi))?;
    let pp = f(&unit(theta, phi + h))?;
    let pm = f(&unit(theta, phi - h))?;
    let s = math::sin(theta);
    let f_tt = (tp - 2.0 * c + tm) / (h * h);
    let f_t = (tp - tm) / (2.0 * h);
    let f_pp = (pp - 2.0 * c + pm) / (h * h);
    Ok(f_tt + math::cos(theta) / s * f_t + f_pp / (s * s))
}

/// `∂_θ φ` at the equator point of azimuth `phi` from a one-sided five-point
/// stencil that only samples the closed upper half-sphere.
pub fn equator_normal_derivative(mode: &Eigenmode, phi: f64, h: f64) -> Result<f64> {
    let half_pi = core::f64::consts::FRAC_PI_2;
    let offsets = [0.0, -1.0, -2.0, -3.0, -4.0];
    let w = fornberg_weights(0.0, &offsets, 1);
    let mut acc = 0.0;
    for (o, wk) in offsets.iter().zip(&w[1]) {
        acc += wk * eval_mode(mode, &unit(half_pi + o * h, phi))?;
    }
    Ok(acc / h)
}

/// Whether a mode is invariant under `ω₃ → −ω₃` at `omega`, within `tol`.
pub fn is_even_at(mode: &Eigenmode, omega: &[f64; 3], tol: f64) -> Result<bool> {
    let up = eval_full_sphere(mode, omega)?;
    let down = eval_full_sphere(mode, &[omega[0], omega[1], -omega[2]])?;
    Ok((up - down).abs() <= tol)
}

/// `‖u‖`, `‖∇u‖` and `‖Δu‖` in `L²(S²₊)` from the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralNorms {
    pub l2: f64,
    pub gradient: f64,
    pub laplacian: f64,
}

pub fn spectral_norms(field: &SpectralField) -> SpectralNorms {
    let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
    for (m, x) in field.basis().modes().iter().zip(field.coeffs()) {
        a += x * x;
        b += m.lambda * x * x;
        c += m.lambda * m.lambda * x * x;
    }
    SpectralNorms { l2: math::sqrt(a), gradient: math::sqrt(b), laplacian: math::sqrt(c) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{ModeBasis, Projector};
    use alloc::sync::Arc;

    #[test]
    fn eigen_relation_holds_to_second_order() {
        let b = ModeBasis::enumerate(4).unwrap();
        for m in b.modes() {
            let mut errs = [0.0; 2];
            for (i, h) in [1e-2, 5e-3].iter().enumerate() {
                let lap = laplace_beltrami_fd(|w| eval_full_sphere(m, w), 0.9, 0.4, *h).unwrap();
                let val = eval_full_sphere(m, &unit(0.9, 0.4)).unwrap();
                errs[i] = (lap + m.lambda * val).abs();
            }
            assert!(errs[0] < 1e-2, "{m:?} {errs:?}");
            assert!(errs[1] <= errs[0] / 3.0 || errs[1] < 1e-9, "{m:?} {errs:?}");
        }
    }

    #[test]
    fn neumann_condition_on_the_equator() {
        let b = ModeBasis::enumerate(8).unwrap();
        for m in b.modes() {
            for phi in [0.0, 0.7, 2.5, 4.0] {
                assert!(equator_normal_derivative(m, phi, 1e-3).unwrap().abs() < 1e-6, "{m:?}");
            }
        }
    }

    #[test]
    fn parity() {
        let b = ModeBasis::enumerate(6).unwrap();
        let w = [0.36, 0.48, 0.8];
        for m in b.modes() {
            assert!(is_even_at(m, &w, 1e-12).unwrap());
        }
    }

    #[test]
    fn spectral_norms_of_a_mode() {
        let p = Projector::for_basis(Arc::new(ModeBasis::enumerate(2).unwrap())).unwrap();
        let f = SpectralField::mode(p.basis().clone(), 2, 0).unwrap().scaled(2.0);
        let n = spectral_norms(&f);
        assert_eq!(n.l2, 2.0);
        assert!((n.gradient - 2.0 * 6f64.sqrt()).abs() < 1e-14);
        assert_eq!(n.laplacian, 12.0);
    }
}
