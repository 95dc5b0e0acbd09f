//! Even-parity real spherical harmonics as the Neumann eigenbasis of `S²₊`.

use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::legendre::reduced_legendre;
use crate::{math, Error, Result};

/// Largest supported degree.
pub const MAX_DEGREE: u32 = 64;

const SPHERE_TOL: f64 = 1e-10;

/// One Neumann eigenpair `(l, m)` with `λ = l(l+1)` and `l + |m|` even.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenmode {
    pub l: u32,
    pub m: i32,
    pub lambda: f64,
    /// Factor turning the unnormalized harmonic
    /// `P_l^{|m|}(cos θ) · {cos, sin}(|m|φ)` into the `L²(S²₊)`-unit one.
    pub normalization: f64,
}

impl Eigenmode {
    pub fn new(l: u32, m: i32) -> Result<Self> {
        if l > MAX_DEGREE {
            return Err(Error::InvalidParameter(format!("degree {l} exceeds the cap {MAX_DEGREE}")));
        }
        if m.unsigned_abs() > l || (l + m.unsigned_abs()) % 2 != 0 {
            return Err(Error::InvalidParameter(format!("(l, m) = ({l}, {m}) is not an even-parity mode")));
        }
        Ok(Self { l, m, lambda: (l * (l + 1)) as f64, normalization: normalization(l, m.unsigned_abs()) })
    }

    pub fn is_kernel(&self) -> bool {
        self.l <= 1
    }
}

/// `√2 · √((2l+1)/(4π) · (l−m)!/(l+m)!)`, times `√2` again for `m ≠ 0`.
fn normalization(l: u32, m: u32) -> f64 {
    let mut ratio = 1.0;
    for k in (l - m + 1)..=(l + m) {
        ratio /= k as f64;
    }
    let full = math::sqrt((2 * l + 1) as f64 / (4.0 * core::f64::consts::PI) * ratio);
    let real = if m == 0 { full } else { core::f64::consts::SQRT_2 * full };
    core::f64::consts::SQRT_2 * real
}

fn check_unit(omega: &[f64; 3]) -> Result<()> {
    let norm = math::sqrt(omega.iter().map(|v| v * v).sum());
    if (norm - 1.0).abs() > SPHERE_TOL {
        return Err(Error::OffSphere { norm });
    }
    Ok(())
}

/// `Re` and `Im` of `(ω₁ + iω₂)ᵐ = sinᵐθ · e^{imφ}`.
fn azimuthal(omega: &[f64; 3], m: u32) -> (f64, f64) {
    let (mut re, mut im) = (1.0, 0.0);
    for _ in 0..m {
        (re, im) = (re * omega[0] - im * omega[1], re * omega[1] + im * omega[0]);
    }
    (re, im)
}

/// The mode's formula evaluated anywhere on the unit sphere; on `S²₊` this
/// is the `L²(S²₊)`-normalized eigenfunction.
pub fn eval_full_sphere(mode: &Eigenmode, omega: &[f64; 3]) -> Result<f64> {
    check_unit(omega)?;
    let am = mode.m.unsigned_abs();
    let q = reduced_legendre(am, mode.l, omega[2])[(mode.l - am) as usize];
    let (re, im) = azimuthal(omega, am);
    let trig = match mode.m {
        0 => 1.0,
        m if m > 0 => core::f64::consts::SQRT_2 * re,
        _ => core::f64::consts::SQRT_2 * im,
    };
    Ok(core::f64::consts::SQRT_2 * q * trig)
}

/// `φ_(l,m)(ω)` on the closed upper half-sphere.
pub fn eval_mode(mode: &Eigenmode, omega: &[f64; 3]) -> Result<f64> {
    if omega[2] < -SPHERE_TOL {
        return Err(Error::OutsideHemisphere(omega[2]));
    }
    eval_full_sphere(mode, omega)
}

/// Modes ordered by `λ`, then `(l, m)` lexicographically; index 0 is the
/// constant mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeBasis {
    modes: Vec<Eigenmode>,
}

impl ModeBasis {
    /// All even-parity `(l, m)` with `l ≤ l_max`.
    pub fn enumerate(l_max: u32) -> Result<Self> {
        if l_max > MAX_DEGREE {
            return Err(Error::InvalidParameter(format!("l_max {l_max} exceeds the cap {MAX_DEGREE}")));
        }
        let mut modes = Vec::new();
        for l in 0..=l_max {
            for m in -(l as i32)..=(l as i32) {
                if (l + m.unsigned_abs()) % 2 == 0 {
                    modes.push(Eigenmode::new(l, m)?);
                }
            }
        }
        Ok(Self { modes })
    }

    /// Basis from an explicit list; sorted into canonical order, duplicates
    /// rejected.
    pub fn from_modes(mut modes: Vec<Eigenmode>) -> Result<Self> {
        modes.sort_by(|a, b| a.l.cmp(&b.l).then(a.m.cmp(&b.m)));
        if modes.windows(2).any(|w| w[0].l == w[1].l && w[0].m == w[1].m) {
            return Err(Error::InvalidParameter("duplicate mode in basis".into()));
        }
        Ok(Self { modes })
    }

    pub fn modes(&self) -> &[Eigenmode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn l_max(&self) -> u32 {
        self.modes.iter().map(|m| m.l).max().unwrap_or(0)
    }

    pub fn index_of(&self, l: u32, m: i32) -> Option<usize> {
        self.modes.iter().position(|e| e.l == l && e.m == m)
    }

    /// Values of every mode at `omega`, in basis order.
    pub fn eval_all(&self, omega: &[f64; 3]) -> Result<Vec<f64>> {
        self.modes.iter().map(|m| eval_mode(m, omega)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    const PI: f64 = core::f64::consts::PI;

    #[test]
    fn enumeration_examples() {
        let b = ModeBasis::enumerate(0).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.modes()[0].lambda, 0.0);
        let b = ModeBasis::enumerate(1).unwrap();
        let lm: Vec<_> = b.modes().iter().map(|m| (m.l, m.m, m.lambda)).collect();
        assert_eq!(lm, vec![(0, 0, 0.0), (1, -1, 2.0), (1, 1, 2.0)]);
        let b = ModeBasis::enumerate(2).unwrap();
        let lambdas: Vec<_> = b.modes().iter().map(|m| m.lambda).collect();
        assert_eq!(lambdas, vec![0.0, 2.0, 2.0, 6.0, 6.0, 6.0]);
        assert!(ModeBasis::enumerate(65).is_err());
    }

    #[test]
    fn kernel_values() {
        let b = ModeBasis::enumerate(1).unwrap();
        let w = [0.6, 0.0, 0.8];
        assert!((eval_mode(&b.modes()[0], &w).unwrap() - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
        let c = (3.0 / (2.0 * PI)).sqrt();
        assert!((eval_mode(&b.modes()[2], &[1.0, 0.0, 0.0]).unwrap() - c).abs() < 1e-15);
        let w = [0.48, 0.64, 0.6];
        assert!((eval_mode(&b.modes()[1], &w).unwrap() - c * 0.64).abs() < 1e-15);
        assert!((eval_mode(&b.modes()[2], &w).unwrap() - c * 0.48).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_points_and_modes() {
        let m = Eigenmode::new(2, 0).unwrap();
        assert!(matches!(eval_mode(&m, &[1.0, 0.0, 0.1]), Err(Error::OffSphere { .. })));
        assert!(matches!(eval_mode(&m, &[0.6, 0.0, -0.8]), Err(Error::OutsideHemisphere(_))));
        assert!(eval_full_sphere(&m, &[0.6, 0.0, -0.8]).is_ok());
        assert!(Eigenmode::new(2, 1).is_err());
        assert!(Eigenmode::new(1, 2).is_err());
    }

    #[test]
    fn normalization_matches_formula_at_a_point() {
        // P_3^1(x) = (3/2)(5x² − 1) sin θ without phase.
        let m = Eigenmode::new(3, 1).unwrap();
        let (th, ph) = (0.7f64, 1.1f64);
        let w = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
        let p = 1.5 * (5.0 * th.cos().powi(2) - 1.0) * th.sin() * ph.cos();
        assert!((eval_mode(&m, &w).unwrap() - m.normalization * p).abs() < 1e-14);
    }
}
