//! Parabolic balls `U_ρ(x₀, t₀) = B_ρ(x₀) × (t₀ − ρ⁴, t₀ + ρ⁴)` and their
//! truncations.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::holder::{Region, SpaceTimeGrid};
use crate::{math, Error, Result};

/// Which half-spaces cut a ball: `time_above` is `U⁺`, `time_below` is `U⁻`,
/// `space_half` is `U_{ρ+}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Truncation {
    pub time_above: bool,
    pub time_below: bool,
    pub space_half: bool,
}

/// Intersection of closed half-spaces `t ≥ floor`, `t ≤ ceiling`, `xₙ ≥ 0`;
/// absent bounds are not imposed. Always convex.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HalfSpaces {
    pub floor: Option<f64>,
    pub ceiling: Option<f64>,
    pub space_half: bool,
}

impl HalfSpaces {
    pub const WHOLE: HalfSpaces = HalfSpaces { floor: None, ceiling: None, space_half: false };

    pub fn contains(&self, x: &[f64], t: f64) -> bool {
        self.contains_space(x) && self.contains_time(t)
    }

    fn contains_space(&self, x: &[f64]) -> bool {
        !self.space_half || x[x.len() - 1] >= 0.0
    }

    fn contains_time(&self, t: f64) -> bool {
        self.floor.map_or(true, |f| t >= f) && self.ceiling.map_or(true, |c| t <= c)
    }

    /// Nearest point of the set, coordinatewise.
    pub fn clamp(&self, x: &mut [f64], t: f64) -> f64 {
        if self.space_half {
            let n = x.len() - 1;
            x[n] = x[n].max(0.0);
        }
        let t = self.floor.map_or(t, |f| t.max(f));
        self.ceiling.map_or(t, |c| t.min(c))
    }

    pub fn ball(&self, center: Vec<f64>, time: f64, radius: f64) -> ParabolicBall {
        ParabolicBall { center, time, radius, cut: *self }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParabolicBall {
    pub center: Vec<f64>,
    pub time: f64,
    pub radius: f64,
    pub cut: HalfSpaces,
}

impl ParabolicBall {
    pub fn new(center: Vec<f64>, time: f64, radius: f64) -> Self {
        HalfSpaces::WHOLE.ball(center, time, radius)
    }

    /// `U⁺`: intersect with `t ≥ floor`.
    pub fn above(mut self, floor: f64) -> Self {
        self.cut.floor = Some(floor);
        self
    }

    /// `U⁻`: intersect with `t ≤ ceiling`.
    pub fn below(mut self, ceiling: f64) -> Self {
        self.cut.ceiling = Some(ceiling);
        self
    }

    /// `U_{ρ+}`: intersect with `xₙ ≥ 0`.
    pub fn half_space(mut self) -> Self {
        self.cut.space_half = true;
        self
    }

    pub fn truncation(&self) -> Truncation {
        Truncation {
            time_above: self.cut.floor.is_some(),
            time_below: self.cut.ceiling.is_some(),
            space_half: self.cut.space_half,
        }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Same center and truncation, another radius.
    pub fn with_radius(&self, radius: f64) -> Self {
        Self { radius, ..self.clone() }
    }

    pub fn contains(&self, x: &[f64], t: f64) -> Result<bool> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        Ok(self.contains_unchecked(x, t))
    }

    pub(crate) fn contains_unchecked(&self, x: &[f64], t: f64) -> bool {
        self.contains_space(x) && self.contains_time(t)
    }

    pub(crate) fn contains_space(&self, x: &[f64]) -> bool {
        let d2: f64 = x.iter().zip(&self.center).map(|(a, b)| (a - b) * (a - b)).sum();
        d2 < self.radius * self.radius && self.cut.contains_space(x)
    }

    pub(crate) fn contains_time(&self, t: f64) -> bool {
        let r4 = self.radius * self.radius * self.radius * self.radius;
        (t - self.time).abs() < r4 && self.cut.contains_time(t)
    }

    /// Grid samples inside the ball.
    pub fn region(&self, grid: &SpaceTimeGrid) -> Region {
        let r4 = self.radius * self.radius * self.radius * self.radius;
        let mut lo = self.time - r4;
        let mut hi = self.time + r4;
        let (mut lo_closed, mut hi_closed) = (false, false);
        if let Some(f) = self.cut.floor.filter(|&f| f >= lo) {
            lo = f;
            lo_closed = true;
        }
        if let Some(c) = self.cut.ceiling.filter(|&c| c <= hi) {
            hi = c;
            hi_closed = true;
        }
        let time = grid.time_range(lo, hi, lo_closed, hi_closed);
        grid.region_where(time, |x| self.contains_space(x))
    }

    /// Parabolic distance from the center to `(x, t)`.
    pub fn distance_from_center(&self, x: &[f64], t: f64) -> f64 {
        let d: f64 = math::sqrt(x.iter().zip(&self.center).map(|(a, b)| (a - b) * (a - b)).sum());
        d.max(math::sqrt(math::sqrt((t - self.time).abs())))
    }

    /// Whether `self ⊂ other` as untruncated balls; implies inclusion for
    /// balls cut by the same half-spaces.
    pub fn inside(&self, other: &ParabolicBall) -> bool {
        let d = math::sqrt(self.center.iter().zip(&other.center).map(|(a, b)| (a - b) * (a - b)).sum());
        let r4 = |r: f64| r * r * r * r;
        d + self.radius <= other.radius && (self.time - other.time).abs() + r4(self.radius) <= r4(other.radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn membership_examples() {
        let b = ParabolicBall::new(vec![0.0], 0.0, 1.0);
        assert!(b.contains(&[0.0], 0.999).unwrap());
        assert!(!b.contains(&[0.0], 1.0).unwrap());
        assert!(!b.clone().above(0.0).contains(&[0.0], -0.1).unwrap());
        assert!(b.clone().above(0.0).contains(&[0.0], 0.0).unwrap());
        let h = ParabolicBall::new(vec![0.0, 0.0], 0.0, 1.0).half_space();
        assert!(h.contains(&[0.3, 0.0], 0.0).unwrap());
        assert!(!h.contains(&[0.3, -1e-12], 0.0).unwrap());
        assert!(b.contains(&[0.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn agrees_with_the_max_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let base = ParabolicBall::new(vec![0.2, -0.1], 0.3, 0.7);
        let variants = [
            base.clone(),
            base.clone().above(0.1),
            base.clone().below(0.4),
            base.clone().half_space(),
            base.clone().half_space().above(0.1),
            base.clone().half_space().below(0.4),
        ];
        for b in &variants {
            for _ in 0..100_000 {
                let x = [rng.random_range(-1.0..1.5), rng.random_range(-1.0..1.0)];
                let t = rng.random_range(-0.2..0.8);
                let d = crate::holder::parabolic_distance((&x, t), (&b.center, b.time)).unwrap();
                let mut expect = d < b.radius;
                if let Some(f) = b.cut.floor {
                    expect &= t >= f;
                }
                if let Some(c) = b.cut.ceiling {
                    expect &= t <= c;
                }
                if b.cut.space_half {
                    expect &= x[1] >= 0.0;
                }
                // The max-form and the product form differ only by rounding
                // on the boundary, which random points do not hit.
                assert_eq!(b.contains(&x, t).unwrap(), expect);
            }
        }
    }

    #[test]
    fn region_collects_inside_samples() {
        let times: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        let g = SpaceTimeGrid::cube(1, -1.0, 1.0, 21, times).unwrap();
        let b = ParabolicBall::new(vec![0.0], 0.5, 0.5).above(0.45);
        let r = b.region(&g);
        let mut x = [0.0];
        let mut count = 0;
        for s in 0..g.space_len() {
            g.point(s, &mut x);
            for (k, &t) in g.times().iter().enumerate() {
                let inside = b.contains(&x, t).unwrap();
                assert_eq!(inside, r.space.contains(&s) && r.time.contains(&k));
                count += inside as usize;
            }
        }
        assert_eq!(count, r.sample_count());
    }
}
