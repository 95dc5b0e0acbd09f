//! T-uniform coverings of `V × [0, T]` by truncated parabolic balls.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ball::{HalfSpaces, ParabolicBall, Truncation};
use crate::{math, Error, Result};

/// Pieces are refined until `1000ρ⁴ < T0`, which forces `k₀ ≥ 1000`.
pub const TIME_LAYERS_MIN: f64 = 1000.0;
const MAX_HALVINGS: u32 = 200;

/// Axis-aligned open box `Π (loᵢ, hiᵢ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), found: hi.len() });
        }
        if lo.is_empty() {
            return Err(Error::InvalidParameter("box must have positive dimension".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidParameter("box sides must satisfy lo < hi".into()));
        }
        Ok(Self { lo, hi })
    }

    pub fn cube(dim: usize, a: f64, b: f64) -> Result<Self> {
        Self::new(vec![a; dim], vec![b; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains_closed(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| *a <= *v && *v <= *b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryMode {
    Interior,
    HalfSpace,
}

/// A piece `U_{jk,ρ}` together with its twin `U_{jk,2ρ}`; both carry the
/// cuts that are active for the twin.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub j: usize,
    pub k: usize,
    pub small: ParabolicBall,
    pub large: ParabolicBall,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Covering {
    pub v: BoxDomain,
    pub v_prime: BoxDomain,
    pub mode: BoundaryMode,
    pub t0: f64,
    pub t_final: f64,
    pub rho: f64,
    pub cells: Vec<usize>,
    pub k0: usize,
}

/// Closed-form covering of `V × [0, T]` with spatial centers on the cell
/// midpoints of a box subdivision of `V` whose cells have half-diagonal `< ρ`.
pub fn build_covering(v: &BoxDomain, v_prime: &BoxDomain, t0: f64, t_final: f64, mode: BoundaryMode) -> Result<Covering> {
    let n = v.dim();
    if v_prime.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: v_prime.dim() });
    }
    if !(t0 > 0.0) || !t0.is_finite() || !(t_final >= t0) || !t_final.is_finite() {
        return Err(Error::InvalidParameter(format!("need T ≥ T0 > 0, got T0={t0}, T={t_final}")));
    }
    let mut margin = f64::INFINITY;
    for i in 0..n {
        let lower_excluded = mode == BoundaryMode::HalfSpace && i == n - 1 && v.lo[i] == 0.0;
        if mode == BoundaryMode::HalfSpace && i == n - 1 && v_prime.lo[i] < 0.0 {
            return Err(Error::InvalidParameter("half-space mode needs V′ inside xₙ ≥ 0".into()));
        }
        if lower_excluded {
            if v_prime.lo[i] != 0.0 {
                return Err(Error::InvalidParameter("V touches xₙ = 0 but V′ does not".into()));
            }
        } else {
            margin = margin.min(v.lo[i] - v_prime.lo[i]);
        }
        margin = margin.min(v_prime.hi[i] - v.hi[i]);
    }
    if !(margin > 0.0) {
        return Err(Error::MarginTooSmall { margin });
    }
    let rho = (1..=MAX_HALVINGS)
        .map(|j| margin / math::powi(2.0, j as i32))
        .find(|&r| r < 1.0 && 2.0 * r <= margin && TIME_LAYERS_MIN * r * r * r * r < t0)
        .ok_or(Error::MarginTooSmall { margin })?;
    let sqrt_n = math::sqrt(n as f64);
    let cells = (0..n)
        .map(|i| math::ceil((v.hi[i] - v.lo[i]) * sqrt_n / (2.0 * rho) * (1.0 + 1e-9)) as usize)
        .collect();
    let r4 = rho * rho * rho * rho;
    let k0 = math::floor(t_final / r4) as usize;
    Ok(Covering { v: v.clone(), v_prime: v_prime.clone(), mode, t0, t_final, rho, cells, k0 })
}

/// Outcome of the Monte-Carlo audit of the three covering properties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringAudit {
    pub samples: usize,
    /// Points of `V × [0, T]` in no `U_{jk,ρ}`.
    pub uncovered: usize,
    /// Points of some `U_{jk,ρ}` outside its twin, or of a twin outside `V′ × [0, T]`.
    pub escaped: usize,
    /// Pieces whose twin is not of an allowed form (exhaustive).
    pub invalid_forms: usize,
    pub form_counts: Vec<(Truncation, usize)>,
}

impl CoveringAudit {
    pub fn holds(&self) -> bool {
        self.uncovered == 0 && self.escaped == 0 && self.invalid_forms == 0
    }
}

impl Covering {
    pub fn dim(&self) -> usize {
        self.v.dim()
    }

    /// Number `N` of spatial centers.
    pub fn spatial_count(&self) -> usize {
        self.cells.iter().product()
    }

    pub fn piece_count(&self) -> usize {
        self.spatial_count() * (self.k0 + 1)
    }

    pub fn center(&self, j: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        let mut rest = j;
        for i in (0..self.dim()).rev() {
            let c = rest % self.cells[i];
            rest /= self.cells[i];
            let w = (self.v.hi[i] - self.v.lo[i]) / self.cells[i] as f64;
            out[i] = self.v.lo[i] + (c as f64 + 0.5) * w;
        }
        out
    }

    pub fn centers(&self) -> Vec<Vec<f64>> {
        (0..self.spatial_count()).map(|j| self.center(j)).collect()
    }

    /// `t_k = kρ⁴` for `k < k₀`, `t_{k₀} = T`.
    pub fn time_knot(&self, k: usize) -> f64 {
        if k >= self.k0 {
            self.t_final
        } else {
            k as f64 * self.rho4()
        }
    }

    fn rho4(&self) -> f64 {
        let r = self.rho;
        r * r * r * r
    }

    fn time_cuts(&self, k: usize) -> (bool, bool) {
        let t = self.time_knot(k);
        let reach = 16.0 * self.rho4();
        (t - reach < 0.0, t + reach > self.t_final)
    }

    fn space_cut(&self, center: &[f64]) -> bool {
        self.mode == BoundaryMode::HalfSpace && center[self.dim() - 1] - 2.0 * self.rho < 0.0
    }

    pub fn form_of(&self, j: usize, k: usize) -> Truncation {
        let (time_above, time_below) = self.time_cuts(k);
        Truncation { time_above, time_below, space_half: self.space_cut(&self.center(j)) }
    }

    /// Allowed twin forms: at most one time cut, and a spatial cut only in
    /// half-space mode.
    pub fn is_allowed(&self, form: Truncation) -> bool {
        !(form.time_above && form.time_below) && (!form.space_half || self.mode == BoundaryMode::HalfSpace)
    }

    pub fn piece(&self, j: usize, k: usize) -> Piece {
        let center = self.center(j);
        let form = self.form_of(j, k);
        let cut = HalfSpaces {
            floor: form.time_above.then_some(0.0),
            ceiling: form.time_below.then_some(self.t_final),
            space_half: form.space_half,
        };
        let t = self.time_knot(k);
        Piece { j, k, small: cut.ball(center.clone(), t, self.rho), large: cut.ball(center, t, 2.0 * self.rho) }
    }

    /// All pieces, spatial index fastest.
    pub fn pieces(&self) -> impl Iterator<Item = Piece> + '_ {
        let n = self.spatial_count();
        (0..=self.k0).flat_map(move |k| (0..n).map(move |j| self.piece(j, k)))
    }

    /// Knots `k` whose window `(t_k − ρ⁴, t_k + ρ⁴)` can contain `t`.
    fn knots_near(&self, t: f64) -> Vec<usize> {
        let k = math::floor(t / self.rho4()) as usize;
        let hi = (k + 1).min(self.k0);
        let mut ks: Vec<usize> = (k.saturating_sub(1)..=hi).collect();
        if hi < self.k0 && self.t_final - t < self.rho4() {
            ks.push(self.k0);
        }
        ks
    }

    /// Index of the subdivision cell holding `x`, clamped to `V̄`.
    fn cell_of(&self, x: &[f64]) -> usize {
        let mut j = 0;
        for i in 0..self.dim() {
            let w = (self.v.hi[i] - self.v.lo[i]) / self.cells[i] as f64;
            let c = math::floor((x[i] - self.v.lo[i]) / w).clamp(0.0, (self.cells[i] - 1) as f64) as usize;
            j = j * self.cells[i] + c;
        }
        j
    }

    /// Pieces with `(x, t) ∈ U_{jk,ρ}` found by searching the cell holding `x`.
    pub fn pieces_containing(&self, x: &[f64], t: f64) -> Vec<Piece> {
        let j = self.cell_of(x);
        self.knots_near(t)
            .into_iter()
            .map(|k| self.piece(j, k))
            .filter(|p| p.small.contains_unchecked(x, t))
            .collect()
    }

    /// Form counts over all pieces, by exhaustive enumeration of the
    /// separate spatial and temporal classes.
    pub fn form_counts(&self) -> Vec<(Truncation, usize)> {
        let mut time_classes = [0usize; 4];
        for k in 0..=self.k0 {
            let (a, b) = self.time_cuts(k);
            time_classes[a as usize + 2 * b as usize] += 1;
        }
        let mut space_classes = [0usize; 2];
        for j in 0..self.spatial_count() {
            space_classes[self.space_cut(&self.center(j)) as usize] += 1;
        }
        let mut out = Vec::new();
        for (tc, &tn) in time_classes.iter().enumerate() {
            for (sc, &sn) in space_classes.iter().enumerate() {
                if tn * sn > 0 {
                    let form = Truncation { time_above: tc & 1 == 1, time_below: tc & 2 == 2, space_half: sc == 1 };
                    out.push((form, tn * sn));
                }
            }
        }
        out
    }

    fn in_target(&self, x: &[f64], t: f64) -> bool {
        let n = self.dim();
        (0.0..=self.t_final).contains(&t)
            && (0..n).all(|i| {
                let lower_ok = if self.mode == BoundaryMode::HalfSpace && i == n - 1 && self.v_prime.lo[i] == 0.0 {
                    x[i] >= 0.0
                } else {
                    x[i] > self.v_prime.lo[i]
                };
                lower_ok && x[i] < self.v_prime.hi[i]
            })
    }

    /// Samples `samples` points of `V̄ × [0, T]` for property (3) and the same
    /// number of points in random pieces for property (1); property (2) is
    /// checked exhaustively.
    pub fn audit(&self, samples: usize, seed: u64) -> CoveringAudit {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.dim();
        let mut x = vec![0.0; n];
        let mut uncovered = 0;
        for _ in 0..samples {
            for i in 0..n {
                x[i] = rng.random_range(self.v.lo[i]..=self.v.hi[i]);
            }
            let t = rng.random_range(0.0..=self.t_final);
            if self.pieces_containing(&x, t).is_empty() {
                uncovered += 1;
            }
        }
        let mut escaped = 0;
        let mut done = 0;
        while done < samples {
            let j = rng.random_range(0..self.spatial_count());
            let k = rng.random_range(0..=self.k0);
            let p = self.piece(j, k);
            let r = p.large.radius;
            for i in 0..n {
                x[i] = p.large.center[i] + rng.random_range(-r..r);
            }
            let r4 = r * r * r * r;
            let t = p.large.time + rng.random_range(-r4..r4);
            let in_large = p.large.contains_unchecked(&x, t);
            if !in_large && !p.small.contains_unchecked(&x, t) {
                continue;
            }
            done += 1;
            if (p.small.contains_unchecked(&x, t) && !in_large) || (in_large && !self.in_target(&x, t)) {
                escaped += 1;
            }
        }
        let form_counts = self.form_counts();
        let invalid_forms = form_counts.iter().filter(|(f, _)| !self.is_allowed(*f)).map(|(_, c)| c).sum();
        CoveringAudit { samples, uncovered, escaped, invalid_forms, form_counts }
    }
}
