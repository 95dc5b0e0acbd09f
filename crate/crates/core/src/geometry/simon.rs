//! Numerical check of the absorption lemma for set functions on truncated
//! parabolic balls `Ω_ρ(p) = U_ρ(p) ∩ A`.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ball::{HalfSpaces, ParabolicBall};
use crate::{math, Error, Result};

/// Relative slack for inequalities between evaluated set functions.
const SLACK: f64 = 1e-12;
const MAX_REJECTIONS: usize = 10_000;

fn le(a: f64, b: f64) -> bool {
    a <= b + SLACK * (1.0 + b.abs())
}

/// Lattice cells per axis with cell diameter `< r₁/2`, for `r₂/r₁ = ratio`.
fn lattice_cells(n: usize, ratio: f64) -> usize {
    math::floor(4.0 * ratio * math::sqrt(n as f64)) as usize + 1
}

/// Time centers with spacing `< 2(r₁/2)⁴` across `(−r₂⁴, r₂⁴)`.
fn time_centers(ratio: f64) -> usize {
    let r2 = ratio * ratio;
    math::floor(16.0 * r2 * r2) as usize + 1
}

/// Doubled distance from the origin to cell `i` of `m` on `[−m/2, m/2]`,
/// with sign giving the nearest offset.
fn nearest_doubled(i: usize, m: usize) -> i64 {
    let (lo, hi) = (2 * i as i64 - m as i64, 2 * i as i64 + 2 - m as i64);
    if lo > 0 {
        lo
    } else if hi < 0 {
        hi
    } else {
        0
    }
}

/// Cells of the spatial lattice meeting the open ball, as nearest offsets in
/// half-cell units. Exact integer arithmetic, so scale free.
fn meeting_cells(n: usize, m: usize) -> Vec<Vec<i64>> {
    let total = (0..n).fold(1usize, |a, _| a * m);
    let bound = (m as i64) * (m as i64);
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    for flat in 0..total {
        let mut rest = flat;
        for slot in idx.iter_mut().rev() {
            *slot = rest % m;
            rest /= m;
        }
        let off: Vec<i64> = idx.iter().map(|&i| nearest_doubled(i, m)).collect();
        if off.iter().map(|d| d * d).sum::<i64>() < bound {
            out.push(off);
        }
    }
    out
}

/// `Ñ(n, r₂/r₁)`: number of balls `U_{r₁/2}(q̃)` with `q̃ ∈ U_{r₂}(p)` used to
/// cover `U_{r₂}(p)`. A greedy lattice count, so an upper bound.
pub fn covering_number(n: usize, ratio: f64) -> usize {
    time_centers(ratio) * meeting_cells(n, lattice_cells(n, ratio)).len()
}

/// Covers `Ω_{r₂}(p)` (the given ball, center in `A`) by balls `Ω_{r₁}(qᵢ)`
/// with `r₁ = r₂/ratio` and `qᵢ ∈ Ω_{r₂}(p)`, following the lattice count of
/// [`covering_number`] and dropping balls that miss `A`.
pub fn cover_ball(omega: &ParabolicBall, ratio: f64) -> Vec<ParabolicBall> {
    let n = omega.dim();
    let r2 = omega.radius;
    let r1 = r2 / ratio;
    let half = r1 / 2.0;
    let half4 = half * half * half * half;
    let m = lattice_cells(n, ratio);
    let s = 2.0 * r2 / m as f64;
    let mt = time_centers(ratio);
    let span = 2.0 * r2 * r2 * r2 * r2;
    let d = span / mt as f64;
    let cells = meeting_cells(n, m);
    let mut out = Vec::with_capacity(cells.len() * mt);
    for off in &cells {
        let x: Vec<f64> = off.iter().zip(&omega.center).map(|(&o, &c)| c + 0.5 * s * o as f64).collect();
        for i in 0..mt {
            let t = omega.time - span / 2.0 + d * (i as f64 + 0.5);
            let mut q = x.clone();
            let tq = omega.cut.clamp(&mut q, t);
            let moved = math::sqrt(q.iter().zip(&x).map(|(a, b)| (a - b) * (a - b)).sum());
            if moved < half && (tq - t).abs() < half4 {
                out.push(omega.cut.ball(q, tq, r1));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverNumberAudit {
    pub ratio: f64,
    pub bound: usize,
    pub max_used: usize,
    /// Centers found outside `Ω_{r₂}(p)`.
    pub stray_centers: usize,
    /// Sampled points of `Ω_{r₂}(p)` in none of the small balls.
    pub uncovered: usize,
    pub samples: usize,
}

impl CoverNumberAudit {
    pub fn holds(&self) -> bool {
        self.max_used <= self.bound && self.stray_centers == 0 && self.uncovered == 0
    }
}

/// Uniform point of `U_r(center)` by rejection from the bounding box.
fn sample_in(rng: &mut ChaCha8Rng, ball: &ParabolicBall, x: &mut [f64]) -> f64 {
    let r = ball.radius;
    let r4 = r * r * r * r;
    loop {
        for (xi, ci) in x.iter_mut().zip(&ball.center) {
            *xi = ci + rng.random_range(-r..r);
        }
        let d2: f64 = x.iter().zip(&ball.center).map(|(a, b)| (a - b) * (a - b)).sum();
        if d2 < r * r {
            return ball.time + rng.random_range(-r4..r4);
        }
    }
}

/// Sampled check that [`cover_ball`] produces at most `Ñ(n, ratio)` balls
/// centered in `Ω_{r₂}(p)` that cover it.
pub fn audit_cover_ball(n: usize, ratio: f64, cut: HalfSpaces, balls: usize, points: usize, seed: u64) -> CoverNumberAudit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = covering_number(n, ratio);
    let (mut max_used, mut stray_centers, mut uncovered) = (0, 0, 0);
    let mut x = vec![0.0; n];
    for _ in 0..balls {
        let r2 = rng.random_range(0.25..2.0);
        let mut center: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let t = cut.clamp(&mut center, rng.random_range(-1.0..1.0));
        let omega = cut.ball(center, t, r2);
        let cover = cover_ball(&omega, ratio);
        max_used = max_used.max(cover.len());
        stray_centers += cover.iter().filter(|b| !omega.contains_unchecked(&b.center, b.time)).count();
        let mut taken = 0;
        while taken < points {
            let t = sample_in(&mut rng, &omega, &mut x);
            if !omega.contains_unchecked(&x, t) {
                continue;
            }
            taken += 1;
            if !cover.iter().any(|b| b.contains_unchecked(&x, t)) {
                uncovered += 1;
            }
        }
    }
    CoverNumberAudit { ratio, bound, max_used, stray_centers, uncovered, samples: balls * points }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimonConfig {
    pub center: Vec<f64>,
    pub time: f64,
    pub radius: f64,
    pub cut: HalfSpaces,
    pub k: f64,
    pub nu: f64,
    pub theta: f64,
    /// Defaults to the threshold `1/(2N(n, θ))`.
    pub delta: Option<f64>,
    /// Defaults to the measured maximum hypothesis slack.
    pub e: Option<f64>,
    /// Smallest sub-ball radius sampled.
    pub min_radius: f64,
    pub hypothesis_samples: usize,
    pub audit_samples: usize,
    pub seed: u64,
}

impl SimonConfig {
    pub fn new(center: Vec<f64>, time: f64, radius: f64) -> Self {
        Self {
            center,
            time,
            radius,
            cut: HalfSpaces::WHOLE,
            k: 4.5,
            nu: 1.0,
            theta: 0.5,
            delta: None,
            e: None,
            min_radius: radius / 8.0,
            hypothesis_samples: 200,
            audit_samples: 100,
            seed: 0,
        }
    }
}

/// The constants assembled as in the proof.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimonConstants {
    /// `N(n, θ)`, covering `Ω_{θρ}` by `Ω_{θ²ρ}`.
    pub n_theta: usize,
    /// `M(n, ν, θ)`, covering `Ω_{θR}` by `Ω_{θνR}`.
    pub m_nu: usize,
    /// `δ(n, θ) = 1/(2N)`.
    pub delta_max: f64,
    /// `C = ν^{−k}·M·2N/θ^k`.
    pub c: f64,
}

pub fn simon_constants(n: usize, k: f64, nu: f64, theta: f64) -> Result<SimonConstants> {
    if !(nu > 0.0 && nu <= 1.0) || !(theta > 0.0 && theta < 1.0) || !k.is_finite() {
        return Err(Error::InvalidParameter("need ν ∈ (0, 1], θ ∈ (0, 1), finite k".into()));
    }
    let n_theta = covering_number(n, 1.0 / theta);
    let m_nu = covering_number(n, 1.0 / nu);
    let c = math::powf(nu, -k) * m_nu as f64 * 2.0 * n_theta as f64 / math::powf(theta, k);
    Ok(SimonConstants { n_theta, m_nu, delta_max: 1.0 / (2.0 * n_theta as f64), c })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetFunctionAudit {
    pub negative: usize,
    pub nested_pairs: usize,
    pub monotone_violations: usize,
    pub covered_triples: usize,
    pub subadditive_violations: usize,
}

impl SetFunctionAudit {
    pub fn holds(&self) -> bool {
        self.negative == 0 && self.monotone_violations == 0 && self.subadditive_violations == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimonVerdict {
    /// `S` failed the monotonicity or subadditivity audit; nothing claimed.
    AuditFailed,
    /// Some sampled sub-ball violates the hypothesis for the given `E`.
    HypothesisFailed,
    ConclusionHolds,
    ConclusionViolated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimonReport {
    pub constants: SimonConstants,
    pub delta: f64,
    pub e: f64,
    /// Largest `ρ^k S(Ω_{θρ}(y)) − δρ^k S(Ω_ρ(y))` over the sampled sub-balls.
    pub measured_slack: f64,
    pub hypothesis_samples: usize,
    pub hypothesis_failures: usize,
    pub audit: SetFunctionAudit,
    pub cover_audit: CoverNumberAudit,
    /// `R^k S(Ω_{θR}(p₀))`.
    pub lhs: f64,
    /// `C·E`.
    pub rhs: f64,
    pub verdict: SimonVerdict,
}

struct Sampler<'a> {
    outer: &'a ParabolicBall,
    rng: ChaCha8Rng,
}

impl Sampler<'_> {
    /// A ball `Ω_ρ(y) ⊂ Ω_R(p₀)` with `y ∈ A` and `lo ≤ ρ ≤ hi`.
    fn sub_ball(&mut self, lo: f64, hi: f64) -> Result<ParabolicBall> {
        let mut x = vec![0.0; self.outer.dim()];
        for _ in 0..MAX_REJECTIONS {
            let t = sample_in(&mut self.rng, self.outer, &mut x);
            if !self.outer.cut.contains(&x, t) {
                continue;
            }
            let dx = math::sqrt(x.iter().zip(&self.outer.center).map(|(a, b)| (a - b) * (a - b)).sum());
            let r = self.outer.radius;
            let room = (r - dx).min(math::sqrt(math::sqrt(r * r * r * r - (t - self.outer.time).abs())));
            let top = hi.min(room);
            if top < lo {
                continue;
            }
            let rho = if top > lo { self.rng.random_range(lo..=top) } else { lo };
            return Ok(self.outer.cut.ball(x.clone(), t, rho));
        }
        Err(Error::InvalidParameter("could not sample a sub-ball; lower min_radius".into()))
    }
}

/// Audits `s` for monotonicity and subadditivity, checks the hypothesis on
/// sampled sub-balls and, when both pass, tests the conclusion with the
/// constant from the proof.
pub fn simon_absorption_check(s: impl Fn(&ParabolicBall) -> f64, cfg: &SimonConfig) -> Result<SimonReport> {
    let n = cfg.center.len();
    if n == 0 || !(cfg.radius > 0.0) || !(cfg.min_radius > 0.0) || cfg.min_radius > cfg.nu * cfg.radius {
        return Err(Error::InvalidParameter("need R > 0 and 0 < min_radius ≤ νR".into()));
    }
    let constants = simon_constants(n, cfg.k, cfg.nu, cfg.theta)?;
    let delta = cfg.delta.unwrap_or(constants.delta_max);
    if !(delta >= 0.0) || delta > constants.delta_max {
        return Err(Error::InvalidParameter("δ exceeds the threshold 1/(2N(n, θ))".into()));
    }
    let outer = cfg.cut.ball(cfg.center.clone(), cfg.time, cfg.radius);
    let mut sampler = Sampler { outer: &outer, rng: ChaCha8Rng::seed_from_u64(cfg.seed) };
    let top = cfg.nu * cfg.radius;

    let mut audit = SetFunctionAudit {
        negative: 0,
        nested_pairs: 0,
        monotone_violations: 0,
        covered_triples: 0,
        subadditive_violations: 0,
    };
    for i in 0..cfg.audit_samples {
        let big = sampler.sub_ball(cfg.min_radius, top)?;
        let s_big = s(&big);
        audit.negative += (s_big < 0.0) as usize;
        let inner = Sampler { outer: &big, rng: ChaCha8Rng::seed_from_u64(cfg.seed ^ (i as u64 + 1)) }
            .sub_ball(big.radius / 8.0, big.radius)?;
        audit.nested_pairs += 1;
        audit.monotone_violations += !le(s(&inner), s_big) as usize;

        let (a, b) = if sampler.rng.random_bool(0.5) {
            let axis = sampler.rng.random_range(0..n);
            let d = big.radius / 2.0;
            let r = math::hypot(big.radius, d);
            let mut lo = big.center.clone();
            let mut hi = big.center.clone();
            lo[axis] -= d;
            hi[axis] += d;
            (big.cut.ball(lo, big.time, r), big.cut.ball(hi, big.time, r))
        } else {
            let r4 = big.radius * big.radius * big.radius * big.radius;
            (
                big.cut.ball(big.center.clone(), big.time - r4 / 2.0, big.radius),
                big.cut.ball(big.center.clone(), big.time + r4 / 2.0, big.radius),
            )
        };
        audit.covered_triples += 1;
        audit.subadditive_violations += !le(s_big, s(&a) + s(&b)) as usize;
    }

    let mut slacks = Vec::with_capacity(cfg.hypothesis_samples + 1);
    let mut hypothesis = |ball: &ParabolicBall| {
        let scale = math::powf(ball.radius, cfg.k);
        let inner = ball.with_radius(cfg.theta * ball.radius);
        slacks.push(scale * s(&inner) - delta * scale * s(ball));
    };
    hypothesis(&outer.with_radius(top));
    for _ in 0..cfg.hypothesis_samples {
        let b = sampler.sub_ball(cfg.min_radius, top)?;
        hypothesis(&b);
    }
    let measured_slack = slacks.iter().copied().fold(0.0, f64::max);
    let e = cfg.e.unwrap_or(measured_slack);
    let hypothesis_failures = slacks.iter().filter(|&&v| !le(v, e)).count();

    let cover_audit = audit_cover_ball(n, 1.0 / cfg.theta, cfg.cut, 20, 500, cfg.seed);
    let lhs = math::powf(cfg.radius, cfg.k) * s(&outer.with_radius(cfg.theta * cfg.radius));
    let rhs = constants.c * e;
    let verdict = if !audit.holds() || !cover_audit.holds() {
        SimonVerdict::AuditFailed
    } else if hypothesis_failures > 0 {
        SimonVerdict::HypothesisFailed
    } else if le(lhs, rhs) {
        SimonVerdict::ConclusionHolds
    } else {
        SimonVerdict::ConclusionViolated
    };
    Ok(SimonReport {
        constants,
        delta,
        e,
        measured_slack,
        hypothesis_samples: slacks.len(),
        hypothesis_failures,
        audit,
        cover_audit,
        lhs,
        rhs,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covering_numbers() {
        assert_eq!(covering_number(1, 2.0), 257 * 9);
        assert_eq!(covering_number(1, 1.0), 17 * 5);
        assert!(covering_number(2, 2.0) > covering_number(1, 2.0));
    }

    #[test]
    fn cover_ball_audit_passes() {
        for n in 1..=2 {
            for cut in [HalfSpaces::WHOLE, HalfSpaces { floor: Some(0.0), ceiling: None, space_half: true }] {
                let a = audit_cover_ball(n, 2.0, cut, 10, 2000, 9);
                assert!(a.holds(), "{a:?}");
            }
        }
    }

    #[test]
    fn constants_follow_the_proof() {
        let c = simon_constants(1, 4.5, 1.0, 0.5).unwrap();
        assert_eq!(c.delta_max, 1.0 / (2.0 * 2313.0));
        let expect = 85.0 * 2.0 * 2313.0 * math::powf(2.0, 4.5);
        assert!((c.c - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn zero_function_holds() {
        let cfg = SimonConfig::new(vec![0.0], 0.0, 1.0);
        let r = simon_absorption_check(|_| 0.0, &cfg).unwrap();
        assert_eq!(r.verdict, SimonVerdict::ConclusionHolds);
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
    }

    #[test]
    fn inverse_diameter_is_flagged() {
        let cfg = SimonConfig::new(vec![0.0], 0.0, 1.0);
        let r = simon_absorption_check(|b| math::powf(2.0 * b.radius, -4.5), &cfg).unwrap();
        assert_eq!(r.verdict, SimonVerdict::AuditFailed);
        assert!(r.audit.monotone_violations > 0);
    }

    #[test]
    fn volume_passes_the_audit() {
        let cfg = SimonConfig::new(vec![0.0], 0.0, 1.0);
        let r = simon_absorption_check(|b| math::powi(b.radius, 5), &cfg).unwrap();
        assert!(r.audit.holds(), "{:?}", r.audit);
        assert_eq!(r.verdict, SimonVerdict::ConclusionHolds);
    }

    #[test]
    fn rejects_large_delta() {
        let mut cfg = SimonConfig::new(vec![0.0], 0.0, 1.0);
        cfg.delta = Some(0.5);
        assert!(simon_absorption_check(|_| 0.0, &cfg).is_err());
    }
}
