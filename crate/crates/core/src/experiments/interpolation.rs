//! Interpolation inequalities on a parabolic ball, with the free constant
//! calibrated on a fixed corpus.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::holder::{
    d41_from_table, multi_indices, spatial_seminorm_over, temporal_seminorm_over, BandLimited, DerivativeTable,
    GridFunction, Region, SpaceTimeGrid,
};
use crate::{math, Error, Result};

/// Upper end of the admissible `ε` range.
pub const EPS0: f64 = 1.0;
pub const DEFAULT_EPS: [f64; 8] = [1.0, 0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 1e-3];
/// Samples per axis of the ball grid used by the corpora.
pub const BALL_POINTS: usize = 33;
const SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "line")]
pub enum InterpolationLine {
    /// `ρᵏ‖∇ᵏu‖`, exponent `k/(4−k+γ)`.
    Spatial { k: u8 },
    /// `ρ⁴‖∂ₜu‖`, exponent `4/γ`.
    TimeDerivative,
    /// `ρ^{l+γ}[∇ˡu]⁽⁰⁾_γ`, exponent `(l+γ)/(4−l)`.
    Seminorm { l: u8 },
    /// `ρ^{l+k+γ}[∇ˡu]^time_{(k+γ)/4}`, exponent `(l+k+γ)/(4−l−k)`.
    Temporal { l: u8, k: u8 },
}

impl InterpolationLine {
    pub fn all() -> Vec<InterpolationLine> {
        let mut out: Vec<_> = (0..=4).map(|k| InterpolationLine::Spatial { k }).collect();
        out.push(InterpolationLine::TimeDerivative);
        out.extend((0..=3).map(|l| InterpolationLine::Seminorm { l }));
        for l in 0..=3u8 {
            out.extend((0..=3 - l).map(|k| InterpolationLine::Temporal { l, k }));
        }
        out
    }

    pub fn exponent(&self, gamma: f64) -> f64 {
        match *self {
            InterpolationLine::Spatial { k } => k as f64 / (4.0 - k as f64 + gamma),
            InterpolationLine::TimeDerivative => 4.0 / gamma,
            InterpolationLine::Seminorm { l } => (l as f64 + gamma) / (4.0 - l as f64),
            InterpolationLine::Temporal { l, k } => (l as f64 + k as f64 + gamma) / (4.0 - l as f64 - k as f64),
        }
    }
}

/// Everything the inequalities need from one function on one ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallQuantities {
    pub rho: f64,
    pub gamma: f64,
    /// `ρ^{4+γ}[D^{4,1}u]⁽⁰⁾_γ`.
    pub top: f64,
    pub sup: f64,
    pub lines: Vec<(InterpolationLine, f64)>,
}

/// Samples of the grid in the closed ball `|x − x₀| ≤ ρ`, `|t − t₀| ≤ ρ⁴`.
pub fn ball_region(grid: &SpaceTimeGrid, center: &[f64], t0: f64, rho: f64) -> Region {
    let r4 = rho * rho * rho * rho;
    let tol = 1e-12 * (1.0 + rho);
    let time = grid.time_range(t0 - r4 - tol * r4, t0 + r4 + tol * r4, true, true);
    grid.region_where(time, |x| {
        x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() <= rho * rho * (1.0 + tol)
    })
}

pub fn ball_quantities(u: &GridFunction, center: &[f64], t0: f64, rho: f64, gamma: f64) -> Result<BallQuantities> {
    crate::holder::HolderExponents::new(gamma, 0)?;
    let n = u.grid().dim();
    if center.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: center.len() });
    }
    let region = ball_region(u.grid(), center, t0, rho);
    if region.is_empty() {
        return Err(Error::InvalidGrid("no samples in the ball".into()));
    }
    let table = DerivativeTable::new(u)?;
    let dt = table
        .time_derivative()
        .ok_or_else(|| Error::InvalidTimeGrid("the time derivative needs three samples".into()))?;
    let get = |alpha: &[usize]| table.get(alpha, 0).expect("table holds all orders up to four");
    let top = math::powf(rho, 4.0 + gamma) * d41_from_table(&table, &region, gamma);
    let sup = u.sup_over(&region);
    let max_over = |order: usize, f: &dyn Fn(&GridFunction) -> f64| {
        multi_indices(n, order).iter().map(|a| f(get(a))).fold(0.0, f64::max)
    };
    let mut lines = Vec::new();
    for line in InterpolationLine::all() {
        let v = match line {
            InterpolationLine::Spatial { k } => {
                math::powi(rho, k as i32) * max_over(k as usize, &|d| d.sup_over(&region))
            }
            InterpolationLine::TimeDerivative => math::powi(rho, 4) * dt.sup_over(&region),
            InterpolationLine::Seminorm { l } => {
                math::powf(rho, l as f64 + gamma)
                    * max_over(l as usize, &|d| {
                        spatial_seminorm_over(d, &region, gamma) + temporal_seminorm_over(d, &region, gamma / 4.0)
                    })
            }
            InterpolationLine::Temporal { l, k } => {
                let beta = (k as f64 + gamma) / 4.0;
                math::powf(rho, l as f64 + k as f64 + gamma)
                    * max_over(l as usize, &|d| temporal_seminorm_over(d, &region, beta))
            }
        };
        lines.push((line, v));
    }
    Ok(BallQuantities { rho, gamma, top, sup, lines })
}

/// Smallest `C` with `lhs ≤ ε·top + C ε^{−e} sup` at this `ε`.
fn needed(lhs: f64, top: f64, sup: f64, eps: f64, exponent: f64) -> f64 {
    let excess = lhs - eps * top;
    if excess <= 0.0 {
        0.0
    } else if sup > 0.0 {
        excess * math::powf(eps, exponent) / sup
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpolationConstants {
    pub gamma: f64,
    pub eps0: f64,
    pub eps_list: Vec<f64>,
    pub constants: Vec<(InterpolationLine, f64)>,
    pub corpus_seed: u64,
    pub corpus_size: usize,
    /// FNV-1a over the corpus descriptors.
    pub corpus_hash: u64,
}

impl InterpolationConstants {
    pub fn get(&self, line: InterpolationLine) -> Option<f64> {
        self.constants.iter().find(|(l, _)| *l == line).map(|(_, c)| *c)
    }
}

/// Largest constant realized by any corpus member at any `ε`, per line.
pub fn calibrate(corpus: &[BallQuantities], eps_list: &[f64]) -> Vec<(InterpolationLine, f64)> {
    let gamma = corpus.first().map_or(crate::holder::DEFAULT_GAMMA, |q| q.gamma);
    InterpolationLine::all()
        .into_iter()
        .map(|line| {
            let e = line.exponent(gamma);
            let c = corpus
                .iter()
                .flat_map(|q| {
                    let lhs = q.lines.iter().find(|(l, _)| *l == line).map_or(0.0, |(_, v)| *v);
                    eps_list.iter().map(move |&eps| needed(lhs, q.top, q.sup, eps, e))
                })
                .fold(0.0, f64::max);
            (line, c)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpolationRow {
    pub line: InterpolationLine,
    pub eps: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpolationReport {
    pub rows: Vec<InterpolationRow>,
    pub violations: usize,
}

pub fn check_quantities(q: &BallQuantities, eps_list: &[f64], constants: &InterpolationConstants) -> Result<InterpolationReport> {
    if eps_list.iter().any(|&e| !(e > 0.0 && e <= constants.eps0)) {
        return Err(Error::InvalidParameter(format!("ε must lie in (0, {}]", constants.eps0)));
    }
    let mut rows = Vec::new();
    for &(line, lhs) in &q.lines {
        let c = constants
            .get(line)
            .ok_or_else(|| Error::InvalidParameter(format!("no calibrated constant for {line:?}")))?;
        let e = line.exponent(q.gamma);
        for &eps in eps_list {
            let rhs = eps * q.top + c * math::powf(eps, -e) * q.sup;
            rows.push(InterpolationRow { line, eps, lhs, rhs, holds: lhs <= rhs * (1.0 + SLACK) + f64::MIN_POSITIVE });
        }
    }
    let violations = rows.iter().filter(|r| !r.holds).count();
    Ok(InterpolationReport { rows, violations })
}

/// Evaluates every line of the inequalities for `u` on `U_ρ(x₀, t₀)`.
pub fn interpolation_check(
    u: &GridFunction,
    center: &[f64],
    t0: f64,
    rho: f64,
    eps_list: &[f64],
    constants: &InterpolationConstants,
) -> Result<InterpolationReport> {
    let q = ball_quantities(u, center, t0, rho, constants.gamma)?;
    check_quantities(&q, eps_list, constants)
}

/// Corpus members on `[−1, 1] × [−1, 1]` (the unit ball for `n = 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CorpusFunction {
    /// `Σ cᵢ xⁱ + c_t t`; the kernel of `D^{4,1}`.
    Polynomial { coeffs: [f64; 4], t_coeff: f64 },
    Trig(BandLimited),
}

impl CorpusFunction {
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        match self {
            CorpusFunction::Polynomial { coeffs, t_coeff } => {
                coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c) + t_coeff * t
            }
            CorpusFunction::Trig(f) => f.eval(&[x], t),
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            CorpusFunction::Polynomial { coeffs, t_coeff } => format!("poly:{coeffs:?},t={t_coeff:e}"),
            CorpusFunction::Trig(f) => format!("trig:{:?}{:?}{:?}{:?}", f.amplitudes, f.wavevectors, f.frequencies, f.phases),
        }
    }

    pub fn sample(&self, points: usize) -> Result<GridFunction> {
        let times: Vec<f64> = (0..points).map(|i| -1.0 + 2.0 * i as f64 / (points - 1) as f64).collect();
        let grid = SpaceTimeGrid::cube(1, -1.0, 1.0, points, times)?;
        GridFunction::from_fn(grid, |x, t| self.eval(x[0], t))
    }
}

/// Calibration corpus: Chebyshev polynomials `T₀…T₃`, `t`, `polys` random
/// members of the kernel of `D^{4,1}`, and `trigs` random band-limited
/// functions drawn from a wider family than [`test_corpus`] (up to 6 terms,
/// frequencies up to 5). Seeds are even here and odd there, so the corpora
/// are disjoint.
pub fn calibration_corpus(seed: u64, polys: usize, trigs: usize) -> Vec<CorpusFunction> {
    let mut out = vec![
        CorpusFunction::Polynomial { coeffs: [1.0, 0.0, 0.0, 0.0], t_coeff: 0.0 },
        CorpusFunction::Polynomial { coeffs: [0.0, 1.0, 0.0, 0.0], t_coeff: 0.0 },
        CorpusFunction::Polynomial { coeffs: [-1.0, 0.0, 2.0, 0.0], t_coeff: 0.0 },
        CorpusFunction::Polynomial { coeffs: [0.0, -3.0, 0.0, 4.0], t_coeff: 0.0 },
        CorpusFunction::Polynomial { coeffs: [0.0; 4], t_coeff: 1.0 },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..polys {
        let coeffs = [0; 4].map(|_| rng.random_range(-1.0..1.0));
        out.push(CorpusFunction::Polynomial { coeffs, t_coeff: rng.random_range(-1.0..1.0) });
    }
    for i in 0..trigs {
        let freq = rng.random_range(0.25..5.0);
        let tfreq = rng.random_range(0.0..5.0);
        let terms = rng.random_range(1..=6);
        out.push(CorpusFunction::Trig(BandLimited::random(seed.wrapping_mul(2).wrapping_add(2 * i as u64), 1, terms, freq, tfreq)));
    }
    out
}

/// Random band-limited test functions with odd seeds.
pub fn test_corpus(seed: u64, count: usize) -> Vec<CorpusFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    (0..count)
        .map(|i| {
            let freq = rng.random_range(0.5..4.0);
            let tfreq = rng.random_range(0.0..4.0);
            CorpusFunction::Trig(BandLimited::random(seed.wrapping_mul(2).wrapping_add(2 * i as u64 + 1), 1, 1 + i % 4, freq, tfreq))
        })
        .collect()
}

fn fnv1a(parts: impl Iterator<Item = String>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for p in parts {
        for b in p.bytes().chain(core::iter::once(0xff)) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

/// Calibrates on [`calibration_corpus`] sampled on the unit ball.
pub fn calibrate_unit_ball(seed: u64, polys: usize, trigs: usize, gamma: f64, eps_list: &[f64]) -> Result<InterpolationConstants> {
    let corpus = calibration_corpus(seed, polys, trigs);
    let quantities = corpus
        .iter()
        .map(|f| ball_quantities(&f.sample(BALL_POINTS)?, &[0.0], 0.0, 1.0, gamma))
        .collect::<Result<Vec<_>>>()?;
    Ok(InterpolationConstants {
        gamma,
        eps0: EPS0,
        eps_list: eps_list.to_vec(),
        constants: calibrate(&quantities, eps_list),
        corpus_seed: seed,
        corpus_size: corpus.len(),
        corpus_hash: fnv1a(corpus.iter().map(CorpusFunction::descriptor)),
    })
}

/// Violations of the calibrated inequalities over `corpus` on the unit ball.
pub fn corpus_violations(corpus: &[CorpusFunction], constants: &InterpolationConstants) -> Result<Vec<(usize, InterpolationRow)>> {
    let mut out = Vec::new();
    for (i, f) in corpus.iter().enumerate() {
        let r = interpolation_check(&f.sample(BALL_POINTS)?, &[0.0], 0.0, 1.0, &constants.eps_list, constants)?;
        out.extend(r.rows.into_iter().filter(|row| !row.holds).map(|row| (i, row)));
    }
    Ok(out)
}
