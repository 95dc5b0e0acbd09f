//! Pairwise discrete Hölder seminorms.
//!
//! `[u]^space_α` is the max of `|u(x,t) − u(y,t)| / |x − y|^α` over sample
//! pairs sharing a time, `[u]^time_β` the max of `|u(x,t) − u(x,s)| / |t − s|^β`
//! over pairs sharing a point. Ties keep the first pair in loop order, which
//! is lexicographic in (first sample, second sample, shared index).

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::fd::{fd_derivative, multi_indices, DerivativeTable};
use super::grid::{GridFunction, Region};
use super::{check_gamma, HolderExponents};
use crate::{math, Result};

/// Pair realizing a discrete seminorm. For spatial seminorms `time_a ==
/// time_b`, for temporal ones `space_a == space_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairWitness {
    pub value: f64,
    pub space_a: usize,
    pub space_b: usize,
    pub time_a: usize,
    pub time_b: usize,
}

fn region_points(u: &GridFunction, region: &Region) -> Vec<f64> {
    let n = u.grid().dim();
    let mut out = vec![0.0; region.space.len() * n];
    for (chunk, &s) in out.chunks_mut(n).zip(&region.space) {
        u.grid().point(s, chunk);
    }
    out
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    math::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Spatial seminorm over the whole grid.
pub fn spatial_seminorm(u: &GridFunction, alpha: f64) -> f64 {
    spatial_seminorm_over(u, &u.grid().full_region(), alpha)
}

pub fn spatial_seminorm_over(u: &GridFunction, region: &Region, alpha: f64) -> f64 {
    spatial_witness(u, region, alpha).map_or(0.0, |w| w.value)
}

/// Maximizing pair of the spatial seminorm, `None` when the region has fewer
/// than two points or no time samples.
pub fn spatial_witness(u: &GridFunction, region: &Region, alpha: f64) -> Option<PairWitness> {
    if region.space.len() < 2 || region.time.is_empty() {
        return None;
    }
    let n = u.grid().dim();
    let nt = u.grid().time_len();
    let pts = region_points(u, region);
    let vals = u.values();
    let mut best = PairWitness { value: 0.0, space_a: region.space[0], space_b: region.space[1], time_a: region.time.start, time_b: region.time.start };
    for (i, &sa) in region.space.iter().enumerate() {
        let pa = &pts[i * n..(i + 1) * n];
        let ra = &vals[sa * nt..(sa + 1) * nt];
        for (j, &sb) in region.space.iter().enumerate().skip(i + 1) {
            let inv = 1.0 / math::powf(dist(pa, &pts[j * n..(j + 1) * n]), alpha);
            let rb = &vals[sb * nt..(sb + 1) * nt];
            for k in region.time.clone() {
                let q = (ra[k] - rb[k]).abs() * inv;
                if q > best.value {
                    best = PairWitness { value: q, space_a: sa, space_b: sb, time_a: k, time_b: k };
                }
            }
        }
    }
    Some(best)
}

/// Temporal seminorm over the whole grid.
pub fn temporal_seminorm(u: &GridFunction, beta: f64) -> f64 {
    temporal_seminorm_over(u, &u.grid().full_region(), beta)
}

pub fn temporal_seminorm_over(u: &GridFunction, region: &Region, beta: f64) -> f64 {
    temporal_witness(u, region, beta).map_or(0.0, |w| w.value)
}

pub fn temporal_witness(u: &GridFunction, region: &Region, beta: f64) -> Option<PairWitness> {
    let m = region.time.len();
    if m < 2 || region.space.is_empty() {
        return None;
    }
    let nt = u.grid().time_len();
    let times = &u.grid().times()[region.time.clone()];
    // inv[a * m + b] = |t_a − t_b|^{−β} for a < b
    let mut inv = vec![0.0; m * m];
    for a in 0..m {
        for b in a + 1..m {
            inv[a * m + b] = 1.0 / math::powf(times[b] - times[a], beta);
        }
    }
    let t0 = region.time.start;
    let mut best = PairWitness { value: 0.0, space_a: region.space[0], space_b: region.space[0], time_a: t0, time_b: t0 + 1 };
    for &s in &region.space {
        let row = &u.values()[s * nt + t0..s * nt + t0 + m];
        for a in 0..m {
            let va = row[a];
            let ia = &inv[a * m..(a + 1) * m];
            for b in a + 1..m {
                let q = (va - row[b]).abs() * ia[b];
                if q > best.value {
                    best = PairWitness { value: q, space_a: s, space_b: s, time_a: t0 + a, time_b: t0 + b };
                }
            }
        }
    }
    Some(best)
}

/// Spatial seminorm estimated from `pairs` uniformly drawn sample pairs.
pub fn spatial_seminorm_sampled(u: &GridFunction, region: &Region, alpha: f64, pairs: usize, seed: u64) -> f64 {
    let ns = region.space.len();
    if ns < 2 || region.time.is_empty() {
        return 0.0;
    }
    let n = u.grid().dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut pa, mut pb) = (vec![0.0; n], vec![0.0; n]);
    let mut best: f64 = 0.0;
    for _ in 0..pairs {
        let i = rng.random_range(0..ns);
        let mut j = rng.random_range(0..ns - 1);
        if j >= i {
            j += 1;
        }
        let k = rng.random_range(region.time.clone());
        let (sa, sb) = (region.space[i], region.space[j]);
        u.grid().point(sa, &mut pa);
        u.grid().point(sb, &mut pb);
        best = best.max((u.at(sa, k) - u.at(sb, k)).abs() / math::powf(dist(&pa, &pb), alpha));
    }
    best
}

/// Temporal seminorm estimated from `pairs` uniformly drawn sample pairs.
pub fn temporal_seminorm_sampled(u: &GridFunction, region: &Region, beta: f64, pairs: usize, seed: u64) -> f64 {
    let m = region.time.len();
    if m < 2 || region.space.is_empty() {
        return 0.0;
    }
    let times = u.grid().times();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 0.0;
    for _ in 0..pairs {
        let s = region.space[rng.random_range(0..region.space.len())];
        let a = rng.random_range(0..m);
        let mut b = rng.random_range(0..m - 1);
        if b >= a {
            b += 1;
        }
        let (ka, kb) = (region.time.start + a, region.time.start + b);
        best = best.max((u.at(s, ka) - u.at(s, kb)).abs() / math::powf((times[ka] - times[kb]).abs(), beta));
    }
    best
}

/// `[u]^{(m)}_γ`: spatial `γ`-seminorms of `∂ₜʲ∇ᵏu` with `4j + k = m` plus
/// temporal `((m+γ−k)/4 − j)`-seminorms of every `∂ₜʲ∇ᵏu` with exponent in
/// `(0, 1)`. `∇ᵏ` terms are summed over all multi-indices of length `k`.
pub fn parabolic_seminorm(u: &GridFunction, exps: HolderExponents) -> Result<f64> {
    let dim = u.grid().dim();
    let region = u.grid().full_region();
    let mut total = 0.0;
    for (j, k) in exps.spatial_terms() {
        for alpha in multi_indices(dim, k as usize) {
            let d = fd_derivative(u, &alpha, j as usize)?;
            total += spatial_seminorm_over(&d, &region, exps.gamma());
        }
    }
    for (j, k, beta) in exps.temporal_terms() {
        for alpha in multi_indices(dim, k as usize) {
            let d = fd_derivative(u, &alpha, j as usize)?;
            total += temporal_seminorm_over(&d, &region, beta);
        }
    }
    Ok(total)
}

fn zero_order(u: &GridFunction, region: &Region, gamma: f64) -> f64 {
    spatial_seminorm_over(u, region, gamma) + temporal_seminorm_over(u, region, gamma / 4.0)
}

/// `[D^{4,1}u]_γ = Σ_{|α|=4} [∇_α u]^{(0)}_γ + [∂ₜu]^{(0)}_γ` over a region,
/// from precomputed derivative fields. The time term is omitted when the
/// grid has a single time sample.
pub fn d41_from_table(table: &DerivativeTable, region: &Region, gamma: f64) -> f64 {
    let mut total: f64 = table.spatial(4).map(|d| zero_order(d, region, gamma)).sum();
    if let Some(d) = table.time_derivative() {
        total += zero_order(d, region, gamma);
    }
    total
}

/// `Σ_{4j+|α|≤4} sup|∂ₜʲ∇_α u| + [D^{4,1}u]_γ` over a region.
pub fn c41gamma_from_table(table: &DerivativeTable, region: &Region, gamma: f64) -> f64 {
    let sup: f64 = table.iter().map(|(_, _, d)| d.sup_over(region)).sum();
    sup + d41_from_table(table, region, gamma)
}

pub fn d41_seminorm(u: &GridFunction, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let table = DerivativeTable::new(u)?;
    Ok(d41_from_table(&table, &u.grid().full_region(), gamma))
}

pub fn c41gamma_norm(u: &GridFunction, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let table = DerivativeTable::new(u)?;
    Ok(c41gamma_from_table(&table, &u.grid().full_region(), gamma))
}
