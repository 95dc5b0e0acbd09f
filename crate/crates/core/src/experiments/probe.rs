//! Empirical check that the Schauder constant does not grow with `T`.
//!
//! Norms on the half-sphere are maxima over a fixed atlas of three charts:
//! an orthographic polar cap and two equatorial bands in `(φ, β = asin ω₃)`
//! centered at `φ = 0` and `φ = π`. The bands are the boundary charts.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::evolution::{evolve, EvolutionOperator, ForcingSignal};
use crate::holder::{
    c41gamma_from_table, spatial_seminorm_over, temporal_seminorm_over, DerivativeTable, GridAxis, GridFunction,
    SpaceTimeGrid,
};
use crate::spectral::{ModeBasis, SpectralField};
use crate::{math, Error, Result};

/// Half-width of the orthographic cap square.
pub const CAP_HALF_WIDTH: f64 = 0.6;
/// Half-width in `φ` of each band chart; overlaps its twin by 0.4.
pub const BAND_HALF_WIDTH: f64 = core::f64::consts::FRAC_PI_2 + 0.2;
/// Top of the band charts in `β`; the cap square reaches down to `β ≈ 0.93`
/// and keeps its corners on the sphere.
pub const BAND_TOP: f64 = 1.0;
/// Instances with a right side below this are skipped.
pub const DEGENERATE_RHS: f64 = 1e-13;
/// Spacing of the forcing knots.
pub const FORCING_KNOT_SPACING: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Chart {
    PolarCap,
    Band { center: f64 },
}

impl Chart {
    pub fn atlas() -> [Chart; 3] {
        [Chart::PolarCap, Chart::Band { center: 0.0 }, Chart::Band { center: core::f64::consts::PI }]
    }

    /// Coordinate box of the chart.
    pub fn domain(&self) -> ([f64; 2], [f64; 2]) {
        match *self {
            Chart::PolarCap => ([-CAP_HALF_WIDTH; 2], [CAP_HALF_WIDTH; 2]),
            Chart::Band { center } => ([center - BAND_HALF_WIDTH, 0.0], [center + BAND_HALF_WIDTH, BAND_TOP]),
        }
    }

    pub fn to_sphere(&self, y: &[f64]) -> [f64; 3] {
        match self {
            Chart::PolarCap => [y[0], y[1], math::sqrt((1.0 - y[0] * y[0] - y[1] * y[1]).max(0.0))],
            Chart::Band { .. } => {
                let c = math::cos(y[1]);
                [c * math::cos(y[0]), c * math::sin(y[0]), math::sin(y[1])]
            }
        }
    }

    pub fn grid(&self, points: usize, times: Vec<f64>) -> Result<SpaceTimeGrid> {
        let (lo, hi) = self.domain();
        SpaceTimeGrid::new(vec![GridAxis::spanning(lo[0], hi[0], points), GridAxis::spanning(lo[1], hi[1], points)], times)
    }
}

/// `0`, then `0.001·2ⁱ` up to `0.064`, then multiples of `1/8` up to `T`.
pub fn probe_time_grid(t_final: f64) -> Vec<f64> {
    let mut out = vec![0.0];
    out.extend((0..=6).map(|i| 0.001 * math::powi(2.0, i)).filter(|&t| t < t_final));
    let steps = math::floor(t_final * 8.0 + 1e-9) as usize;
    out.extend((1..=steps).map(|k| k as f64 / 8.0).filter(|&t| t > 0.064));
    if *out.last().expect("nonempty") < t_final - 1e-12 {
        out.push(t_final);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeForm {
    /// Right side with `sup_t ‖u(t)‖_{L²}`.
    Theorem,
    /// Right side without the `L²` term.
    Corollary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub seed: u64,
    pub instances: usize,
    pub l_max: u32,
    pub t_values: Vec<f64>,
    pub gamma: f64,
    pub points_per_side: usize,
    pub form: ProbeForm,
    /// Coefficients of random fields are `N(0,1)·(1+λ)^{−decay}`.
    pub spectrum_decay: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            instances: 100,
            l_max: 4,
            t_values: vec![1.0, 2.0, 4.0, 8.0],
            gamma: crate::holder::DEFAULT_GAMMA,
            points_per_side: 11,
            form: ProbeForm::Theorem,
            spectrum_decay: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeInstance {
    pub u0: SpectralField,
    pub forcing: Option<ForcingSignal>,
}

impl ProbeInstance {
    pub fn scaled(&self, s: f64) -> Self {
        let forcing = self.forcing.as_ref().map(|f| {
            ForcingSignal::new(f.times().to_vec(), f.samples().iter().map(|x| x.scaled(s)).collect())
                .expect("scaling keeps the knots")
        });
        Self { u0: self.u0.scaled(s), forcing }
    }
}

fn random_field(rng: &mut ChaCha8Rng, basis: &Arc<ModeBasis>, decay: f64) -> SpectralField {
    let coeffs = basis
        .modes()
        .iter()
        .map(|m| rng.sample::<f64, _>(StandardNormal) * math::powf(1.0 + m.lambda, -decay))
        .collect();
    SpectralField::new(basis.clone(), coeffs).expect("length matches the basis")
}

/// A field with coefficients `N(0,1)·(1+λ)^{−decay}` drawn from `seed`.
pub fn seeded_field(seed: u64, basis: &Arc<ModeBasis>, decay: f64) -> SpectralField {
    random_field(&mut ChaCha8Rng::seed_from_u64(seed), basis, decay)
}

/// Random initial data and piecewise-linear forcing with knots every
/// [`FORCING_KNOT_SPACING`] on `[0, t_max]`.
pub fn random_instance(seed: u64, basis: &Arc<ModeBasis>, t_max: f64, decay: f64) -> ProbeInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u0 = random_field(&mut rng, basis, decay);
    let knots = math::ceil(t_max / FORCING_KNOT_SPACING - 1e-9) as usize;
    let times: Vec<f64> = (0..=knots).map(|i| i as f64 * FORCING_KNOT_SPACING).collect();
    let samples = times.iter().map(|_| random_field(&mut rng, basis, decay)).collect();
    ProbeInstance { u0, forcing: Some(ForcingSignal::new(times, samples).expect("knots increase")) }
}

/// Left and right side of the estimate for one instance on `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeSides {
    pub lhs: f64,
    pub rhs: f64,
    pub forcing_norm: f64,
    pub initial_norm: f64,
    pub l2_sup: f64,
}

struct ChartSampler {
    chart_values: Vec<Vec<f64>>,
    grids: Vec<SpaceTimeGrid>,
}

impl ChartSampler {
    fn new(basis: &ModeBasis, points: usize, times: &[f64]) -> Result<Self> {
        let mut chart_values = Vec::new();
        let mut grids = Vec::new();
        for chart in Chart::atlas() {
            let grid = chart.grid(points, times.to_vec())?;
            let mut y = [0.0; 2];
            let mut values = Vec::with_capacity(grid.space_len() * basis.len());
            for s in 0..grid.space_len() {
                grid.point(s, &mut y);
                values.extend(basis.eval_all(&chart.to_sphere(&y))?);
            }
            chart_values.push(values);
            grids.push(grid);
        }
        Ok(Self { chart_values, grids })
    }

    /// Samples `coeffs(k)` at every time index on each chart.
    fn sample(&self, nmodes: usize, coeffs: impl Fn(usize) -> Vec<f64>) -> Vec<GridFunction> {
        let nt = self.grids[0].time_len();
        let per_time: Vec<Vec<f64>> = (0..nt).map(&coeffs).collect();
        self.grids
            .iter()
            .zip(&self.chart_values)
            .map(|(grid, basis_vals)| {
                let ns = grid.space_len();
                let mut values = vec![0.0; ns * nt];
                for s in 0..ns {
                    let phi = &basis_vals[s * nmodes..(s + 1) * nmodes];
                    for (k, c) in per_time.iter().enumerate() {
                        values[s * nt + k] = phi.iter().zip(c).map(|(a, b)| a * b).sum();
                    }
                }
                GridFunction::new(grid.clone(), values).expect("shape matches the grid")
            })
            .collect()
    }
}

/// `‖f‖_{C^{0,0,γ}} = sup|f| + [f]_γ^space + [f]_{γ/4}^time`, max over charts.
fn holder_zero_norm(fs: &[GridFunction], gamma: f64) -> f64 {
    fs.iter()
        .map(|f| {
            let r = f.grid().full_region();
            f.sup_norm() + spatial_seminorm_over(f, &r, gamma) + temporal_seminorm_over(f, &r, gamma / 4.0)
        })
        .fold(0.0, f64::max)
}

/// `‖u‖_{C^{4,γ}} = Σ_{|α|≤4} sup|∇_α u| + Σ_{|α|=4} [∇_α u]_γ^space` at a
/// single time, max over charts.
fn spatial_c4_norm(fs: &[GridFunction], gamma: f64) -> Result<f64> {
    let mut best = 0.0f64;
    for f in fs {
        let table = DerivativeTable::new(f)?;
        let r = f.grid().full_region();
        let mut total = 0.0;
        for order in 0..=4 {
            for d in table.spatial(order) {
                total += d.sup_norm();
                if order == 4 {
                    total += spatial_seminorm_over(d, &r, gamma);
                }
            }
        }
        best = best.max(total);
    }
    Ok(best)
}

/// Evolves the instance under `Δ²` on [`probe_time_grid`]`(T)` and evaluates
/// both sides of the estimate.
pub fn probe_sides(inst: &ProbeInstance, t_final: f64, cfg: &ProbeConfig) -> Result<ProbeSides> {
    let basis = inst.u0.basis().clone();
    let times = probe_time_grid(t_final);
    let traj = evolve(&inst.u0, inst.forcing.as_ref(), EvolutionOperator::BiLaplacian, &times)?;
    let sampler = ChartSampler::new(&basis, cfg.points_per_side, &times)?;
    let nm = basis.len();

    let u = sampler.sample(nm, |k| traj.states[k].coeffs().to_vec());
    let mut lhs = 0.0f64;
    for f in &u {
        let table = DerivativeTable::new(f)?;
        lhs = lhs.max(c41gamma_from_table(&table, &f.grid().full_region(), cfg.gamma));
    }
    let forcing_norm = match &inst.forcing {
        Some(sig) => holder_zero_norm(&sampler.sample(nm, |k| sig.at(times[k]).coeffs().to_vec()), cfg.gamma),
        None => 0.0,
    };
    let initial: Vec<GridFunction> =
        u.iter().map(|f| f.sub_grid(&f.grid().axes().iter().map(|a| 0..a.len).collect::<Vec<_>>(), 0..1)).collect::<Result<_>>()?;
    let initial_norm = spatial_c4_norm(&initial, cfg.gamma)?;
    let l2_sup = traj.states.iter().map(SpectralField::l2_norm).fold(0.0, f64::max);
    let rhs = forcing_norm
        + initial_norm
        + match cfg.form {
            ProbeForm::Theorem => l2_sup,
            ProbeForm::Corollary => 0.0,
        };
    Ok(ProbeSides { lhs, rhs, forcing_norm, initial_norm, l2_sup })
}

/// `lhs/rhs`, or `None` for a degenerate instance.
pub fn probe_ratio(inst: &ProbeInstance, t_final: f64, cfg: &ProbeConfig) -> Result<Option<f64>> {
    let sides = probe_sides(inst, t_final, cfg)?;
    Ok((sides.rhs >= DEGENERATE_RHS).then(|| sides.lhs / sides.rhs))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub config: ProbeConfig,
    pub t_values: Vec<f64>,
    /// `ratios[i][j]`: instance `i` at `t_values[j]`; `None` when skipped.
    pub ratios: Vec<Vec<Option<f64>>>,
    pub max_ratio: Vec<f64>,
    pub skipped: usize,
    /// `max/min` of `max_ratio` over `T`.
    pub spread: f64,
}

/// Instance `i` uses seed `cfg.seed + i`; every instance is evaluated at
/// each `T` on the same data and forcing.
pub fn schauder_ratio_probe(cfg: &ProbeConfig) -> Result<ProbeReport> {
    if cfg.t_values.is_empty() || cfg.t_values.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::InvalidParameter("T values must be positive".into()));
    }
    crate::holder::HolderExponents::new(cfg.gamma, 0)?;
    let basis = Arc::new(ModeBasis::enumerate(cfg.l_max)?);
    let t_max = cfg.t_values.iter().copied().fold(0.0, f64::max);
    let mut ratios = Vec::with_capacity(cfg.instances);
    let mut skipped = 0;
    for i in 0..cfg.instances {
        let inst = random_instance(cfg.seed.wrapping_add(i as u64), &basis, t_max, cfg.spectrum_decay);
        let row = cfg.t_values.iter().map(|&t| probe_ratio(&inst, t, cfg)).collect::<Result<Vec<_>>>()?;
        skipped += row.iter().filter(|r| r.is_none()).count();
        ratios.push(row);
    }
    let max_ratio: Vec<f64> = (0..cfg.t_values.len())
        .map(|j| ratios.iter().filter_map(|r| r[j]).fold(0.0, f64::max))
        .collect();
    let hi = max_ratio.iter().copied().fold(0.0, f64::max);
    let lo = max_ratio.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    Ok(ProbeReport { config: cfg.clone(), t_values: cfg.t_values.clone(), ratios, max_ratio, skipped, spread })
}
