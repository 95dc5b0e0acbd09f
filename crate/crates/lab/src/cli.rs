//! `parabolic-lab <subcommand>`: runs one experiment and writes its report.
//!
//! Exit codes: 0 when every asserted property holds, 2 when one fails (the
//! report is still written), 1 on usage or IO errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use parabolic_lab_core::evolution::{evolve, EvolutionOperator};
use parabolic_lab_core::experiments::{
    calibrate_unit_ball, corpus_violations, decay_experiment, schauder_ratio_probe, test_corpus, DecayNorm, ProbeConfig,
    ProbeForm, DEFAULT_EPS, SPECTRAL_GAP,
};
use parabolic_lab_core::geometry::{
    boundary_residuals, build_covering, manufactured_solution, reflect_extend, reflection_map, BoundaryMode, BoxDomain, EllipticCoefficients,
};
use parabolic_lab_core::holder::{
    c41gamma_norm, d41_seminorm, parabolic_seminorm, spatial_seminorm, temporal_seminorm, GridAxis, HolderExponents,
    SpaceTimeGrid,
};
use parabolic_lab_core::interval::{
    fd_vs_spectral, interval_evolve, FdConfig, IntervalField, BOUNDARY_TOL, FD_AGREEMENT_TOL,
};
use parabolic_lab_core::spectral::{eval_mode, Eigenmode, ModeBasis, Projector, QuadratureRule};
use parabolic_lab_core::Error as CoreError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::descriptor::FieldDescriptor;
use crate::io::{read_grid_csv, spectral_rows};
use crate::report::{write_csv, Check, Report, Status, Table};

/// Values checked against closed forms in `eigen`.
pub const EIGEN_VALUE_TOL: f64 = 1e-10;
/// Frobenius bound on the Gram deviation.
pub const GRAM_TOL: f64 = 1e-8;
/// `decay` requires the fitted rate to reach `12 − this` on kernel-free data.
pub const DECAY_RATE_SLACK: f64 = 1e-3;
/// Kernel-part drift allowed by `decay`, relative to `max(1, ‖u∥(0)‖)`.
pub const PARALLEL_DRIFT_TOL: f64 = 1e-12;
/// `probe` fails when `max/min` of the per-`T` maximum ratio reaches this.
pub const PROBE_SPREAD_BOUND: f64 = 2.0;
/// `reflect`: quadratic-form invariance and involution, relative to `max(1, Λ)`.
pub const REFLECTION_TOL: f64 = 1e-12;
/// `reflect`: each one-sided derivative jump must stay below this times `h²`.
pub const JUMP_FACTOR: f64 = 10.0;

#[derive(Debug, Parser)]
#[command(name = "parabolic-lab", version, about = "Experiments for fourth-order parabolic problems on the upper half-sphere")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Report path; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Hölder exponent.
    #[arg(long, global = true, default_value_t = 0.5)]
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Neumann eigenmodes of the half-sphere up to a degree.
    Eigen(EigenArgs),
    /// Exponential decay of the kernel-free part under ∂ₜu + ½Δ(Δ+2)u = 0.
    Decay(DecayArgs),
    /// Schauder-estimate ratios over random instances and horizons T.
    Probe(ProbeArgs),
    /// Calibrate interpolation constants and test them on a disjoint corpus.
    Interp(InterpArgs),
    /// Hölder seminorms and norms of a grid function read from CSV.
    Norms(NormsArgs),
    /// T-uniform covering of V × [0, T] by parabolic balls.
    Cover(CoverArgs),
    /// Oblique reflection of a manufactured solution across xₙ = 0.
    Reflect(ReflectArgs),
    /// Spectral vs finite-difference solutions on [0, π].
    Oracle1d(OracleArgs),
}

#[derive(Debug, Clone, Args, serde::Serialize)]
pub struct EigenArgs {
    #[arg(long, default_value_t = 2)]
    pub lmax: u32,
    /// Polar quadrature order; 2·lmax + 2 when absent.
    #[arg(long)]
    pub order: Option<usize>,
    /// Random hemisphere points for the closed-form value checks.
    #[arg(long, default_value_t = 10)]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormArg {
    L2,
    Sup,
}

#[derive(Debug, Clone, Args, serde::Serialize)]
pub struct DecayArgs {
    #[arg(long, value_enum, default_value_t = NormArg::L2)]
    pub mode: NormArg,
    /// Initial data, e.g. `single:l=2,m=0` or `random:seed=3,lmax=6,kernel=drop`.
    #[arg(long)]
    pub u0: String,
    /// Final time; at least 1.
    #[arg(long, default_value_t = 1.0)]
    pub tmax: f64,
    /// Uniform time samples on [0, tmax].
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    /// Degree cap of the basis (raised to fit the data).
    #[arg(long, default_value_t = 0)]
    pub lmax: u32,
    /// CSV table of coefficients `t,mode,coeff` instead of norms.
    #[arg(long)]
    pub coefficients: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Theorem,
    Corollary,
}

#[derive(Debug, Clone, Args)]
pub struct ProbeArgs {
    #[arg(long, default_value_t = 100)]
    pub instances: usize,
    #[arg(long = "t", value_delimiter = ',', default_values_t = [1.0, 2.0, 4.0, 8.0])]
    pub t_values: Vec<f64>,
    #[arg(long, default_value_t = 4)]
    pub lmax: u32,
    /// Chart grid points per side.
    #[arg(long, default_value_t = 11)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = FormArg::Theorem)]
    pub form: FormArg,
    /// Random coefficients scale as (1 + λ)^(−decay).
    #[arg(long, default_value_t = 1.0)]
    pub decay: f64,
}

#[derive(Debug, Clone, Args, serde::Serialize)]
pub struct InterpArgs {
    /// Random kernel polynomials in the calibration corpus.
    #[arg(long, default_value_t = 200)]
    pub polys: usize,
    /// Random band-limited functions in the calibration corpus.
    #[arg(long, default_value_t = 2000)]
    pub trigs: usize,
    /// Size of the test corpus.
    #[arg(long, default_value_t = 50)]
    pub test: usize,
}

#[derive(Debug, Clone, Args, serde::Serialize)]
pub struct NormsArgs {
    /// CSV with columns x1..xn,t,value.
    #[arg(long)]
    pub input: PathBuf,
    /// Largest m for the parabolic seminorms [·]_{m,γ}.
    #[arg(long, default_value_t = 4)]
    pub m: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Interior,
    HalfSpace,
}

#[derive(Debug, Clone, Args)]
pub struct CoverArgs {
    /// Box V as lo1,hi1,lo2,hi2,…
    #[arg(long = "V", value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub v: Vec<f64>,
    /// Box V′ ⊃ V in the same layout.
    #[arg(long = "Vp", value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub v_prime: Vec<f64>,
    #[arg(long = "T0")]
    pub t0: f64,
    #[arg(long = "T")]
    pub t_final: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Interior)]
    pub mode: ModeArg,
    /// Random points in the membership audit.
    #[arg(long, default_value_t = 10_000)]
    pub audit: usize,
}

#[derive(Debug, Clone, Args, serde::Serialize)]
pub struct ReflectArgs {
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Grid spacing.
    #[arg(long, default_value_t = 0.05)]
    pub h: f64,
    /// Tangential half-width of the grid.
    #[arg(long, default_value_t = 1.5)]
    pub extent: f64,
    /// Normal depth of the half-space grid.
    #[arg(long, default_value_t = 0.5)]
    pub depth: f64,
    /// Largest boundary residual accepted before extending.
    #[arg(long, default_value_t = 1e-2)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, serde::Serialize)]
pub struct OracleArgs {
    /// Cosine coefficients c₀, c₁, … of the initial data.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0.3, 1.0, -0.5, 0.25, 0.2])]
    pub coeffs: Vec<f64>,
    #[arg(long = "t", default_value_t = 0.1)]
    pub t_final: f64,
    #[arg(long, default_value_t = 401)]
    pub points: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub dt: f64,
    /// Output times, uniform on [0, t], each a whole number of steps.
    #[arg(long, default_value_t = 11)]
    pub frames: usize,
}

/// Parses `args` (program name first), runs, writes and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli).and_then(|(report, table)| emit(&cli.common, &report, &table).map(|_| report)) {
        Ok(report) if report.status == Status::Pass => 0,
        Ok(report) => {
            for c in report.checks.iter().filter(|c| !c.holds) {
                eprintln!("violated: {} (measured {:e}, bound {:e})", c.name, c.measured, c.bound);
            }
            2
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn emit(common: &Common, report: &Report, table: &Table) -> Result<()> {
    let sink: Box<dyn Write> = match &common.out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    match common.format {
        Format::Json => w.write_all(crate::canonical::to_string(report)?.as_bytes())?,
        Format::Csv => write_csv(report, table, &mut w)?,
    }
    w.flush()?;
    Ok(())
}

/// Runs the parsed command without writing anything.
pub fn execute(cli: &Cli) -> Result<(Report, Table)> {
    let c = &cli.common;
    if !(c.gamma > 0.0 && c.gamma < 1.0) {
        bail!("--gamma must lie in (0, 1), got {}", c.gamma);
    }
    match &cli.command {
        Command::Eigen(a) => eigen(c, a),
        Command::Decay(a) => decay(c, a),
        Command::Probe(a) => probe(c, a),
        Command::Interp(a) => interp(c, a),
        Command::Norms(a) => norms(c, a),
        Command::Cover(a) => cover(c, a),
        Command::Reflect(a) => reflect(c, a),
        Command::Oracle1d(a) => oracle1d(c, a),
    }
}

fn base_config(c: &Common, args: impl serde::Serialize) -> Result<Value> {
    let mut v = serde_json::to_value(args)?;
    v["gamma"] = json!(c.gamma);
    v["seed"] = json!(c.seed);
    Ok(v)
}

fn eigen(c: &Common, a: &EigenArgs) -> Result<(Report, Table)> {
    let basis = Arc::new(ModeBasis::enumerate(a.lmax)?);
    let order = a.order.unwrap_or(2 * a.lmax as usize + 2);
    let gram = match Projector::new(basis.clone(), QuadratureRule::new(order)?) {
        Ok(p) => p.gram_deviation(),
        Err(CoreError::InsufficientQuadrature { deviation }) => deviation,
        Err(e) => return Err(e.into()),
    };
    let mut multiplicity: BTreeMap<u32, usize> = BTreeMap::new();
    for m in basis.modes() {
        *multiplicity.entry(m.l).or_default() += 1;
    }
    let phi0 = eval_mode(&Eigenmode::new(0, 0)?, &[0.0, 0.0, 1.0])?;
    let mut checks = vec![
        Check::below("gram-deviation-frobenius", gram, GRAM_TOL),
        Check::below("phi0-value", (phi0 - 1.0 / std::f64::consts::TAU.sqrt()).abs(), EIGEN_VALUE_TOL),
    ];
    if a.lmax >= 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
        let k = (3.0 / std::f64::consts::TAU).sqrt();
        let (p, q) = (Eigenmode::new(1, 1)?, Eigenmode::new(1, -1)?);
        let mut worst = 0.0f64;
        for _ in 0..a.points {
            let z: f64 = rng.random_range(0.0..1.0);
            let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let s = (1.0 - z * z).sqrt();
            let w = [s * phi.cos(), s * phi.sin(), z];
            worst = worst.max((eval_mode(&p, &w)? - k * w[0]).abs()).max((eval_mode(&q, &w)? - k * w[1]).abs());
        }
        checks.push(Check::below("degree-one-values", worst, EIGEN_VALUE_TOL));
    }
    let modes: Vec<Value> = basis.modes().iter().map(|m| json!({"l": m.l, "m": m.m, "lambda": m.lambda, "normalization": m.normalization})).collect();
    let eigenvalues: Vec<Value> =
        multiplicity.iter().map(|(l, n)| json!({"lambda": (l * (l + 1)) as f64, "multiplicity": n})).collect();
    let result = json!({
        "modes": modes,
        "eigenvalues": eigenvalues,
        "phi0": phi0,
        "quadrature_order": order,
        "gram_deviation": gram,
    });
    let rows = basis
        .modes()
        .iter()
        .map(|m| vec![m.l.to_string(), m.m.to_string(), m.lambda.to_string(), m.normalization.to_string()])
        .collect();
    let mut config = base_config(c, a)?;
    config["order"] = json!(order);
    let report = Report::new("eigen", c.seed, config, result, checks);
    Ok((report, Table::rows(vec!["l", "m", "lambda", "normalization"], rows)))
}

fn decay(c: &Common, a: &DecayArgs) -> Result<(Report, Table)> {
    let desc: FieldDescriptor = a.u0.parse()?;
    let u0 = desc.build(a.lmax)?;
    if a.samples < 2 {
        bail!("--samples must be at least 2");
    }
    let t_grid: Vec<f64> = (0..a.samples).map(|i| a.tmax * i as f64 / (a.samples - 1) as f64).collect();
    let norm = match a.mode {
        NormArg::L2 => DecayNorm::L2,
        NormArg::Sup => DecayNorm::SupOnNodes,
    };
    let r = decay_experiment(&u0, &t_grid, norm)?;
    let (par, perp) = u0.split_parallel_perp()?;
    let mut checks = vec![
        Check::at_most("parallel-drift", r.parallel_drift / par.l2_norm().max(1.0), PARALLEL_DRIFT_TOL),
        Check::flag("energy-monotone", r.energy_monotone),
    ];
    if par.l2_norm() == 0.0 && perp.l2_norm() > 0.0 {
        let rate = r.fitted_rate.unwrap_or(f64::NAN);
        checks.push(Check::at_least("fitted-rate", rate, SPECTRAL_GAP - DECAY_RATE_SLACK));
    }
    let table = if a.coefficients {
        let tr = evolve(&u0, None, EvolutionOperator::HalfDeltaDeltaPlus2, &t_grid)?;
        Table::Trajectory(spectral_rows(&tr.times, &tr.states))
    } else {
        let rows = (0..r.times.len())
            .map(|i| vec![r.times[i].to_string(), r.perp_norms[i].to_string(), r.parallel_norms[i].to_string(), r.total_norms[i].to_string()])
            .collect();
        Table::rows(vec!["t", "perp", "parallel", "total"], rows)
    };
    let mut config = base_config(c, a)?;
    config["u0"] = serde_json::to_value(desc)?;
    config["basis_lmax"] = json!(u0.basis().l_max());
    let report = Report::new("decay", c.seed, config, serde_json::to_value(&r)?, checks);
    Ok((report, table))
}

fn probe(c: &Common, a: &ProbeArgs) -> Result<(Report, Table)> {
    let cfg = ProbeConfig {
        seed: c.seed,
        instances: a.instances,
        l_max: a.lmax,
        t_values: a.t_values.clone(),
        gamma: c.gamma,
        points_per_side: a.points,
        form: match a.form {
            FormArg::Theorem => ProbeForm::Theorem,
            FormArg::Corollary => ProbeForm::Corollary,
        },
        spectrum_decay: a.decay,
    };
    let r = schauder_ratio_probe(&cfg)?;
    let finite = r.ratios.iter().flatten().all(|x| x.is_some_and(f64::is_finite));
    let checks = vec![Check::flag("all-ratios-finite", finite), Check::below("max-ratio-spread", r.spread, PROBE_SPREAD_BOUND)];
    let mut rows = Vec::new();
    for (i, per_t) in r.ratios.iter().enumerate() {
        for (t, x) in r.t_values.iter().zip(per_t) {
            rows.push(vec![i.to_string(), t.to_string(), x.map_or_else(String::new, |v| v.to_string())]);
        }
    }
    let config = serde_json::to_value(&cfg)?;
    let report = Report::new("probe", c.seed, config, serde_json::to_value(&r)?, checks);
    Ok((report, Table::rows(vec!["instance", "T", "ratio"], rows)))
}

fn interp(c: &Common, a: &InterpArgs) -> Result<(Report, Table)> {
    let constants = calibrate_unit_ball(c.seed, a.polys, a.trigs, c.gamma, &DEFAULT_EPS)?;
    let corpus = test_corpus(c.seed, a.test);
    let violations = corpus_violations(&corpus, &constants)?;
    let checks = vec![Check::at_most("test-corpus-violations", violations.len() as f64, 0.0)];
    let rows = constants
        .constants
        .iter()
        .map(|(line, k)| vec![serde_json::to_string(line).unwrap_or_default(), line.exponent(c.gamma).to_string(), k.to_string()])
        .collect();
    let result = json!({
        "constants": constants,
        "test_corpus": corpus.iter().map(|f| f.descriptor()).collect::<Vec<_>>(),
        "violations": violations.iter().map(|(i, row)| json!({"function": i, "row": row})).collect::<Vec<_>>(),
    });
    let mut config = base_config(c, a)?;
    config["eps"] = json!(DEFAULT_EPS);
    let report = Report::new("interp", c.seed, config, result, checks);
    Ok((report, Table::rows(vec!["line", "exponent", "constant"], rows)))
}

fn norms(c: &Common, a: &NormsArgs) -> Result<(Report, Table)> {
    let file = File::open(&a.input).with_context(|| format!("cannot open {}", a.input.display()))?;
    let u = read_grid_csv(file).with_context(|| format!("reading {}", a.input.display()))?;
    let mut values: Vec<(String, Value)> = vec![
        ("spatial_seminorm".into(), json!(spatial_seminorm(&u, c.gamma))),
        ("temporal_seminorm".into(), json!(temporal_seminorm(&u, c.gamma / 4.0))),
    ];
    let describe = |r: parabolic_lab_core::Result<f64>| match r {
        Ok(v) => json!(v),
        Err(e) => json!({"unavailable": e.to_string()}),
    };
    for m in 0..=a.m {
        let v = HolderExponents::new(c.gamma, m).and_then(|e| parabolic_seminorm(&u, e));
        values.push((format!("parabolic_seminorm_m{m}"), describe(v)));
    }
    values.push(("d41_seminorm".into(), describe(d41_seminorm(&u, c.gamma))));
    values.push(("c41gamma_norm".into(), describe(c41gamma_norm(&u, c.gamma))));
    let rows = values.iter().map(|(k, v)| vec![k.clone(), v.as_f64().map_or_else(String::new, |x| x.to_string())]).collect();
    let grid = u.grid();
    let result = json!({
        "norms": values.into_iter().collect::<serde_json::Map<_, _>>(),
        "grid": {"axes": grid.axes(), "times": grid.times()},
        "sup_norm": u.sup_norm(),
    });
    let config = base_config(c, a)?;
    let report = Report::new("norms", c.seed, config, result, vec![]);
    Ok((report, Table::rows(vec!["quantity", "value"], rows)))
}

fn parse_box(v: &[f64], flag: &str) -> Result<BoxDomain> {
    if v.is_empty() || v.len() % 2 != 0 {
        bail!("{flag} needs lo,hi pairs, got {} numbers", v.len());
    }
    let lo = v.iter().step_by(2).copied().collect();
    let hi = v.iter().skip(1).step_by(2).copied().collect();
    Ok(BoxDomain::new(lo, hi)?)
}

fn cover(c: &Common, a: &CoverArgs) -> Result<(Report, Table)> {
    let v = parse_box(&a.v, "--V")?;
    let vp = parse_box(&a.v_prime, "--Vp")?;
    let mode = match a.mode {
        ModeArg::Interior => BoundaryMode::Interior,
        ModeArg::HalfSpace => BoundaryMode::HalfSpace,
    };
    let cov = build_covering(&v, &vp, a.t0, a.t_final, mode)?;
    let audit = cov.audit(a.audit, c.seed);
    let checks = vec![
        Check::at_most("uncovered-points", audit.uncovered as f64, 0.0),
        Check::at_most("escaped-enlargements", audit.escaped as f64, 0.0),
        Check::at_most("invalid-forms", audit.invalid_forms as f64, 0.0),
    ];
    let rows = cov
        .form_counts()
        .iter()
        .map(|(t, n)| vec![t.time_above.to_string(), t.time_below.to_string(), t.space_half.to_string(), n.to_string()])
        .collect();
    let result = json!({
        "covering": cov,
        "rho": cov.rho,
        "N": cov.spatial_count(),
        "pieces": cov.piece_count(),
        "audit": audit,
    });
    let config = json!({
        "V": v, "Vp": vp, "T0": a.t0, "T": a.t_final, "mode": mode, "audit": a.audit, "seed": c.seed, "gamma": c.gamma,
    });
    let report = Report::new("cover", c.seed, config, result, checks);
    Ok((report, Table::rows(vec!["time_above", "time_below", "space_half", "count"], rows)))
}

fn reflect(c: &Common, a: &ReflectArgs) -> Result<(Report, Table)> {
    if a.dim < 1 {
        bail!("--dim must be positive");
    }
    if !(a.h > 0.0) {
        bail!("--h must be positive");
    }
    let coeffs = EllipticCoefficients::random(a.dim, c.seed);
    let scale = coeffs.lambda().max(1.0);
    let tangential = GridAxis::new(-a.extent, a.h, (2.0 * a.extent / a.h).round() as usize + 1);
    let normal = GridAxis::new(0.0, a.h, (a.depth / a.h).round() as usize + 1);
    let mut axes = vec![tangential; a.dim - 1];
    axes.push(normal);
    let grid = SpaceTimeGrid::new(axes, vec![0.0, 0.25, 0.5])?;
    let u = manufactured_solution(&coeffs, grid)?;
    let (b1, b2) = boundary_residuals(&u, &coeffs)?;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut involution = 0.0f64;
    for _ in 0..100 {
        let x: Vec<f64> = (0..a.dim).map(|_| rng.random_range(-2.0..2.0)).collect();
        let back = reflection_map(&coeffs, &reflection_map(&coeffs, &x)?)?;
        involution = involution.max(x.iter().zip(&back).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max));
    }
    let mut checks = vec![
        Check::below("quadratic-form-invariance", coeffs.pushforward_deviation() / scale, REFLECTION_TOL),
        Check::below("involution", involution, REFLECTION_TOL),
        Check::at_most("boundary-b1", b1, a.tol),
        Check::at_most("boundary-b2", b2, a.tol),
    ];
    let mut result = json!({
        "coefficients": coeffs,
        "reflection_vector": coeffs.reflection_vector(),
        "b1_residual": b1,
        "b2_residual": b2,
        "jumps": [],
    });
    // Refused extensions keep the half-space samples as the table.
    let mut table = Table::Grid(u.clone());
    if b1 <= a.tol && b2 <= a.tol {
        let r = reflect_extend(&u, &coeffs, a.tol)?;
        let bound = JUMP_FACTOR * a.h * a.h;
        for j in &r.jumps {
            checks.push(Check::below(&format!("jump-order-{}", j.order), j.max_jump, bound));
        }
        result["jumps"] = serde_json::to_value(&r.jumps)?;
        table = Table::Grid(r.function);
    }
    let config = base_config(c, a)?;
    let report = Report::new("reflect", c.seed, config, result, checks);
    Ok((report, table))
}

fn oracle1d(c: &Common, a: &OracleArgs) -> Result<(Report, Table)> {
    if a.frames < 2 {
        bail!("--frames must be at least 2");
    }
    let u0 = IntervalField::new(a.coeffs.clone())?;
    let fd = FdConfig { points: a.points, dt: a.dt };
    let steps = (a.t_final / a.dt).round() as usize;
    if (steps as f64 * a.dt - a.t_final).abs() > 1e-9 * a.t_final.max(1.0) || steps % (a.frames - 1) != 0 {
        bail!("--t must be a whole number of steps, divisible into {} frames", a.frames - 1);
    }
    let stride = steps / (a.frames - 1);
    let times: Vec<f64> = (0..a.frames).map(|i| (i * stride) as f64 * a.dt).collect();
    let cmp = fd_vs_spectral(&u0, None, fd, &times)?;
    let checks = vec![
        Check::below("spectral-vs-fd", cmp.max_difference, FD_AGREEMENT_TOL),
        Check::below("boundary-dx", cmp.boundary_d1, BOUNDARY_TOL),
        Check::below("boundary-dx3", cmp.boundary_d3, BOUNDARY_TOL),
    ];
    let traj = interval_evolve(&u0, None, &times)?;
    let rows = traj
        .times
        .iter()
        .zip(&traj.states)
        .flat_map(|(t, s)| s.coeffs.iter().enumerate().map(move |(k, x)| (*t, k.to_string(), *x)))
        .collect();
    let config = base_config(c, a)?;
    let result = json!({"comparison": cmp, "final_coeffs": traj.last().coeffs});
    let report = Report::new("oracle1d", c.seed, config, result, checks);
    Ok((report, Table::Trajectory(rows)))
}
