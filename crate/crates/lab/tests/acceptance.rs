//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines always print; exits nonzero when any criterion fails.

use std::f64::consts::TAU;
use std::sync::Arc;
use std::time::Instant;

use parabolic_lab_core::evolution::{elliptic_solve, evolve, EvolutionOperator, ForcingSignal};
use parabolic_lab_core::experiments::{
    calibrate_unit_ball, calibration_corpus, corpus_violations, decay_experiment, schauder_ratio_probe, seeded_field,
    test_corpus, DecayNorm, ProbeConfig, DEFAULT_EPS,
};
use parabolic_lab_core::geometry::{
    build_covering, cover_subadditivity_check, manufactured_solution, reflect_extend, reflection_map,
    simon_absorption_check, BoundaryMode, BoxDomain, EllipticCoefficients, ParabolicBall, SimonConfig, SimonVerdict,
};
use parabolic_lab_core::holder::{
    d41_from_table, fd_derivative, spatial_seminorm, temporal_seminorm, BandLimited, DerivativeTable, GridAxis,
    GridFunction, SpaceTimeGrid,
};
use parabolic_lab_core::interval::{fd_vs_spectral, FdConfig, IntervalField};
use parabolic_lab_core::spectral::{eval_mode, Eigenmode, ModeBasis, Projector, QuadratureRule, SpectralField};
use parabolic_lab_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn hemisphere_points(seed: u64, count: usize) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let z: f64 = rng.random_range(0.0..1.0);
            let phi: f64 = rng.random_range(0.0..TAU);
            let s = (1.0 - z * z).sqrt();
            [s * phi.cos(), s * phi.sin(), z]
        })
        .collect()
}

fn basis(l_max: u32) -> Arc<ModeBasis> {
    Arc::new(ModeBasis::enumerate(l_max).expect("valid degree"))
}

fn kernel_free(seed: u64, b: &Arc<ModeBasis>) -> SpectralField {
    seeded_field(seed, b, 1.0).split_parallel_perp().expect("same basis").1
}

const VALUE_TOL: f64 = 1e-10;

fn c01_eigen_table() -> Outcome {
    let b = basis(3);
    let mut lambdas: Vec<f64> = b.modes().iter().map(|m| m.lambda).collect();
    lambdas.sort_by(f64::total_cmp);
    let spectrum_ok = lambdas[..4] == [0.0, 2.0, 2.0, 6.0];
    let k = (3.0 / TAU).sqrt();
    let (m0, mc, ms) = (Eigenmode::new(0, 0).unwrap(), Eigenmode::new(1, 1).unwrap(), Eigenmode::new(1, -1).unwrap());
    let mut worst = 0.0f64;
    for w in hemisphere_points(1, 10) {
        worst = worst
            .max((eval_mode(&m0, &w).unwrap() - 1.0 / TAU.sqrt()).abs())
            .max((eval_mode(&mc, &w).unwrap() - k * w[0]).abs())
            .max((eval_mode(&ms, &w).unwrap() - k * w[1]).abs());
    }
    check(spectrum_ok && worst < VALUE_TOL, format!("lowest eigenvalues {:?}, max value error {worst:.2e} (tol {VALUE_TOL:e})", &lambdas[..4]))
}

const GRAM_TOL: f64 = 1e-8;

fn c02_orthonormality() -> Outcome {
    match Projector::new(basis(8), QuadratureRule::new(20).unwrap()) {
        Ok(p) => check(p.gram_deviation() < GRAM_TOL, format!("l_max 8, order 20: Frobenius deviation {:.2e} (tol {GRAM_TOL:e})", p.gram_deviation())),
        Err(e) => Err(e.to_string()),
    }
}

const RATE_TOL: f64 = 1e-6;
const RATE_FLOOR: f64 = 11.999;
const DRIFT_TOL: f64 = 1e-12;

fn c03_decay_rate() -> Outcome {
    let t: Vec<f64> = (0..=200).map(|i| i as f64 / 100.0).collect();
    let b = basis(6);
    let mut single_err = 0.0f64;
    for m in [-2, 0, 2] {
        for norm in [DecayNorm::L2, DecayNorm::SupOnNodes] {
            let u0 = SpectralField::mode(b.clone(), 2, m).unwrap();
            let rate = decay_experiment(&u0, &t, norm).unwrap().fitted_rate.unwrap_or(f64::NAN);
            single_err = single_err.max((rate - 12.0).abs());
        }
    }
    let mut min_rate = f64::INFINITY;
    let mut drift = 0.0f64;
    for seed in 0..20 {
        let r = decay_experiment(&kernel_free(seed, &b), &t, DecayNorm::L2).unwrap();
        min_rate = min_rate.min(r.fitted_rate.unwrap_or(f64::NAN));
        let with_kernel = decay_experiment(&seeded_field(100 + seed, &b, 1.0), &t, DecayNorm::L2).unwrap();
        drift = drift.max(with_kernel.parallel_drift);
    }
    check(
        single_err <= RATE_TOL && min_rate >= RATE_FLOOR && drift <= DRIFT_TOL,
        format!("single λ=6 modes |rate−12| ≤ {single_err:.2e}; 20 kernel-free min rate {min_rate:.6}; kernel drift {drift:.2e}"),
    )
}

const ENERGY_SLACK: f64 = 1e-12;

fn c04_energy() -> Outcome {
    let t: Vec<f64> = (0..100).map(|i| i as f64 / 33.0).collect();
    let b = basis(6);
    let mut worst_rise = f64::NEG_INFINITY;
    for seed in 0..20 {
        let traj = evolve(&seeded_field(200 + seed, &b, 1.0), None, EvolutionOperator::HalfDeltaDeltaPlus2, &t).unwrap();
        let e: Vec<f64> =
            traj.states.iter().zip(&t).map(|(s, &ti)| (12.0 * ti).exp() * s.split_parallel_perp().unwrap().1.l2_norm()).collect();
        for w in e.windows(2) {
            worst_rise = worst_rise.max(w[1] / w[0] - 1.0);
        }
    }
    check(worst_rise <= ENERGY_SLACK, format!("20 fields × 100 samples: largest relative rise {worst_rise:.2e} (slack {ENERGY_SLACK:e})"))
}

const DUHAMEL_TOL: f64 = 1e-10;
const ZERO_RATE_TOL: f64 = 1e-12;
const SEMIGROUP_TOL: f64 = 1e-12;

fn c05_duhamel() -> Outcome {
    let b = basis(4);
    let times = [0.0, 0.01, 0.1, 0.5, 1.0, 3.0];
    let mut rel = 0.0f64;
    for (l, m) in [(2u32, 0i32), (3, 1), (4, -4)] {
        for op in [EvolutionOperator::BiLaplacian, EvolutionOperator::HalfDeltaDeltaPlus2] {
            let c = 0.7;
            let f = ForcingSignal::constant(SpectralField::mode(b.clone(), l, m).unwrap().scaled(c));
            let k = b.index_of(l, m).unwrap();
            let mu = op.mode_rate((l * (l + 1)) as f64);
            let tr = evolve(&SpectralField::zeros(b.clone()), Some(&f), op, &times).unwrap();
            for (s, &t) in tr.states.iter().zip(&times).skip(1) {
                let exact = c / mu * -(-mu * t).exp_m1();
                rel = rel.max((s.coeffs()[k] - exact).abs() / exact.abs());
            }
        }
    }
    let mut zero_rel = 0.0f64;
    for (l, m, op) in [(0u32, 0i32, EvolutionOperator::BiLaplacian), (1, 1, EvolutionOperator::HalfDeltaDeltaPlus2)] {
        let c = 1.3;
        let f = ForcingSignal::constant(SpectralField::mode(b.clone(), l, m).unwrap().scaled(c));
        let k = b.index_of(l, m).unwrap();
        let tr = evolve(&SpectralField::zeros(b.clone()), Some(&f), op, &times).unwrap();
        for (s, &t) in tr.states.iter().zip(&times).skip(1) {
            zero_rel = zero_rel.max((s.coeffs()[k] - c * t).abs() / (c * t));
        }
    }
    let mut semi = 0.0f64;
    for seed in 0..10 {
        let u0 = seeded_field(300 + seed, &b, 0.5);
        for op in [EvolutionOperator::BiLaplacian, EvolutionOperator::HalfDeltaDeltaPlus2] {
            let (s, t) = (0.013 * (seed + 1) as f64, 0.07);
            let mid = evolve(&u0, None, op, &[0.0, s]).unwrap().last().clone();
            let two = evolve(&mid, None, op, &[0.0, t]).unwrap().last().clone();
            let one = evolve(&u0, None, op, &[0.0, s + t]).unwrap().last().clone();
            semi = semi.max(two.coeffs().iter().zip(one.coeffs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        }
    }
    check(
        rel <= DUHAMEL_TOL && zero_rel <= ZERO_RATE_TOL && semi <= SEMIGROUP_TOL,
        format!("constant forcing rel err {rel:.2e}; zero-rate mode rel err {zero_rel:.2e}; semigroup err {semi:.2e}"),
    )
}

const ELLIPTIC_TOL: f64 = 1e-12;

fn c06_elliptic() -> Outcome {
    let b = basis(8);
    let mut worst = 0.0f64;
    for seed in 0..20 {
        let mut f = seeded_field(400 + seed, &b, 0.0);
        f.coeffs_mut()[b.index_of(0, 0).unwrap()] = 0.0;
        let back = elliptic_solve(&EvolutionOperator::BiLaplacian.apply(&f)).unwrap();
        worst = worst.max(back.coeffs().iter().zip(f.coeffs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    }
    let rejected = matches!(elliptic_solve(&SpectralField::mode(b.clone(), 0, 0).unwrap()), Err(Error::NonzeroMean(_)));
    check(worst <= ELLIPTIC_TOL && rejected, format!("round trip error {worst:.2e}; constant mode rejected: {rejected}"))
}

const ABS_TOL: f64 = 0.05;
const SCALING_TOL: f64 = 1e-12;

fn abs_half(points: usize) -> f64 {
    let grid = SpaceTimeGrid::cube(1, 0.0, 1.0, points, vec![0.0]).unwrap();
    let u = GridFunction::from_fn(grid, |x, _| x[0].abs().sqrt()).unwrap();
    spatial_seminorm(&u, 0.5)
}

fn c07_holder() -> Outcome {
    let (e256, e512) = ((abs_half(256) - 1.0).abs(), (abs_half(512) - 1.0).abs());
    let abs_ok = e256 <= ABS_TOL && e512 <= e256;

    // u_λ(x, t) = u(λx, λ⁴t) on the rescaled grid; λ = 2 keeps the
    // rescaling exact in binary.
    let f = BandLimited::random(5, 1, 3, 2.0, 1.0);
    let grid = SpaceTimeGrid::cube(1, -1.0, 1.0, 41, (0..=20).map(|i| i as f64 / 40.0).collect()).unwrap();
    let u = GridFunction::from_fn(grid, |x, t| f.eval(x, t)).unwrap();
    let lambda = 2.0f64;
    let ul = u.rescaled(lambda);
    let alpha = 0.5;
    let mut scaling = 0.0f64;
    for (j, k) in [(0usize, 0usize), (0, 1), (0, 2), (0, 3), (0, 4), (1, 0)] {
        let (d, dl) = (fd_derivative(&u, &[k], j).unwrap(), fd_derivative(&ul, &[k], j).unwrap());
        let want = lambda.powf((4 * j + k) as f64 + alpha);
        scaling = scaling.max((spatial_seminorm(&dl, alpha) / spatial_seminorm(&d, alpha) / want - 1.0).abs());
        let want_t = lambda.powf((4 * j + k) as f64 + 4.0 * (alpha / 4.0));
        scaling = scaling.max((temporal_seminorm(&dl, alpha / 4.0) / temporal_seminorm(&d, alpha / 4.0) / want_t - 1.0).abs());
    }

    let v = BoxDomain::cube(1, -1.0, 1.0).unwrap();
    let vp = BoxDomain::cube(1, -2.0, 2.0).unwrap();
    let cover = build_covering(&v, &vp, 4.0, 4.0, BoundaryMode::Interior).unwrap();
    let times: Vec<f64> = (0..=1280).map(|i| i as f64 / 320.0).collect();
    let grid = SpaceTimeGrid::cube(1, -2.0, 2.0, 41, times).unwrap();
    let mut violations = 0;
    for seed in 0..50 {
        let f = BandLimited::random(seed, 1, 4, 3.0, 2.0);
        let u = GridFunction::from_fn(grid.clone(), |x, t| f.eval(x, t)).unwrap();
        let r = cover_subadditivity_check(&u, &cover, 0.5, 0.125).unwrap();
        violations += !(r.holds_sum && r.holds_sharpened) as usize;
    }
    check(
        abs_ok && scaling <= SCALING_TOL && violations == 0,
        format!("|x|^½ error {e256:.2e} @256, {e512:.2e} @512; scaling err {scaling:.2e}; subadditivity violations {violations}/50"),
    )
}

const AUDIT_POINTS: usize = 10_000;

fn c08_covering() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for (v, vp, mode) in [
        (BoxDomain::cube(1, -1.0, 1.0).unwrap(), BoxDomain::cube(1, -2.0, 2.0).unwrap(), BoundaryMode::Interior),
        (BoxDomain::cube(2, -0.5, 0.5).unwrap(), BoxDomain::cube(2, -1.0, 1.0).unwrap(), BoundaryMode::Interior),
        (
            BoxDomain::new(vec![-1.0, 0.0], vec![1.0, 1.0]).unwrap(),
            BoxDomain::new(vec![-2.0, 0.0], vec![2.0, 2.0]).unwrap(),
            BoundaryMode::HalfSpace,
        ),
    ] {
        let mut signature = None;
        for t in [1.0, 10.0, 100.0] {
            let c = build_covering(&v, &vp, 1.0, t, mode).unwrap();
            let sig = (c.rho, c.spatial_count());
            ok &= *signature.get_or_insert(sig) == sig;
            ok &= c.audit(AUDIT_POINTS, 7).holds();
        }
        let (rho, n) = signature.unwrap();
        details.push(format!("n={} {mode:?}: ρ={rho}, N={n}", v.dim()));
    }
    check(ok, format!("{} (T ∈ {{1,10,100}}, {AUDIT_POINTS}-point audits)", details.join("; ")))
}

const FORM_TOL: f64 = 1e-12;
const INVOLUTION_TOL: f64 = 1e-14;
const JUMP_FACTOR: f64 = 10.0;

fn c09_reflection() -> Outcome {
    let mut form = 0.0f64;
    let mut involution = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for seed in 0..100 {
        let c = EllipticCoefficients::random(2 + (seed as usize % 3), seed);
        form = form.max(c.pushforward_deviation());
        let x: Vec<f64> = (0..c.dim()).map(|_| rng.random_range(-3.0..3.0)).collect();
        let back = reflection_map(&c, &reflection_map(&c, &x).unwrap()).unwrap();
        involution = involution.max(x.iter().zip(&back).map(|(p, q)| (p - q).abs() / p.abs().max(1.0)).fold(0.0, f64::max));
    }
    let mut jumps_ok = true;
    let mut worst_ratio = 0.0f64;
    for seed in 0..5 {
        let c = EllipticCoefficients::random(2, seed);
        for h in [0.05, 0.025] {
            let axes = vec![GridAxis::new(-1.5, h, (3.0 / h).round() as usize + 1), GridAxis::new(0.0, h, (0.5 / h).round() as usize + 1)];
            let grid = SpaceTimeGrid::new(axes, vec![0.0, 0.25, 0.5]).unwrap();
            match reflect_extend(&manufactured_solution(&c, grid).unwrap(), &c, 1e-2) {
                Ok(r) => {
                    let worst = r.jumps.iter().map(|j| j.max_jump).fold(0.0, f64::max);
                    worst_ratio = worst_ratio.max(worst / (h * h));
                    jumps_ok &= worst < JUMP_FACTOR * h * h;
                }
                Err(_) => jumps_ok = false,
            }
        }
    }
    check(
        form <= FORM_TOL && involution <= INVOLUTION_TOL && jumps_ok,
        format!("form invariance {form:.2e}; involution {involution:.2e}; max jump / h² = {worst_ratio:.3} (bound {JUMP_FACTOR})"),
    )
}

fn c10_simon() -> Outcome {
    let f = BandLimited::random(11, 1, 3, 2.0, 1.0);
    let times: Vec<f64> = (0..=160).map(|i| -1.0 + i as f64 / 80.0).collect();
    let grid = SpaceTimeGrid::cube(1, -1.0, 1.0, 81, times).unwrap();
    let u = GridFunction::from_fn(grid.clone(), |x, t| f.eval(x, t)).unwrap();
    let table = DerivativeTable::new(&u).unwrap();
    let s = |b: &ParabolicBall| d41_from_table(&table, &b.region(&grid), 0.5);
    let mut cfg = SimonConfig::new(vec![0.0], 0.0, 1.0);
    cfg.min_radius = 0.25;
    cfg.hypothesis_samples = 100;
    cfg.audit_samples = 50;
    match simon_absorption_check(s, &cfg) {
        Ok(r) => check(
            r.verdict == SimonVerdict::ConclusionHolds,
            format!("{:?}: R^k S(Ω_θR) = {:.4e} ≤ C·E = {:.4e} (N = {}, δ = {:.3e})", r.verdict, r.lhs, r.rhs, r.constants.n_theta, r.delta),
        ),
        Err(e) => Err(e.to_string()),
    }
}

const SPREAD_BOUND: f64 = 2.0;

fn c11_probe() -> Outcome {
    match schauder_ratio_probe(&ProbeConfig::default()) {
        Ok(r) => {
            let finite = r.skipped == 0 && r.ratios.iter().flatten().all(|x| x.is_some_and(f64::is_finite));
            check(
                finite && r.spread < SPREAD_BOUND,
                format!("100 instances, max ratio per T {:.4?}, spread {:.4} (bound {SPREAD_BOUND}), all finite: {finite}", r.max_ratio, r.spread),
            )
        }
        Err(e) => Err(e.to_string()),
    }
}

const ORACLE_TOL: f64 = 1e-4;

fn c12_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut data = vec![vec![0.3, 1.0, -0.5, 0.25, 0.2]];
    data.extend((0..4).map(|_| (0..5).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<f64>>()));
    let mut worst = 0.0f64;
    for c in data {
        let cmp = fd_vs_spectral(&IntervalField::new(c).unwrap(), None, FdConfig::default(), &[0.0, 0.1]).unwrap();
        worst = worst.max(cmp.max_difference);
    }
    check(worst < ORACLE_TOL, format!("5 data sets, k ≤ 4, 401 points, Δt 1e-4: sup difference at t=0.1 {worst:.2e} (tol {ORACLE_TOL:e})"))
}

fn c13_interpolation() -> Outcome {
    let seed = 7;
    let constants = calibrate_unit_ball(seed, 200, 2000, 0.5, &DEFAULT_EPS).unwrap();
    let test = test_corpus(seed, 50);
    let cal: std::collections::HashSet<String> = calibration_corpus(seed, 200, 2000).iter().map(|f| f.descriptor()).collect();
    let disjoint = test.iter().all(|f| !cal.contains(&f.descriptor()));
    let v = corpus_violations(&test, &constants).unwrap();
    let pairs = test.len() * 20 * DEFAULT_EPS.len();
    check(
        disjoint && v.is_empty(),
        format!("{} violations over {pairs} (function, line, ε) triples; corpora disjoint: {disjoint}", v.len()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("eigen table", c01_eigen_table),
        ("orthonormality", c02_orthonormality),
        ("decay rate", c03_decay_rate),
        ("energy monotonicity", c04_energy),
        ("Duhamel exactness", c05_duhamel),
        ("elliptic inverse", c06_elliptic),
        ("Hölder machinery", c07_holder),
        ("covering T-uniformity", c08_covering),
        ("reflection", c09_reflection),
        ("Simon absorption", c10_simon),
        ("Schauder probe", c11_probe),
        ("oracle cross-check", c12_oracle),
        ("interpolation inequalities", c13_interpolation),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {:02} PASS {name}: {d} [{secs:.1}s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:02} FAIL {name}: {d} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
