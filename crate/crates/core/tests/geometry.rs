use parabolic_lab_core::geometry::{
    build_covering, cover_subadditivity_check, manufactured_solution, reflect_extend, simon_absorption_check, BoundaryMode, BoxDomain,
    EllipticCoefficients, SimonConfig, SimonVerdict,
};
use parabolic_lab_core::holder::{d41_from_table, BandLimited, DerivativeTable, GridAxis, GridFunction, SpaceTimeGrid};

fn half_grid(h: f64) -> SpaceTimeGrid {
    let axes = vec![GridAxis::new(-1.5, h, (3.0 / h).round() as usize + 1), GridAxis::new(0.0, h, (0.5 / h).round() as usize + 1)];
    SpaceTimeGrid::new(axes, vec![0.0, 0.25, 0.5]).unwrap()
}

#[test]
fn manufactured_reflection_has_fd_sized_jumps() {
    for seed in 0..5 {
        let c = EllipticCoefficients::random(2, seed);
        let mut prev = None;
        for h in [0.05, 0.025] {
            let u = manufactured_solution(&c, half_grid(h)).unwrap();
            let r = reflect_extend(&u, &c, 1e-2).unwrap();
            assert!(r.b1_residual < 1e-2 && r.b2_residual < 1e-2, "{seed}: {} {}", r.b1_residual, r.b2_residual);
            let worst = r.jumps.iter().map(|j| j.max_jump / j.max_above.max(1.0)).fold(0.0, f64::max);
            assert!(worst < 1e-2, "seed {seed} h {h}: {:?}", r.jumps);
            if let Some(p) = prev {
                // Halving h must gain at least second order.
                assert!(worst < p / 4.0, "seed {seed}: {p:e} -> {worst:e}");
            }
            prev = Some(worst);
        }
    }
}

#[test]
fn random_band_limited_functions_are_subadditive() {
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
    assert_eq!(violations, 0);
}

#[test]
fn d41_passes_the_absorption_check() {
    let f = BandLimited::random(11, 1, 3, 2.0, 1.0);
    let times: Vec<f64> = (0..=160).map(|i| -1.0 + i as f64 / 80.0).collect();
    let grid = SpaceTimeGrid::cube(1, -1.0, 1.0, 81, times).unwrap();
    let u = GridFunction::from_fn(grid.clone(), |x, t| f.eval(x, t)).unwrap();
    let table = DerivativeTable::new(&u).unwrap();
    let s = |b: &parabolic_lab_core::geometry::ParabolicBall| d41_from_table(&table, &b.region(&grid), 0.5);
    let mut cfg = SimonConfig::new(vec![0.0], 0.0, 1.0);
    cfg.min_radius = 0.25;
    cfg.hypothesis_samples = 100;
    cfg.audit_samples = 50;
    let r = simon_absorption_check(s, &cfg).unwrap();
    assert_eq!(r.verdict, SimonVerdict::ConclusionHolds, "{r:?}");
}
