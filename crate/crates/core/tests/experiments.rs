use parabolic_lab_core::experiments::{
    calibrate_unit_ball, corpus_violations, schauder_ratio_probe, test_corpus, CorpusFunction, ProbeConfig, ProbeForm,
    DEFAULT_EPS,
};

#[test]
fn probe_max_ratio_is_uniform_in_t() {
    let cfg = ProbeConfig::default();
    let r = schauder_ratio_probe(&cfg).unwrap();
    eprintln!("max ratios {:?} spread {} skipped {}", r.max_ratio, r.spread, r.skipped);
    assert_eq!(r.skipped, 0);
    assert!(r.spread < 2.0, "{:?}", r.max_ratio);
}

#[test]
fn corollary_form_runs() {
    let cfg = ProbeConfig { instances: 10, form: ProbeForm::Corollary, ..ProbeConfig::default() };
    let r = schauder_ratio_probe(&cfg).unwrap();
    eprintln!("corollary max ratios {:?}", r.max_ratio);
    assert!(r.max_ratio.iter().all(|v| v.is_finite() && *v > 0.0));
}

#[test]
fn calibrated_constants_transfer_to_the_test_corpus() {
    let c = calibrate_unit_ball(7, 200, 2000, 0.5, &DEFAULT_EPS).unwrap();
    eprintln!("{:?}", c.constants);
    let mut corpus = test_corpus(7, 50);
    corpus.push(CorpusFunction::Polynomial { coeffs: [0.0, 0.0, 0.0, 1.0], t_coeff: 0.0 });
    let v = corpus_violations(&corpus, &c).unwrap();
    assert!(v.is_empty(), "{v:?}");
}
