//! Experiments on the decay estimate, the T-independence of the Schauder
//! constant and the interpolation inequalities.

mod decay;
mod interpolation;
mod probe;

pub use decay::{decay_experiment, DecayNorm, DecayReport, FIT_FLOOR, FIT_WINDOW, SPECTRAL_GAP};
pub use interpolation::{
    ball_quantities, ball_region, calibrate, calibrate_unit_ball, calibration_corpus, check_quantities,
    corpus_violations, interpolation_check, test_corpus, BallQuantities, CorpusFunction, InterpolationConstants,
    InterpolationLine, InterpolationReport, InterpolationRow, BALL_POINTS, DEFAULT_EPS, EPS0,
};
pub use probe::{
    probe_ratio, probe_sides, probe_time_grid, random_instance, schauder_ratio_probe, seeded_field, Chart, ProbeConfig, ProbeForm,
    ProbeInstance, ProbeReport, ProbeSides, BAND_HALF_WIDTH, BAND_TOP, CAP_HALF_WIDTH, DEGENERATE_RHS,
    FORCING_KNOT_SPACING,
};
