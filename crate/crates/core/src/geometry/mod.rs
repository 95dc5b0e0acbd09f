//! Parabolic balls, coverings of `V × [0, T]`, the absorption lemma checker,
//! reflection across `xₙ = 0` and difference quotients.

mod ball;
mod covering;
mod quotient;
mod reflection;
mod simon;
mod subadditivity;

pub use ball::{HalfSpaces, ParabolicBall, Truncation};
pub use covering::{build_covering, BoundaryMode, BoxDomain, Covering, CoveringAudit, Piece, TIME_LAYERS_MIN};
pub use quotient::{difference_quotient, difference_quotient_at, integral_representation_gap, quotient_integral};
pub use reflection::{
    boundary_residuals, jump_report, manufactured_solution, reflect_extend, reflection_map, EllipticCoefficients, JumpRow, Reflected,
    INTERP_POINTS, SYMMETRY_TOL,
};
pub use simon::{
    audit_cover_ball, cover_ball, covering_number, simon_absorption_check, simon_constants, CoverNumberAudit,
    SetFunctionAudit, SimonConfig, SimonConstants, SimonReport, SimonVerdict,
};
pub use subadditivity::{cover_subadditivity_check, SubadditivityReport};

/// `ball_contains` of the interface: dimension-checked membership.
pub fn ball_contains(ball: &ParabolicBall, x: &[f64], t: f64) -> crate::Result<bool> {
    ball.contains(x, t)
}
