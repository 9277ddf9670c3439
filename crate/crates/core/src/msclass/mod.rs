//! Periodic curves of split maps and the uniform period-bound constants.

pub mod constants;
pub mod curves;

pub use constants::{bound_c, bound_c1, closed_form_c2, ConstantExpr, Expr};
pub use curves::{
    curve_image, curve_period, ms_diagonal_curves, projection_profile, search_periodic_graph_curves,
    DiagonalCurve, PeriodCertificate, ProjectionProfile,
};
