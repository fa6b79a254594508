//! Steklov eigenvalues of geodesic balls in rotationally symmetric model
//! manifolds.
//!
//! The Steklov problem on a compact domain asks for harmonic functions whose
//! normal derivative on the boundary is proportional to their boundary trace;
//! the proportionality constants form the spectrum of the
//! Dirichlet-to-Neumann map. For geodesic balls in model manifolds
//! `[0, l) x_f S^{n-1}` the problem reduces to a one-dimensional radial ODE,
//! which makes the first non-zero eigenvalue computable to high accuracy from
//! nothing but a radial curvature upper bound.
//!
//! The crate is organized around that pipeline:
//!
//! * [`profile`] — piecewise curvature bounds `k(t)`, loadable from a
//!   versioned TOML schema;
//! * [`warping`] — the warping IVP `f'' + k f = 0`, its closed space-form
//!   solutions, first-zero detection, and Sturm-Picone comparisons;
//! * [`model`] — model geodesic balls: the first non-zero Steklov eigenvalue
//!   via the radial log-derivative, boundary sphere eigenvalues, volumes and
//!   boundary areas, and comparison reports against constant-curvature
//!   reference models;
//! * [`trace`] — a randomized check of the Sobolev trace inequality
//!   `∫_∂Ω |u - u₀|² ≤ v₁⁻¹ ∫_Ω |∇u|²` on model balls;
//! * [`wentzell`] — closed-form bounds for the first non-zero eigenvalue of
//!   the Wentzell problem of the weighted Laplacian;
//! * [`torus`] — a ring-torus playground: Gaussian curvature, sharp radial
//!   curvature bounds at distinguished base points, and a numerical
//!   max-curvature extractor along geodesic circles that validates them.

// Validation guards are written `!(x > 0.0)` so NaN fails them; the
// suggested rewrite `x <= 0.0` lets NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Published quadrature abscissae and frozen reference values keep their full
// printed precision.
#![allow(clippy::excessive_precision)]

pub mod error;
pub mod model;
pub mod profile;
pub mod torus;
pub mod trace;
pub mod warping;
pub mod wentzell;

mod ode;
mod quadrature;

pub use error::{Error, Result};
pub use model::{
    ball_volume_and_area, boundary_lambda1c, comparison_report, steklov_mode_logderivative,
    steklov_mode_solution, steklov_v1, unit_sphere_measure, CompareReport, ModelBall,
    SteklovRecord, SteklovResult,
};
pub use profile::{CurvatureProfile, Piece, PieceKind};
pub use torus::{
    best_constant_bound, case_profile, geodesic_circle_max_curvature, BasePoint, CurvatureClass,
    SurfaceOfRevolution, TorusCase,
};
pub use trace::{trace_inequality_check, trace_ratio, TraceMode, TraceReport};
pub use warping::{
    solve_warping, solve_warping_fixed, space_form_warping, sturm_picone_compare,
    ComparisonVerdict, SolutionOrdering, WarpingFunction,
};
pub use wentzell::{
    consistency_report, lambda1c_floor, lower_bound, upper_bound, BoundEstimate, ConsistencyReport,
    WentzellSetting,
};

#[cfg(test)]
mod thread_safety {
    use super::*;

    fn assert_send_sync<T: Send + Sync>() {}

    /// All domain types are immutable after construction and shareable
    /// across threads; parameter sweeps need no coordination.
    #[test]
    fn domain_types_are_send_and_sync() {
        assert_send_sync::<CurvatureProfile>();
        assert_send_sync::<WarpingFunction>();
        assert_send_sync::<ModelBall>();
        assert_send_sync::<SteklovResult>();
        assert_send_sync::<WentzellSetting>();
        assert_send_sync::<SurfaceOfRevolution>();
        assert_send_sync::<BasePoint>();
    }
}
