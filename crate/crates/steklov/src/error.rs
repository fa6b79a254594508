//! Error types shared by all solver and geometry modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The curvature profile evaluated to a non-finite value inside the
    /// integration range.
    #[error("curvature profile is non-finite at t = {t}")]
    NonFiniteCurvature { t: f64 },

    /// The adaptive step controller shrank the step below the floor without
    /// meeting the local error tolerance.
    #[error("step size underflow at t = {t} (h = {h:.3e}); tolerance unachievable")]
    ToleranceUnachievable { t: f64, h: f64 },

    /// A warping function vanishes strictly before the requested radius, so
    /// quantities at that radius are not defined.
    #[error("warping function vanishes at t = {zero} before the radius r = {r}")]
    ZeroBeforeR { zero: f64, r: f64 },

    /// The offset used to start the radial integration away from the
    /// coordinate singularity at the origin is not usable.
    #[error("origin start offset t0 = {t0:.3e} is not inside (0, r = {r})")]
    OriginSingularity { t0: f64, r: f64 },

    /// The regular radial solution came out non-positive, which signals a
    /// solver failure rather than genuine geometry.
    #[error("radial solution psi became non-positive at t = {t}")]
    PsiVanished { t: f64 },

    /// The upper-bound formula requires lambda1c >= (K-1) c^2.
    #[error("invalid radicand: lambda1c = {lambda1c} is below (K-1)c^2 = {threshold}")]
    InvalidRadicand { lambda1c: f64, threshold: f64 },

    /// A geodesic left the coordinate chart of the surface and cannot be
    /// continued.
    #[error("geodesic left the parameter chart at (u, v) = ({u}, {v})")]
    GeodesicEscape { u: f64, v: f64 },

    /// Every sampled test function had vanishing Dirichlet energy.
    #[error("all sampled test functions were degenerate (energy below 1e-14)")]
    DegenerateTestFunction,

    /// A curvature-profile definition violates the schema or its invariants.
    #[error("invalid curvature profile: {0}")]
    InvalidProfile(String),

    /// A caller-supplied parameter is outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
