//! Surfaces of revolution and the ring-torus worked example.
//!
//! A surface of revolution is generated by rotating a profile curve
//! `(rho(v), y(v))` (with `rho > 0`) about the axis; in the parameters
//! `(u, v)` its metric is `E(v) du^2 + G(v) dv^2` with `E = rho^2` and
//! `G = rho'^2 + y'^2`, and the Gaussian curvature is
//!
//! ```text
//! K = y' (rho' y'' - rho'' y') / (rho (rho'^2 + y'^2)^2).
//! ```
//!
//! The ring torus with tube radius `eps` (profile `rho = 1 + eps cos v`,
//! `y = eps sin v`) reduces this to `K = cos v / (eps (1 + eps cos v))`.
//!
//! At `eps = 1/2` three distinguished base points have closed-form sharp
//! radial curvature upper bounds on geodesic balls of radius `< pi/2`:
//!
//! * outer equator (`v = 0`): the constant `4/3`, the global maximum of `K`
//!   (the outer equator is a geodesic, so every geodesic circle touches it);
//! * inner equator (`v = pi`): `4 cos(pi - 2t) / (2 + cos(pi - 2t))` — the
//!   meridian moves `v` fastest (`|dv| = 2 ds`), so the circle of radius `t`
//!   maximizes `K` at its meridian points;
//! * generic point (`v = alpha`): the inner-equator formula shifted to
//!   `alpha`, switching to the constant `4/3` at the breakpoint `t = alpha/2`
//!   where the circle first reaches the outer equator.
//!
//! The best *constant* bound over `[0, r)` is the profile's value at `r`
//! (the profiles are non-decreasing), with the space-form trichotomy
//! spherical/flat/hyperbolic attached to its sign.
//!
//! [`geodesic_circle_max_curvature`] validates all of this numerically: it
//! shoots geodesics in a fan of directions, evaluates `K` at the endpoints,
//! and refines around the argmax. The Clairaut constant `E(v) u'` is
//! monitored along every geodesic as an integration-accuracy proxy.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::ode::{self, AdaptiveOpts, OdeError, StepControl};
use crate::profile::{CurvatureProfile, Piece, PieceKind};

/// Tube radius fixed by the worked example; the case profiles are only exact
/// closed forms at this value.
pub const CASE_EPSILON: f64 = 0.5;
/// Upper limit of the safe ball radius on the torus (stays inside the cut
/// locus of the base point).
pub const TORUS_T_MAX: f64 = PI / 2.0;

/// Generating curve `(rho(v), y(v))` of a surface of revolution, with two
/// derivatives.
pub trait ProfileCurve: Send + Sync {
    fn rho(&self, v: f64) -> f64;
    fn rho_d1(&self, v: f64) -> f64;
    fn rho_d2(&self, v: f64) -> f64;
    fn height(&self, v: f64) -> f64;
    fn height_d1(&self, v: f64) -> f64;
    fn height_d2(&self, v: f64) -> f64;
}

/// Ring torus: circle of radius `epsilon` centered at distance 1 from the
/// rotation axis.
#[derive(Debug, Clone, Copy)]
pub struct RingTorus {
    pub epsilon: f64,
}

impl ProfileCurve for RingTorus {
    fn rho(&self, v: f64) -> f64 {
        1.0 + self.epsilon * v.cos()
    }
    fn rho_d1(&self, v: f64) -> f64 {
        -self.epsilon * v.sin()
    }
    fn rho_d2(&self, v: f64) -> f64 {
        -self.epsilon * v.cos()
    }
    fn height(&self, v: f64) -> f64 {
        self.epsilon * v.sin()
    }
    fn height_d1(&self, v: f64) -> f64 {
        self.epsilon * v.cos()
    }
    fn height_d2(&self, v: f64) -> f64 {
        -self.epsilon * v.sin()
    }
}

/// A surface of revolution with its parameter chart.
pub struct SurfaceOfRevolution {
    curve: Box<dyn ProfileCurve>,
    v_min: f64,
    v_max: f64,
    v_periodic: bool,
}

impl SurfaceOfRevolution {
    /// Ring torus with tube radius `epsilon in (0, 1)`.
    pub fn ring_torus(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "torus tube radius must be in (0, 1), got {epsilon}"
            )));
        }
        Ok(SurfaceOfRevolution {
            curve: Box::new(RingTorus { epsilon }),
            v_min: 0.0,
            v_max: 2.0 * PI,
            v_periodic: true,
        })
    }

    /// General surface from a profile curve. `v_periodic` marks charts that
    /// wrap around (geodesics never escape those).
    pub fn from_curve(
        curve: Box<dyn ProfileCurve>,
        v_range: (f64, f64),
        v_periodic: bool,
    ) -> Result<Self> {
        if !(v_range.1 > v_range.0) {
            return Err(Error::InvalidParameter("empty v range".into()));
        }
        let surface = SurfaceOfRevolution {
            curve,
            v_min: v_range.0,
            v_max: v_range.1,
            v_periodic,
        };
        for j in 0..=64 {
            let v = surface.v_min + (surface.v_max - surface.v_min) * j as f64 / 64.0;
            if !(surface.curve.rho(v) > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "profile curve is not an immersion: rho({v}) <= 0"
                )));
            }
        }
        Ok(surface)
    }

    pub fn v_range(&self) -> (f64, f64) {
        (self.v_min, self.v_max)
    }

    /// Gaussian curvature at parallel `v`, from the profile-curve formula.
    pub fn gauss_curvature(&self, v: f64) -> f64 {
        let c = &self.curve;
        let (dr, ddr) = (c.rho_d1(v), c.rho_d2(v));
        let (dy, ddy) = (c.height_d1(v), c.height_d2(v));
        let w2 = dr * dr + dy * dy;
        dy * (dr * ddy - ddr * dy) / (c.rho(v) * w2 * w2)
    }

    fn metric_e(&self, v: f64) -> f64 {
        let rho = self.curve.rho(v);
        rho * rho
    }

    fn metric_g(&self, v: f64) -> f64 {
        let dr = self.curve.rho_d1(v);
        let dy = self.curve.height_d1(v);
        dr * dr + dy * dy
    }

    fn metric_e_d1(&self, v: f64) -> f64 {
        2.0 * self.curve.rho(v) * self.curve.rho_d1(v)
    }

    fn metric_g_d1(&self, v: f64) -> f64 {
        2.0 * (self.curve.rho_d1(v) * self.curve.rho_d2(v)
            + self.curve.height_d1(v) * self.curve.height_d2(v))
    }
}

/// Distinguished base point on a surface of revolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasePoint {
    pub u0: f64,
    pub v0: f64,
    pub label: BaseLabel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseLabel {
    /// Farthest parallel from the axis (`v = 0` on the torus).
    OuterEquator,
    /// Nearest parallel to the axis (`v = pi` on the torus).
    InnerEquator,
    /// Point at tube angle `alpha in (0, pi)`.
    Generic { alpha: f64 },
}

impl BasePoint {
    pub fn outer_equator() -> Self {
        BasePoint {
            u0: 0.0,
            v0: 0.0,
            label: BaseLabel::OuterEquator,
        }
    }

    pub fn inner_equator() -> Self {
        BasePoint {
            u0: 0.0,
            v0: PI,
            label: BaseLabel::InnerEquator,
        }
    }

    pub fn generic(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < PI) {
            return Err(Error::InvalidParameter(format!(
                "tube angle alpha must lie in (0, pi), got {alpha}"
            )));
        }
        Ok(BasePoint {
            u0: 0.0,
            v0: alpha,
            label: BaseLabel::Generic { alpha },
        })
    }
}

/// Base-point selector for the torus case profiles; indices 1, 2, 3 name the
/// outer equator, inner equator, and the generic point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TorusCase {
    OuterEquator,
    InnerEquator,
    Generic { alpha: f64 },
}

impl TorusCase {
    pub fn from_index(index: u8, alpha: Option<f64>) -> Result<Self> {
        match index {
            1 => Ok(TorusCase::OuterEquator),
            2 => Ok(TorusCase::InnerEquator),
            3 => {
                let alpha = alpha
                    .ok_or_else(|| Error::InvalidParameter("case 3 requires --alpha".into()))?;
                BasePoint::generic(alpha)?;
                Ok(TorusCase::Generic { alpha })
            }
            other => Err(Error::InvalidParameter(format!(
                "case must be 1, 2 or 3, got {other}"
            ))),
        }
    }

    pub fn base_point(&self) -> BasePoint {
        match self {
            TorusCase::OuterEquator => BasePoint::outer_equator(),
            TorusCase::InnerEquator => BasePoint::inner_equator(),
            TorusCase::Generic { alpha } => BasePoint::generic(*alpha).expect("validated"),
        }
    }
}

/// Sharp radial curvature upper bound on `[0, pi/2]` for geodesic balls of
/// the `eps = 1/2` torus centered at the case's base point.
pub fn case_profile(case: TorusCase) -> Result<CurvatureProfile> {
    let four_thirds = 4.0 / 3.0;
    match case {
        TorusCase::OuterEquator => CurvatureProfile::constant(four_thirds, TORUS_T_MAX),
        TorusCase::InnerEquator => CurvatureProfile::new(vec![Piece {
            t_from: 0.0,
            t_to: TORUS_T_MAX,
            kind: PieceKind::CosineRational {
                a: 4.0,
                b: PI,
                c: -2.0,
                d: 2.0,
                e: 1.0,
            },
        }]),
        TorusCase::Generic { alpha } => {
            if !(alpha > 0.0 && alpha < PI) {
                return Err(Error::InvalidParameter(format!(
                    "tube angle alpha must lie in (0, pi), got {alpha}"
                )));
            }
            CurvatureProfile::new(vec![
                Piece {
                    t_from: 0.0,
                    t_to: alpha / 2.0,
                    kind: PieceKind::CosineRational {
                        a: 4.0,
                        b: alpha,
                        c: -2.0,
                        d: 2.0,
                        e: 1.0,
                    },
                },
                Piece {
                    t_from: alpha / 2.0,
                    t_to: TORUS_T_MAX,
                    kind: PieceKind::Constant(four_thirds),
                },
            ])
        }
    }
}

/// Sign class of a constant curvature bound: the comparison model is a
/// sphere, the plane, or hyperbolic space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvatureClass {
    Spherical,
    Flat,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy)]
pub struct ConstantBound {
    pub k0: f64,
    pub class: CurvatureClass,
}

/// Best constant curvature upper bound over the ball of radius `r`: the
/// supremum of the case profile on `[0, r)`, which by monotonicity is its
/// value at `r`.
pub fn best_constant_bound(case: TorusCase, r: f64) -> Result<ConstantBound> {
    if !(r > 0.0 && r < TORUS_T_MAX) {
        return Err(Error::InvalidParameter(format!(
            "radius must lie in (0, pi/2), got {r}"
        )));
    }
    let k0 = case_profile(case)?.eval(r);
    let class = if k0 > 1e-12 {
        CurvatureClass::Spherical
    } else if k0 < -1e-12 {
        CurvatureClass::Hyperbolic
    } else {
        CurvatureClass::Flat
    };
    Ok(ConstantBound { k0, class })
}

/// Result of scanning a geodesic circle for the maximal Gaussian curvature.
#[derive(Debug, Clone, Copy)]
pub struct CircleScan {
    /// Maximum of `K` over the endpoints of the geodesic fan.
    pub max_curvature: f64,
    /// Direction angle (from the meridian) achieving the maximum.
    pub argmax_direction: f64,
    /// Worst Clairaut-constant drift over all integrated geodesics,
    /// relative to `max(|C|, 1)`.
    pub max_clairaut_drift: f64,
}

struct GeodesicEnd {
    v: f64,
    drift: f64,
}

/// Shoot a unit-speed geodesic from `p` with initial angle `theta` measured
/// from the meridian direction, to arc length `t`.
fn shoot(s: &SurfaceOfRevolution, p: &BasePoint, theta: f64, t: f64) -> Result<GeodesicEnd> {
    let e0 = s.metric_e(p.v0);
    let g0 = s.metric_g(p.v0);
    let y0 = [p.u0, p.v0, theta.sin() / e0.sqrt(), theta.cos() / g0.sqrt()];
    let clairaut0 = e0 * y0[2];
    let rhs = |_t: f64, y: &[f64; 4]| {
        let v = y[1];
        let e = s.metric_e(v);
        let g = s.metric_g(v);
        let de = s.metric_e_d1(v);
        let dg = s.metric_g_d1(v);
        [
            y[2],
            y[3],
            -(de / e) * y[2] * y[3],
            (de * y[2] * y[2] - dg * y[3] * y[3]) / (2.0 * g),
        ]
    };
    let mut drift: f64 = 0.0;
    let mut escaped: Option<(f64, f64)> = None;
    let opts = AdaptiveOpts {
        rtol: 1e-11,
        atol: 1e-13,
        h_max: 0.05,
        ..Default::default()
    };
    let out = ode::integrate_adaptive(&rhs, 0.0, t, y0, &opts, |rec| {
        let c = s.metric_e(rec.y1[1]) * rec.y1[2];
        drift = drift.max((c - clairaut0).abs() / clairaut0.abs().max(1.0));
        if !s.v_periodic && (rec.y1[1] < s.v_min || rec.y1[1] > s.v_max) {
            escaped = Some((rec.y1[0], rec.y1[1]));
            StepControl::Halt
        } else {
            StepControl::Continue
        }
    })
    .map_err(|e| match e {
        OdeError::NonFiniteRhs { t } | OdeError::StepUnderflow { t, .. } => {
            Error::ToleranceUnachievable { t, h: 0.0 }
        }
        OdeError::MaxSteps { t } => Error::ToleranceUnachievable { t, h: 0.0 },
    })?;
    if let Some((u, v)) = escaped {
        return Err(Error::GeodesicEscape { u, v });
    }
    Ok(GeodesicEnd {
        v: out.y_end[1],
        drift,
    })
}

/// Maximum Gaussian curvature over the geodesic circle of radius `t` around
/// `p`, from a fan of `directions` geodesics refined near the argmax by
/// golden-section search until the curvature change drops below `tol`.
pub fn geodesic_circle_max_curvature(
    s: &SurfaceOfRevolution,
    p: &BasePoint,
    t: f64,
    directions: usize,
    tol: f64,
) -> Result<CircleScan> {
    if directions < 16 {
        return Err(Error::InvalidParameter(
            "at least 16 fan directions required".into(),
        ));
    }
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "circle radius must be positive, got {t}"
        )));
    }
    let mut drift: f64 = 0.0;
    let mut curvature_at = |theta: f64| -> Result<f64> {
        let end = shoot(s, p, theta, t)?;
        drift = drift.max(end.drift);
        Ok(s.gauss_curvature(end.v))
    };

    let mut best = (0usize, f64::NEG_INFINITY);
    let mut values = Vec::with_capacity(directions);
    for i in 0..directions {
        let theta = 2.0 * PI * i as f64 / directions as f64;
        let k = curvature_at(theta)?;
        values.push(k);
        if k > best.1 {
            best = (i, k);
        }
    }

    // Golden-section refinement on the bracket around the coarse argmax.
    let spacing = 2.0 * PI / directions as f64;
    let center = 2.0 * PI * best.0 as f64 / directions as f64;
    let mut a = center - spacing;
    let mut b = center + spacing;
    let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = curvature_at(x1)?;
    let mut f2 = curvature_at(x2)?;
    let mut max_curvature = best.1.max(f1).max(f2);
    let mut argmax = if f1 > f2 { x1 } else { x2 };
    for _ in 0..80 {
        if (f1 - f2).abs() < tol && (b - a) < spacing * 1e-3 {
            break;
        }
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = curvature_at(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = curvature_at(x2)?;
        }
        if f1 > max_curvature {
            max_curvature = f1;
            argmax = x1;
        }
        if f2 > max_curvature {
            max_curvature = f2;
            argmax = x2;
        }
    }

    Ok(CircleScan {
        max_curvature,
        argmax_direction: argmax.rem_euclid(2.0 * PI),
        max_clairaut_drift: drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn torus() -> SurfaceOfRevolution {
        SurfaceOfRevolution::ring_torus(CASE_EPSILON).unwrap()
    }

    #[test]
    fn gauss_curvature_closed_form_values() {
        let s = torus();
        assert_relative_eq!(s.gauss_curvature(0.0), 4.0 / 3.0, epsilon = 1e-14);
        assert!(s.gauss_curvature(PI / 2.0).abs() < 1e-14);
        assert_relative_eq!(s.gauss_curvature(PI), -4.0, epsilon = 1e-12);
        // General formula against cos v / (eps (1 + eps cos v)).
        for eps in [0.3, 0.5, 0.8] {
            let s = SurfaceOfRevolution::ring_torus(eps).unwrap();
            for j in 0..12 {
                let v = 2.0 * PI * j as f64 / 12.0;
                let expected = v.cos() / (eps * (1.0 + eps * v.cos()));
                assert_relative_eq!(s.gauss_curvature(v), expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn case_profiles_match_hand_values() {
        let p2 = case_profile(TorusCase::InnerEquator).unwrap();
        assert_relative_eq!(p2.eval(0.0), -4.0, epsilon = 1e-14);
        assert_relative_eq!(p2.eval(PI / 2.0), 4.0 / 3.0, epsilon = 1e-14);

        let p3 = case_profile(TorusCase::Generic { alpha: PI / 2.0 }).unwrap();
        assert_eq!(p3.eval(0.9), 4.0 / 3.0); // past the breakpoint alpha/2
        assert_eq!(p3.breakpoints(), &[PI / 4.0]);
        // Continuous at the breakpoint.
        assert_relative_eq!(p3.eval(PI / 4.0), 4.0 / 3.0, epsilon = 1e-14);

        let p1 = case_profile(TorusCase::OuterEquator).unwrap();
        assert_eq!(p1.eval(0.5), 4.0 / 3.0);
    }

    #[test]
    fn constant_bound_trichotomy() {
        let b = best_constant_bound(TorusCase::InnerEquator, PI / 4.0).unwrap();
        assert!(b.k0.abs() < 1e-12);
        assert_eq!(b.class, CurvatureClass::Flat);

        let b = best_constant_bound(TorusCase::InnerEquator, PI / 3.0).unwrap();
        assert_relative_eq!(b.k0, 0.8, epsilon = 1e-14);
        assert_eq!(b.class, CurvatureClass::Spherical);

        let b = best_constant_bound(TorusCase::InnerEquator, 0.1).unwrap();
        assert!(b.k0 < 0.0);
        assert_eq!(b.class, CurvatureClass::Hyperbolic);
    }

    #[test]
    fn constant_bound_equals_profile_at_radius() {
        // Cross-check the -2 + cos 2r closed form via cos(pi - 2r) = -cos 2r.
        let profile = case_profile(TorusCase::InnerEquator).unwrap();
        for j in 1..30 {
            let r = TORUS_T_MAX * j as f64 / 30.0;
            let b = best_constant_bound(TorusCase::InnerEquator, r).unwrap();
            assert_relative_eq!(b.k0, profile.eval(r), epsilon = 1e-14);
            let closed = 4.0 * (2.0 * r).cos() / (-2.0 + (2.0 * r).cos());
            assert_relative_eq!(b.k0, closed, epsilon = 1e-12);
        }
    }

    #[test]
    fn meridian_geodesic_from_inner_equator_doubles_arc_length_in_v() {
        let s = torus();
        let p = BasePoint::inner_equator();
        let end = shoot(&s, &p, 0.0, 0.3).unwrap();
        // dv/ds = 1/eps = 2 along the meridian.
        assert_relative_eq!(end.v, PI + 0.6, epsilon = 1e-9);
        assert!(end.drift < 1e-10);
    }

    #[test]
    fn outer_equator_is_a_geodesic() {
        let s = torus();
        let p = BasePoint::outer_equator();
        // theta = pi/2: start along the parallel; it must stay at v = 0.
        let end = shoot(&s, &p, PI / 2.0, 1.0).unwrap();
        assert!(end.v.abs() < 1e-9);
    }

    #[test]
    fn inner_circle_max_matches_meridian_value() {
        let s = torus();
        let p = BasePoint::inner_equator();
        let profile = case_profile(TorusCase::InnerEquator).unwrap();
        for t in [0.3, 0.6] {
            let scan = geodesic_circle_max_curvature(&s, &p, t, 32, 1e-9).unwrap();
            assert!(
                (scan.max_curvature - profile.eval(t)).abs() < 1e-3,
                "max {} vs profile {} at t = {t}",
                scan.max_curvature,
                profile.eval(t)
            );
            assert!(scan.max_clairaut_drift <= 1e-8);
        }
    }

    #[test]
    fn small_radius_limit_recovers_base_point_curvature() {
        let s = torus();
        let p = BasePoint::generic(2.0).unwrap();
        let scan = geodesic_circle_max_curvature(&s, &p, 1e-4, 16, 1e-10).unwrap();
        assert_relative_eq!(
            scan.max_curvature,
            s.gauss_curvature(2.0),
            max_relative = 1e-3
        );
    }

    #[test]
    fn outer_circle_stays_below_global_max() {
        let s = torus();
        let p = BasePoint::outer_equator();
        let scan = geodesic_circle_max_curvature(&s, &p, 0.5, 32, 1e-9).unwrap();
        assert!(scan.max_curvature <= 4.0 / 3.0 + 1e-6);
        // The equator itself is part of the circle's reach, so the max is
        // attained.
        assert_relative_eq!(scan.max_curvature, 4.0 / 3.0, epsilon = 1e-6);
    }

    #[test]
    fn case_bounds_dominate_circle_maxima() {
        let s = torus();
        for (case, p) in [
            (TorusCase::OuterEquator, BasePoint::outer_equator()),
            (TorusCase::InnerEquator, BasePoint::inner_equator()),
            (
                TorusCase::Generic { alpha: 1.0 },
                BasePoint::generic(1.0).unwrap(),
            ),
        ] {
            let profile = case_profile(case).unwrap();
            for t in [0.2, 0.7, 1.2] {
                let scan = geodesic_circle_max_curvature(&s, &p, t, 32, 1e-8).unwrap();
                assert!(
                    scan.max_curvature <= profile.eval(t) + 1e-3,
                    "case {case:?}: circle max {} exceeds bound {} at t = {t}",
                    scan.max_curvature,
                    profile.eval(t)
                );
            }
        }
    }

    #[test]
    fn non_periodic_chart_reports_escape() {
        // Half of the torus tube as a bounded chart.
        let surface = SurfaceOfRevolution::from_curve(
            Box::new(RingTorus { epsilon: 0.5 }),
            (PI / 2.0, 3.0 * PI / 2.0),
            false,
        )
        .unwrap();
        let p = BasePoint::inner_equator();
        // The meridian exits the chart after arc length (pi/2)/2 < 1.
        let err = shoot(&surface, &p, 0.0, 1.0);
        assert!(matches!(err, Err(Error::GeodesicEscape { .. })));
    }

    #[test]
    fn invalid_cases_are_rejected() {
        assert!(TorusCase::from_index(4, None).is_err());
        assert!(TorusCase::from_index(3, None).is_err());
        assert!(TorusCase::from_index(3, Some(4.0)).is_err());
        assert!(SurfaceOfRevolution::ring_torus(1.5).is_err());
        assert!(best_constant_bound(TorusCase::InnerEquator, 2.0).is_err());
    }
}
