//! Warping functions of rotationally symmetric model manifolds.
//!
//! A model manifold is the warped product `[0, l) x_f S^{n-1}` with metric
//! `dt^2 + f(t)^2 |dxi|^2`, where the warping function `f` solves the initial
//! value problem
//!
//! ```text
//! f''(t) + k(t) f(t) = 0,    f(0) = 0,  f'(0) = 1,
//! ```
//!
//! with `k` a radial curvature upper bound. The first zero `l` of `f` (when
//! it exists) bounds the model's validity: every geometric quantity downstream
//! requires `f > 0`.
//!
//! For constant curvature the solution is a space form,
//!
//! ```text
//! k > 0:  f(t) = sin(sqrt(k) t)/sqrt(k),   l = pi/sqrt(k)
//! k = 0:  f(t) = t
//! k < 0:  f(t) = sinh(sqrt(-k) t)/sqrt(-k)
//! ```
//!
//! and [`space_form_warping`] exposes these closed forms through the same
//! sampled-plus-interpolant interface as numerical solutions, so every
//! consumer has one code path.
//!
//! Numerical solutions are produced by an adaptive Dormand-Prince 5(4)
//! integrator. Profile breakpoints are treated as hard step boundaries so the
//! order of the scheme does not degrade across non-smooth points, and the
//! accepted steps double as nodes of a piecewise quintic Hermite interpolant
//! built from `(f, f', f'' = -k f)` at each node. Pointwise ordering of
//! curvature bounds translates into the reverse ordering of warping functions
//! (Sturm-Picone); [`sturm_picone_compare`] reports that comparison at a
//! chosen radius.

use crate::error::{Error, Result};
use crate::ode::{self, AdaptiveOpts, OdeError, StepControl, StepRecord};
use crate::profile::CurvatureProfile;

/// Hard cap on the integrator step; keeps the quintic dense output well
/// inside the tolerances of every downstream consumer.
const WARP_H_MAX: f64 = 0.01;
/// Absolute tolerance for first-zero refinement.
const ZERO_REFINE_TOL: f64 = 1e-12;
/// Node count for the sampled representation of closed forms.
const SPACE_FORM_NODES: usize = 257;

/// Piecewise quintic Hermite data: value, first and second derivative at
/// strictly increasing nodes.
#[derive(Debug, Clone)]
struct HermiteGrid {
    ts: Vec<f64>,
    f: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
}

/// Quintic Hermite basis: value, first and second derivative in the local
/// coordinate `s` on `[0, 1]`.
fn hermite5(s: f64) -> [[f64; 6]; 3] {
    let s2 = s * s;
    let s3 = s2 * s;
    let s4 = s3 * s;
    let s5 = s4 * s;
    let value = [
        1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5,
        s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5,
        0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5),
        10.0 * s3 - 15.0 * s4 + 6.0 * s5,
        -4.0 * s3 + 7.0 * s4 - 3.0 * s5,
        0.5 * (s3 - 2.0 * s4 + s5),
    ];
    let d1 = [
        -30.0 * s2 + 60.0 * s3 - 30.0 * s4,
        1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4,
        s - 4.5 * s2 + 6.0 * s3 - 2.5 * s4,
        30.0 * s2 - 60.0 * s3 + 30.0 * s4,
        -12.0 * s2 + 28.0 * s3 - 15.0 * s4,
        1.5 * s2 - 4.0 * s3 + 2.5 * s4,
    ];
    let d2 = [
        -60.0 * s + 180.0 * s2 - 120.0 * s3,
        -36.0 * s + 96.0 * s2 - 60.0 * s3,
        1.0 - 9.0 * s + 18.0 * s2 - 10.0 * s3,
        60.0 * s - 180.0 * s2 + 120.0 * s3,
        -24.0 * s + 84.0 * s2 - 60.0 * s3,
        3.0 * s - 12.0 * s2 + 10.0 * s3,
    ];
    [value, d1, d2]
}

impl HermiteGrid {
    fn interval(&self, t: f64) -> usize {
        let n = self.ts.len();
        self.ts.partition_point(|&x| x <= t).clamp(1, n - 1) - 1
    }

    fn eval(&self, t: f64, order: usize) -> f64 {
        let i = self.interval(t);
        let h = self.ts[i + 1] - self.ts[i];
        let s = (t - self.ts[i]) / h;
        let basis = hermite5(s);
        let b = &basis[order];
        let data = [
            self.f[i],
            self.d1[i] * h,
            self.d2[i] * h * h,
            self.f[i + 1],
            self.d1[i + 1] * h,
            self.d2[i + 1] * h * h,
        ];
        let mut acc = 0.0;
        for j in 0..6 {
            acc += b[j] * data[j];
        }
        acc / h.powi(order as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum WarpingSource {
    Numeric,
    SpaceForm { k0: f64 },
}

/// Warping function `f` with its derivative, sampled on a grid and densely
/// evaluable through a quintic Hermite interpolant (closed forms evaluate
/// analytically).
#[derive(Debug, Clone)]
pub struct WarpingFunction {
    grid: HermiteGrid,
    first_zero: Option<f64>,
    source: WarpingSource,
}

impl WarpingFunction {
    /// Grid nodes `t_0 = 0 < ... <= t_end`.
    pub fn grid(&self) -> &[f64] {
        &self.grid.ts
    }

    pub fn f_values(&self) -> &[f64] {
        &self.grid.f
    }

    pub fn fprime_values(&self) -> &[f64] {
        &self.grid.d1
    }

    /// First zero of `f` in `(0, t_end]`, refined to the root tolerance.
    pub fn first_zero(&self) -> Option<f64> {
        self.first_zero
    }

    /// Last grid node (the end of the evaluable domain).
    pub fn t_end(&self) -> f64 {
        *self.grid.ts.last().expect("non-empty grid")
    }

    /// Polynomial order of the dense interpolant.
    pub fn interpolation_order(&self) -> usize {
        5
    }

    pub fn value(&self, t: f64) -> f64 {
        debug_assert!(t >= -1e-12 && t <= self.t_end() * (1.0 + 1e-9) + 1e-12);
        match self.source {
            WarpingSource::SpaceForm { k0 } => space_form_value(k0, t),
            WarpingSource::Numeric => self.grid.eval(t, 0),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self.source {
            WarpingSource::SpaceForm { k0 } => space_form_derivative(k0, t),
            WarpingSource::Numeric => self.grid.eval(t, 1),
        }
    }

    pub fn second_derivative(&self, t: f64) -> f64 {
        match self.source {
            WarpingSource::SpaceForm { k0 } => -k0 * space_form_value(k0, t),
            WarpingSource::Numeric => self.grid.eval(t, 2),
        }
    }

    /// True when `f` is positive on `(0, r]`: no recorded zero at or before
    /// `r`, and every grid node in `(0, r]` is positive.
    pub fn positive_through(&self, r: f64) -> bool {
        if let Some(z) = self.first_zero {
            if z <= r {
                return false;
            }
        }
        self.grid
            .ts
            .iter()
            .zip(&self.grid.f)
            .all(|(&t, &f)| t <= 0.0 || t > r || f > 0.0)
    }
}

fn space_form_value(k0: f64, t: f64) -> f64 {
    if k0 > 0.0 {
        let s = k0.sqrt();
        (s * t).sin() / s
    } else if k0 < 0.0 {
        let s = (-k0).sqrt();
        (s * t).sinh() / s
    } else {
        t
    }
}

fn space_form_derivative(k0: f64, t: f64) -> f64 {
    if k0 > 0.0 {
        (k0.sqrt() * t).cos()
    } else if k0 < 0.0 {
        ((-k0).sqrt() * t).cosh()
    } else {
        1.0
    }
}

/// Closed-form warping function of the space form with constant curvature
/// `k0`, represented on `[0, t_max]` (truncated shortly past the first zero
/// `pi/sqrt(k0)` when `k0 > 0` brings it inside the range).
pub fn space_form_warping(k0: f64, t_max: f64) -> Result<WarpingFunction> {
    if !k0.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "space form curvature must be finite, got {k0}"
        )));
    }
    if !(t_max > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    let zero = if k0 > 0.0 {
        let l = std::f64::consts::PI / k0.sqrt();
        (l <= t_max).then_some(l)
    } else {
        None
    };
    // One stretch of grid past the zero keeps the sign change observable.
    let t_cap = match zero {
        Some(l) => t_max.min(1.01 * l),
        None => t_max,
    };
    let n = SPACE_FORM_NODES;
    let mut ts = Vec::with_capacity(n);
    let mut f = Vec::with_capacity(n);
    let mut d1 = Vec::with_capacity(n);
    let mut d2 = Vec::with_capacity(n);
    for j in 0..n {
        let t = t_cap * j as f64 / (n - 1) as f64;
        let v = space_form_value(k0, t);
        ts.push(t);
        f.push(v);
        d1.push(space_form_derivative(k0, t));
        d2.push(-k0 * v);
    }
    Ok(WarpingFunction {
        grid: HermiteGrid { ts, f, d1, d2 },
        first_zero: zero,
        source: WarpingSource::SpaceForm { k0 },
    })
}

fn map_ode_error(e: OdeError) -> Error {
    match e {
        OdeError::NonFiniteRhs { t } => Error::NonFiniteCurvature { t },
        OdeError::StepUnderflow { t, h } => Error::ToleranceUnachievable { t, h },
        OdeError::MaxSteps { t } => Error::ToleranceUnachievable { t, h: 0.0 },
    }
}

/// Integration segments: `[0, t_max]` split at interior profile breakpoints.
fn segments(k: &CurvatureProfile, t_max: f64) -> Vec<(f64, f64)> {
    let mut bounds = vec![0.0];
    for &b in k.breakpoints() {
        if b > 1e-15 && b < t_max * (1.0 - 1e-15) {
            bounds.push(b);
        }
    }
    bounds.push(t_max);
    bounds.windows(2).map(|w| (w[0], w[1])).collect()
}

/// First step small enough that `|f(h)/h - 1| = |k(0)| h^2 / 6` stays well
/// under ten times the requested tolerance.
fn initial_step(k0_abs: f64, tol: f64, seg_len: f64) -> f64 {
    (0.25 * (60.0 * tol / k0_abs.max(1e-12)).sqrt())
        .min(1e-5)
        .min(0.5 * seg_len)
}

struct NodeCollector {
    ts: Vec<f64>,
    f: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
    crossing: Option<StepRecord<2>>,
}

impl NodeCollector {
    fn push_step(&mut self, rec: &StepRecord<2>) -> StepControl {
        self.ts.push(rec.t1);
        self.f.push(rec.y1[0]);
        self.d1.push(rec.y1[1]);
        self.d2.push(rec.dy1[1]);
        if rec.y1[0] <= 0.0 {
            self.crossing = Some(*rec);
            StepControl::Halt
        } else {
            StepControl::Continue
        }
    }
}

/// Refine the zero location inside the crossing step with Brent's method on
/// the local quintic Hermite interpolant.
fn refine_zero(rec: &StepRecord<2>) -> f64 {
    if rec.y1[0] == 0.0 {
        return rec.t1;
    }
    let h = rec.t1 - rec.t0;
    let local = HermiteGrid {
        ts: vec![rec.t0, rec.t1],
        f: vec![rec.y0[0], rec.y1[0]],
        d1: vec![rec.y0[1], rec.y1[1]],
        d2: vec![rec.dy0[1], rec.dy1[1]],
    };
    debug_assert!(h > 0.0 && rec.y0[0] > 0.0);
    brent_root(|t| local.eval(t, 0), rec.t0, rec.t1, ZERO_REFINE_TOL)
}

fn validate_solve_inputs(k: &CurvatureProfile, t_max: f64, tol: f64) -> Result<()> {
    if !(t_max > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    if !(tol > 1e-14 && tol < 1e-2) {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol} outside (1e-14, 1e-2)"
        )));
    }
    if k.t_max() < t_max * (1.0 - 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "profile defined on [0, {}] but integration to {t_max} requested",
            k.t_max()
        )));
    }
    Ok(())
}

/// Solve the warping IVP `f'' + k f = 0`, `f(0) = 0`, `f'(0) = 1` up to
/// `t_max`, truncating one step past the first zero of `f` if one occurs.
///
/// `tol` is the relative tolerance of the adaptive integrator; the absolute
/// tolerance is `tol / 100`. Profile breakpoints are step boundaries.
pub fn solve_warping(k: &CurvatureProfile, t_max: f64, tol: f64) -> Result<WarpingFunction> {
    validate_solve_inputs(k, t_max, tol)?;
    let segs = segments(k, t_max);
    for &(a, b) in &segs {
        k.check_finite_on(a, b)?;
    }

    let mut collector = NodeCollector {
        ts: vec![0.0],
        f: vec![0.0],
        d1: vec![1.0],
        d2: vec![0.0],
        crossing: None,
    };
    let rhs = |t: f64, y: &[f64; 2]| [y[1], -k.eval(t) * y[0]];
    let mut y = [0.0, 1.0];
    let first_h = initial_step(k.eval(0.0).abs(), tol, segs[0].1 - segs[0].0);
    for (i, &(a, b)) in segs.iter().enumerate() {
        let opts = AdaptiveOpts {
            rtol: tol,
            atol: tol * 1e-2,
            h_max: WARP_H_MAX,
            h_init: if i == 0 { Some(first_h) } else { None },
            ..Default::default()
        };
        let out = ode::integrate_adaptive(&rhs, a, b, y, &opts, |rec| collector.push_step(rec))
            .map_err(map_ode_error)?;
        y = out.y_end;
        if out.halted {
            break;
        }
    }

    let first_zero = collector.crossing.as_ref().map(refine_zero);
    Ok(WarpingFunction {
        grid: HermiteGrid {
            ts: collector.ts,
            f: collector.f,
            d1: collector.d1,
            d2: collector.d2,
        },
        first_zero,
        source: WarpingSource::Numeric,
    })
}

/// Non-adaptive reference mode: classical RK4 with `steps` uniform steps
/// (distributed proportionally over breakpoint segments). Used for
/// convergence-order diagnostics; no step-size control is applied.
pub fn solve_warping_fixed(
    k: &CurvatureProfile,
    t_max: f64,
    steps: usize,
) -> Result<WarpingFunction> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be positive".into()));
    }
    validate_solve_inputs(k, t_max, 1e-10)?;
    let segs = segments(k, t_max);
    for &(a, b) in &segs {
        k.check_finite_on(a, b)?;
    }
    let mut collector = NodeCollector {
        ts: vec![0.0],
        f: vec![0.0],
        d1: vec![1.0],
        d2: vec![0.0],
        crossing: None,
    };
    let rhs = |t: f64, y: &[f64; 2]| [y[1], -k.eval(t) * y[0]];
    let mut y = [0.0, 1.0];
    for &(a, b) in &segs {
        let n = ((steps as f64) * (b - a) / t_max).ceil().max(1.0) as usize;
        let out = ode::integrate_rk4_fixed(&rhs, a, b, y, n, |rec| collector.push_step(rec))
            .map_err(map_ode_error)?;
        y = out.y_end;
        if out.halted {
            break;
        }
    }
    let first_zero = collector.crossing.as_ref().map(refine_zero);
    Ok(WarpingFunction {
        grid: HermiteGrid {
            ts: collector.ts,
            f: collector.f,
            d1: collector.d1,
            d2: collector.d2,
        },
        first_zero,
        source: WarpingSource::Numeric,
    })
}

/// Relative ordering of two warping functions at the comparison radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionOrdering {
    FirstLarger,
    Equal,
    SecondLarger,
}

/// Result of comparing the warping solutions of two curvature bounds at `r`.
#[derive(Debug, Clone, Copy)]
pub struct ComparisonVerdict {
    pub f1_at_r: f64,
    pub f2_at_r: f64,
    /// `f1(r) - f2(r)`.
    pub margin: f64,
    pub ordering: SolutionOrdering,
}

/// Solve both warping problems and compare `f1(r)` with `f2(r)`.
///
/// When `k1 <= k2` pointwise on `(0, r)` the Sturm-Picone comparison theorem
/// forces `f1(r) >= f2(r)`; this function reports the measured ordering and
/// margin. Errors with [`Error::ZeroBeforeR`] if either solution vanishes
/// strictly inside `(0, r)`.
pub fn sturm_picone_compare(
    k1: &CurvatureProfile,
    k2: &CurvatureProfile,
    r: f64,
    tol: f64,
) -> Result<ComparisonVerdict> {
    let w1 = solve_warping(k1, r, tol)?;
    let w2 = solve_warping(k2, r, tol)?;
    for w in [&w1, &w2] {
        if let Some(z) = w.first_zero() {
            if z < r - 1e-12 * r.max(1.0) {
                return Err(Error::ZeroBeforeR { zero: z, r });
            }
        }
    }
    let f1 = w1.value(r.min(w1.t_end()));
    let f2 = w2.value(r.min(w2.t_end()));
    let margin = f1 - f2;
    let eq_tol = 1e-10 * f1.abs().max(f2.abs()).max(1.0);
    let ordering = if margin.abs() <= eq_tol {
        SolutionOrdering::Equal
    } else if margin > 0.0 {
        SolutionOrdering::FirstLarger
    } else {
        SolutionOrdering::SecondLarger
    };
    Ok(ComparisonVerdict {
        f1_at_r: f1,
        f2_at_r: f2,
        margin,
        ordering,
    })
}

/// Brent's method for a bracketed root of `f` on `[a, b]`.
pub(crate) fn brent_root<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    debug_assert!(fa * fb <= 0.0, "root not bracketed");
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return b;
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * q0 * (q0 - r) - (b - a) * (r - 1.0));
                q = (q0 - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
    }
    b
}
