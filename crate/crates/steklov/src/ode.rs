//! Explicit Runge-Kutta integration.
//!
//! Two modes are provided: an adaptive Dormand-Prince 5(4) pair with PI-style
//! step control (the workhorse for every initial value problem in this crate)
//! and a fixed-step classical RK4 used as a non-adaptive reference for
//! convergence-order checks and as an independent cross-check in tests.
//!
//! The integrator reports every accepted step to an observer together with
//! the state and derivative at both step endpoints, which is enough to build
//! Hermite dense output and to detect sign changes without extra function
//! evaluations (FSAL makes the derivative at the right endpoint free).

// Dormand-Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
// Difference between the 5th- and embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub(crate) struct AdaptiveOpts {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub h_init: Option<f64>,
    pub max_steps: usize,
}

impl Default for AdaptiveOpts {
    fn default() -> Self {
        AdaptiveOpts {
            rtol: 1e-10,
            atol: 1e-12,
            h_max: f64::INFINITY,
            h_init: None,
            max_steps: 2_000_000,
        }
    }
}

/// One accepted step, with derivatives at both endpoints.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StepRecord<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    pub dy0: [f64; N],
    pub dy1: [f64; N],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum StepControl {
    Continue,
    Halt,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Integration<const N: usize> {
    pub y_end: [f64; N],
    pub accepted: usize,
    pub halted: bool,
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum OdeError {
    /// The right-hand side evaluated non-finite at an accepted point.
    NonFiniteRhs { t: f64 },
    /// The controller could not meet the tolerance above the step floor.
    StepUnderflow { t: f64, h: f64 },
    /// Safety cap on the number of step attempts.
    MaxSteps { t: f64 },
}

fn axpys<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

fn finite<const N: usize>(y: &[f64; N]) -> bool {
    y.iter().all(|v| v.is_finite())
}

/// Integrate `dy/dt = rhs(t, y)` from `t0` to `t1` (forward only).
///
/// Every accepted step is passed to `observer`; returning `Halt` stops the
/// integration at the end of that step.
pub(crate) fn integrate_adaptive<const N: usize, F, O>(
    rhs: &F,
    t0: f64,
    t1: f64,
    y0: [f64; N],
    opts: &AdaptiveOpts,
    mut observer: O,
) -> Result<Integration<N>, OdeError>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    O: FnMut(&StepRecord<N>) -> StepControl,
{
    debug_assert!(t1 > t0);
    let span = t1 - t0;
    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    if !finite(&k1) {
        return Err(OdeError::NonFiniteRhs { t });
    }

    let mut h = opts
        .h_init
        .unwrap_or(span / 100.0)
        .min(opts.h_max)
        .min(span);
    let mut accepted = 0usize;
    let mut attempts = 0usize;

    loop {
        if t >= t1 {
            break;
        }
        attempts += 1;
        if attempts > opts.max_steps {
            return Err(OdeError::MaxSteps { t });
        }
        let h_floor = 1e-14 * t.abs().max(1.0);
        if h < h_floor || t + h == t {
            return Err(OdeError::StepUnderflow { t, h });
        }
        let clipped = h >= t1 - t;
        let hs = if clipped { t1 - t } else { h };

        let k2 = rhs(t + C2 * hs, &axpys(&y, hs, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * hs, &axpys(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(
            t + C4 * hs,
            &axpys(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = rhs(
            t + C5 * hs,
            &axpys(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            t + hs,
            &axpys(
                &y,
                hs,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y1 = axpys(
            &y,
            hs,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
        );
        let t_new = if clipped { t1 } else { t + hs };
        let k7 = rhs(t_new, &y1);

        // Scaled RMS norm of the embedded error estimate.
        let mut err_sq = 0.0;
        let mut ok = finite(&y1) && finite(&k7);
        if ok {
            for i in 0..N {
                let e = hs
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let scale = opts.atol + opts.rtol * y[i].abs().max(y1[i].abs());
                err_sq += (e / scale) * (e / scale);
            }
            ok = err_sq.is_finite();
        }
        let err = if ok {
            (err_sq / N as f64).sqrt()
        } else {
            f64::INFINITY
        };

        if err <= 1.0 {
            let record = StepRecord {
                t0: t,
                t1: t_new,
                y0: y,
                y1,
                dy0: k1,
                dy1: k7,
            };
            t = t_new;
            y = y1;
            k1 = k7;
            accepted += 1;
            let control = observer(&record);
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = (hs * factor).min(opts.h_max);
            if control == StepControl::Halt {
                return Ok(Integration {
                    y_end: y,
                    accepted,
                    halted: true,
                });
            }
        } else {
            let factor = (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            h = hs * factor;
        }
    }

    Ok(Integration {
        y_end: y,
        accepted,
        halted: false,
    })
}

/// Classical fixed-step RK4 over `steps` uniform steps.
///
/// No error control and no step rejection; the derivative at the right
/// endpoint of each step costs one extra evaluation.
pub(crate) fn integrate_rk4_fixed<const N: usize, F, O>(
    rhs: &F,
    t0: f64,
    t1: f64,
    y0: [f64; N],
    steps: usize,
    mut observer: O,
) -> Result<Integration<N>, OdeError>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    O: FnMut(&StepRecord<N>) -> StepControl,
{
    debug_assert!(t1 > t0 && steps > 0);
    let h = (t1 - t0) / steps as f64;
    let mut t = t0;
    let mut y = y0;
    let mut dy0 = rhs(t, &y);
    if !finite(&dy0) {
        return Err(OdeError::NonFiniteRhs { t });
    }
    let mut accepted = 0usize;
    for i in 0..steps {
        let k1 = dy0;
        let k2 = rhs(t + 0.5 * h, &axpys(&y, 0.5 * h, &[(1.0, &k1)]));
        let k3 = rhs(t + 0.5 * h, &axpys(&y, 0.5 * h, &[(1.0, &k2)]));
        let k4 = rhs(t + h, &axpys(&y, h, &[(1.0, &k3)]));
        let mut y1 = y;
        for j in 0..N {
            y1[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let t_new = if i + 1 == steps {
            t1
        } else {
            t0 + (i + 1) as f64 * h
        };
        let dy1 = rhs(t_new, &y1);
        if !finite(&y1) || !finite(&dy1) {
            return Err(OdeError::NonFiniteRhs { t: t_new });
        }
        let record = StepRecord {
            t0: t,
            t1: t_new,
            y0: y,
            y1,
            dy0,
            dy1,
        };
        t = t_new;
        y = y1;
        dy0 = dy1;
        accepted += 1;
        if observer(&record) == StepControl::Halt {
            return Ok(Integration {
                y_end: y,
                accepted,
                halted: true,
            });
        }
    }
    Ok(Integration {
        y_end: y,
        accepted,
        halted: false,
    })
}
