//! Randomized verification of the Sobolev trace inequality on model balls.
//!
//! The variational characterization of the first non-zero Steklov eigenvalue
//! gives, for every `u` in `W^{1,2}` with boundary mean `u0`,
//!
//! ```text
//! int_{boundary} |u - u0|^2  <=  (1/v1) int_{ball} |grad u|^2.
//! ```
//!
//! Test functions are separable, `u = sum_l R_l(t) Y_l(xi)`, built from a
//! small smooth dictionary: radial polynomials `t^j` (`1 <= j <= 4`) times
//! one representative spherical harmonic per degree `l <= 2`. Orthogonality
//! of the harmonics reduces both sides to radial integrals against the
//! `f^{n-1}` density,
//!
//! ```text
//! energy    = sum_l |Y_l|^2 int_0^r (R_l'^2 + lambda_l R_l^2 / f^2) f^{n-1}
//! variance  = sum_{l>=1} |Y_l|^2 R_l(r)^2 f^{n-1}(r),
//! ```
//!
//! with `lambda_l = l (l + n - 2)` and closed-form norms for the
//! representatives `1`, `xi_1`, `xi_1 xi_2`. The angular reduction is exact;
//! only the radial factors are quadrature.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{steklov_v1, unit_sphere_measure, ModelBall, DEFAULT_MODE_CAP};
use crate::quadrature;

/// Trials with Dirichlet energy below this are discarded as degenerate.
const ENERGY_FLOOR: f64 = 1e-14;
/// Highest radial exponent in the dictionary.
const MAX_RADIAL_POWER: usize = 4;

/// One separable term: a radial polynomial attached to the representative
/// harmonic of `degree`.
#[derive(Debug, Clone, Copy)]
pub struct TraceMode {
    /// Spherical-harmonic degree, `0..=2`.
    pub degree: u32,
    /// Coefficients of `t^1 .. t^4`.
    pub radial_coeffs: [f64; MAX_RADIAL_POWER],
}

/// Squared L2 norm of the representative harmonic of `degree` on the unit
/// `(n-1)`-sphere: `1`, `xi_1`, or `xi_1 xi_2`.
fn harmonic_norm_sq(n: u32, degree: u32) -> f64 {
    let omega = unit_sphere_measure(n);
    let nf = n as f64;
    match degree {
        0 => omega,
        1 => omega / nf,
        2 => omega / (nf * (nf + 2.0)),
        _ => unreachable!("dictionary holds degrees 0..=2"),
    }
}

fn radial_poly(coeffs: &[f64; MAX_RADIAL_POWER], t: f64) -> f64 {
    let mut acc = 0.0;
    for j in (0..MAX_RADIAL_POWER).rev() {
        acc = (acc + coeffs[j]) * t;
    }
    acc
}

fn radial_poly_derivative(coeffs: &[f64; MAX_RADIAL_POWER], t: f64) -> f64 {
    let mut acc = 0.0;
    for j in (0..MAX_RADIAL_POWER).rev() {
        acc = acc * t + (j + 1) as f64 * coeffs[j];
    }
    acc
}

/// Ratio `v1 * boundary variance / Dirichlet energy` of the test function
/// described by `modes`; `None` when the energy is degenerate.
pub fn trace_ratio(ball: &ModelBall, modes: &[TraceMode], v1: f64) -> Result<Option<f64>> {
    let n = ball.dimension();
    let r = ball.radius();
    let w = ball.warping();
    let density_power = (n - 1) as i32;

    let mut energy = 0.0;
    let mut variance = 0.0;
    for mode in modes {
        if mode.degree > 2 {
            return Err(Error::InvalidParameter(
                "dictionary harmonics have degree at most 2".into(),
            ));
        }
        let norm_sq = harmonic_norm_sq(n, mode.degree);
        let lambda = (mode.degree * (mode.degree + n - 2)) as f64;
        let coeffs = mode.radial_coeffs;
        let integrand = move |t: f64| {
            let f = w.value(t);
            let rho = radial_poly(&coeffs, t);
            let drho = radial_poly_derivative(&coeffs, t);
            (drho * drho + lambda * rho * rho / (f * f)) * f.powi(density_power)
        };
        let q = quadrature::integrate(&integrand, 0.0, r, 1e-10, 1e-14);
        energy += norm_sq * q.value;
        if mode.degree >= 1 {
            let boundary_f = ball.f_at_r().powi(density_power);
            let rho_r = radial_poly(&mode.radial_coeffs, r);
            variance += norm_sq * rho_r * rho_r * boundary_f;
        }
    }
    if energy < ENERGY_FLOOR {
        return Ok(None);
    }
    Ok(Some(v1 * variance / energy))
}

/// Outcome of a randomized trace-inequality check.
#[derive(Debug, Clone, Copy)]
pub struct TraceReport {
    /// Largest observed `v1 * variance / energy` over all kept trials.
    pub max_ratio: f64,
    /// True when `max_ratio <= 1 + 1e-6`.
    pub pass: bool,
    pub trials: usize,
    pub discarded: usize,
}

/// Sample `num_trials` random dictionary functions (coefficients uniform in
/// `[-1, 1]`, ChaCha8 stream seeded with `seed`) and report the worst ratio.
///
/// Degenerate trials (energy below `1e-14`) are discarded, not fatal; the
/// check errors only if every trial degenerates.
pub fn trace_inequality_check(
    ball: &ModelBall,
    num_trials: usize,
    seed: u64,
) -> Result<TraceReport> {
    if num_trials < 1 {
        return Err(Error::InvalidParameter("num_trials must be >= 1".into()));
    }
    let v1 = steklov_v1(ball, DEFAULT_MODE_CAP, 1e-10)?.v1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_ratio = f64::NEG_INFINITY;
    let mut discarded = 0usize;
    for _ in 0..num_trials {
        let modes: Vec<TraceMode> = (0..=2)
            .map(|degree| TraceMode {
                degree,
                radial_coeffs: std::array::from_fn(|_| rng.random_range(-1.0..1.0)),
            })
            .collect();
        match trace_ratio(ball, &modes, v1)? {
            Some(ratio) => max_ratio = max_ratio.max(ratio),
            None => discarded += 1,
        }
    }
    if discarded == num_trials {
        return Err(Error::DegenerateTestFunction);
    }
    Ok(TraceReport {
        max_ratio,
        pass: max_ratio <= 1.0 + 1e-6,
        trials: num_trials,
        discarded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warping::space_form_warping;
    use approx::assert_relative_eq;

    fn euclidean_disk() -> ModelBall {
        ModelBall::new(2, 1.0, space_form_warping(0.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn linear_coordinate_function_is_extremal_on_the_disk() {
        // u = t * xi_1 is the first Steklov eigenfunction of the unit disk.
        let ball = euclidean_disk();
        let mode = TraceMode {
            degree: 1,
            radial_coeffs: [1.0, 0.0, 0.0, 0.0],
        };
        let ratio = trace_ratio(&ball, &[mode], 1.0).unwrap().unwrap();
        assert_relative_eq!(ratio, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn degenerate_function_is_discarded() {
        let ball = euclidean_disk();
        let mode = TraceMode {
            degree: 0,
            radial_coeffs: [0.0; 4],
        };
        assert!(trace_ratio(&ball, &[mode], 1.0).unwrap().is_none());
    }

    #[test]
    fn seeded_runs_pass_on_sphere_cap() {
        let cap = ModelBall::new(2, 1.0, space_form_warping(1.0, 1.5).unwrap()).unwrap();
        let report = trace_inequality_check(&cap, 200, 42).unwrap();
        assert!(report.pass, "max ratio {}", report.max_ratio);
        assert!(report.max_ratio <= 1.0 + 1e-6);
        assert_eq!(report.trials, 200);
    }

    #[test]
    fn identical_seeds_reproduce_identical_reports() {
        let ball = euclidean_disk();
        let a = trace_inequality_check(&ball, 50, 7).unwrap();
        let b = trace_inequality_check(&ball, 50, 7).unwrap();
        assert_eq!(a.max_ratio, b.max_ratio);
    }
}
