//! Bounds for the first non-zero Wentzell eigenvalue of the weighted
//! Laplacian.
//!
//! On a compact weighted manifold of dimension `n + 1` whose boundary has
//! second fundamental form at least `c > 0`, weighted mean curvature at least
//! `(K-1)c/n`, and non-negative Bakry-Emery Ricci curvature (dimension
//! parameter `K`), the first non-zero eigenvalue of the Wentzell problem
//! `-beta lap_boundary u + du/dnu = tau u` satisfies
//!
//! ```text
//! upper:  tau1 <= beta l1c + sqrt(l1c) (sqrt(l1c) + sqrt(l1c - (K-1)c^2)) / ((K-1)c)
//! lower:  tau1 >  c/2 [1 + (K-1)c beta + sqrt((K-1)c^2 beta^2 + 2 (K-1)c beta)]
//! ```
//!
//! where `l1c` is the first non-zero closed eigenvalue of the weighted
//! Laplacian on the boundary, itself bounded below by `(K-1)c^2`; the upper
//! bound is attained exactly by the Euclidean ball of radius `1/c` (constant
//! weight, `K = n+1`). This module is a faithful formula layer: `l1c` is an
//! input, not computed from a manifold.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameter tuple for the bound formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WentzellSetting {
    /// Boundary dimension (the ambient manifold has dimension `n + 1`).
    pub n: u32,
    /// First non-zero closed eigenvalue of the weighted boundary Laplacian.
    pub lambda1c: f64,
    /// Lower bound on the principal curvatures of the boundary.
    pub c: f64,
    /// Bakry-Emery dimension parameter; `K > n+1`, or `K = n+1` with
    /// constant weight.
    pub k: f64,
    /// Boundary-diffusion coefficient.
    pub beta: f64,
}

impl WentzellSetting {
    pub fn new(n: u32, lambda1c: f64, c: f64, k: f64, beta: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter(format!(
                "boundary dimension must be >= 1, got {n}"
            )));
        }
        if !(c > 0.0) {
            return Err(Error::InvalidParameter(format!("c must be > 0, got {c}")));
        }
        if !(beta >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beta must be >= 0, got {beta}"
            )));
        }
        if !(lambda1c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda1c must be > 0, got {lambda1c}"
            )));
        }
        if !(k >= (n + 1) as f64) {
            return Err(Error::InvalidParameter(format!(
                "K must be at least n + 1 = {}, got {k}",
                n + 1
            )));
        }
        Ok(WentzellSetting {
            n,
            lambda1c,
            c,
            k,
            beta,
        })
    }
}

/// A one-sided eigenvalue bound; `strict` records whether the inequality is
/// strict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundEstimate {
    pub value: f64,
    pub strict: bool,
}

/// Upper bound
/// `beta l1c + sqrt(l1c) (sqrt(l1c) + sqrt(l1c - (K-1)c^2)) / ((K-1)c)`.
///
/// Requires `lambda1c >= (K-1)c^2` (automatic under the geometric
/// hypotheses, enforced here as a precondition on the radicand).
pub fn upper_bound(s: &WentzellSetting) -> Result<BoundEstimate> {
    let km1c2 = (s.k - 1.0) * s.c * s.c;
    let radicand = s.lambda1c - km1c2;
    if radicand < 0.0 {
        return Err(Error::InvalidRadicand {
            lambda1c: s.lambda1c,
            threshold: km1c2,
        });
    }
    let sqrt_l = s.lambda1c.sqrt();
    let value = s.beta * s.lambda1c + sqrt_l * (sqrt_l + radicand.sqrt()) / ((s.k - 1.0) * s.c);
    Ok(BoundEstimate {
        value,
        strict: false,
    })
}

/// Strict lower bound
/// `c/2 [1 + (K-1)c beta + sqrt((K-1)c^2 beta^2 + 2 (K-1)c beta)]`,
/// reducing to `c/2` at `beta = 0`.
pub fn lower_bound(s: &WentzellSetting) -> BoundEstimate {
    let km1 = s.k - 1.0;
    let radicand = km1 * s.c * s.c * s.beta * s.beta + 2.0 * km1 * s.c * s.beta;
    let value = 0.5 * s.c * (1.0 + km1 * s.c * s.beta + radicand.sqrt());
    BoundEstimate {
        value,
        strict: true,
    }
}

/// Floor `(K-1)c^2` for the first non-zero closed eigenvalue of the weighted
/// boundary Laplacian.
///
/// Equality holds exactly for the boundary of a Euclidean ball of radius
/// `1/c` with constant weight and `K = n+1`.
pub fn lambda1c_floor(c: f64, k: f64) -> Result<BoundEstimate> {
    if !(c > 0.0) {
        return Err(Error::InvalidParameter(format!("c must be > 0, got {c}")));
    }
    if !(k > 1.0) {
        return Err(Error::InvalidParameter(format!("K must be > 1, got {k}")));
    }
    Ok(BoundEstimate {
        value: (k - 1.0) * c * c,
        strict: false,
    })
}

/// Joint evaluation of both bounds.
#[derive(Debug, Clone, Copy)]
pub struct ConsistencyReport {
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
    /// The sandwich is consistent: `gap > 0`.
    pub valid: bool,
    /// `lambda1c = (K-1)c^2` with `beta = 0`: the bounds collapse to the
    /// extreme sandwich `c/2 < tau1 <= c`.
    pub degenerate_sandwich: bool,
}

pub fn consistency_report(s: &WentzellSetting) -> Result<ConsistencyReport> {
    let upper = upper_bound(s)?.value;
    let lower = lower_bound(s).value;
    let gap = upper - lower;
    let km1c2 = (s.k - 1.0) * s.c * s.c;
    let degenerate_sandwich = s.beta == 0.0 && (s.lambda1c - km1c2).abs() <= 1e-12 * km1c2.max(1.0);
    Ok(ConsistencyReport {
        lower,
        upper,
        gap,
        valid: gap > 0.0,
        degenerate_sandwich,
    })
}

/// Input row of the batch CSV interface; header names are fixed.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SettingRow {
    pub n: u32,
    pub lambda1c: f64,
    pub c: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub beta: f64,
}

/// Output row of the batch interface: the inputs plus both bounds. Rows whose
/// upper bound is undefined keep `valid = false` with empty bound fields.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundRow {
    pub n: u32,
    pub lambda1c: f64,
    pub c: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub beta: f64,
    pub lower: f64,
    pub upper: Option<f64>,
    pub gap: Option<f64>,
    pub valid: bool,
}

/// Evaluate one batch row. `Err` is reserved for invalid settings; a valid
/// setting that merely violates the radicand precondition yields a flagged
/// row.
pub fn evaluate_row(row: &SettingRow) -> Result<BoundRow> {
    let setting = WentzellSetting::new(row.n, row.lambda1c, row.c, row.k, row.beta)?;
    let lower = lower_bound(&setting).value;
    match upper_bound(&setting) {
        Ok(upper) => Ok(BoundRow {
            n: row.n,
            lambda1c: row.lambda1c,
            c: row.c,
            k: row.k,
            beta: row.beta,
            lower,
            upper: Some(upper.value),
            gap: Some(upper.value - lower),
            valid: upper.value - lower > 0.0,
        }),
        Err(Error::InvalidRadicand { .. }) => Ok(BoundRow {
            n: row.n,
            lambda1c: row.lambda1c,
            c: row.c,
            k: row.k,
            beta: row.beta,
            lower,
            upper: None,
            gap: None,
            valid: false,
        }),
        Err(e) => Err(e),
    }
}
