//! Radial curvature upper-bound profiles.
//!
//! A [`CurvatureProfile`] is a scalar function `k(t)` on `[0, t_max]` given
//! as an ordered list of pieces. Pieces may be constants, cosine-rational
//! expressions of the form `a cos(b + c t) / (d + e cos(b + c t))`, or
//! tabulated samples with linear interpolation. Interior piece boundaries
//! are the profile's breakpoints; smoothness may fail there, so downstream
//! integrators treat them as mandatory step endpoints.
//!
//! Profiles are loadable from a versioned TOML config:
//!
//! ```toml
//! schema_version = 1
//!
//! [[piece]]
//! t_from = 0.0
//! t_to = 1.5707963267948966
//! kind = "cosine_rational"
//! a = 4.0
//! b = 3.141592653589793
//! c = -2.0
//! d = 2.0
//! e = 1.0
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute slack allowed when checking that piece intervals chain up.
const COVER_TOL: f64 = 1e-12;
/// Tolerance for value agreement at shared breakpoints.
const CONTINUITY_TOL: f64 = 1e-9;

/// Functional form of a single profile piece.
#[derive(Debug, Clone, PartialEq)]
pub enum PieceKind {
    /// `k(t) = value`.
    Constant(f64),
    /// `k(t) = a cos(b + c t) / (d + e cos(b + c t))`.
    CosineRational {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
        e: f64,
    },
    /// Tabulated `(t, k)` samples, linearly interpolated.
    Table { ts: Vec<f64>, values: Vec<f64> },
}

/// One piece of a profile, valid on the closed interval `[t_from, t_to]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub t_from: f64,
    pub t_to: f64,
    pub kind: PieceKind,
}

impl Piece {
    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            PieceKind::Constant(v) => *v,
            PieceKind::CosineRational { a, b, c, d, e } => {
                let cv = (b + c * t).cos();
                a * cv / (d + e * cv)
            }
            PieceKind::Table { ts, values } => {
                if t <= ts[0] {
                    return values[0];
                }
                if t >= ts[ts.len() - 1] {
                    return values[values.len() - 1];
                }
                let i = ts.partition_point(|&x| x <= t) - 1;
                let w = (t - ts[i]) / (ts[i + 1] - ts[i]);
                values[i] + w * (values[i + 1] - values[i])
            }
        }
    }

    /// Location of a pole of this piece inside `[lo, hi]`, if any.
    fn pole_in(&self, lo: f64, hi: f64) -> Option<f64> {
        let PieceKind::CosineRational { b, c, d, e, .. } = self.kind else {
            return None;
        };
        if e == 0.0 {
            return (d == 0.0).then_some(lo);
        }
        let cos_pole = -d / e;
        if cos_pole.abs() > 1.0 {
            return None;
        }
        let theta_star = cos_pole.acos();
        let (theta_lo, theta_hi) = {
            let x = b + c * lo;
            let y = b + c * hi;
            (x.min(y), x.max(y))
        };
        const TAU: f64 = 2.0 * std::f64::consts::PI;
        for phi in [theta_star, -theta_star] {
            let n = ((theta_lo - phi) / TAU).ceil();
            let theta = phi + n * TAU;
            if theta <= theta_hi {
                let t = (theta - b) / c;
                return Some(t.clamp(lo, hi));
            }
        }
        None
    }
}

/// A piecewise curvature upper bound `k(t)` on `[0, t_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProfile {
    pieces: Vec<Piece>,
    breakpoints: Vec<f64>,
    t_max: f64,
}

impl CurvatureProfile {
    /// Single constant piece on `[0, t_max]`.
    pub fn constant(k0: f64, t_max: f64) -> Result<Self> {
        Self::new(vec![Piece {
            t_from: 0.0,
            t_to: t_max,
            kind: PieceKind::Constant(k0),
        }])
    }

    /// Build a profile from pieces, requiring values to agree at shared
    /// breakpoints (the profile is continuous, though possibly non-smooth).
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        let profile = Self::piecewise(pieces)?;
        for (i, &b) in profile.breakpoints.iter().enumerate() {
            let left = profile.pieces[i].eval(b);
            let right = profile.pieces[i + 1].eval(b);
            let scale = left.abs().max(right.abs()).max(1.0);
            if (left - right).abs() > CONTINUITY_TOL * scale {
                return Err(Error::InvalidProfile(format!(
                    "pieces disagree at breakpoint t = {b}: {left} vs {right}"
                )));
            }
        }
        Ok(profile)
    }

    /// Build a profile from pieces without the continuity requirement.
    ///
    /// Jump discontinuities at breakpoints are allowed; the warping solver
    /// only needs `k` integrable, and comparison experiments use
    /// piecewise-constant bounds.
    pub fn piecewise(mut pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidProfile("no pieces".into()));
        }
        pieces.sort_by(|a, b| a.t_from.total_cmp(&b.t_from));
        if pieces[0].t_from.abs() > COVER_TOL {
            return Err(Error::InvalidProfile(format!(
                "first piece starts at {} instead of 0",
                pieces[0].t_from
            )));
        }
        pieces[0].t_from = 0.0;
        for piece in &pieces {
            if !(piece.t_to > piece.t_from) {
                return Err(Error::InvalidProfile(format!(
                    "piece interval [{}, {}] is empty or reversed",
                    piece.t_from, piece.t_to
                )));
            }
            if let PieceKind::Table { ts, values } = &piece.kind {
                if ts.len() < 2 || ts.len() != values.len() {
                    return Err(Error::InvalidProfile(
                        "table piece needs matching ts/values with at least 2 samples".into(),
                    ));
                }
                if !ts.windows(2).all(|w| w[1] > w[0]) {
                    return Err(Error::InvalidProfile(
                        "table sample points must be strictly increasing".into(),
                    ));
                }
                if !values.iter().all(|v| v.is_finite()) {
                    return Err(Error::InvalidProfile("table values must be finite".into()));
                }
            }
        }
        for i in 1..pieces.len() {
            let gap = pieces[i].t_from - pieces[i - 1].t_to;
            if gap.abs() > COVER_TOL * pieces[i].t_from.abs().max(1.0) {
                return Err(Error::InvalidProfile(format!(
                    "pieces leave a gap or overlap near t = {}",
                    pieces[i].t_from
                )));
            }
            // Snap so intervals chain exactly.
            pieces[i].t_from = pieces[i - 1].t_to;
        }
        let t_max = pieces[pieces.len() - 1].t_to;
        let breakpoints = pieces[..pieces.len() - 1].iter().map(|p| p.t_to).collect();
        Ok(CurvatureProfile {
            pieces,
            breakpoints,
            t_max,
        })
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// Interior knots where smoothness may fail.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Evaluate `k(t)`. Arguments slightly outside `[0, t_max]` (roundoff
    /// from integrator stages) are clamped.
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.t_max);
        let i = self
            .pieces
            .partition_point(|p| p.t_to < t)
            .min(self.pieces.len() - 1);
        self.pieces[i].eval(t)
    }

    /// Scan for non-finite values on `[a, b]`; used by the ODE solver before
    /// integrating a segment. Poles of cosine-rational pieces are located
    /// analytically (a sampled check would see huge-but-finite values on
    /// either side of the pole and miss it).
    pub(crate) fn check_finite_on(&self, a: f64, b: f64) -> Result<()> {
        for piece in &self.pieces {
            let lo = piece.t_from.max(a);
            let hi = piece.t_to.min(b);
            if lo > hi {
                continue;
            }
            if let Some(t) = piece.pole_in(lo, hi) {
                return Err(Error::NonFiniteCurvature { t });
            }
        }
        const SAMPLES: usize = 129;
        for j in 0..=SAMPLES {
            let t = a + (b - a) * j as f64 / SAMPLES as f64;
            let v = self.eval(t);
            if !v.is_finite() {
                return Err(Error::NonFiniteCurvature { t });
            }
        }
        Ok(())
    }

    /// Parse the versioned TOML schema.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ProfileConfig = toml::from_str(text)
            .map_err(|e| Error::InvalidProfile(format!("TOML parse error: {e}")))?;
        config.into_profile()
    }

    /// Serialize to the versioned TOML schema.
    pub fn to_toml_string(&self) -> String {
        let config = ProfileConfig::from_profile(self);
        toml::to_string(&config).expect("profile config serializes")
    }
}

pub(crate) const PROFILE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct ProfileConfig {
    schema_version: u32,
    #[serde(rename = "piece")]
    pieces: Vec<PieceConfig>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PieceConfig {
    t_from: f64,
    t_to: f64,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    e: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ts: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    values: Option<Vec<f64>>,
}

impl ProfileConfig {
    fn into_profile(self) -> Result<CurvatureProfile> {
        if self.schema_version != PROFILE_SCHEMA_VERSION {
            return Err(Error::InvalidProfile(format!(
                "unsupported schema_version {} (expected {})",
                self.schema_version, PROFILE_SCHEMA_VERSION
            )));
        }
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for p in self.pieces {
            let kind = match p.kind.as_str() {
                "constant" => {
                    PieceKind::Constant(p.value.ok_or_else(|| {
                        Error::InvalidProfile("constant piece needs `value`".into())
                    })?)
                }
                "cosine_rational" => {
                    let need = |x: Option<f64>, name: &str| {
                        x.ok_or_else(|| {
                            Error::InvalidProfile(format!("cosine_rational piece needs `{name}`"))
                        })
                    };
                    PieceKind::CosineRational {
                        a: need(p.a, "a")?,
                        b: need(p.b, "b")?,
                        c: need(p.c, "c")?,
                        d: need(p.d, "d")?,
                        e: need(p.e, "e")?,
                    }
                }
                "expression-table" => PieceKind::Table {
                    ts: p.ts.ok_or_else(|| {
                        Error::InvalidProfile("expression-table piece needs `ts`".into())
                    })?,
                    values: p.values.ok_or_else(|| {
                        Error::InvalidProfile("expression-table piece needs `values`".into())
                    })?,
                },
                other => {
                    return Err(Error::InvalidProfile(format!(
                        "unknown piece kind `{other}`"
                    )))
                }
            };
            pieces.push(Piece {
                t_from: p.t_from,
                t_to: p.t_to,
                kind,
            });
        }
        CurvatureProfile::new(pieces)
    }

    fn from_profile(profile: &CurvatureProfile) -> Self {
        let pieces = profile
            .pieces
            .iter()
            .map(|p| {
                let mut config = PieceConfig {
                    t_from: p.t_from,
                    t_to: p.t_to,
                    kind: String::new(),
                    value: None,
                    a: None,
                    b: None,
                    c: None,
                    d: None,
                    e: None,
                    ts: None,
                    values: None,
                };
                match &p.kind {
                    PieceKind::Constant(v) => {
                        config.kind = "constant".into();
                        config.value = Some(*v);
                    }
                    PieceKind::CosineRational { a, b, c, d, e } => {
                        config.kind = "cosine_rational".into();
                        config.a = Some(*a);
                        config.b = Some(*b);
                        config.c = Some(*c);
                        config.d = Some(*d);
                        config.e = Some(*e);
                    }
                    PieceKind::Table { ts, values } => {
                        config.kind = "expression-table".into();
                        config.ts = Some(ts.clone());
                        config.values = Some(values.clone());
                    }
                }
                config
            })
            .collect();
        ProfileConfig {
            schema_version: PROFILE_SCHEMA_VERSION,
            pieces,
        }
    }
}
