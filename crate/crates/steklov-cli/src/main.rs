//! Command-line front end for the `steklov` crate.
//!
//! Four subcommands cover the library's surface:
//!
//! * `warp` — solve the warping IVP for a curvature bound and emit the
//!   sampled `(t, f, f')` table plus the first zero, if any;
//! * `steklov` — first non-zero Steklov eigenvalue of a model geodesic ball,
//!   optionally compared against a constant-curvature reference bound;
//! * `torus` — the ring-torus comparison table over a radius grid: variable
//!   bound vs. best constant bound, with margins;
//! * `wentzell` — Wentzell eigenvalue bounds, single setting or batch CSV.
//!
//! Exit codes: 0 success, 2 configuration error, 3 solver failure,
//! 4 geometry violation (radius at or past the first zero, geodesic chart
//! escape), 5 bound-validity failure. Diagnostics go to stderr; results to
//! stdout or `--output`. Identical invocations produce byte-identical
//! output. `STEKLOV_TOL` overrides the default solver tolerance of 1e-10.

// `!(stop >= start)` rejects NaN grid bounds; `stop < start` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use steklov::model::DEFAULT_MODE_CAP;
use steklov::torus::TORUS_T_MAX;
use steklov::wentzell::{evaluate_row, BoundRow, SettingRow};
use steklov::{
    best_constant_bound, case_profile, comparison_report, solve_warping, steklov_v1,
    CurvatureProfile, Error, ModelBall, SteklovRecord, TorusCase, WarpingFunction,
};

const DEFAULT_TOL: f64 = 1e-10;
const TOL_ENV_VAR: &str = "STEKLOV_TOL";

#[derive(Parser)]
#[command(
    name = "steklov",
    version,
    about = "Steklov eigenvalues of model geodesic balls, curvature comparisons, Wentzell bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the warping equation f'' + k f = 0 and print (t, f, f') samples.
    Warp {
        #[command(flatten)]
        source: ProfileSource,
        /// Integration horizon.
        #[arg(long)]
        tmax: f64,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// First non-zero Steklov eigenvalue of a model geodesic ball.
    Steklov {
        #[command(flatten)]
        source: ProfileSource,
        /// Ambient dimension (>= 2).
        #[arg(long)]
        n: u32,
        /// Ball radius.
        #[arg(long)]
        r: f64,
        /// Cap for the angular mode sweep in dimensions >= 3.
        #[arg(long, default_value_t = DEFAULT_MODE_CAP)]
        max_mode: u32,
        /// Also compute the eigenvalue for this constant curvature bound and
        /// report the margin.
        #[arg(long)]
        reference_constant: Option<f64>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Ring-torus comparison table: variable bound vs best constant bound.
    Torus {
        /// Base point: 1 outer equator, 2 inner equator, 3 generic angle.
        #[arg(long)]
        case: u8,
        /// Tube angle for case 3, in (0, pi).
        #[arg(long)]
        alpha: Option<f64>,
        /// Model dimension.
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// Comma-separated radii (overrides --r-grid).
        #[arg(long)]
        rs: Option<String>,
        /// Radius grid start:stop:count.
        #[arg(long, default_value = "0.05:1.5:20")]
        r_grid: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Wentzell eigenvalue bounds for the weighted Laplacian.
    Wentzell {
        /// Boundary dimension.
        #[arg(long)]
        n: Option<u32>,
        /// First non-zero closed eigenvalue of the boundary Laplacian.
        #[arg(long)]
        lambda1c: Option<f64>,
        /// Principal curvature lower bound.
        #[arg(long)]
        c: Option<f64>,
        /// Bakry-Emery dimension parameter.
        #[arg(long = "K")]
        k: Option<f64>,
        /// Boundary diffusion coefficient.
        #[arg(long)]
        beta: Option<f64>,
        /// Batch CSV with header n,lambda1c,c,K,beta.
        #[arg(long, conflicts_with_all = ["n", "lambda1c", "c", "k", "beta"])]
        batch: Option<PathBuf>,
        #[command(flatten)]
        out: OutputOpts,
    },
}

#[derive(Args)]
struct ProfileSource {
    /// Constant curvature bound.
    #[arg(long)]
    constant: Option<f64>,
    /// Curvature profile config (TOML).
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Torus case profile: 1, 2 or 3.
    #[arg(long)]
    case: Option<u8>,
    /// Tube angle for case 3.
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args)]
struct OutputOpts {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Solver tolerance override (default 1e-10, or STEKLOV_TOL).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    PlotData,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidProfile(_) | Error::InvalidParameter(_) => 2,
            Error::NonFiniteCurvature { .. }
            | Error::ToleranceUnachievable { .. }
            | Error::OriginSingularity { .. }
            | Error::PsiVanished { .. }
            | Error::DegenerateTestFunction => 3,
            Error::ZeroBeforeR { .. } | Error::GeodesicEscape { .. } => 4,
            Error::InvalidRadicand { .. } => 5,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl ProfileSource {
    /// Build the curvature profile, defined at least on `[0, needed_t_max]`.
    fn load(&self, needed_t_max: f64) -> Result<CurvatureProfile, Failure> {
        let given = [
            self.constant.is_some(),
            self.profile.is_some(),
            self.case.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count();
        if given != 1 {
            return Err(Failure::config(
                "exactly one of --constant, --profile, --case must be given",
            ));
        }
        if let Some(k0) = self.constant {
            return Ok(CurvatureProfile::constant(k0, needed_t_max)?);
        }
        if let Some(path) = &self.profile {
            let text = fs::read_to_string(path).map_err(|e| {
                Failure::config(format!("cannot read profile {}: {e}", path.display()))
            })?;
            let profile = CurvatureProfile::from_toml_str(&text)?;
            if profile.t_max() < needed_t_max * (1.0 - 1e-12) {
                return Err(Failure::config(format!(
                    "profile covers [0, {}] but [0, {needed_t_max}] is needed",
                    profile.t_max()
                )));
            }
            return Ok(profile);
        }
        let case = TorusCase::from_index(self.case.unwrap(), self.alpha)?;
        if needed_t_max > TORUS_T_MAX * (1.0 + 1e-12) {
            return Err(Failure::config(format!(
                "torus case profiles are defined on [0, pi/2]; {needed_t_max} requested"
            )));
        }
        Ok(case_profile(case)?)
    }
}

impl OutputOpts {
    fn tolerance(&self) -> Result<f64, Failure> {
        if let Some(tol) = self.tol {
            return Ok(tol);
        }
        match std::env::var(TOL_ENV_VAR) {
            Ok(text) => text
                .parse::<f64>()
                .map_err(|_| Failure::config(format!("{TOL_ENV_VAR} is not a number: {text}"))),
            Err(_) => Ok(DEFAULT_TOL),
        }
    }

    fn write(&self, text: String) -> Result<(), Failure> {
        match &self.output {
            Some(path) => fs::write(path, text)
                .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn csv_string<T: Serialize>(rows: &[T]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).expect("csv serialization");
    }
    String::from_utf8(writer.into_inner().expect("csv flush")).expect("utf-8 csv")
}

fn json_string<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("json serialization");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct WarpSample {
    t: f64,
    f: f64,
    fprime: f64,
}

#[derive(Serialize)]
struct WarpResult {
    t_max: f64,
    tol: f64,
    first_zero: Option<f64>,
    samples: Vec<WarpSample>,
}

fn warp_samples(w: &WarpingFunction) -> Vec<WarpSample> {
    w.grid()
        .iter()
        .zip(w.f_values())
        .zip(w.fprime_values())
        .map(|((&t, &f), &fprime)| WarpSample { t, f, fprime })
        .collect()
}

fn run_warp(source: &ProfileSource, tmax: f64, out: &OutputOpts) -> Result<(), Failure> {
    let tol = out.tolerance()?;
    let profile = source.load(tmax)?;
    let w = solve_warping(&profile, tmax, tol)?;
    if let Some(zero) = w.first_zero() {
        eprintln!("first zero at t = {zero}; table truncated there");
    }
    let samples = warp_samples(&w);
    let text = match out.format {
        Format::Json => json_string(&WarpResult {
            t_max: tmax,
            tol,
            first_zero: w.first_zero(),
            samples,
        }),
        Format::Csv => csv_string(&samples),
        Format::PlotData => {
            let mut text = String::new();
            for s in &samples {
                text.push_str(&format!("{} {} {}\n", s.t, s.f, s.fprime));
            }
            text
        }
    };
    out.write(text)
}

fn run_steklov(
    source: &ProfileSource,
    n: u32,
    r: f64,
    max_mode: u32,
    reference_constant: Option<f64>,
    out: &OutputOpts,
) -> Result<(), Failure> {
    let tol = out.tolerance()?;
    let profile = source.load(r)?;
    let ball = ModelBall::from_profile(n, r, &profile, tol)?;
    let result = steklov_v1(&ball, max_mode, tol)?;
    let margin = match reference_constant {
        Some(k0) => Some(comparison_report(&profile, n, r, k0, tol)?.margin),
        None => None,
    };
    let record = SteklovRecord::new(&ball, &result, margin);
    let text = match out.format {
        Format::Json => json_string(&record),
        Format::Csv => csv_string(&[&record]),
        Format::PlotData => match record.margin {
            Some(m) => format!("{} {} {}\n", record.r, record.v1, m),
            None => format!("{} {}\n", record.r, record.v1),
        },
    };
    out.write(text)
}

#[derive(Serialize)]
struct TorusRow {
    r: f64,
    v1_variable_bound: f64,
    v1_escobar_bound: f64,
    margin: f64,
}

fn parse_radius_list(rs: &str) -> Result<Vec<f64>, Failure> {
    rs.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::config(format!("bad radius {s:?}")))
        })
        .collect()
}

fn parse_radius_grid(grid: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = grid.split(':').collect();
    if parts.len() != 3 {
        return Err(Failure::config(format!(
            "--r-grid wants start:stop:count, got {grid:?}"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| Failure::config("bad grid start"))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|_| Failure::config("bad grid stop"))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| Failure::config("bad grid count"))?;
    if count < 1 || !(stop >= start) {
        return Err(Failure::config("grid needs count >= 1 and stop >= start"));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    Ok((0..count)
        .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
        .collect())
}

fn run_torus(
    case_index: u8,
    alpha: Option<f64>,
    n: u32,
    rs: Option<&str>,
    r_grid: &str,
    out: &OutputOpts,
) -> Result<(), Failure> {
    let tol = out.tolerance()?;
    let case = TorusCase::from_index(case_index, alpha)?;
    let radii = match rs {
        Some(list) => parse_radius_list(list)?,
        None => parse_radius_grid(r_grid)?,
    };
    let profile = case_profile(case)?;
    let mut rows = Vec::with_capacity(radii.len());
    for &r in &radii {
        let reference = best_constant_bound(case, r)?;
        let report = comparison_report(&profile, n, r, reference.k0, tol)?;
        rows.push(TorusRow {
            r,
            v1_variable_bound: report.v1_model_variable,
            v1_escobar_bound: report.v1_model_constant,
            margin: report.margin,
        });
    }
    let text = match out.format {
        Format::Json => json_string(&rows),
        Format::Csv => csv_string(&rows),
        Format::PlotData => {
            let mut text = String::new();
            for row in &rows {
                text.push_str(&format!(
                    "{} {} {} {}\n",
                    row.r, row.v1_variable_bound, row.v1_escobar_bound, row.margin
                ));
            }
            text
        }
    };
    out.write(text)
}

fn bounds_text(rows: &[BoundRow], format: Format) -> String {
    match format {
        Format::Json => json_string(&rows),
        Format::Csv => csv_string(rows),
        Format::PlotData => {
            let mut text = String::new();
            for row in rows {
                text.push_str(&format!(
                    "{} {} {}\n",
                    row.lower,
                    row.upper.map_or_else(|| "nan".into(), |u| u.to_string()),
                    row.gap.map_or_else(|| "nan".into(), |g| g.to_string()),
                ));
            }
            text
        }
    }
}

fn run_wentzell_single(
    n: Option<u32>,
    lambda1c: Option<f64>,
    c: Option<f64>,
    k: Option<f64>,
    beta: Option<f64>,
    out: &OutputOpts,
) -> Result<(), Failure> {
    let (Some(n), Some(lambda1c), Some(c), Some(k), Some(beta)) = (n, lambda1c, c, k, beta) else {
        return Err(Failure::config(
            "--n, --lambda1c, --c, --K, --beta are all required (or use --batch)",
        ));
    };
    let row = evaluate_row(&SettingRow {
        n,
        lambda1c,
        c,
        k,
        beta,
    })?;
    let invalid = row.upper.is_none();
    out.write(bounds_text(&[row], out.format))?;
    if invalid {
        return Err(Failure {
            code: 5,
            message: format!(
                "upper bound undefined: lambda1c = {lambda1c} below (K-1)c^2 = {}",
                (k - 1.0) * c * c
            ),
        });
    }
    Ok(())
}

fn run_wentzell_batch(path: &Path, out: &OutputOpts) -> Result<(), Failure> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    let mut invalid = 0usize;
    for record in reader.deserialize::<SettingRow>() {
        let setting = record.map_err(|e| Failure::config(format!("bad batch row: {e}")))?;
        let row = evaluate_row(&setting)?;
        if row.upper.is_none() {
            invalid += 1;
            eprintln!(
                "row flagged: lambda1c = {} below (K-1)c^2 = {}",
                setting.lambda1c,
                (setting.k - 1.0) * setting.c * setting.c
            );
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Failure::config("batch file holds no rows"));
    }
    let all_invalid = invalid == rows.len();
    out.write(bounds_text(&rows, out.format))?;
    if all_invalid {
        return Err(Failure {
            code: 5,
            message: "every batch row violates the upper-bound precondition".into(),
        });
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Warp { source, tmax, out } => run_warp(source, *tmax, out),
        Command::Steklov {
            source,
            n,
            r,
            max_mode,
            reference_constant,
            out,
        } => run_steklov(source, *n, *r, *max_mode, *reference_constant, out),
        Command::Torus {
            case,
            alpha,
            n,
            rs,
            r_grid,
            out,
        } => run_torus(*case, *alpha, *n, rs.as_deref(), r_grid, out),
        Command::Wentzell {
            n,
            lambda1c,
            c,
            k,
            beta,
            batch,
            out,
        } => match batch {
            Some(path) => run_wentzell_batch(path, out),
            None => run_wentzell_single(*n, *lambda1c, *c, *k, *beta, out),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
