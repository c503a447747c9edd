use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use rdkernel::closed::{closed_method, eval_closed};
use rdkernel::verify::{run_suite, Check, Suite};
use rdkernel::{kernel_dispatch, kernel_series, DeformParams64, KernelArgs64, TruncationPolicy64};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::grid::Range;

/// Allowed excess over 1 of the dimension-2 bound before `bound-scan` fails.
pub const BOUND_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Auto,
    Series,
    Closed,
}

impl std::str::FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "series" => Ok(Method::Series),
            "closed" => Ok(Method::Closed),
            _ => Err(CliError::usage(format!(
                "method '{s}' must be auto, series or closed"
            ))),
        }
    }
}

pub struct EvalRequest {
    pub a: f64,
    pub m: u32,
    pub z: Range,
    pub w: Range,
    pub method: Method,
    pub tol: f64,
}

struct Row {
    z: f64,
    w: f64,
    re: f64,
    im: f64,
    method: &'static str,
    terms: Option<usize>,
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn eval_point(
    req: &EvalRequest,
    params: &DeformParams64,
    policy: &TruncationPolicy64,
    z: f64,
    w: f64,
) -> CliResult<Row> {
    let args = KernelArgs64::new(z, w)?;
    let (value, method, terms) = match req.method {
        Method::Auto => {
            let d = kernel_dispatch(params, &args, policy)?;
            (d.value, d.method.as_str(), d.terms)
        }
        Method::Series => {
            let s = kernel_series(params, &args, policy)?;
            (s.value, "series", Some(s.terms))
        }
        Method::Closed => {
            let route = closed_method(params, &args).ok_or_else(|| {
                CliError::usage(format!(
                    "no closed form for a = {}, m = {} at w = {w}",
                    req.a, req.m
                ))
            })?;
            (eval_closed(route, params, &args)?, route.as_str(), None)
        }
    };
    Ok(Row {
        z,
        w,
        re: value.re,
        im: value.im,
        method,
        terms,
    })
}

/// Writes the kernel on the `z × w` grid, z-major. Returns the row count.
pub fn eval(req: &EvalRequest, out: &Path) -> CliResult<usize> {
    if req.w.min < -1.0 || req.w.max > 1.0 {
        return Err(CliError::usage("w range must lie within [-1, 1]"));
    }
    if req.z.min < 0.0 {
        return Err(CliError::usage("z range must be nonnegative"));
    }
    let params = DeformParams64::new(req.a, req.m)?;
    let policy = TruncationPolicy64::default().with_abs_tol(req.tol)?;
    let ws = req.w.points();
    let grid: Vec<(f64, f64)> = req
        .z
        .points()
        .into_iter()
        .flat_map(|z| ws.iter().map(move |&w| (z, w)))
        .collect();
    let rows = grid
        .par_iter()
        .map(|&(z, w)| eval_point(req, &params, &policy, z, w))
        .collect::<CliResult<Vec<Row>>>()?;

    let mut writer = csv::Writer::from_path(out)?;
    writer.write_record(["z", "w", "re", "im", "abs", "method", "terms"])?;
    for r in &rows {
        let terms = r.terms.map(|t| t.to_string()).unwrap_or_default();
        writer.write_record([
            sci(r.z),
            sci(r.w),
            sci(r.re),
            sci(r.im),
            sci(r.re.hypot(r.im)),
            r.method.into(),
            terms,
        ])?;
    }
    writer.flush()?;
    Ok(rows.len())
}

#[derive(Debug, Serialize)]
pub struct BoundGrid {
    pub n: u32,
    pub m: u32,
    pub a: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub z_count: usize,
    pub w_min: f64,
    pub w_max: f64,
    pub w_count: usize,
}

#[derive(Debug, Serialize)]
pub struct BoundReport {
    pub sup_abs: f64,
    pub z_at_max: f64,
    pub w_at_max: f64,
    pub grid: BoundGrid,
    /// `Some` only for `m = 2`, where `|K| <= 1` is known to hold.
    pub bound_holds: Option<bool>,
}

/// Scans `|K_{2/n}^m|` over `[0, z_max] × [-1, 1]` with `density` points per axis.
pub fn bound_scan(n: u32, m: u32, z_max: f64, density: usize) -> CliResult<BoundReport> {
    if n == 0 {
        return Err(CliError::usage("n must be >= 1"));
    }
    if m < 2 || m % 2 != 0 {
        return Err(CliError::usage(format!("m = {m} must be even and >= 2")));
    }
    if !(z_max >= 0.0) || !z_max.is_finite() {
        return Err(CliError::usage("zmax must be finite and >= 0"));
    }
    if density < 2 {
        return Err(CliError::usage("density must be >= 2"));
    }
    let params = DeformParams64::from_n(n, m)?;
    let policy = TruncationPolicy64::default();
    let zs = Range {
        min: 0.0,
        max: z_max,
        count: density,
    }
    .points();
    let ws = Range {
        min: -1.0,
        max: 1.0,
        count: density,
    }
    .points();
    let rows = zs
        .par_iter()
        .map(|&z| {
            let mut best = (f64::NEG_INFINITY, z, 0.0);
            for &w in &ws {
                let v = kernel_dispatch(&params, &KernelArgs64::new(z, w)?, &policy)?
                    .value
                    .norm();
                if v > best.0 {
                    best = (v, z, w);
                }
            }
            Ok(best)
        })
        .collect::<CliResult<Vec<(f64, f64, f64)>>>()?;
    // first maximum in z-major order, independent of scheduling
    let (sup_abs, z_at_max, w_at_max) =
        rows.into_iter()
            .fold((f64::NEG_INFINITY, 0.0, 0.0), |acc, r| {
                if r.0 > acc.0 {
                    r
                } else {
                    acc
                }
            });
    Ok(BoundReport {
        sup_abs,
        z_at_max,
        w_at_max,
        grid: BoundGrid {
            n,
            m,
            a: 2.0 / f64::from(n),
            z_min: 0.0,
            z_max,
            z_count: density,
            w_min: -1.0,
            w_max: 1.0,
            w_count: density,
        },
        bound_holds: (m == 2).then_some(sup_abs <= 1.0 + BOUND_SLACK),
    })
}

pub fn write_json<T: Serialize>(value: &T, out: &Path) -> CliResult<()> {
    let mut f = BufWriter::new(File::create(out)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    f.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl From<Check> for CheckRecord {
    fn from(c: Check) -> Self {
        Self {
            name: c.name,
            residual: c.residual,
            threshold: c.threshold,
            pass: c.pass,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
}

pub fn verify(suite: Suite, tol: Option<f64>) -> CliResult<VerifyReport> {
    if let Some(t) = tol {
        if !(t > 0.0) {
            return Err(CliError::usage("tol must be > 0"));
        }
    }
    let checks: Vec<CheckRecord> = run_suite(suite, tol)?
        .into_iter()
        .map(CheckRecord::from)
        .collect();
    Ok(VerifyReport {
        suite: suite.to_string(),
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}
