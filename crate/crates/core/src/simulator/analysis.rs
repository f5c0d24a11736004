use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{run, SimConfig, SimRun, Status};
use crate::error::{Error, Result};
use crate::field::RadialField;
use crate::initial::fmt17;
use crate::params::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub l2: f64,
    pub linf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of `-log(error)` against `log(N)`.
    pub order_linf: f64,
    pub order_l2: f64,
}

impl ConvergenceReport {
    /// Ratios of successive `L_inf` errors.
    pub fn ratios(&self) -> Vec<f64> {
        self.rows.windows(2).map(|w| w[0].linf / w[1].linf).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["N", "L2", "Linf"])?;
        for row in &self.rows {
            w.write_record([row.n.to_string(), fmt17(row.l2), fmt17(row.linf)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Slope and intercept of the least-squares line through `(x, y)`, and the
/// root-mean-square residual.
fn line_fit(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let sxx: f64 = pts.iter().map(|&(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rms = (pts.iter().map(|&(x, y)| (y - icpt - slope * x).powi(2)).sum::<f64>() / m).sqrt();
    (slope, icpt, rms)
}

/// Runs every resolution against an exact solution and fits the order.
pub fn run_convergence<F: RadialField + Sync>(template: &SimConfig, resolutions: &[usize], exact: &F) -> Result<ConvergenceReport> {
    if resolutions.len() < 2 {
        return Err(Error::InvalidParams("need at least two resolutions".into()));
    }
    let rows: Vec<ConvergenceRow> = resolutions
        .par_iter()
        .map(|&n| {
            let cfg = template.with_n(n);
            let out = run(&cfg)?;
            if out.status() != Status::Completed {
                return Err(Error::domain(format!("run at N = {n} ended as {:?}", out.status())));
            }
            let (l2, linf) = out.errors_against(exact)?;
            Ok(ConvergenceRow { n, l2, linf })
        })
        .collect::<Result<_>>()?;
    let fit = |f: fn(&ConvergenceRow) -> f64| {
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| ((r.n as f64).ln(), f(r).max(f64::MIN_POSITIVE).ln())).collect();
        -line_fit(&pts).0
    };
    Ok(ConvergenceReport { order_linf: fit(|r| r.linf), order_l2: fit(|r| r.l2), rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlowupWindow {
    /// Blow-up time; estimated from the trace when unset.
    pub t_b: Option<f64>,
    /// Use samples with `t_b - t` at most this fraction of `t_b - t_first`.
    pub fraction: f64,
    /// Samples dropped just before the crossing.
    pub exclude_last: usize,
}

impl Default for BlowupWindow {
    fn default() -> Self {
        BlowupWindow { t_b: None, fraction: 0.1, exclude_last: 3 }
    }
}

pub const MIN_FIT_SAMPLES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupFit {
    pub t_b: f64,
    pub samples: usize,
    /// `u ~ amplitude |t - t_b|^exponent`.
    pub exponent: f64,
    pub amplitude: f64,
    /// `(1 - n)/2`.
    pub reference_exponent: f64,
    /// RMS of the log-log residuals.
    pub fit_residual: f64,
}

fn window_points(trace: &[(f64, f64)], t_ref: f64, window: &BlowupWindow) -> Vec<(f64, f64)> {
    let before: Vec<(f64, f64)> = trace.iter().copied().filter(|&(t, u)| t < t_ref && u != 0.0 && u.is_finite()).collect();
    let keep = before.len().saturating_sub(window.exclude_last);
    let Some(&(t_first, _)) = before.first() else { return vec![] };
    let reach = window.fraction * (t_ref - t_first);
    before[..keep].iter().copied().filter(|&(t, _)| t_ref - t <= reach).collect()
}

fn log_log(pts: &[(f64, f64)], t_b: f64) -> (f64, f64, f64) {
    let logs: Vec<(f64, f64)> = pts.iter().map(|&(t, u)| ((t_b - t).ln(), u.abs().ln())).collect();
    line_fit(&logs)
}

/// Fits `log|u|` against `log|t - t_b|` over a window of `(t, u)` samples
/// taken before `t_ref`. With `window.t_b` unset, `t_b` is the value in
/// `(last sample, t_ref]` that makes the log-log relation straightest.
pub fn fit_blowup_trace(trace: &[(f64, f64)], t_ref: f64, params: &ModelParams, window: &BlowupWindow) -> Result<BlowupFit> {
    let pts = window_points(trace, window.t_b.unwrap_or(t_ref), window);
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientWindow { got: pts.len(), need: MIN_FIT_SAMPLES });
    }
    // a flat trace fits any t_b and is not a blow-up
    if pts.iter().all(|p| p.1 == pts[0].1) {
        return Err(Error::InsufficientWindow { got: 0, need: MIN_FIT_SAMPLES });
    }
    let t_b = match window.t_b {
        Some(t) => t,
        None => {
            let last = pts[pts.len() - 1].0;
            let span = t_ref - last;
            golden_min(|tb| log_log(&pts, tb).2, last + 1e-6 * span, t_ref)
        }
    };
    let (slope, icpt, rms) = log_log(&pts, t_b);
    Ok(BlowupFit {
        t_b,
        samples: pts.len(),
        exponent: slope,
        amplitude: icpt.exp(),
        reference_exponent: (1.0 - params.nf()) / 2.0,
        fit_residual: rms,
    })
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    for _ in 0..100 {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    0.5 * (a + b)
}

/// Blow-up rate at the axis of a run that ended in blow-up.
pub fn fit_blowup_rate(out: &SimRun, params: &ModelParams, r_probe: f64, window: &BlowupWindow) -> Result<BlowupFit> {
    if r_probe != 0.0 {
        return Err(Error::unsupported("the blow-up trace is recorded at r = 0 only"));
    }
    let t_cross = match out.status() {
        Status::Blowup { t } => t,
        s => return Err(Error::InvalidParams(format!("run ended as {s:?}, not in blow-up"))),
    };
    fit_blowup_trace(&out.axis, t_cross, params, window)
}
