//! Dormand-Prince 5(4) with adaptive step control for small systems.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[derive(Debug, Clone, Copy)]
pub struct RkOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for RkOptions {
    fn default() -> Self {
        RkOptions { rel_tol: 1e-10, abs_tol: 1e-12, min_step: 1e-12, max_steps: 100_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RkFailure {
    StepTooSmall,
    TooManySteps,
}

/// Integrates the scalar ODE `y' = f(s, y)` from `s0` to `s1`.
///
/// Evaluation errors of `f` are treated as step rejections; if the step has
/// to shrink below `min_step` the last error (or `StepTooSmall`) is returned.
pub fn integrate_scalar<F>(mut f: F, s0: f64, y0: f64, s1: f64, opts: RkOptions) -> Result<f64>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    let span = s1 - s0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut s = s0;
    let mut y = y0;
    let mut h = (span.abs() / 16.0).min(0.1).max(opts.min_step) * dir;
    let mut last_err: Option<Error> = None;
    for _ in 0..opts.max_steps {
        if (s1 - s) * dir <= 0.0 {
            return Ok(y);
        }
        if (s + h - s1) * dir > 0.0 {
            h = s1 - s;
        }
        match dp_step(&mut f, s, y, h) {
            Ok((y5, err)) => {
                let sc = opts.abs_tol + opts.rel_tol * y.abs().max(y5.abs());
                let ratio = err / sc;
                if ratio <= 1.0 {
                    s += h;
                    y = y5;
                    last_err = None;
                }
                let fac = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
                h *= if ratio <= 1.0 { fac } else { fac.min(1.0) };
            }
            Err(e) => {
                last_err = Some(e);
                h *= 0.25;
            }
        }
        if h.abs() < opts.min_step && (s1 - s).abs() > opts.min_step {
            return Err(last_err.unwrap_or_else(|| {
                Error::PathSingular(format!("step size underflow near s = {s}"))
            }));
        }
    }
    Err(Error::PathSingular(format!("step budget exhausted at s = {s}")))
}

fn dp_step<F>(f: &mut F, s: f64, y: f64, h: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    let mut k = [0.0; 7];
    for i in 0..7 {
        let yi = y + h * (0..i).map(|j| A[i][j] * k[j]).sum::<f64>();
        k[i] = f(s + C[i] * h, yi)?;
        if !k[i].is_finite() {
            return Err(Error::domain("non-finite slope"));
        }
    }
    let y5 = y + h * (0..7).map(|i| B5[i] * k[i]).sum::<f64>();
    let y4 = y + h * (0..7).map(|i| B4[i] * k[i]).sum::<f64>();
    Ok((y5, (y5 - y4).abs()))
}
