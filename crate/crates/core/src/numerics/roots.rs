use crate::error::{Error, Result};

/// Finds a root of `f` in `[lo, hi]` by bisection, polishing with Newton steps
/// when a derivative is supplied. `f(lo)` and `f(hi)` must differ in sign.
pub fn bisect_newton<F>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, Option<f64>)>,
{
    let (mut flo, _) = f(lo)?;
    let (fhi, _) = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::domain(format!("root not bracketed on [{lo}, {hi}]")));
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (fx, dfx) = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        if (hi - lo).abs() <= x_tol {
            return Ok(0.5 * (lo + hi));
        }
        let newton = dfx.filter(|d| *d != 0.0).map(|d| x - fx / d);
        x = match newton {
            Some(xn) if xn > lo.min(hi) && xn < lo.max(hi) => {
                if (xn - x).abs() <= x_tol {
                    return Ok(xn);
                }
                xn
            }
            _ => 0.5 * (lo + hi),
        };
    }
    Ok(x)
}
