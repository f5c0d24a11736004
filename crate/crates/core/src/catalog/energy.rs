use serde::{Deserialize, Serialize};

use super::SolutionFamily;
use crate::error::{Error, Result};
use crate::numerics::quad::{integrate, QuadOptions};
use crate::params::rpow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convergence {
    Convergent,
    Divergent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EnergyValue {
    Finite(f64),
    Infinite,
}

impl EnergyValue {
    pub fn is_infinite(&self) -> bool {
        matches!(self, EnergyValue::Infinite)
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            EnergyValue::Finite(v) => Some(v),
            EnergyValue::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub t0: f64,
    pub r_max: f64,
    /// Integral over `(0, r_max]`; absent when the axis contribution diverges.
    pub truncated: Option<f64>,
    pub tail: Convergence,
    pub axis: Convergence,
    /// Energy of the whole slice.
    pub total: EnergyValue,
}

/// Energy density exponent classification: the integrand behaves like
/// `r^m` with `m` the extreme of the gradient and potential terms.
fn classify(a: f64, n: f64, q: f64, at_infinity: bool) -> Convergence {
    if !at_infinity && a == 0.0 {
        return Convergence::Convergent;
    }
    let grad = 2.0 * a + n - 3.0;
    let pot = a * (q + 1.0) + n - 1.0;
    let diverges = if at_infinity { grad.max(pot) >= -1.0 } else { grad.min(pot) <= -1.0 };
    if diverges {
        Convergence::Divergent
    } else {
        Convergence::Convergent
    }
}

/// Tail and axis classification from the asymptotic exponents alone.
pub(super) fn energy_class(fam: &SolutionFamily) -> (Convergence, Convergence) {
    if fam.is_zero() {
        return (Convergence::Convergent, Convergence::Convergent);
    }
    let pm = fam.params;
    let (a_inf, a_0) = fam.asymptotic_exponents();
    (classify(a_inf, pm.nf(), pm.q, true), classify(a_0, pm.nf(), pm.q, false))
}

pub(super) fn energy_density(fam: &SolutionFamily, t: f64, r: f64) -> Result<f64> {
    let pm = fam.params;
    let j = fam.evaluate(t, r)?;
    let k = pm.kf();
    let pot = if (pm.q + 1.0).abs() < 1e-12 {
        if j.u <= 0.0 {
            return Err(Error::domain("logarithmic potential needs u > 0"));
        }
        k * j.u.ln()
    } else {
        k * rpow(j.u, pm.q + 1.0)? / (pm.q + 1.0)
    };
    Ok((0.5 * j.u_t * j.u_t + 0.5 * j.u_r * j.u_r - pot) * r.powi(pm.n as i32 - 1))
}

pub(super) fn energy(fam: &SolutionFamily, t0: f64, r_max: f64, max_intervals: usize) -> Result<EnergyReport> {
    if !(r_max > 0.0) {
        return Err(Error::InvalidParams(format!("r_max = {r_max} must be positive")));
    }
    let set = fam.singular_set();
    let mut beyond = false;
    for c in &set.components {
        match c.slice_radii(t0) {
            None => return Err(Error::domain(format!("slice t = {t0} lies in the singular set"))),
            Some(rs) => {
                if let Some(r) = rs.iter().copied().find(|&r| r > 0.0 && r <= r_max) {
                    return Err(Error::domain(format!("slice t = {t0} meets the singular set at r = {r}")));
                }
                beyond |= rs.iter().any(|&r| r > r_max);
            }
        }
    }
    if fam.is_zero() {
        return Ok(EnergyReport {
            t0,
            r_max,
            truncated: Some(0.0),
            tail: Convergence::Convergent,
            axis: Convergence::Convergent,
            total: EnergyValue::Finite(0.0),
        });
    }
    let pm = fam.params;
    let (a_inf, a_0) = fam.asymptotic_exponents();
    let tail = classify(a_inf, pm.nf(), pm.q, true);
    let axis = classify(a_0, pm.nf(), pm.q, false);
    let opts = QuadOptions { abs_tol: 1e-14, rel_tol: 1e-11, max_intervals };
    let run = |hi: f64| -> Result<f64> {
        let res = integrate(|r| energy_density(fam, t0, r), 0.0, hi, opts)?;
        if !res.converged {
            return Err(Error::domain(format!("energy quadrature did not converge (error {:e})", res.abs_err)));
        }
        Ok(res.value)
    };
    if axis == Convergence::Divergent {
        return Ok(EnergyReport { t0, r_max, truncated: None, tail, axis, total: EnergyValue::Infinite });
    }
    let truncated = run(r_max)?;
    let total = match tail {
        _ if beyond => EnergyValue::Infinite,
        Convergence::Divergent => EnergyValue::Infinite,
        Convergence::Convergent if r_max == f64::INFINITY => EnergyValue::Finite(truncated),
        Convergence::Convergent => EnergyValue::Finite(run(f64::INFINITY)?),
    };
    Ok(EnergyReport { t0, r_max, truncated: Some(truncated), tail, axis, total })
}
