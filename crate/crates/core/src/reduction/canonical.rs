use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use super::{OdeKind, OdePoint};
use crate::error::{Error, Result};
use crate::jet::Jet2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `(xi, U) -> (x, v)`.
    Forward,
    /// `(x, v) -> (xi, U)`.
    Inverse,
}

fn cos(x: Jet2) -> Jet2 {
    x.chain(x.v.cos(), -x.v.sin(), -x.v.cos())
}

fn not_canonical(kind: OdeKind) -> Error {
    Error::InvalidParams(format!("{kind:?} has no canonical coordinates"))
}

/// New independent variable as a function of the reduced one.
fn forward(kind: OdeKind, n: f64, xi: Jet2) -> Result<Jet2> {
    match kind {
        OdeKind::TransCanonicalScal | OdeKind::InverCanonical => xi.ln(),
        OdeKind::TransCanonicalDil => {
            if xi.v <= 0.0 {
                return Err(Error::domain(format!("needs r > 0, got {}", xi.v)));
            }
            Ok(xi.powf(n - 2.0)? / (n - 2.0))
        }
        OdeKind::ScalCanonicalDil => {
            if xi.v <= 0.0 {
                return Err(Error::domain(format!("needs xi > 0, got {}", xi.v)));
            }
            if xi.v <= 1.0 {
                let w = (-xi.sq() + 1.0).sqrt()?;
                Ok((-w + 1.0).div_checked(w + 1.0)?.ln()? * 0.5)
            } else {
                let w = (xi.sq() - 1.0).sqrt()?;
                Ok(-w.recip()?.atan() + FRAC_PI_2)
            }
        }
        k => Err(not_canonical(k)),
    }
}

/// Point value of [`forward`]; the scaling map is finite on the light cone
/// even though its derivative is not.
fn forward_value(kind: OdeKind, n: f64, xi: f64) -> Result<f64> {
    if kind == OdeKind::ScalCanonicalDil && xi == 1.0 {
        return Ok(0.0);
    }
    Ok(forward(kind, n, Jet2::constant(xi))?.v)
}

/// Reduced variable as a function of the canonical one.
fn inverse(kind: OdeKind, n: f64, x: Jet2) -> Result<Jet2> {
    match kind {
        OdeKind::TransCanonicalScal | OdeKind::InverCanonical => Ok(x.exp()),
        OdeKind::TransCanonicalDil => {
            let y = x * (n - 2.0);
            if y.v <= 0.0 {
                return Err(Error::domain(format!("needs x > 0, got {}", x.v)));
            }
            y.powf(1.0 / (n - 2.0))
        }
        OdeKind::ScalCanonicalDil => {
            if x.v <= 0.0 {
                // sech
                let e = x.exp();
                (e + e.recip()?).recip().map(|s| s * 2.0)
            } else if x.v < FRAC_PI_2 {
                cos(x).recip()
            } else {
                Err(Error::domain(format!("x = {} is beyond the |xi| >= 1 branch", x.v)))
            }
        }
        k => Err(not_canonical(k)),
    }
}

/// `v = weight(xi) U`.
fn weight(kind: OdeKind, n: f64, xi: Jet2) -> Result<Jet2> {
    match kind {
        OdeKind::TransCanonicalScal | OdeKind::ScalCanonicalDil => xi.powf(n / 2.0 - 1.0),
        OdeKind::TransCanonicalDil => xi.powf(n - 2.0),
        OdeKind::InverCanonical => Ok(Jet2::constant(1.0)),
        k => Err(not_canonical(k)),
    }
}

/// Maps a single point between reduced and canonical coordinates.
pub fn canonical_map(kind: OdeKind, n: u32, direction: Direction, point: (f64, f64)) -> Result<(f64, f64)> {
    let nf = n as f64;
    let c = Jet2::constant;
    match direction {
        Direction::Forward => {
            let xi = c(point.0);
            Ok((forward_value(kind, nf, point.0)?, weight(kind, nf, xi)?.v * point.1))
        }
        Direction::Inverse => {
            let xi = inverse(kind, nf, c(point.0))?;
            Ok((xi.v, point.1 / weight(kind, nf, xi)?.v))
        }
    }
}

/// Second-order Taylor polynomial of a 2-jet composed with `arg`.
fn taylor(at: f64, v: f64, v1: f64, v2: f64, arg: Jet2) -> Jet2 {
    let d = arg - at;
    d * v1 + d.sq() * (0.5 * v2) + v
}

/// Transports the 2-jet of a reduced profile to canonical coordinates.
pub(super) fn to_canonical(kind: OdeKind, n: u32, pt: &OdePoint) -> Result<OdePoint> {
    let nf = n as f64;
    let x0 = forward_value(kind, nf, pt.x)?;
    let xi = inverse(kind, nf, Jet2::var_a(x0))?;
    let v = weight(kind, nf, xi)? * taylor(pt.x, pt.v, pt.v1, pt.v2, xi);
    let v = v.finite("canonical profile")?;
    Ok(OdePoint { x: x0, v: v.v, v1: v.da, v2: v.daa })
}

/// Transports a canonical 2-jet back to the reduced variable.
pub fn from_canonical(kind: OdeKind, n: u32, pt: &OdePoint) -> Result<OdePoint> {
    let nf = n as f64;
    let xi0 = inverse(kind, nf, Jet2::constant(pt.x))?.v;
    let xi = Jet2::var_a(xi0);
    let x = forward(kind, nf, xi)?;
    let u = taylor(pt.x, pt.v, pt.v1, pt.v2, x).div_checked(weight(kind, nf, xi)?)?;
    let u = u.finite("reduced profile")?;
    Ok(OdePoint { x: xi0, v: u.v, v1: u.da, v2: u.daa })
}
