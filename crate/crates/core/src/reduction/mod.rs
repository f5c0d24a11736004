//! Symmetry reductions of the radial equation to ODEs, canonical
//! coordinates for the extra ODE symmetries, and quadrature solutions.

mod canonical;
mod quadrature;
mod witness;

pub use canonical::{canonical_map, from_canonical, Direction};
pub use quadrature::{Anchor, QuadratureFamily, QuadratureKind, QuadratureSolution, ZeroEnergyProfile};
pub use witness::{no_symmetry_witness, symmetry_defect, Generator, WitnessReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::RadialField;
use crate::params::{rpow, ModelParams, PowerKind, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OdeKind {
    /// `u = U(r)`.
    Trans,
    /// `u = t^p U(xi)`, `xi = r/t`.
    Scal,
    /// `u = r^p U(x)`, `x = t/r`; the same reduction in the other invariant.
    ScalStatic,
    /// `u = r^p U(xi)`, `xi = (t^2 - r^2)/r`.
    Inver,
    /// `u = r^p U(xi)`, `xi = (1 + t^2 - r^2)/r`.
    TransInver,
    /// `x = ln r`, `v = r^(n/2-1) U` at the critical power.
    TransCanonicalScal,
    /// `x = r^(n-2)/(n-2)`, `v = r^(n-2) U`.
    TransCanonicalDil,
    /// Canonical coordinates of the non-rigid dilation of the scaling ODE.
    ScalCanonicalDil,
    /// `x = ln xi`, `v = U`.
    InverCanonical,
}

impl OdeKind {
    pub const ALL: [OdeKind; 9] = [
        OdeKind::Trans,
        OdeKind::Scal,
        OdeKind::ScalStatic,
        OdeKind::Inver,
        OdeKind::TransInver,
        OdeKind::TransCanonicalScal,
        OdeKind::TransCanonicalDil,
        OdeKind::ScalCanonicalDil,
        OdeKind::InverCanonical,
    ];

    pub fn power(self) -> Option<PowerKind> {
        match self {
            OdeKind::Trans | OdeKind::Scal | OdeKind::ScalStatic => None,
            OdeKind::Inver | OdeKind::TransInver | OdeKind::InverCanonical => Some(PowerKind::Conformal),
            OdeKind::TransCanonicalScal | OdeKind::ScalCanonicalDil => Some(PowerKind::Critical),
            OdeKind::TransCanonicalDil => Some(PowerKind::InverseDilation),
        }
    }

    /// The reduction a canonical kind is built on.
    pub fn base(self) -> OdeKind {
        match self {
            OdeKind::TransCanonicalScal | OdeKind::TransCanonicalDil => OdeKind::Trans,
            OdeKind::ScalCanonicalDil => OdeKind::Scal,
            OdeKind::InverCanonical => OdeKind::Inver,
            k => k,
        }
    }

    pub fn is_canonical(self) -> bool {
        self.base() != self
    }
}

/// A point on the 2-jet of a solution of a reduced ODE: independent
/// variable, value and first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdePoint {
    pub x: f64,
    pub v: f64,
    pub v1: f64,
    pub v2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedOde {
    pub kind: OdeKind,
    pub params: ModelParams,
    /// `sgn(1 - xi^2)`, used only by the scaling canonical form.
    pub s: Sign,
}

impl ReducedOde {
    pub fn new(kind: OdeKind, params: ModelParams) -> Result<Self> {
        if let Some(pk) = kind.power() {
            params.require(pk)?;
        }
        Ok(ReducedOde { kind, params, s: Sign::Plus })
    }

    pub fn with_s(mut self, s: Sign) -> Self {
        self.s = s;
        self
    }

    /// Left-hand side of the ODE; zero on exact solutions.
    pub fn residual(&self, x: f64, v: f64, v1: f64, v2: f64) -> Result<f64> {
        let pm = &self.params;
        let (n, k, q, p) = (pm.nf(), pm.kf(), pm.q, pm.p());
        let kvq = k * rpow(v, q)?;
        let singular = |pts: &[f64]| -> Result<()> {
            if pts.contains(&x) {
                Err(Error::domain(format!("{:?} reduction is singular at {x}", self.kind)))
            } else {
                Ok(())
            }
        };
        let res = match self.kind {
            OdeKind::Trans => {
                if x <= 0.0 {
                    return Err(Error::domain(format!("radial reduction needs r > 0, got {x}")));
                }
                v2 + (n - 1.0) * v1 / x + kvq
            }
            OdeKind::Scal => {
                singular(&[0.0, 1.0, -1.0])?;
                (1.0 - x * x) * v2 + ((n - 1.0) / x + 2.0 * (p - 1.0) * x) * v1 + p * (1.0 - p) * v + kvq
            }
            OdeKind::ScalStatic => {
                singular(&[1.0, -1.0])?;
                (1.0 - x * x) * v2 + (2.0 * p + n - 3.0) * x * v1 - p * (p + n - 2.0) * v - kvq
            }
            OdeKind::Inver => {
                singular(&[0.0])?;
                x * x * v2 + 2.0 * x * v1 - p * (p + 1.0) * v + kvq
            }
            OdeKind::TransInver => (x * x + 4.0) * v2 + 2.0 * x * v1 - p * (p + 1.0) * v + kvq,
            OdeKind::TransCanonicalScal => v2 - p * p * v + kvq,
            OdeKind::TransCanonicalDil => v2 + kvq,
            OdeKind::ScalCanonicalDil => self.s.value() * v2 - p * p * v + kvq,
            OdeKind::InverCanonical => v2 + v1 - p * (p + 1.0) * v + kvq,
        };
        if res.is_finite() {
            Ok(res)
        } else {
            Err(Error::domain(format!("non-finite residual at {x}")))
        }
    }

    pub fn residual_at(&self, pt: &OdePoint) -> Result<f64> {
        self.residual(pt.x, pt.v, pt.v1, pt.v2)
    }

    /// Residual scaled by the largest term magnitude, for tolerance checks.
    pub fn relative_residual(&self, pt: &OdePoint) -> Result<f64> {
        let r = self.residual_at(pt)?;
        let k = self.params.kf();
        let scale = [pt.v, pt.v1, pt.v2, k * rpow(pt.v, self.params.q)?]
            .iter()
            .fold(1.0f64, |m, z| m.max(z.abs()));
        Ok(r.abs() / scale)
    }

    /// The 2-jet of the reduced profile of `field` at the reduced variable `x`,
    /// valid when the field has this kind's invariant form.
    pub fn reduce_sample<F: RadialField>(&self, field: &F, x: f64) -> Result<OdePoint> {
        let base = self.kind.base();
        let pt = match base {
            OdeKind::Trans => {
                let s = field.sample(0.0, x)?;
                OdePoint { x, v: s.u, v1: s.u_r, v2: s.u_rr }
            }
            OdeKind::Scal => {
                if x <= 0.0 {
                    return Err(Error::domain("scaling reduction sampled at t = 1 needs xi > 0"));
                }
                let s = field.sample(1.0, x)?;
                OdePoint { x, v: s.u, v1: s.u_r, v2: s.u_rr }
            }
            OdeKind::ScalStatic => {
                let s = field.sample(x, 1.0)?;
                OdePoint { x, v: s.u, v1: s.u_t, v2: s.u_tt }
            }
            OdeKind::Inver | OdeKind::TransInver => {
                // r = 1, xi = t^2 - 1 (inversion) or t^2 (translation + inversion)
                let t2 = if base == OdeKind::Inver { x + 1.0 } else { x };
                if t2 <= 0.0 {
                    return Err(Error::domain(format!("no sample point with r = 1 for xi = {x}")));
                }
                let t = t2.sqrt();
                let s = field.sample(t, 1.0)?;
                let v1 = s.u_t / (2.0 * t);
                OdePoint { x, v: s.u, v1, v2: (s.u_tt - s.u_t / t) / (4.0 * t2) }
            }
            _ => unreachable!("base kinds only"),
        };
        if self.kind.is_canonical() {
            canonical::to_canonical(self.kind, self.params.n, &pt)
        } else {
            Ok(pt)
        }
    }
}

#[cfg(test)]
mod tests;
