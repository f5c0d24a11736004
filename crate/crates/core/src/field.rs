//! Functions of `(t, r)` evaluated through second-order jets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::params::{rpow, ModelParams};

/// A point `(t, r)` with `u` and its partials through second order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jet2Sample {
    pub t: f64,
    pub r: f64,
    pub u: f64,
    pub u_t: f64,
    pub u_r: f64,
    pub u_tt: f64,
    pub u_tr: f64,
    pub u_rr: f64,
}

impl Jet2Sample {
    /// Builds a sample from a jet seeded with `a = t`, `b = r`.
    pub fn from_jet(t: f64, r: f64, j: Jet2) -> Result<Self> {
        if !j.is_finite() {
            return Err(Error::domain(format!("non-finite jet at (t, r) = ({t}, {r})")));
        }
        Ok(Jet2Sample { t, r, u: j.v, u_t: j.da, u_r: j.db, u_tt: j.daa, u_tr: j.dab, u_rr: j.dbb })
    }

    pub fn nonlinearity(&self, params: &ModelParams) -> Result<f64> {
        Ok(params.kf() * rpow(self.u, params.q)?)
    }

    /// `u_tt - u_rr - (n-1) u_r / r - k u^q`.
    pub fn residual(&self, params: &ModelParams) -> Result<f64> {
        if self.r <= 0.0 {
            return Err(Error::domain("residual needs r > 0"));
        }
        let n = params.nf();
        Ok(self.u_tt - self.u_rr - (n - 1.0) * self.u_r / self.r - self.nonlinearity(params)?)
    }

    /// Residual divided by `max(1, |k u^q|)`.
    pub fn relative_residual(&self, params: &ModelParams) -> Result<f64> {
        let f = self.nonlinearity(params)?;
        Ok(self.residual(params)?.abs() / f.abs().max(1.0))
    }
}

/// A scalar field `u(t, r)` that can be evaluated on jets.
pub trait RadialField: Send + Sync {
    fn params(&self) -> ModelParams;

    /// `u` at jet arguments; the arguments may themselves depend on other seeds.
    fn jet(&self, t: Jet2, r: Jet2) -> Result<Jet2>;

    fn sample(&self, t: f64, r: f64) -> Result<Jet2Sample> {
        let j = self.jet(Jet2::var_a(t), Jet2::var_b(r))?;
        Jet2Sample::from_jet(t, r, j)
    }

    fn value(&self, t: f64, r: f64) -> Result<f64> {
        let v = self.jet(Jet2::constant(t), Jet2::constant(r))?.v;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::domain(format!("non-finite value at (t, r) = ({t}, {r})")))
        }
    }

    fn relative_residual(&self, t: f64, r: f64) -> Result<f64> {
        self.sample(t, r)?.relative_residual(&self.params())
    }
}

impl<F: RadialField + ?Sized> RadialField for &F {
    fn params(&self) -> ModelParams {
        (**self).params()
    }
    fn jet(&self, t: Jet2, r: Jet2) -> Result<Jet2> {
        (**self).jet(t, r)
    }
}

impl<F: RadialField + ?Sized> RadialField for Box<F> {
    fn params(&self) -> ModelParams {
        (**self).params()
    }
    fn jet(&self, t: Jet2, r: Jet2) -> Result<Jet2> {
        (**self).jet(t, r)
    }
}
