use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{OdeKind, OdePoint, ReducedOde};
use crate::error::{Error, Result};
use crate::numerics::quad::{integrate, QuadOptions};
use crate::numerics::roots::bisect_newton;
use crate::params::{rpow, ModelParams, PowerKind, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureKind {
    /// First integral of `v'' - p^2 v + k v^q = 0`, critical power.
    TransScal,
    /// First integral of `v'' + k v^q = 0`, `q = (4-n)/(n-2)`.
    TransDil,
    /// First integral of `s v'' - p^2 v + k v^q = 0`, critical power.
    ScalDil,
}

impl QuadratureKind {
    pub fn ode_kind(self) -> OdeKind {
        match self {
            QuadratureKind::TransScal => OdeKind::TransCanonicalScal,
            QuadratureKind::TransDil => OdeKind::TransCanonicalDil,
            QuadratureKind::ScalDil => OdeKind::ScalCanonicalDil,
        }
    }

    fn power(self) -> PowerKind {
        match self {
            QuadratureKind::TransDil => PowerKind::InverseDilation,
            _ => PowerKind::Critical,
        }
    }
}

/// `x + c_tilde = branch * integral dv / sqrt(R(v))` with `R` fixed by `kind` and `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureFamily {
    pub kind: QuadratureKind,
    pub params: ModelParams,
    pub s: Sign,
    pub c: f64,
    pub c_tilde: f64,
    pub branch: Sign,
}

/// Closed-form profiles at `c = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroEnergyProfile {
    Sech,
    Csch,
    Sec,
    Csc,
    Power,
}

impl QuadratureFamily {
    pub fn new(kind: QuadratureKind, n: u32, k: Sign, c: f64, c_tilde: f64, branch: Sign) -> Result<Self> {
        let params = ModelParams::at(n, kind.power(), k)?;
        if !(c.is_finite() && c_tilde.is_finite()) {
            return Err(Error::InvalidParams("integration constants must be finite".into()));
        }
        Ok(QuadratureFamily { kind, params, s: Sign::Plus, c, c_tilde, branch })
    }

    /// Sets `sgn(1 - xi^2)`; only meaningful for the scaling quadrature.
    pub fn with_s(mut self, s: Sign) -> Self {
        self.s = s;
        self
    }

    pub fn ode(&self) -> ReducedOde {
        ReducedOde { kind: self.kind.ode_kind(), params: self.params, s: self.s }
    }

    fn s_value(&self) -> f64 {
        if self.kind == QuadratureKind::ScalDil {
            self.s.value()
        } else {
            1.0
        }
    }

    /// The quantity under the square root, `v'^2` along solutions.
    pub fn radicand(&self, v: f64) -> Result<f64> {
        let n = self.params.nf();
        let k = self.params.kf();
        let p = 1.0 - n / 2.0;
        Ok(match self.kind {
            QuadratureKind::TransDil => 2.0 * self.c - k * (n - 2.0) * rpow(v, 2.0 / (n - 2.0))?,
            _ => 2.0 * self.c + self.s_value() * (p * p * v * v - k * (1.0 - 2.0 / n) * rpow(v, 2.0 * n / (n - 2.0))?),
        })
    }

    /// `dR/dv`, equal to `2 v''` along solutions.
    pub fn radicand_derivative(&self, v: f64) -> Result<f64> {
        let k = self.params.kf();
        let p = 1.0 - self.params.nf() / 2.0;
        let vq = rpow(v, self.params.q)?;
        Ok(match self.kind {
            QuadratureKind::TransDil => -2.0 * k * vq,
            _ => self.s_value() * (2.0 * p * p * v - 2.0 * k * vq),
        })
    }

    /// Closed-form solution at `c = 0`, centred so that `x + c_tilde` is the argument.
    pub fn zero_energy(&self, profile: ZeroEnergyProfile, x: f64) -> Result<f64> {
        if self.c != 0.0 {
            return Err(Error::unsupported("closed forms exist only for c = 0"));
        }
        let n = self.params.nf();
        let k = self.params.kf();
        let y = x + self.c_tilde;
        let a0 = n * (n - 2.0) / 4.0;
        let m = (n - 2.0) / 2.0;
        let s = self.s_value();
        let wrong = || Err(Error::unsupported(format!("{profile:?} is not a zero-energy solution of {:?} here", self.kind)));
        let base = match (self.kind, profile) {
            (QuadratureKind::TransScal | QuadratureKind::ScalDil, ZeroEnergyProfile::Sech) if s > 0.0 && k > 0.0 => {
                a0 / y.cosh().powi(2)
            }
            (QuadratureKind::TransScal | QuadratureKind::ScalDil, ZeroEnergyProfile::Csch) if s > 0.0 && k < 0.0 => {
                a0 / y.sinh().powi(2)
            }
            (QuadratureKind::ScalDil, ZeroEnergyProfile::Sec) if s < 0.0 && k > 0.0 => a0 / y.cos().powi(2),
            (QuadratureKind::ScalDil, ZeroEnergyProfile::Csc) if s < 0.0 && k > 0.0 => a0 / y.sin().powi(2),
            (QuadratureKind::TransDil, ZeroEnergyProfile::Power) if k < 0.0 => {
                let b = self.branch.value() * (n - 3.0) * (1.0 / (n - 2.0)).sqrt() * y;
                return rpow(b, (n - 2.0) / (n - 3.0));
            }
            _ => return wrong(),
        };
        let v = rpow(base, m / 2.0)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::domain(format!("closed form singular at x = {x}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Anchor {
    /// `x(lo) = -c_tilde`.
    Lower,
    /// `x(hi) = -c_tilde`.
    Upper,
}

/// `x(v)` on one monotone segment `[lo, hi]` and its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSolution {
    pub family: QuadratureFamily,
    pub lo: f64,
    pub hi: f64,
    pub anchor: Anchor,
    pub x_lo: f64,
    pub x_hi: f64,
}

const ENDPOINT_SLACK: f64 = 1e-10;
const INTERIOR_SAMPLES: usize = 64;

impl QuadratureSolution {
    pub fn solve(family: QuadratureFamily, range: (f64, f64), anchor: Anchor) -> Result<Self> {
        let (lo, hi) = range;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParams(format!("bad v range [{lo}, {hi}]")));
        }
        for i in 1..INTERIOR_SAMPLES {
            let v = lo + (hi - lo) * i as f64 / INTERIOR_SAMPLES as f64;
            let r = family.radicand(v)?;
            if !(r > 0.0) {
                return Err(Error::domain(format!("radicand {r} <= 0 at v = {v} inside [{lo}, {hi}]")));
            }
        }
        for v in [lo, hi] {
            let r = family.radicand(v)?;
            if r < -ENDPOINT_SLACK * (1.0 + v * v) {
                return Err(Error::domain(format!("radicand {r} < 0 at endpoint v = {v}")));
            }
        }
        let mut sol = QuadratureSolution { family, lo, hi, anchor, x_lo: 0.0, x_hi: 0.0 };
        sol.x_lo = sol.x_of(lo)?;
        sol.x_hi = sol.x_of(hi)?;
        Ok(sol)
    }

    fn is_turning(&self, v: f64) -> bool {
        self.family
            .radicand(v)
            .map(|r| r.abs() <= ENDPOINT_SLACK * (1.0 + v * v))
            .unwrap_or(false)
    }

    /// `1/sqrt(R(a + d tau^2)) * 2 tau`, the integrand after removing a
    /// possible square-root zero at `a`.
    fn substituted(&self, a: f64, r_end: f64, dir: f64, tau: f64) -> Result<f64> {
        let s = a + dir * tau * tau;
        let r = self.family.radicand(s)? - r_end;
        if r > 0.0 {
            return Ok(2.0 * tau / r.sqrt());
        }
        let d = dir * self.family.radicand_derivative(a)?;
        if d > 0.0 && tau * tau < 1e-8 * (1.0 + a.abs()) {
            Ok(2.0 / d.sqrt())
        } else {
            Err(Error::domain(format!("radicand {r} at v = {s}")))
        }
    }

    /// `integral_a^b dv/sqrt(R)` for `lo <= a <= b <= hi`.
    fn integral(&self, a: f64, b: f64) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        let m = 0.5 * (a + b);
        let opts = QuadOptions { abs_tol: 1e-12, rel_tol: 1e-12, max_intervals: 400 };
        let mut total = 0.0;
        for (end, dir, width) in [(a, 1.0, m - a), (b, -1.0, b - m)] {
            // a turning end has R = 0 up to rounding; drop the residue so the
            // substituted integrand stays smooth at tau = 0
            let r_end = if self.is_turning(end) { self.family.radicand(end)? } else { 0.0 };
            let res = integrate(|tau| self.substituted(end, r_end, dir, tau), 0.0, width.sqrt(), opts)?;
            if !res.converged && res.abs_err > 1e-10 * res.value.abs().max(1.0) {
                return Err(Error::domain(format!("quadrature did not converge near v = {end} (error {})", res.abs_err)));
            }
            total += res.value;
        }
        Ok(total)
    }

    /// `x(v)` for `v` in the segment.
    pub fn x_of(&self, v: f64) -> Result<f64> {
        if !(self.lo <= v && v <= self.hi) {
            return Err(Error::domain(format!("v = {v} outside [{}, {}]", self.lo, self.hi)));
        }
        let signed = match self.anchor {
            Anchor::Lower => self.integral(self.lo, v)?,
            Anchor::Upper => -self.integral(v, self.hi)?,
        };
        Ok(-self.family.c_tilde + self.family.branch.value() * signed)
    }

    /// Inverts `x(v)` on the segment.
    pub fn v_of(&self, x: f64) -> Result<f64> {
        let (xmin, xmax) = (self.x_lo.min(self.x_hi), self.x_lo.max(self.x_hi));
        if !(xmin <= x && x <= xmax) {
            let end = if (x < xmin) == (self.x_lo < self.x_hi) { self.lo } else { self.hi };
            return Err(if self.is_turning(end) {
                Error::NonMonotone(format!("x = {x} lies past the turning point v = {end}"))
            } else {
                Error::domain(format!("x = {x} outside [{xmin}, {xmax}]"))
            });
        }
        let sigma = self.family.branch.value();
        // x(v) is only good to ~1e-13, so a tighter v tolerance just makes Newton stall
        let tol = 1e-12 * (1.0 + self.hi.abs());
        bisect_newton(
            |v| {
                let g = self.x_of(v)? - x;
                let r = self.family.radicand(v)?;
                Ok((g, (r > 0.0).then(|| sigma / r.sqrt())))
            },
            self.lo,
            self.hi,
            tol,
        )
    }

    /// `v, v', v''` at `x` from the first integral.
    pub fn jet_at(&self, x: f64) -> Result<OdePoint> {
        let v = self.v_of(x)?;
        let r = self.family.radicand(v)?.max(0.0);
        Ok(OdePoint { x, v, v1: self.family.branch.value() * r.sqrt(), v2: 0.5 * self.family.radicand_derivative(v)? })
    }

    /// Canonical ODE residual with `v''` from a five-point difference of the inverse.
    pub fn residual_by_differences(&self, x: f64, h: f64) -> Result<f64> {
        let f = |d: f64| self.v_of(x + d);
        let (m2, m1, c, p1, p2) = (f(-2.0 * h)?, f(-h)?, f(0.0)?, f(h)?, f(2.0 * h)?);
        let v1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
        let v2 = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
        self.family.ode().relative_residual(&OdePoint { x, v: c, v1, v2 })
    }

    /// `(v, x(v))` at `count` evenly spaced values.
    pub fn table(&self, count: usize) -> Result<Vec<(f64, f64)>> {
        let count = count.max(2);
        (0..count)
            .map(|i| {
                let v = self.lo + (self.hi - self.lo) * i as f64 / (count - 1) as f64;
                Ok((v, self.x_of(v)?))
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, count: usize, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["v", "x"])?;
        for (v, x) in self.table(count)? {
            w.write_record([format!("{v:.17e}"), format!("{x:.17e}")])?;
        }
        w.flush()?;
        Ok(())
    }
}
