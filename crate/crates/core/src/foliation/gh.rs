use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ChartJet, FoliationChart, Subgroup};
use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::params::{ModelParams, PowerKind, Sign};

/// Explicit solutions `(G(x, v), H(x, v))` of the resolving systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GhId {
    S1,
    S2,
    S3,
    S4,
    C1,
    #[serde(rename = "P-inver")]
    PInver,
    #[serde(rename = "P-trans")]
    PTrans,
    #[serde(rename = "P-scal")]
    PScal,
    #[serde(rename = "P-ti1")]
    PTi1,
    #[serde(rename = "P-ti2")]
    PTi2,
}

impl GhId {
    pub const ALL: [GhId; 10] =
        [GhId::S1, GhId::S2, GhId::S3, GhId::S4, GhId::C1, GhId::PInver, GhId::PTrans, GhId::PScal, GhId::PTi1, GhId::PTi2];

    pub fn name(self) -> &'static str {
        match self {
            GhId::S1 => "S1",
            GhId::S2 => "S2",
            GhId::S3 => "S3",
            GhId::S4 => "S4",
            GhId::C1 => "C1",
            GhId::PInver => "P-inver",
            GhId::PTrans => "P-trans",
            GhId::PScal => "P-scal",
            GhId::PTi1 => "P-ti1",
            GhId::PTi2 => "P-ti2",
        }
    }

    pub fn parse(s: &str) -> Result<GhId> {
        GhId::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParams(format!("unknown GH solution '{s}'")))
    }

    /// The chart the solution is stated in.
    pub fn chart(self) -> Subgroup {
        match self {
            GhId::S1 | GhId::S2 | GhId::S3 | GhId::S4 | GhId::PScal => Subgroup::Scaling,
            GhId::C1 | GhId::PInver => Subgroup::Conformal,
            GhId::PTrans => Subgroup::Translation,
            GhId::PTi1 | GhId::PTi2 => Subgroup::TransInversion,
        }
    }

    /// Power the solution is restricted to, if any.
    pub fn power(self) -> Option<PowerKind> {
        match self {
            GhId::S1 | GhId::PTrans => None,
            GhId::S2 => Some(PowerKind::InverseDilation),
            GhId::S3 => Some(PowerKind::StaticLine),
            GhId::S4 => Some(PowerKind::MinusThree),
            GhId::C1 | GhId::PInver | GhId::PScal | GhId::PTi1 | GhId::PTi2 => Some(PowerKind::Conformal),
        }
    }

    /// Charts whose systems the solution satisfies.
    pub fn charts(self) -> &'static [Subgroup] {
        match self {
            // Spatially homogeneous, so it also solves the translation system.
            GhId::S1 => &[Subgroup::Scaling, Subgroup::Translation],
            GhId::S2 | GhId::S3 | GhId::S4 | GhId::PScal => &[Subgroup::Scaling],
            GhId::C1 | GhId::PInver => &[Subgroup::Conformal],
            GhId::PTrans => &[Subgroup::Translation],
            GhId::PTi1 | GhId::PTi2 => &[Subgroup::TransInversion],
        }
    }
}

impl fmt::Display for GhId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GhSolution {
    pub id: GhId,
    pub params: ModelParams,
    pub branch: Sign,
}

impl GhSolution {
    pub fn new(id: GhId, params: ModelParams, branch: Sign) -> Result<Self> {
        if let Some(kind) = id.power() {
            params.require(kind)?;
        }
        let (n, q, k) = (params.nf(), params.q, params.kf());
        let unsupported = |m: &str| Err(Error::unsupported(format!("{id}: {m}")));
        match id {
            GhId::S1 if q == -1.0 || k / (q + 1.0) <= 0.0 => return unsupported("needs k/(q+1) > 0"),
            GhId::S2 if (2.0 - n) * k <= 0.0 => return unsupported("needs (2-n)k > 0"),
            GhId::S3 if params.n <= 3 => return unsupported("needs n > 3"),
            GhId::S4 if k > 0.0 => return unsupported("needs k = -1"),
            GhId::C1 if k < 0.0 => return unsupported("needs k = +1"),
            GhId::PTrans if (n * (1.0 - q) + 1.0 + q).abs() < 1e-12 => {
                return unsupported("needs n(1-q) + 1 + q != 0")
            }
            _ => {}
        }
        Ok(GhSolution { id, params, branch })
    }

    pub fn check_chart(&self, chart: &FoliationChart) -> Result<()> {
        if chart.params != self.params {
            return Err(Error::InvalidParams("chart and solution parameters differ".into()));
        }
        if !self.id.charts().contains(&chart.subgroup) {
            return Err(Error::InvalidParams(format!("{} does not live on the {} chart", self.id, chart.subgroup.name())));
        }
        Ok(())
    }

    /// Points on the real line where the closed form or the system is singular.
    pub fn singular_x(&self) -> &'static [f64] {
        match self.id {
            GhId::PScal => &[0.0, 1.0, -1.0],
            _ => &[0.0],
        }
    }

    /// `(G, H)` on jets with `a = x`, `b = v`.
    pub fn jets(&self, x: Jet2, v: Jet2) -> Result<(Jet2, Jet2)> {
        if v.v <= 0.0 {
            return Err(Error::domain(format!("needs v > 0, got {}", v.v)));
        }
        let (n, q, k, p) = (self.params.nf(), self.params.q, self.params.kf(), self.params.p());
        let s = self.branch.value();
        let zero = Jet2::constant(0.0);
        let root = |j: Jet2| -> Result<Jet2> {
            if j.v < 0.0 {
                Err(Error::domain(format!("negative radicand {}", j.v)))
            } else {
                j.sqrt()
            }
        };
        let (g, h) = match self.id {
            GhId::S1 => (v.powf((q + 1.0) / 2.0)? * (s * (2.0 * k / (q + 1.0)).sqrt()), zero),
            GhId::S2 => (zero, v * (2.0 - n) + v.powf(1.0 / (n - 2.0))? * (s * ((2.0 - n) * k).sqrt())),
            GhId::S3 => {
                let g = v.powf((n - 1.0) / (n - 2.0))? * (s * k / (n - 3.0));
                (g, v * (2.0 - n) + g * s)
            }
            GhId::S4 => (v.recip()? * (s * (-k).sqrt()) + v.div_checked(x)?, zero),
            GhId::C1 => {
                let c = (k * (n - 1.0) / (n + 1.0)).sqrt();
                (x * v.powf((n + 1.0) / (n - 1.0))? * (s * c), x * v * ((n - 1.0) / 2.0))
            }
            GhId::PInver => {
                let vq = v.powf(q)?;
                let g = x * root(vq.sq() / (p * p) - vq * v * k)? * s;
                (g, x * v * (-p) + x * vq * (k / p))
            }
            GhId::PTrans => {
                let d = n * (1.0 - q) + 1.0 + q;
                let vq = v.powf(q)?;
                let rad = (x * vq).sq() * ((q - 1.0).powi(2) / (d * d)) + vq * v * (2.0 * k / d);
                (root(rad)? * s, x * vq * (k * (q - 1.0) / d))
            }
            GhId::PScal => {
                let a = k / 4.0 * (q - 1.0).powi(2);
                let w = v.powf(q - 1.0)?;
                // (a w x)^2 - a (x^2 + 1) w + 1, factored to avoid cancellation
                let rad = (x.sq() * w * a - 1.0) * (w * a - 1.0);
                let pref = (x * v * p).div_checked(x.sq() - 1.0)?;
                let g = pref * (-(w * a) + 1.0 + root(rad)? * s);
                (g, v.powf(q)? * (-k / 2.0 * (q - 1.0)) - g.div_checked(x)?)
            }
            GhId::PTi1 => {
                let vq = v.powf(q)?;
                let rad = (x.sq() * (vq.div_checked(v)?) * (k / (p * p)) + 4.0) * (vq * v * k - v.sq() * (p * p));
                (root(rad)? * s, x * v * (-p) + x * vq * (k / p))
            }
            GhId::PTi2 => {
                let rad = (x.sq() + 4.0) * v.powf(q + 1.0)? * (2.0 * k / (q + 1.0)) - v.sq() * (4.0 * p * p);
                (root(rad)? * s, x * v * (-p))
            }
        };
        Ok((g.finite("G")?, h.finite("H")?))
    }

    pub fn chart_jet(&self, x: f64, v: f64) -> Result<ChartJet> {
        let (g, h) = self.jets(Jet2::var_a(x), Jet2::var_b(v))?;
        Ok(ChartJet::from_jets(x, v, g, h))
    }

    pub fn value(&self, x: f64, v: f64) -> Result<(f64, f64)> {
        let (g, h) = self.jets(Jet2::constant(x), Jet2::constant(v))?;
        Ok((g.v, h.v))
    }

    /// A parameter choice for which the solution exists, used by defaults
    /// and tests.
    pub fn standard_params(id: GhId, n: u32) -> Result<ModelParams> {
        let k = match id {
            GhId::S2 | GhId::S4 => Sign::Minus,
            _ => Sign::Plus,
        };
        match id.power() {
            Some(kind) => ModelParams::at(n, kind, k),
            None => ModelParams::new(n, if id == GhId::PTrans { 2.5 } else { 3.0 }, k),
        }
    }
}
