//! Group foliation: the first-order systems that the differential invariants
//! `(G, H)` of a symmetry subgroup satisfy as functions of the invariants
//! `(x, v)`, explicit solutions of those systems, and their potentials.

mod ansatz;
mod gh;
mod potential;

pub use ansatz::{ansatz_coefficient_check, AnsatzCase, AnsatzOutcome, AnsatzReport};
pub use gh::{GhId, GhSolution};
pub use potential::{potential_check, PotentialId, PotentialReport, PotentialSolution};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Jet2Sample, RadialField};
use crate::jet::Jet2;
use crate::params::{ModelParams, PowerKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subgroup {
    Scaling,
    Translation,
    /// Generated by the inversion alone.
    Conformal,
    /// Generated by translation plus inversion.
    TransInversion,
}

impl Subgroup {
    pub const ALL: [Subgroup; 4] = [Subgroup::Scaling, Subgroup::Translation, Subgroup::Conformal, Subgroup::TransInversion];

    pub fn name(self) -> &'static str {
        match self {
            Subgroup::Scaling => "scaling",
            Subgroup::Translation => "translation",
            Subgroup::Conformal => "conformal",
            Subgroup::TransInversion => "trans-inversion",
        }
    }

    /// The factor `x^2` or `x^2 + 4` in the conformal-type systems.
    fn conformal_factor(self, x: Jet2) -> Jet2 {
        match self {
            Subgroup::TransInversion => x.sq() + 4.0,
            _ => x.sq(),
        }
    }
}

/// Chart coordinates `(x, v)` and differential invariants `(G, H)` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChartPoint {
    pub x: f64,
    pub v: f64,
    pub g: f64,
    pub h: f64,
}

/// `G`, `H` together with their first partials in `(x, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChartJet {
    pub x: f64,
    pub v: f64,
    pub g: f64,
    pub g_x: f64,
    pub g_v: f64,
    pub h: f64,
    pub h_x: f64,
    pub h_v: f64,
}

impl ChartJet {
    /// From jets seeded with `a = x`, `b = v`.
    pub fn from_jets(x: f64, v: f64, g: Jet2, h: Jet2) -> Self {
        ChartJet { x, v, g: g.v, g_x: g.da, g_v: g.db, h: h.v, h_x: h.da, h_v: h.db }
    }
}

/// Residuals of both equations of a resolving system, each divided by
/// `max(1, largest term)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemResidual {
    pub eq1: f64,
    pub eq2: f64,
}

impl SystemResidual {
    pub fn max(&self) -> f64 {
        self.eq1.abs().max(self.eq2.abs())
    }
}

fn relative(terms: &[f64]) -> f64 {
    let sum: f64 = terms.iter().sum();
    let scale = terms.iter().fold(1.0f64, |m, t| m.max(t.abs()));
    sum.abs() / scale
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FoliationChart {
    pub subgroup: Subgroup,
    pub params: ModelParams,
}

impl FoliationChart {
    pub fn new(subgroup: Subgroup, params: ModelParams) -> Result<Self> {
        if matches!(subgroup, Subgroup::Conformal | Subgroup::TransInversion) {
            params.require(PowerKind::Conformal)?;
        }
        Ok(FoliationChart { subgroup, params })
    }

    /// `(x, v, G, H)` from jets of `t, r, u, u_t, u_r`; only first-order
    /// accuracy of the result is required by callers.
    pub(crate) fn map_jets(&self, t: Jet2, r: Jet2, u: Jet2, ut: Jet2, ur: Jet2) -> Result<[Jet2; 4]> {
        if r.v <= 0.0 {
            return Err(Error::domain(format!("chart needs r > 0, got {}", r.v)));
        }
        let p = self.params.p();
        let n = self.params.nf();
        let out = match self.subgroup {
            Subgroup::Translation => [r, u, ut, ur],
            Subgroup::Scaling => {
                let w = r.powf(1.0 - p)?;
                [t.div_checked(r)?, r.powf(-p)? * u, w * ut, w * ur]
            }
            Subgroup::Conformal => {
                let m = r.powf(-p)?;
                let a = t.sq() + r.sq();
                let b = t * r * 2.0;
                let x = (t.sq() - r.sq()).div_checked(r)?;
                let g = m * (a * ut + b * ur + t * u * (n - 1.0));
                let h = m * (a * ur + b * ut + (a * u).div_checked(r * 2.0)? * (n - 1.0));
                [x, m * u, g, h]
            }
            Subgroup::TransInversion => {
                let m = r.powf(-p)?;
                let a = t.sq() + r.sq() + 1.0;
                let b = t * r * 2.0;
                let x = (t.sq() - r.sq() + 1.0).div_checked(r)?;
                let g = m * (a * ut + b * ur - t * u * (2.0 * p));
                let h = m * (a * ur + b * ut - (a * u).div_checked(r)? * p);
                [x, m * u, g, h]
            }
        };
        Ok(out)
    }

    /// The invariants `(x, v)` at a point of the graph of `u`.
    pub fn invariants(&self, t: f64, r: f64, u: f64) -> Result<(f64, f64)> {
        let c = Jet2::constant;
        let [x, v, _, _] = self.map_jets(c(t), c(r), c(u), c(0.0), c(0.0))?;
        if x.v.is_finite() && v.v.is_finite() {
            Ok((x.v, v.v))
        } else {
            Err(Error::domain(format!("invariants not finite at (t, r) = ({t}, {r})")))
        }
    }

    /// Invariants and differential invariants of a solution jet.
    pub fn to_chart(&self, s: &Jet2Sample) -> Result<ChartPoint> {
        let c = Jet2::constant;
        let [x, v, g, h] = self.map_jets(c(s.t), c(s.r), c(s.u), c(s.u_t), c(s.u_r))?;
        let pt = ChartPoint { x: x.v, v: v.v, g: g.v, h: h.v };
        if [pt.x, pt.v, pt.g, pt.h].iter().all(|z| z.is_finite()) {
            Ok(pt)
        } else {
            Err(Error::domain(format!("chart map not finite at (t, r) = ({}, {})", s.t, s.r)))
        }
    }

    /// Recovers `(u_t, u_r)` at `(t, r)` from `u` and the chart values `(G, H)`.
    pub fn from_chart(&self, t: f64, r: f64, u: f64, g: f64, h: f64) -> Result<(f64, f64)> {
        let c = Jet2::constant;
        let (ut, ur) = self.gradient_from_chart_jets(c(t), c(r), c(u), c(g), c(h))?;
        Ok((ut.v, ur.v))
    }

    pub(crate) fn gradient_from_chart_jets(&self, t: Jet2, r: Jet2, u: Jet2, g: Jet2, h: Jet2) -> Result<(Jet2, Jet2)> {
        if r.v <= 0.0 {
            return Err(Error::domain(format!("chart needs r > 0, got {}", r.v)));
        }
        let p = self.params.p();
        let (ut, ur) = match self.subgroup {
            Subgroup::Translation => (g, h),
            Subgroup::Scaling => {
                let w = r.powf(p - 1.0)?;
                (w * g, w * h)
            }
            Subgroup::Conformal | Subgroup::TransInversion => {
                let one = if self.subgroup == Subgroup::Conformal { 0.0 } else { 1.0 };
                let a = t.sq() + r.sq() + one;
                let b = r * t * 2.0;
                let det = a.sq() - b.sq();
                if det.v == 0.0 {
                    return Err(Error::domain(format!("inverse chart map singular at (t, r) = ({}, {})", t.v, r.v)));
                }
                let m = r.powf(p)?.div_checked(det)?;
                (m * (a * g - b * h), m * (a * h - b * g) + (u * p).div_checked(r)?)
            }
        };
        if ut.v.is_finite() && ur.v.is_finite() {
            Ok((ut, ur))
        } else {
            Err(Error::domain(format!("inverse chart map not finite at (t, r) = ({}, {})", t.v, r.v)))
        }
    }

    /// `(G, H)` of a solution as functions of `(x, v)` near the image of
    /// `(t, r)`, with partials obtained through the chain rule.
    pub fn chart_jet(&self, s: &Jet2Sample) -> Result<ChartJet> {
        let first = |v, da, db| Jet2 { v, da, db, ..Jet2::default() };
        let t = Jet2::var_a(s.t);
        let r = Jet2::var_b(s.r);
        let u = first(s.u, s.u_t, s.u_r);
        let ut = first(s.u_t, s.u_tt, s.u_tr);
        let ur = first(s.u_r, s.u_tr, s.u_rr);
        let [x, v, g, h] = self.map_jets(t, r, u, ut, ur)?;
        let det = x.da * v.db - x.db * v.da;
        let scale = (x.da.abs() + x.db.abs()) * (v.da.abs() + v.db.abs());
        if !(det.abs() > 1e-10 * scale) {
            return Err(Error::domain(format!(
                "(t, r) -> (x, v) not invertible at ({}, {}) for this solution",
                s.t, s.r
            )));
        }
        // d/dx = ( v_r d/dt - v_t d/dr)/det, d/dv = (-x_r d/dt + x_t d/dr)/det
        let dx = |f: &Jet2| (v.db * f.da - v.da * f.db) / det;
        let dv = |f: &Jet2| (-x.db * f.da + x.da * f.db) / det;
        Ok(ChartJet { x: x.v, v: v.v, g: g.v, g_x: dx(&g), g_v: dv(&g), h: h.v, h_x: dx(&h), h_v: dv(&h) })
    }

    /// Relative residuals of the resolving system at a point.
    pub fn system_residual(&self, j: &ChartJet) -> Result<SystemResidual> {
        let p = self.params.p();
        let n = self.params.nf();
        let k = self.params.kf();
        let kvq = k * crate::params::rpow(j.v, self.params.q)?;
        let res = match self.subgroup {
            Subgroup::Scaling => SystemResidual {
                eq1: relative(&[(p - 1.0) * j.g, -j.x * j.g_x, (j.h - p * j.v) * j.g_v, -j.h_x, -j.g * j.h_v]),
                eq2: relative(&[j.g_x, j.g * j.g_v, -(p + n - 2.0) * j.h, j.x * j.h_x, -(j.h - p * j.v) * j.h_v, -kvq]),
            },
            Subgroup::Translation => {
                if j.x == 0.0 {
                    return Err(Error::domain("translation system singular at x = 0"));
                }
                SystemResidual {
                    eq1: relative(&[j.g_x, j.h * j.g_v, -j.g * j.h_v]),
                    eq2: relative(&[j.g * j.g_v, -j.h * j.h_v, -j.h_x, -(n - 1.0) * j.h / j.x, -kvq]),
                }
            }
            Subgroup::Conformal | Subgroup::TransInversion => {
                let f = self.subgroup.conformal_factor(Jet2::constant(j.x)).v;
                if f == 0.0 {
                    return Err(Error::domain("conformal system singular at x = 0"));
                }
                SystemResidual {
                    eq1: relative(&[f * j.g_x, j.g * j.h_v, -j.h * j.g_v]),
                    eq2: relative(&[j.g * j.g_v / f, -j.h * j.h_v / f, j.h_x, p * (p + 1.0) * j.v, -kvq]),
                }
            }
        };
        if res.eq1.is_finite() && res.eq2.is_finite() {
            Ok(res)
        } else {
            Err(Error::domain(format!("non-finite residual at (x, v) = ({}, {})", j.x, j.v)))
        }
    }

    /// Pushes a solution through the chart at `(t, r)` and evaluates the system.
    pub fn solution_residual<F: RadialField>(&self, field: &F, t: f64, r: f64) -> Result<SystemResidual> {
        self.system_residual(&self.chart_jet(&field.sample(t, r)?)?)
    }
}

/// Evenly spaced admissible grid, excluding a margin around `x = 0` and,
/// where relevant, `x = +-1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x: (f64, f64),
    pub v: (f64, f64),
    pub nx: usize,
    pub nv: usize,
    pub margin: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { x: (0.25, 4.0), v: (0.25, 4.0), nx: 20, nv: 20, margin: 0.05 }
    }
}

impl GridSpec {
    pub fn points(&self, avoid: &[f64]) -> Vec<(f64, f64)> {
        let lin = |(a, b): (f64, f64), m: usize, i: usize| if m <= 1 { a } else { a + (b - a) * i as f64 / (m - 1) as f64 };
        let mut out = Vec::with_capacity(self.nx * self.nv);
        for i in 0..self.nx {
            let x = lin(self.x, self.nx, i);
            if avoid.iter().any(|s| (x - s).abs() < self.margin) {
                continue;
            }
            for j in 0..self.nv {
                out.push((x, lin(self.v, self.nv, j)));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvingReport {
    pub solution: GhId,
    pub chart: Subgroup,
    pub branch: crate::params::Sign,
    pub points: usize,
    /// Points skipped because the closed form is not real there.
    pub skipped: usize,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Evaluates the chart's system on a GH solution at the given `(x, v)` points.
pub fn resolving_residual(chart: &FoliationChart, gh: &GhSolution, points: &[(f64, f64)], tol: f64) -> Result<ResolvingReport> {
    gh.check_chart(chart)?;
    let mut max_res: f64 = 0.0;
    let (mut used, mut skipped) = (0, 0);
    for &(x, v) in points {
        match gh.chart_jet(x, v).and_then(|j| chart.system_residual(&j)) {
            Ok(r) => {
                max_res = max_res.max(r.max());
                used += 1;
            }
            Err(Error::Domain(_)) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(ResolvingReport {
        solution: gh.id,
        chart: chart.subgroup,
        branch: gh.branch,
        points: used,
        skipped,
        max_residual: max_res,
        tol,
        pass: used > 0 && max_res < tol,
    })
}

#[cfg(test)]
mod tests;
