use serde::{Deserialize, Serialize};

use super::{resolving_residual, FoliationChart, GhId, GhSolution, Subgroup};
use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::params::{ModelParams, PowerKind, Sign};

/// Potentials introduced through conservation laws of the resolving systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialId {
    /// `Psi` on the translation chart, inducing P-trans.
    PsiTrans,
    /// `Phi` on the translation chart, reproducing S1.
    PhiTrans,
    /// `Psi` on the conformal chart, inducing P-inver.
    PsiInver,
    /// `Phi` on the conformal chart, reproducing C1.
    PhiInver,
    /// `Psi` on the scaling chart at the conformal power, inducing P-scal.
    PsiScal,
    PsiTi1,
    PsiTi2,
}

impl PotentialId {
    pub const ALL: [PotentialId; 7] = [
        PotentialId::PsiTrans,
        PotentialId::PhiTrans,
        PotentialId::PsiInver,
        PotentialId::PhiInver,
        PotentialId::PsiScal,
        PotentialId::PsiTi1,
        PotentialId::PsiTi2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PotentialId::PsiTrans => "psi-trans",
            PotentialId::PhiTrans => "phi-trans",
            PotentialId::PsiInver => "psi-inver",
            PotentialId::PhiInver => "phi-inver",
            PotentialId::PsiScal => "psi-scal",
            PotentialId::PsiTi1 => "psi-ti1",
            PotentialId::PsiTi2 => "psi-ti2",
        }
    }

    pub fn solution(self) -> GhId {
        match self {
            PotentialId::PsiTrans => GhId::PTrans,
            PotentialId::PhiTrans => GhId::S1,
            PotentialId::PsiInver => GhId::PInver,
            PotentialId::PhiInver => GhId::C1,
            PotentialId::PsiScal => GhId::PScal,
            PotentialId::PsiTi1 => GhId::PTi1,
            PotentialId::PsiTi2 => GhId::PTi2,
        }
    }

    pub fn chart(self) -> Subgroup {
        match self {
            PotentialId::PsiTrans | PotentialId::PhiTrans => Subgroup::Translation,
            PotentialId::PsiInver | PotentialId::PhiInver => Subgroup::Conformal,
            PotentialId::PsiScal => Subgroup::Scaling,
            PotentialId::PsiTi1 | PotentialId::PsiTi2 => Subgroup::TransInversion,
        }
    }

    fn is_phi(self) -> bool {
        matches!(self, PotentialId::PhiTrans | PotentialId::PhiInver)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialSolution {
    pub id: PotentialId,
    pub solution: GhSolution,
}

impl PotentialSolution {
    pub fn new(id: PotentialId, params: ModelParams, branch: Sign) -> Result<Self> {
        if id == PotentialId::PsiScal && !params.is(PowerKind::Conformal) {
            return Err(Error::unsupported(
                "the scaling-chart conservation law holds only when 2p + n - 1 = 0",
            ));
        }
        let solution = GhSolution::new(id.solution(), params, branch)?;
        Ok(PotentialSolution { id, solution })
    }

    pub fn chart(&self) -> Result<FoliationChart> {
        FoliationChart::new(self.id.chart(), self.solution.params)
    }

    /// The closed-form potential on jets `a = x`, `b = v`.
    pub fn potential(&self, x: Jet2, v: Jet2) -> Result<Jet2> {
        let pm = &self.solution.params;
        let (n, q, k, p) = (pm.nf(), pm.q, pm.kf(), pm.p());
        let s = self.solution.branch.value();
        let out = match self.id {
            PotentialId::PsiTrans => {
                let d = n * (1.0 - q) + 1.0 + q;
                x.powi(pm.n as i32)? * v.powf(q + 1.0)? * (k / (n * d))
            }
            PotentialId::PhiTrans => v.powf((1.0 - q) / 2.0)? * (s * (2.0 * (q + 1.0) / k).sqrt() / (q - 1.0)),
            PotentialId::PsiInver | PotentialId::PsiTi1 => x * v.powf(q + 1.0)? * k - x * v.sq() * (p * p),
            PotentialId::PhiInver => {
                let c = (k * (n - 1.0) / (n + 1.0)).sqrt();
                v.powf(-2.0 / (n - 1.0))?.div_checked(x)? * (-s * (n - 1.0) / (2.0 * c))
            }
            PotentialId::PsiScal => x * v.powf(q + 1.0)? * (-k / 2.0 * (q - 1.0) / (q + 1.0)),
            PotentialId::PsiTi2 => x * v.powf(q + 1.0)? * (2.0 * k / (q + 1.0)) - x * v.sq() * (p * p),
        };
        out.finite("potential")
    }

    /// The defining gradient `(d/dx, d/dv)` of the potential in terms of `(G, H)`.
    pub fn relations(&self, x: Jet2, v: Jet2, g: Jet2, h: Jet2) -> Result<(Jet2, Jet2)> {
        let pm = &self.solution.params;
        let (n, q, k, p) = (pm.nf(), pm.q, pm.kf(), pm.p());
        let vq = v.powf(q)?;
        let sub = self.id.chart();
        let out = match (sub, self.id.is_phi()) {
            (Subgroup::Translation, true) => (h.div_checked(g)?, -g.recip()?),
            (Subgroup::Translation, false) => {
                let xn1 = x.powi(pm.n as i32 - 1)?;
                (xn1 * (g.sq() - h.sq()) * 0.5, xn1 * h + x * xn1 * vq * (k / n))
            }
            (Subgroup::Conformal | Subgroup::TransInversion, true) => {
                let f = sub.conformal_factor(x);
                (h.div_checked(f * g)?, g.recip()?)
            }
            (Subgroup::Conformal | Subgroup::TransInversion, false) => {
                let f = sub.conformal_factor(x);
                ((g.sq() - h.sq()).div_checked(f)?, h * (-2.0) - x * (v * (p * (p + 1.0)) - vq * k) * 2.0)
            }
            (Subgroup::Scaling, _) => (
                (h.sq() - g.sq()) * 0.5 - v * h * p + vq * v * (k / (q + 1.0)),
                g + x * h,
            ),
        };
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialReport {
    pub potential: PotentialId,
    pub solution: GhId,
    pub chart: Subgroup,
    pub branch: Sign,
    pub points: usize,
    pub skipped: usize,
    /// Mismatch between the potential's gradient and its defining relations.
    pub max_gradient_mismatch: f64,
    /// Mixed-partial defect of the relation pair.
    pub max_curl: f64,
    pub max_resolving_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

pub fn potential_check(pot: &PotentialSolution, points: &[(f64, f64)], tol: f64) -> Result<PotentialReport> {
    let chart = pot.chart()?;
    let (mut grad, mut curl) = (0.0f64, 0.0f64);
    let (mut used, mut skipped) = (0usize, 0usize);
    let mut ok_points = Vec::new();
    for &(x0, v0) in points {
        let (x, v) = (Jet2::var_a(x0), Jet2::var_b(v0));
        let step = (|| -> Result<(f64, f64)> {
            let (g, h) = pot.solution.jets(x, v)?;
            let phi = pot.potential(x, v)?;
            let (rx, rv) = pot.relations(x, v, g, h)?;
            let gm = rel(phi.da, rx.v).max(rel(phi.db, rv.v));
            let cm = rel(rx.db, rv.da);
            Ok((gm, cm))
        })();
        match step {
            Ok((gm, cm)) => {
                grad = grad.max(gm);
                curl = curl.max(cm);
                used += 1;
                ok_points.push((x0, v0));
            }
            Err(Error::Domain(_)) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let res = resolving_residual(&chart, &pot.solution, &ok_points, tol)?;
    Ok(PotentialReport {
        potential: pot.id,
        solution: pot.solution.id,
        chart: chart.subgroup,
        branch: pot.solution.branch,
        points: used,
        skipped,
        max_gradient_mismatch: grad,
        max_curl: curl,
        max_resolving_residual: res.max_residual,
        tol,
        pass: used > 0 && grad < tol && curl < tol && res.pass,
    })
}
