//! Closed-form exact solutions of the radial wave equation.
//!
//! Each [`SolutionFamily`] is evaluated on second-order jets so that `u` and
//! all partials through second order are exact to rounding.

mod energy;
mod instances;
mod singular;
mod table;

pub use energy::{Convergence, EnergyReport, EnergyValue};
pub use instances::{standard_instances, SampleRegion, StandardInstance};
pub use singular::{Component, Half, SingularSet};
pub use table::{family_table, FamilyInfo};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Jet2Sample, RadialField};
use crate::jet::Jet2;
use crate::params::{rpow, ModelParams, PowerKind, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyId {
    U1,
    U2,
    U3,
    U4,
    U5,
    U6,
    U7,
    U8,
    U9,
    IV1,
    IV2,
    IV3,
    IV4,
    IV5,
    IV6,
    /// The static conformal monopole with the `2 sqrt(k)` constant; it does
    /// not solve the equation and exists to demonstrate that.
    #[serde(rename = "invervinvdilsol-as-printed")]
    IV6AsPrinted,
}

impl FamilyId {
    /// The fifteen genuine families.
    pub const ALL: [FamilyId; 15] = [
        FamilyId::U1,
        FamilyId::U2,
        FamilyId::U3,
        FamilyId::U4,
        FamilyId::U5,
        FamilyId::U6,
        FamilyId::U7,
        FamilyId::U8,
        FamilyId::U9,
        FamilyId::IV1,
        FamilyId::IV2,
        FamilyId::IV3,
        FamilyId::IV4,
        FamilyId::IV5,
        FamilyId::IV6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::U1 => "U1",
            FamilyId::U2 => "U2",
            FamilyId::U3 => "U3",
            FamilyId::U4 => "U4",
            FamilyId::U5 => "U5",
            FamilyId::U6 => "U6",
            FamilyId::U7 => "U7",
            FamilyId::U8 => "U8",
            FamilyId::U9 => "U9",
            FamilyId::IV1 => "IV1",
            FamilyId::IV2 => "IV2",
            FamilyId::IV3 => "IV3",
            FamilyId::IV4 => "IV4",
            FamilyId::IV5 => "IV5",
            FamilyId::IV6 => "IV6",
            FamilyId::IV6AsPrinted => "invervinvdilsol-as-printed",
        }
    }

    pub fn parse(s: &str) -> Result<FamilyId> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("invervinvdilsol-as-printed") || t.eq_ignore_ascii_case("IV6-as-printed") {
            return Ok(FamilyId::IV6AsPrinted);
        }
        FamilyId::ALL
            .iter()
            .copied()
            .find(|f| f.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }

    /// The special power the family lives at, if any.
    pub fn power(self) -> Option<PowerKind> {
        use FamilyId::*;
        match self {
            U1 | U2 => None,
            U3 | IV4 => Some(PowerKind::InverseDilation),
            U4 => Some(PowerKind::StaticLine),
            U5 => Some(PowerKind::MinusThree),
            U6 | U7 | U8 | U9 | IV6 | IV6AsPrinted => Some(PowerKind::Conformal),
            IV1 | IV2 | IV3 | IV5 => Some(PowerKind::Critical),
        }
    }

    pub fn is_static(self) -> bool {
        use FamilyId::*;
        matches!(self, U3 | IV3 | IV4 | IV5 | IV6 | IV6AsPrinted)
    }
}

impl std::fmt::Display for FamilyId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Free constants of a family. Unused fields are ignored by families that
/// do not carry them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Constants {
    pub c: f64,
    pub c_tilde: f64,
    pub branch: Sign,
    /// Second independent sign (the outer sign of U5).
    pub branch2: Sign,
    /// Global time translation `t -> t + t_shift`.
    pub t_shift: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants { c: 0.0, c_tilde: 0.0, branch: Sign::Plus, branch2: Sign::Plus, t_shift: 0.0 }
    }
}

impl Constants {
    pub fn with_c(c: f64) -> Self {
        Constants { c, ..Default::default() }
    }

    pub fn branch(mut self, s: Sign) -> Self {
        self.branch = s;
        self
    }

    pub fn branch2(mut self, s: Sign) -> Self {
        self.branch2 = s;
        self
    }

    pub fn c_tilde(mut self, v: f64) -> Self {
        self.c_tilde = v;
        self
    }

    pub fn shifted(mut self, dt: f64) -> Self {
        self.t_shift = dt;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolutionFamily {
    pub id: FamilyId,
    pub params: ModelParams,
    pub constants: Constants,
    /// Relative proximity guard to the singular set; evaluation closer than
    /// `guard * max(1, |t| + r)` is a domain error. Zero disables it.
    pub guard: f64,
}

pub const DEFAULT_GUARD: f64 = 1e-8;

impl SolutionFamily {
    pub fn new(id: FamilyId, params: ModelParams, constants: Constants) -> Result<Self> {
        let fam = SolutionFamily { id, params, constants, guard: DEFAULT_GUARD };
        fam.check()?;
        Ok(fam)
    }

    pub fn with_guard(mut self, guard: f64) -> Self {
        self.guard = guard;
        self
    }

    fn check(&self) -> Result<()> {
        use FamilyId::*;
        let pm = self.params;
        let (n, q, k) = (pm.nf(), pm.q, pm.kf());
        if let Some(kind) = self.id.power() {
            pm.require(kind)?;
        }
        let c = self.constants.c;
        let bad = |m: &str| Err(Error::unsupported(format!("{}: {m}", self.id)));
        if !(c.is_finite() && self.constants.c_tilde.is_finite() && self.constants.t_shift.is_finite()) {
            return Err(Error::InvalidParams("constants must be finite".into()));
        }
        match self.id {
            U1 => {
                if (q + 1.0).abs() < 1e-12 {
                    return bad("requires q != -1");
                }
                if k / (q + 1.0) <= 0.0 {
                    return bad("requires k/(q+1) > 0 for a real solution");
                }
            }
            U2 => {
                let d = q * (1.0 - n) + n + 1.0;
                if d.abs() < 1e-12 {
                    return bad("requires q != (n+1)/(n-1)");
                }
            }
            U3 | U4 | IV4 if pm.n == 3 => return bad("undefined for n = 3"),
            U3 if k > 0.0 => return bad("requires k = -1"),
            U5 if k > 0.0 => return bad("requires k = -1"),
            U6 if k < 0.0 => return bad("requires k = +1"),
            U8 | U9 if c == 0.0 => return bad("requires c != 0"),
            IV6AsPrinted if k < 0.0 => return bad("requires k = +1"),
            _ => {}
        }
        // prefactors must be real
        self.prefactor().map(|_| ()).map_err(|e| match e {
            Error::Domain(m) => Error::unsupported(format!("{}: {m}", self.id)),
            other => other,
        })
    }

    /// Constant multiplier of the static and invariant families.
    fn prefactor(&self) -> Result<f64> {
        use FamilyId::*;
        let pm = self.params;
        let (n, k) = (pm.nf(), pm.kf());
        let s = self.constants.branch.value();
        match self.id {
            IV1 | IV2 => rpow(n * (n - 2.0) / (4.0 * k), (n - 2.0) / 4.0),
            IV3 => rpow(s * n * (n - 2.0) / k, (n - 2.0) / 4.0),
            IV4 => {
                let m = (n - 2.0) / (n - 3.0);
                let b2 = -k * (n - 3.0).powi(2) / (n - 2.0).powi(3);
                if b2 > 0.0 {
                    rpow(s * b2.sqrt(), m)
                } else {
                    rpow(b2, m / 2.0)
                }
            }
            IV5 => rpow((n - 2.0).powi(2) / (4.0 * k), (n - 2.0) / 4.0),
            IV6 => rpow((n - 1.0) * (n - 3.0) / (4.0 * k), (n - 1.0) / 4.0),
            IV6AsPrinted => rpow((n - 1.0) * (n - 3.0) / (2.0 * k.sqrt()), (n - 1.0) / 4.0),
            _ => Ok(1.0),
        }
    }

    /// `base^e` for the closed forms. When `q` is not an integer the value of
    /// `u^q` follows the real convention, which agrees with the closed form's
    /// own power only for a positive base; other bases are rejected.
    fn base_pow(&self, base: Jet2, e: f64) -> Result<Jet2> {
        if self.params.q.fract() != 0.0 && base.v <= 0.0 {
            return Err(Error::domain(format!("{} needs a positive base, got {}", self.id, base.v)));
        }
        base.powf(e)
    }

    fn formula(&self, t: Jet2, r: Jet2) -> Result<Jet2> {
        use FamilyId::*;
        let pm = self.params;
        let (n, q, k) = (pm.nf(), pm.q, pm.kf());
        let Constants { c, c_tilde: ct, branch, branch2, t_shift } = self.constants;
        let s = branch.value();
        let tt = t + t_shift;
        let conf = 4.0 * k / (n - 1.0).powi(2);
        match self.id {
            U1 => {
                let a = s * (k / (2.0 * (q + 1.0))).sqrt() * (q - 1.0);
                self.base_pow((tt + c) * a, 2.0 / (1.0 - q))
            }
            U2 => {
                let coef = k * (q - 1.0).powi(2) / (2.0 * (q * (1.0 - n) + n + 1.0));
                self.base_pow(((tt + c).sq() - r.sq()) * coef, 1.0 / (1.0 - q))
            }
            U3 => {
                let b = s * (n - 3.0) / (n - 2.0).powf(1.5);
                let base = r * b + r.powf(3.0 - n)? * c;
                self.base_pow(base, (n - 2.0) / (n - 3.0))
            }
            U4 => {
                let coef = k / ((n - 2.0) * (n - 3.0));
                self.base_pow((tt * s - r + c) * r * coef, 2.0 - n)
            }
            U5 => {
                let inner = tt * (tt * c + 1.0) * (2.0 * s);
                Ok(inner.sqrt()? * branch2.value())
            }
            U6 => {
                let a = (k / (n * n - 1.0)).sqrt();
                self.base_pow(tt * (2.0 * s * a) + (tt.sq() - r.sq()) * c, (1.0 - n) / 2.0)
            }
            U7 => {
                let w = tt.sq() - r.sq();
                let f = (r.sq() - tt.sq()) * (tt * (2.0 * c) + w * (c * c) + 1.0);
                self.base_pow(f * conf, (1.0 - n) / 4.0)
            }
            U8 => {
                let w = tt.sq() - r.sq();
                let inner = w * (s * c) + 1.0 / c;
                let br = tt.sq() - inner.sq() * (0.25 * s);
                self.base_pow(br * conf, (1.0 - n) / 4.0)
            }
            U9 => {
                let w = tt.sq() - r.sq();
                let qq = tt * (2.0 * ct) + w * (ct * ct) + 1.0;
                let x = w * c - qq * (s / c);
                let br = r.sq() - x.sq() * (0.25 * s);
                self.base_pow(br * conf, (1.0 - n) / 4.0)
            }
            IV1 => Ok(tt.powf(1.0 - n / 2.0)? * self.prefactor()?),
            IV2 => Ok((r.sq() - tt.sq()).powf((2.0 - n) / 4.0)? * self.prefactor()?),
            IV3 => Ok((r.sq() + s).powf(1.0 - n / 2.0)? * self.prefactor()?),
            IV4 => Ok(r.powf((n - 2.0) / (n - 3.0))? * self.prefactor()?),
            IV5 => Ok(r.powf(1.0 - n / 2.0)? * self.prefactor()?),
            IV6 | IV6AsPrinted => Ok(r.powf((1.0 - n) / 2.0)? * self.prefactor()?),
        }
    }

    /// `u` and its partials through second order at `(t, r)`.
    pub fn evaluate(&self, t: f64, r: f64) -> Result<Jet2Sample> {
        self.sample(t, r)
    }

    pub fn singular_set(&self) -> SingularSet {
        use FamilyId::*;
        let pm = self.params;
        let n = pm.nf();
        let Constants { c, c_tilde: ct, branch, t_shift, .. } = self.constants;
        let s = branch.value();
        let sh = |t0: f64| t0 - t_shift;
        let cone = |t0: f64| Component::LightCone { t0: sh(t0), half: Half::Both };
        let mut out = vec![];
        match self.id {
            U1 => out.push(Component::Line { t0: sh(-c) }),
            U2 => out.push(cone(-c)),
            U3 => {
                let b = s * (n - 3.0) / (n - 2.0).powf(1.5);
                let m = (n - 2.0) / (n - 3.0);
                if c != 0.0 || m.fract() != 0.0 {
                    out.push(Component::Axis);
                }
                let r0n = -c / b;
                if r0n > 0.0 {
                    out.push(Component::Radius { r0: r0n.powf(1.0 / (n - 2.0)) });
                }
            }
            U4 => {
                out.push(Component::Axis);
                // zero of c + s t - r
                let half = if s > 0.0 { Half::Future } else { Half::Past };
                out.push(Component::LightCone { t0: sh(-s * c), half });
            }
            U5 => {
                out.push(Component::Line { t0: sh(0.0) });
                if c != 0.0 {
                    out.push(Component::Line { t0: sh(-1.0 / c) });
                }
            }
            U6 => {
                let a = (pm.kf() / (n * n - 1.0)).sqrt();
                if c == 0.0 {
                    out.push(Component::Line { t0: sh(0.0) });
                } else {
                    out.push(Component::Hyperbola { t_center: sh(-s * a / c), t_star: a / c.abs() });
                }
            }
            U7 => {
                out.push(cone(0.0));
                if c != 0.0 {
                    out.push(cone(-1.0 / c));
                }
            }
            U8 => {
                if s > 0.0 {
                    out.push(cone(1.0 / c));
                    out.push(cone(-1.0 / c));
                }
            }
            U9 => {
                if s > 0.0 {
                    if c - ct != 0.0 {
                        out.push(cone(1.0 / (c - ct)));
                    }
                    if c + ct != 0.0 {
                        out.push(cone(-1.0 / (c + ct)));
                    }
                }
            }
            IV1 => out.push(Component::Line { t0: sh(0.0) }),
            IV2 => out.push(cone(0.0)),
            IV3 => {
                if s < 0.0 {
                    out.push(Component::Radius { r0: 1.0 });
                }
            }
            IV4 => {
                if ((n - 2.0) / (n - 3.0)).fract() != 0.0 {
                    out.push(Component::Axis);
                }
            }
            IV5 => out.push(Component::Axis),
            IV6 | IV6AsPrinted => {
                if pm.n != 3 {
                    out.push(Component::Axis);
                }
            }
        }
        SingularSet { components: out }
    }

    /// Asymptotic exponents `(a_inf, a_0)` with `u ~ r^a` as `r -> inf` and
    /// `r -> 0` on a time slice; `a_0 = 0` marks a regular axis.
    pub fn asymptotic_exponents(&self) -> (f64, f64) {
        use FamilyId::*;
        let pm = self.params;
        let n = pm.nf();
        let Constants { c, c_tilde: ct, .. } = self.constants;
        match self.id {
            U1 | U5 | IV1 => (0.0, 0.0),
            U2 => (pm.p(), 0.0),
            U3 => {
                let m = (n - 2.0) / (n - 3.0);
                (m, if c != 0.0 { -(n - 2.0) } else { m })
            }
            U4 => (2.0 * (2.0 - n), 2.0 - n),
            U6 => (if c != 0.0 { 1.0 - n } else { 0.0 }, 0.0),
            U7 => (if c != 0.0 { 1.0 - n } else { (1.0 - n) / 2.0 }, 0.0),
            U8 => (1.0 - n, 0.0),
            U9 => (if c * c != ct * ct { 1.0 - n } else { (1.0 - n) / 2.0 }, 0.0),
            IV2 => ((2.0 - n) / 2.0, 0.0),
            IV3 => (2.0 - n, 0.0),
            IV4 => {
                let m = (n - 2.0) / (n - 3.0);
                (m, m)
            }
            IV5 => (1.0 - n / 2.0, 1.0 - n / 2.0),
            IV6 | IV6AsPrinted => ((1.0 - n) / 2.0, (1.0 - n) / 2.0),
        }
    }

    /// Whether the family vanishes identically for these parameters.
    pub fn is_zero(&self) -> bool {
        matches!(self.prefactor(), Ok(a) if a == 0.0)
    }

    /// Whether the energy integral converges at infinity and at the axis,
    /// as `(tail, axis)`.
    pub fn energy_class(&self) -> (Convergence, Convergence) {
        energy::energy_class(self)
    }

    pub fn energy(&self, t0: f64, r_max: f64, max_intervals: usize) -> Result<EnergyReport> {
        energy::energy(self, t0, r_max, max_intervals)
    }
}

impl RadialField for SolutionFamily {
    fn params(&self) -> ModelParams {
        self.params
    }

    fn jet(&self, t: Jet2, r: Jet2) -> Result<Jet2> {
        if self.guard > 0.0 {
            let set = self.singular_set();
            if !set.is_empty() {
                let d = set.distance(t.v, r.v);
                if d < self.guard * (t.v.abs() + r.v.abs()).max(1.0) {
                    return Err(Error::domain(format!(
                        "{} evaluated within {d:e} of its singular set at (t, r) = ({}, {})",
                        self.id, t.v, r.v
                    )));
                }
            }
        }
        self.formula(t, r)?.finite(self.id.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleResidual {
    pub t: f64,
    pub r: f64,
    pub residual: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub id: FamilyId,
    pub params: ModelParams,
    pub constants: Constants,
    pub samples: Vec<SampleResidual>,
    pub max_residual: f64,
    pub failed_samples: usize,
    pub tol: f64,
    pub pass: bool,
}

/// Relative PDE residual at each sample; per-sample domain errors are
/// recorded, and a report with any errored sample does not pass.
pub fn verify_residual<F: RadialField>(
    id: FamilyId,
    field: &F,
    constants: Constants,
    samples: &[(f64, f64)],
    tol: f64,
) -> ResidualReport {
    let params = field.params();
    let mut max_residual: f64 = 0.0;
    let mut failed = 0;
    let samples: Vec<SampleResidual> = samples
        .iter()
        .map(|&(t, r)| match field.relative_residual(t, r) {
            Ok(res) => {
                max_residual = max_residual.max(if res.is_nan() { f64::INFINITY } else { res });
                SampleResidual { t, r, residual: Some(res), error: None }
            }
            Err(e) => {
                failed += 1;
                SampleResidual { t, r, residual: None, error: Some(e.to_string()) }
            }
        })
        .collect();
    let pass = failed == 0 && !samples.is_empty() && max_residual < tol;
    ResidualReport { id, params, constants, samples, max_residual, failed_samples: failed, tol, pass }
}

impl SolutionFamily {
    pub fn verify_residual(&self, samples: &[(f64, f64)], tol: f64) -> ResidualReport {
        verify_residual(self.id, self, self.constants, samples, tol)
    }

    /// Draws `count` points from `region` where the family evaluates and lies at
    /// least `margin` from its singular set.
    pub fn interior_points(&self, region: &SampleRegion, count: usize, margin: f64, seed: u64) -> Result<Vec<(f64, f64)>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let set = self.singular_set();
        let mut out = Vec::with_capacity(count);
        let mut tries = 0;
        while out.len() < count {
            tries += 1;
            if tries > 200 * count + 1000 {
                return Err(Error::domain(format!(
                    "{}: only {} admissible points found in {region:?}",
                    self.id,
                    out.len()
                )));
            }
            let t = rng.gen_range(region.t.0..=region.t.1);
            let r = rng.gen_range(region.r.0..=region.r.1);
            if r <= 0.0 || set.distance(t, r) < margin {
                continue;
            }
            if self.evaluate(t, r).is_ok() {
                out.push((t, r));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests;
