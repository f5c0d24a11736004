//! One-parameter group actions on solutions, evaluated on jets so that the
//! transformed field can be checked against the PDE like any other.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::RadialField;
use crate::jet::Jet2;
use crate::params::{ModelParams, PowerKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Translation,
    Scaling,
    Inversion,
    Involution,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub kind: GroupKind,
    /// Ignored for the involution.
    pub lambda: f64,
}

impl GroupElement {
    pub fn translation(lambda: f64) -> Self {
        GroupElement { kind: GroupKind::Translation, lambda }
    }
    pub fn scaling(lambda: f64) -> Self {
        GroupElement { kind: GroupKind::Scaling, lambda }
    }
    pub fn inversion(lambda: f64) -> Self {
        GroupElement { kind: GroupKind::Inversion, lambda }
    }
    pub fn involution() -> Self {
        GroupElement { kind: GroupKind::Involution, lambda: 0.0 }
    }

    /// Checks that the element acts on solutions with these parameters.
    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        if !self.lambda.is_finite() {
            return Err(Error::InvalidParams("group parameter must be finite".into()));
        }
        match self.kind {
            GroupKind::Translation => Ok(()),
            GroupKind::Scaling if self.lambda > 0.0 => Ok(()),
            GroupKind::Scaling => Err(Error::InvalidParams(format!("scaling needs lambda > 0, got {}", self.lambda))),
            GroupKind::Inversion | GroupKind::Involution => params.require(PowerKind::Conformal),
        }
    }
}

/// `g · u` as a new radial field.
#[derive(Debug, Clone)]
pub struct Transformed<F> {
    pub element: GroupElement,
    pub inner: F,
    params: ModelParams,
}

impl<F: RadialField> Transformed<F> {
    pub fn new(element: GroupElement, inner: F) -> Result<Self> {
        let params = inner.params();
        element.validate(&params)?;
        Ok(Transformed { element, inner, params })
    }
}

impl<F: RadialField> RadialField for Transformed<F> {
    fn params(&self) -> ModelParams {
        self.params
    }

    fn jet(&self, t: Jet2, r: Jet2) -> Result<Jet2> {
        let p = self.params.p();
        let lam = self.element.lambda;
        match self.element.kind {
            GroupKind::Translation => self.inner.jet(t + lam, r),
            GroupKind::Scaling => Ok(self.inner.jet(t * lam, r * lam)? * lam.powf(-p)),
            GroupKind::Inversion => {
                let w = t.sq() - r.sq();
                let d = t * (2.0 * lam) + w * (lam * lam) + 1.0;
                if d.v <= 0.0 {
                    return Err(Error::domain(format!("inversion leaves the chart: denominator {}", d.v)));
                }
                let inv = d.recip()?;
                let u = self.inner.jet((t + w * lam) * inv, r * inv)?;
                Ok(d.powf(p)? * u)
            }
            GroupKind::Involution => {
                let w = t.sq() - r.sq();
                if w.v <= 0.0 {
                    return Err(Error::domain(format!("involution needs t^2 > r^2, got t^2 - r^2 = {}", w.v)));
                }
                let inv = w.recip()?;
                let u = self.inner.jet(-t * inv, r * inv)?;
                Ok(w.powf(p)? * u)
            }
        }
    }
}

/// `(g · u)(t, r)`.
pub fn apply_group<F: RadialField>(g: GroupElement, field: F, t: f64, r: f64) -> Result<f64> {
    Transformed::new(g, field)?.value(t, r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantActionReport {
    pub lambda: f64,
    pub points: usize,
    pub max_deviation: f64,
    pub pass: bool,
}

/// `r = x/(xi^2 - 1)` and `t = xi r` from the invariant coordinates.
fn from_invariant(xi: f64, x: f64) -> Result<(f64, f64)> {
    let r = x / (xi * xi - 1.0);
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::domain(format!("(xi, x) = ({xi}, {x}) maps to r = {r}")));
    }
    Ok((xi * r, r))
}

/// `v(xi, x) = r^{-p} u(t, r)` with `xi = t/r`, `x = (t^2 - r^2)/r`.
pub fn invariant_form<F: RadialField>(field: &F, xi: f64, x: f64) -> Result<f64> {
    let (t, r) = from_invariant(xi, x)?;
    Ok(r.powf(-field.params().p()) * field.value(t, r)?)
}

/// Compares the inversion acting on `u` with the shift `xi -> xi + lambda x`
/// acting on the invariant form, at the given `(xi, x)` points.
pub fn check_inversion_invariant_action<F: RadialField>(
    field: &F,
    lambda: f64,
    points: &[(f64, f64)],
    tol: f64,
) -> Result<InvariantActionReport> {
    let g = Transformed::new(GroupElement::inversion(lambda), field)?;
    let p = field.params().p();
    let mut max_dev: f64 = 0.0;
    for &(xi, x) in points {
        let (t, r) = from_invariant(xi, x)?;
        let direct = r.powf(-p) * g.value(t, r)?;
        let shifted = invariant_form(field, xi + lambda * x, x)?;
        max_dev = max_dev.max((direct - shifted).abs() / direct.abs().max(1.0));
    }
    Ok(InvariantActionReport { lambda, points: points.len(), max_deviation: max_dev, pass: max_dev < tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{standard_instances, Constants, FamilyId, SolutionFamily};
    use crate::params::Sign;

    fn u6(c: f64, s: Sign) -> SolutionFamily {
        let params = ModelParams::at(3, PowerKind::Conformal, Sign::Plus).unwrap();
        SolutionFamily::new(FamilyId::U6, params, Constants::with_c(c).branch(s)).unwrap()
    }

    /// Points `(t, r)` with `t > r > 0`, away from the light cone.
    fn timelike_points() -> Vec<(f64, f64)> {
        (0..20).map(|i| {
            let r = 0.3 + 0.05 * i as f64;
            (r + 0.4 + 0.03 * i as f64, r)
        }).collect()
    }

    #[test]
    fn translation_shifts_u1() {
        let params = ModelParams::new(3, 3.0, Sign::Plus).unwrap();
        let base = SolutionFamily::new(FamilyId::U1, params, Constants::with_c(0.0)).unwrap();
        let shifted = SolutionFamily::new(FamilyId::U1, params, Constants::with_c(0.7)).unwrap();
        for (t, r) in [(0.5, 0.3), (1.2, 2.0)] {
            let a = apply_group(GroupElement::translation(0.7), base, t, r).unwrap();
            let b = shifted.value(t, r).unwrap();
            assert!((a - b).abs() < 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn scaled_catalog_solutions_stay_solutions() {
        for inst in standard_instances() {
            let fam = inst.family;
            let g = Transformed::new(GroupElement::scaling(2.0), &fam).unwrap();
            // Points of the scaled field correspond to region points divided by two.
            let pts = fam.interior_points(&inst.region, 10, 0.05, 1).unwrap();
            for (t, r) in pts {
                let res = g.relative_residual(t / 2.0, r / 2.0).unwrap();
                assert!(res < 1e-9, "{:?} at ({t}, {r}): {res}", fam.id);
            }
        }
    }

    #[test]
    fn scaling_composes() {
        let fam = u6(-1.0, Sign::Minus);
        let a = Transformed::new(GroupElement::scaling(1.5), Transformed::new(GroupElement::scaling(0.8), &fam).unwrap()).unwrap();
        let b = Transformed::new(GroupElement::scaling(1.2), &fam).unwrap();
        for (t, r) in [(2.0, 0.5), (3.0, 1.0)] {
            let (x, y) = (a.value(t, r).unwrap(), b.value(t, r).unwrap());
            assert!((x - y).abs() < 1e-13 * y.abs().max(1.0));
        }
    }

    #[test]
    fn inversion_needs_conformal_power() {
        let params = ModelParams::new(4, 3.0, Sign::Plus).unwrap();
        let fam = SolutionFamily::new(FamilyId::U1, params, Constants::with_c(0.0)).unwrap();
        assert!(matches!(Transformed::new(GroupElement::inversion(0.1), &fam), Err(Error::UnsupportedParams(_))));
        assert!(matches!(Transformed::new(GroupElement::scaling(-1.0), &fam), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn inversion_and_involution_map_u6_to_solutions() {
        for s in [Sign::Plus, Sign::Minus] {
            let fam = u6(0.5, s);
            for g in [GroupElement::inversion(0.1), GroupElement::inversion(-0.05), GroupElement::involution()] {
                let tf = Transformed::new(g, &fam).unwrap();
                let mut checked = 0;
                for (t, r) in timelike_points() {
                    match tf.relative_residual(t, r) {
                        Ok(res) => {
                            assert!(res < 1e-9, "{g:?} {s:?} ({t}, {r}): {res}");
                            checked += 1;
                        }
                        Err(Error::Domain(_)) => {}
                        Err(e) => panic!("{e}"),
                    }
                }
                assert!(checked >= 10, "{g:?}: only {checked} points");
            }
        }
    }

    /// Inversion moves U6 along its own family: `c -> c + 2 s a lambda`.
    #[test]
    fn inversion_orbit_of_u6() {
        let a = (1.0f64 / 8.0).sqrt();
        for s in [Sign::Plus, Sign::Minus] {
            let lam = 0.1;
            let fam = u6(0.5, s);
            let target = u6(0.5 + 2.0 * s.value() * a * lam, s);
            let tf = Transformed::new(GroupElement::inversion(lam), &fam).unwrap();
            for (t, r) in timelike_points() {
                if let (Ok(x), Ok(y)) = (tf.value(t, r), target.value(t, r)) {
                    assert!((x - y).abs() < 1e-10 * y.abs().max(1.0));
                }
            }
        }
    }

    /// The involution maps U6 with constant `c` to the time-shifted `c = 0`
    /// member with the opposite branch.
    #[test]
    fn involution_orbit_of_u6() {
        let a = (1.0f64 / 8.0).sqrt();
        let (c, s) = (0.5, Sign::Plus);
        let fam = u6(c, s);
        let params = fam.params;
        let target = SolutionFamily::new(
            FamilyId::U6,
            params,
            Constants::with_c(0.0).branch(s.flip()).shifted(-c / (2.0 * s.value() * a)),
        )
        .unwrap();
        let tf = Transformed::new(GroupElement::involution(), &fam).unwrap();
        let mut checked = 0;
        for (t, r) in timelike_points() {
            if let (Ok(x), Ok(y)) = (tf.value(t, r), target.value(t, r)) {
                assert!((x - y).abs() < 1e-10 * y.abs().max(1.0), "({t}, {r}): {x} vs {y}");
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn involution_is_an_involution() {
        let fam = u6(-1.0, Sign::Minus);
        let twice = Transformed::new(GroupElement::involution(), Transformed::new(GroupElement::involution(), &fam).unwrap()).unwrap();
        for (t, r) in timelike_points() {
            if let (Ok(x), Ok(y)) = (twice.value(t, r), fam.value(t, r)) {
                assert!((x - y).abs() < 1e-9 * y.abs().max(1.0));
            }
        }
    }

    fn invariant_points() -> Vec<(f64, f64)> {
        // xi > 1 and x > 0 keep r positive and t > r.
        (0..20).map(|i| (1.5 + 0.05 * i as f64, 0.2 + 0.04 * i as f64)).collect()
    }

    #[test]
    fn invariant_action_matches_shift() {
        let fam = u6(0.5, Sign::Plus);
        let rep = check_inversion_invariant_action(&fam, 0.1, &invariant_points(), 1e-9).unwrap();
        assert!(rep.pass, "{rep:?}");
        let id = check_inversion_invariant_action(&fam, 0.0, &invariant_points(), 1e-9).unwrap();
        assert!(id.max_deviation < 1e-14);
    }

    #[test]
    fn invariant_shift_is_additive() {
        let fam = u6(0.5, Sign::Plus);
        let (l1, l2) = (0.05, 0.07);
        let once = Transformed::new(GroupElement::inversion(l1), &fam).unwrap();
        let twice = Transformed::new(GroupElement::inversion(l2), &once).unwrap();
        for (xi, x) in invariant_points() {
            let a = invariant_form(&twice, xi, x).unwrap();
            let b = invariant_form(&fam, xi + (l1 + l2) * x, x).unwrap();
            assert!((a - b).abs() < 1e-9 * b.abs().max(1.0));
        }
    }
}
