//! Point-symmetry generators as polynomial vector fields, their Lie
//! brackets, and the one-parameter group actions on solutions.

mod group;
pub mod poly;

pub use group::{
    apply_group, check_inversion_invariant_action, invariant_form, GroupElement, GroupKind, InvariantActionReport, Transformed,
};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{ModelParams, PowerKind};
use poly::{int, Poly, Rational};

/// `c_t d/dt + c_r d/dr + c_u d/du`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyVectorField {
    pub coeffs: [Poly; 3],
}

impl PolyVectorField {
    pub fn new(ct: Poly, cr: Poly, cu: Poly) -> Self {
        PolyVectorField { coeffs: [ct, cr, cu] }
    }

    pub fn zero() -> Self {
        PolyVectorField::new(Poly::zero(), Poly::zero(), Poly::zero())
    }

    /// Time translation `d/dt`.
    pub fn translation() -> Self {
        PolyVectorField::new(Poly::constant(Rational::one()), Poly::zero(), Poly::zero())
    }

    /// Scaling `t d/dt + r d/dr + p u d/du`.
    pub fn scaling(p: &Rational) -> Self {
        let u = Poly::var(2);
        PolyVectorField::new(Poly::var(0), Poly::var(1), u.scale(p))
    }

    /// Inversion `(t^2 + r^2) d/dt + 2 r t d/dr + (1 - n) t u d/du`.
    pub fn inversion(n: u32) -> Self {
        let (t, r, u) = (Poly::var(0), Poly::var(1), Poly::var(2));
        let ct = &(&t * &t) + &(&r * &r);
        let cr = (&r * &t).scale(&int(2));
        let cu = (&t * &u).scale(&int(1 - n as i64));
        PolyVectorField::new(ct, cr, cu)
    }

    /// Applies the field as a derivation to a polynomial.
    pub fn apply(&self, f: &Poly) -> Poly {
        (0..3).fold(Poly::zero(), |acc, i| &acc + &(&self.coeffs[i] * &f.diff(i)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PolyVectorField { coeffs: self.coeffs.clone().map(|p| p.scale(c)) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.iter().map(Poly::degree).max().unwrap_or(0)
    }
}

impl std::ops::Add for &PolyVectorField {
    type Output = PolyVectorField;
    fn add(self, o: &PolyVectorField) -> PolyVectorField {
        PolyVectorField::new(
            &self.coeffs[0] + &o.coeffs[0],
            &self.coeffs[1] + &o.coeffs[1],
            &self.coeffs[2] + &o.coeffs[2],
        )
    }
}

impl std::ops::Sub for &PolyVectorField {
    type Output = PolyVectorField;
    fn sub(self, o: &PolyVectorField) -> PolyVectorField {
        self + &o.scale(&int(-1))
    }
}

impl std::fmt::Display for PolyVectorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}) d/dt + ({}) d/dr + ({}) d/du", self.coeffs[0], self.coeffs[1], self.coeffs[2])
    }
}

/// `[X, Y] = X(Y) - Y(X)` componentwise.
pub fn lie_bracket(x: &PolyVectorField, y: &PolyVectorField) -> PolyVectorField {
    let c = |i: usize| &x.apply(&y.coeffs[i]) - &y.apply(&x.coeffs[i]);
    PolyVectorField::new(c(0), c(1), c(2))
}

/// Exact rational value of `q` for the parameters: special powers are
/// recovered from `n`, anything else from the binary value of the float.
pub fn q_rational(params: &ModelParams) -> Result<Rational> {
    let n = params.n as i64;
    for kind in PowerKind::ALL {
        if params.is(kind) {
            return Ok(match kind {
                PowerKind::Critical => BigRational::new((n + 2).into(), (n - 2).into()),
                PowerKind::Conformal => BigRational::new((n + 3).into(), (n - 1).into()),
                PowerKind::InverseDilation => BigRational::new((4 - n).into(), (n - 2).into()),
                PowerKind::StaticLine => BigRational::new((n - 1).into(), (n - 2).into()),
                PowerKind::MinusThree => int(-3),
            });
        }
    }
    BigRational::from_float(params.q).ok_or_else(|| Error::InvalidParams(format!("q = {} not representable", params.q)))
}

/// `p = 2/(1-q)` as an exact rational.
pub fn p_rational(q: &Rational) -> Result<Rational> {
    let d = Rational::one() - q;
    if d.is_zero() {
        return Err(Error::InvalidParams("q = 1".into()));
    }
    Ok(int(2) / d)
}

/// The three geometric generators for fixed `(n, q)`.
#[derive(Debug, Clone)]
pub struct SymmetryAlgebra {
    pub n: u32,
    pub p: Rational,
    pub trans: PolyVectorField,
    pub scal: PolyVectorField,
    pub inver: PolyVectorField,
}

impl SymmetryAlgebra {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let p = p_rational(&q_rational(params)?)?;
        Ok(SymmetryAlgebra {
            n: params.n,
            trans: PolyVectorField::translation(),
            scal: PolyVectorField::scaling(&p),
            inver: PolyVectorField::inversion(params.n),
            p,
        })
    }

    /// The algebra at the conformal power, where all three generators are symmetries.
    pub fn conformal(n: u32) -> Result<Self> {
        let params = ModelParams::at(n, PowerKind::Conformal, crate::params::Sign::Plus)?;
        Self::new(&params)
    }

    pub fn basis(&self) -> [(&'static str, &PolyVectorField); 3] {
        [("trans", &self.trans), ("scal", &self.scal), ("inver", &self.inver)]
    }

    /// Coordinates of `x` in the basis, or `None` if it lies outside the span.
    pub fn decompose(&self, x: &PolyVectorField) -> Option<[Rational; 3]> {
        let ct = &x.coeffs[0];
        let a = ct.coeff([0, 0, 0]);
        let b = ct.coeff([1, 0, 0]);
        let c = ct.coeff([2, 0, 0]);
        let rebuilt = &(&self.trans.scale(&a) + &self.scal.scale(&b)) + &self.inver.scale(&c);
        (rebuilt == *x).then_some([a, b, c])
    }

    /// All brackets of basis elements expressed in the basis.
    pub fn bracket_table(&self) -> BracketTable {
        let basis = self.basis();
        let mut entries = vec![];
        for i in 0..3 {
            for j in (i + 1)..3 {
                let br = lie_bracket(basis[i].1, basis[j].1);
                let coords = self.decompose(&br).map(|cs| {
                    basis
                        .iter()
                        .zip(cs.iter())
                        .filter(|(_, c)| !c.is_zero())
                        .map(|((name, _), c)| (name.to_string(), c.to_string()))
                        .collect()
                });
                entries.push(BracketEntry {
                    left: basis[i].0.into(),
                    right: basis[j].0.into(),
                    bracket: br.to_string(),
                    in_span: coords.is_some(),
                    coordinates: coords.unwrap_or_default(),
                });
            }
        }
        BracketTable { n: self.n, p: self.p.to_string(), entries }
    }

    /// Cyclic sum `[X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]]` for the three generators.
    pub fn jacobi_defect(&self) -> PolyVectorField {
        let (x, y, z) = (&self.trans, &self.scal, &self.inver);
        let a = lie_bracket(x, &lie_bracket(y, z));
        let b = lie_bracket(y, &lie_bracket(z, x));
        let c = lie_bracket(z, &lie_bracket(x, y));
        &(&a + &b) + &c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    pub bracket: String,
    pub in_span: bool,
    /// Nonzero coefficients in the basis, as exact rationals.
    pub coordinates: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BracketTable {
    pub n: u32,
    pub p: String,
    pub entries: Vec<BracketEntry>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Sign;
    use poly::rat;

    #[test]
    fn structure_constants_at_conformal_power() {
        for n in 2..=9 {
            let alg = SymmetryAlgebra::conformal(n).unwrap();
            assert_eq!(alg.p, rat(1 - n as i64, 2));
            assert_eq!(lie_bracket(&alg.trans, &alg.scal), alg.trans);
            assert_eq!(lie_bracket(&alg.trans, &alg.inver), alg.scal.scale(&int(2)));
            assert_eq!(lie_bracket(&alg.scal, &alg.inver), alg.inver);
            assert!(alg.jacobi_defect().is_zero());
        }
    }

    #[test]
    fn self_bracket_vanishes() {
        let alg = SymmetryAlgebra::conformal(3).unwrap();
        for (_, x) in alg.basis() {
            assert!(lie_bracket(x, x).is_zero());
        }
    }

    #[test]
    fn inversion_bracket_leaves_span_off_conformal_power() {
        let params = ModelParams::new(3, 5.0, Sign::Plus).unwrap();
        let alg = SymmetryAlgebra::new(&params).unwrap();
        assert_eq!(alg.p, rat(-1, 2));
        let br = lie_bracket(&alg.trans, &alg.inver);
        assert!(alg.decompose(&br).is_none());
    }

    #[test]
    fn degrees() {
        let alg = SymmetryAlgebra::conformal(4).unwrap();
        assert!(alg.basis().iter().all(|(_, x)| x.degree() <= 2));
    }

    #[test]
    fn bracket_table_coordinates() {
        let t = SymmetryAlgebra::conformal(3).unwrap().bracket_table();
        assert_eq!(t.entries[0].coordinates, vec![("trans".to_string(), "1".to_string())]);
        assert_eq!(t.entries[1].coordinates, vec![("scal".to_string(), "2".to_string())]);
        assert_eq!(t.entries[2].coordinates, vec![("inver".to_string(), "1".to_string())]);
        assert!(serde_json::to_string(&t).unwrap().contains("\"p\":\"-1\""));
    }

    #[test]
    fn q_rational_recovers_special_powers() {
        let p = ModelParams::at(4, PowerKind::Conformal, Sign::Plus).unwrap();
        assert_eq!(q_rational(&p).unwrap(), rat(7, 3));
        let g = ModelParams::new(3, 2.5, Sign::Plus).unwrap();
        assert_eq!(q_rational(&g).unwrap(), rat(5, 2));
    }

    proptest::proptest! {
        #[test]
        fn antisymmetry_and_jacobi_for_random_fields(cs in proptest::collection::vec(-5i64..5, 27)) {
            let mk = |o: usize| {
                let comp = |k: usize| {
                    let base = o + 3 * k;
                    let (t, r, u) = (Poly::var(0), Poly::var(1), Poly::var(2));
                    &(&t.scale(&int(cs[base])) + &(&r * &u).scale(&int(cs[base + 1]))) + &Poly::constant(int(cs[base + 2]))
                };
                PolyVectorField::new(comp(0), comp(1), comp(2))
            };
            let (x, y, z) = (mk(0), mk(9), mk(18));
            let s = &lie_bracket(&x, &y) + &lie_bracket(&y, &x);
            proptest::prop_assert!(s.is_zero());
            let j = &(&lie_bracket(&x, &lie_bracket(&y, &z)) + &lie_bracket(&y, &lie_bracket(&z, &x)))
                + &lie_bracket(&z, &lie_bracket(&x, &y));
            proptest::prop_assert!(j.is_zero());
        }
    }
}
