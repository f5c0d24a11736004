//! Second-order truncated Taylor arithmetic in two variables.
//!
//! A [`Jet2`] carries a value together with its first and second partial
//! derivatives with respect to two seed variables `a` and `b`. All operations
//! propagate derivatives exactly to rounding, so PDE residuals can be formed
//! without difference quotients.

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::params::as_int;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2 {
    pub v: f64,
    pub da: f64,
    pub db: f64,
    pub daa: f64,
    pub dab: f64,
    pub dbb: f64,
}

impl Jet2 {
    pub const fn constant(v: f64) -> Self {
        Jet2 { v, da: 0.0, db: 0.0, daa: 0.0, dab: 0.0, dbb: 0.0 }
    }

    /// The first seed variable evaluated at `v`.
    pub const fn var_a(v: f64) -> Self {
        Jet2 { v, da: 1.0, db: 0.0, daa: 0.0, dab: 0.0, dbb: 0.0 }
    }

    /// The second seed variable evaluated at `v`.
    pub const fn var_b(v: f64) -> Self {
        Jet2 { v, da: 0.0, db: 1.0, daa: 0.0, dab: 0.0, dbb: 0.0 }
    }

    pub fn is_finite(&self) -> bool {
        [self.v, self.da, self.db, self.daa, self.dab, self.dbb]
            .iter()
            .all(|x| x.is_finite())
    }

    /// Compose with a scalar function given its value and first two derivatives at `self.v`.
    pub fn chain(&self, f0: f64, f1: f64, f2: f64) -> Jet2 {
        Jet2 {
            v: f0,
            da: f1 * self.da,
            db: f1 * self.db,
            daa: f2 * self.da * self.da + f1 * self.daa,
            dab: f2 * self.da * self.db + f1 * self.dab,
            dbb: f2 * self.db * self.db + f1 * self.dbb,
        }
    }

    pub fn sq(&self) -> Jet2 {
        *self * *self
    }

    pub fn recip(&self) -> Result<Jet2> {
        if self.v == 0.0 {
            return Err(Error::domain("division by zero"));
        }
        let r = 1.0 / self.v;
        Ok(self.chain(r, -r * r, 2.0 * r * r * r))
    }

    pub fn powi(&self, m: i32) -> Result<Jet2> {
        let x = self.v;
        if x == 0.0 && m < 0 {
            return Err(Error::domain("zero raised to a negative power"));
        }
        let m_f = m as f64;
        let f0 = x.powi(m);
        let f1 = if m == 0 { 0.0 } else { m_f * x.powi(m - 1) };
        let f2 = if m == 0 || m == 1 { 0.0 } else { m_f * (m_f - 1.0) * x.powi(m - 2) };
        Ok(self.chain(f0, f1, f2))
    }

    /// Real power following the crate's convention: positive base through
    /// exp/ln, integer exponents by multiplication, otherwise a domain error.
    pub fn powf(&self, e: f64) -> Result<Jet2> {
        if let Some(m) = as_int(e) {
            return self.powi(m);
        }
        let x = self.v;
        if x <= 0.0 {
            return Err(Error::domain(format!("fractional power {e} of non-positive base {x}")));
        }
        let f0 = (e * x.ln()).exp();
        Ok(self.chain(f0, e * f0 / x, e * (e - 1.0) * f0 / (x * x)))
    }

    pub fn sqrt(&self) -> Result<Jet2> {
        self.powf(0.5)
    }

    pub fn exp(&self) -> Jet2 {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn ln(&self) -> Result<Jet2> {
        let x = self.v;
        if x <= 0.0 {
            return Err(Error::domain(format!("logarithm of non-positive {x}")));
        }
        Ok(self.chain(x.ln(), 1.0 / x, -1.0 / (x * x)))
    }

    pub fn atan(&self) -> Jet2 {
        let x = self.v;
        let d = 1.0 / (1.0 + x * x);
        self.chain(x.atan(), d, -2.0 * x * d * d)
    }

    pub fn tanh(&self) -> Jet2 {
        let th = self.v.tanh();
        let s = 1.0 - th * th;
        self.chain(th, s, -2.0 * th * s)
    }

    pub fn div_checked(&self, rhs: Jet2) -> Result<Jet2> {
        Ok(*self * rhs.recip()?)
    }

    /// Fails if any component is not finite.
    pub fn finite(self, what: &str) -> Result<Jet2> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::domain(format!("non-finite {what}")))
        }
    }
}

impl From<f64> for Jet2 {
    fn from(v: f64) -> Self {
        Jet2::constant(v)
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v + o.v,
            da: self.da + o.da,
            db: self.db + o.db,
            daa: self.daa + o.daa,
            dab: self.dab + o.dab,
            dbb: self.dbb + o.dbb,
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        self + (-o)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self * -1.0
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v * o.v,
            da: self.da * o.v + self.v * o.da,
            db: self.db * o.v + self.v * o.db,
            daa: self.daa * o.v + 2.0 * self.da * o.da + self.v * o.daa,
            dab: self.dab * o.v + self.da * o.db + self.db * o.da + self.v * o.dab,
            dbb: self.dbb * o.v + 2.0 * self.db * o.db + self.v * o.dbb,
        }
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    /// Division by a jet with zero value produces non-finite components;
    /// use [`Jet2::div_checked`] where that must be an error.
    fn div(self, o: Jet2) -> Jet2 {
        let r = 1.0 / o.v;
        self * o.chain(r, -r * r, 2.0 * r * r * r)
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(mut self, o: f64) -> Jet2 {
        self.v += o;
        self
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(mut self, o: f64) -> Jet2 {
        self.v -= o;
        self
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, s: f64) -> Jet2 {
        Jet2 {
            v: self.v * s,
            da: self.da * s,
            db: self.db * s,
            daa: self.daa * s,
            dab: self.dab * s,
            dbb: self.dbb * s,
        }
    }
}

impl Div<f64> for Jet2 {
    type Output = Jet2;
    fn div(self, s: f64) -> Jet2 {
        self * (1.0 / s)
    }
}

impl Add<Jet2> for f64 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        o + self
    }
}

impl Sub<Jet2> for f64 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        -o + self
    }
}

impl Mul<Jet2> for f64 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        o * self
    }
}

impl Div<Jet2> for f64 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        Jet2::constant(self) / o
    }
}

impl AddAssign for Jet2 {
    fn add_assign(&mut self, o: Jet2) {
        *self = *self + o;
    }
}

impl SubAssign for Jet2 {
    fn sub_assign(&mut self, o: Jet2) {
        *self = *self - o;
    }
}

impl MulAssign for Jet2 {
    fn mul_assign(&mut self, o: Jet2) {
        *self = *self * o;
    }
}
