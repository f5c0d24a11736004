//! Model parameters of the radial wave equation
//! `u_tt - u_rr - (n-1) u_r / r = k u^q` and the special nonlinearity powers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance used when matching `q` against a special power.
pub const POWER_TOL: f64 = 1e-12;

/// Sign of the nonlinear term, or a branch selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_f64(x: f64) -> Result<Sign> {
        if x == 1.0 {
            Ok(Sign::Plus)
        } else if x == -1.0 {
            Ok(Sign::Minus)
        } else {
            Err(Error::InvalidParams(format!("sign must be +1 or -1, got {x}")))
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Sign> {
        match s.trim() {
            "+" | "+1" | "1" | "plus" => Ok(Sign::Plus),
            "-" | "-1" | "minus" => Ok(Sign::Minus),
            other => Err(Error::Parse(format!("not a sign: {other:?}"))),
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: u32,
    pub q: f64,
    pub k: Sign,
}

impl ModelParams {
    pub fn new(n: u32, q: f64, k: Sign) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("dimension n = {n} must be at least 2")));
        }
        if !q.is_finite() {
            return Err(Error::InvalidParams(format!("power q = {q} is not finite")));
        }
        if (q - 1.0).abs() < POWER_TOL {
            return Err(Error::InvalidParams("power q = 1 gives the linear equation".into()));
        }
        Ok(ModelParams { n, q, k })
    }

    /// Convenience constructor taking `k` as +1 or -1.
    pub fn with_k(n: u32, q: f64, k: f64) -> Result<Self> {
        Self::new(n, q, Sign::from_f64(k)?)
    }

    /// Parameters at a special power of the given dimension.
    pub fn at(n: u32, kind: PowerKind, k: Sign) -> Result<Self> {
        let q = kind
            .value(n)
            .ok_or_else(|| Error::InvalidParams(format!("{kind:?} power undefined for n = {n}")))?;
        Self::new(n, q, k)
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    pub fn kf(&self) -> f64 {
        self.k.value()
    }

    /// Scaling weight `p = 2/(1-q)`.
    pub fn p(&self) -> f64 {
        2.0 / (1.0 - self.q)
    }

    pub fn is(&self, kind: PowerKind) -> bool {
        kind.value(self.n)
            .map(|v| (self.q - v).abs() < POWER_TOL)
            .unwrap_or(false)
    }

    pub fn require(&self, kind: PowerKind) -> Result<()> {
        if self.is(kind) {
            Ok(())
        } else {
            Err(Error::unsupported(format!(
                "requires the {kind:?} power for n = {}, got q = {}",
                self.n, self.q
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PowerKind {
    Critical,
    Conformal,
    InverseDilation,
    StaticLine,
    MinusThree,
}

impl PowerKind {
    pub const ALL: [PowerKind; 5] = [
        PowerKind::Critical,
        PowerKind::Conformal,
        PowerKind::InverseDilation,
        PowerKind::StaticLine,
        PowerKind::MinusThree,
    ];

    /// The power for dimension `n`, or `None` where it is undefined (n = 2 poles).
    pub fn value(self, n: u32) -> Option<f64> {
        let n = n as f64;
        match self {
            PowerKind::Critical if n != 2.0 => Some((n + 2.0) / (n - 2.0)),
            PowerKind::Conformal => Some((n + 3.0) / (n - 1.0)),
            PowerKind::InverseDilation if n != 2.0 => Some((4.0 - n) / (n - 2.0)),
            PowerKind::StaticLine if n != 2.0 => Some((n - 1.0) / (n - 2.0)),
            PowerKind::MinusThree => Some(-3.0),
            _ => None,
        }
    }

    pub fn parse(s: &str) -> Result<PowerKind> {
        match s.to_ascii_lowercase().as_str() {
            "critical" => Ok(PowerKind::Critical),
            "conformal" => Ok(PowerKind::Conformal),
            "inversedilation" | "inverse-dilation" => Ok(PowerKind::InverseDilation),
            "staticline" | "static-line" => Ok(PowerKind::StaticLine),
            "minusthree" | "minus-three" => Ok(PowerKind::MinusThree),
            other => Err(Error::Parse(format!("unknown power kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecialPower {
    pub kind: PowerKind,
    pub value: f64,
}

/// Every special power matched by `params.q`; an empty list means generic.
pub fn classify_power(params: &ModelParams) -> Vec<SpecialPower> {
    PowerKind::ALL
        .iter()
        .filter_map(|&kind| {
            let value = kind.value(params.n)?;
            ((params.q - value).abs() < POWER_TOL).then_some(SpecialPower { kind, value })
        })
        .collect()
}

pub fn exponent_p(q: f64) -> Result<f64> {
    if (q - 1.0).abs() < POWER_TOL {
        return Err(Error::InvalidParams("p = 2/(1-q) undefined at q = 1".into()));
    }
    Ok(2.0 / (1.0 - q))
}

/// `a^e` over the reals: positive base via exp/ln, integer exponents via
/// repeated multiplication, zero base with positive exponent gives zero.
pub fn rpow(a: f64, e: f64) -> Result<f64> {
    if let Some(m) = as_int(e) {
        if a == 0.0 && m < 0 {
            return Err(Error::domain("zero raised to a negative power"));
        }
        return Ok(a.powi(m));
    }
    if a > 0.0 {
        Ok((e * a.ln()).exp())
    } else if a == 0.0 && e > 0.0 {
        Ok(0.0)
    } else {
        Err(Error::domain(format!("fractional power {e} of non-positive base {a}")))
    }
}

/// Exponents within 1e-12 of an integer are treated as that integer, so
/// powers computed from rational formulas keep their sign behaviour.
pub(crate) fn as_int(e: f64) -> Option<i32> {
    let m = e.round();
    ((e - m).abs() < 1e-12 && m.abs() < 1e6).then_some(m as i32)
}
