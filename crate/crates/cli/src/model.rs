//! Turns loose flag values into library parameters.

use radialwave::catalog::{Constants, FamilyId, SolutionFamily};
use radialwave::{ModelParams, PowerKind, Sign};

use crate::args::ModelArgs;
use crate::error::{config, CliError};

pub const DEFAULT_N: u32 = 3;
/// Power used for families defined at every `q` when none is given.
pub const DEFAULT_GENERIC_Q: f64 = 3.0;

pub fn parse_sign(s: &str) -> Result<Sign, CliError> {
    match s.trim().to_ascii_lowercase().as_str() {
        "+" | "+1" | "1" | "plus" => Ok(Sign::Plus),
        "-" | "-1" | "minus" => Ok(Sign::Minus),
        other => Err(config(format!("sign must be + or -, got {other:?}"))),
    }
}

pub fn k_sign(k: f64) -> Result<Sign, CliError> {
    Sign::from_f64(k).map_err(|_| config(format!("k must be 1 or -1, got {k}")))
}

/// The power from `--q`, `--power` or the family's own special power;
/// `generic` is the fallback for families without one.
pub fn resolve_q(
    n: u32,
    q: Option<f64>,
    power: Option<&str>,
    pinned: Option<PowerKind>,
    generic: Option<f64>,
) -> Result<f64, CliError> {
    let named = match power {
        Some(p) => {
            let kind = PowerKind::parse(p)?;
            Some(kind.value(n).ok_or_else(|| config(format!("{kind:?} power is undefined for n = {n}")))?)
        }
        None => None,
    };
    match (q, named) {
        (Some(q), Some(v)) if (q - v).abs() > 1e-12 => Err(config(format!("--q {q} contradicts --power (q = {v})"))),
        (Some(q), _) => Ok(q),
        (None, Some(v)) => Ok(v),
        (None, None) => match pinned {
            Some(kind) => kind.value(n).ok_or_else(|| config(format!("{kind:?} power is undefined for n = {n}"))),
            None => generic.ok_or_else(|| config("no fixed power; pass --q or --power")),
        },
    }
}

pub fn family_id(m: &ModelArgs) -> Result<FamilyId, CliError> {
    let name = m.family.as_deref().ok_or_else(|| config("--family is required"))?;
    Ok(FamilyId::parse(name)?)
}

/// Builds the member. With `k` unset the sign the family admits is used,
/// trying `+1` first.
pub fn family(m: &ModelArgs) -> Result<SolutionFamily, CliError> {
    let id = family_id(m)?;
    let n = m.n.unwrap_or(DEFAULT_N);
    let q = resolve_q(n, m.q, m.power.as_deref(), id.power(), Some(DEFAULT_GENERIC_Q))?;
    let mut constants = Constants {
        c: m.c.unwrap_or(0.0),
        c_tilde: m.c_tilde.unwrap_or(0.0),
        t_shift: m.t_shift.unwrap_or(0.0),
        ..Constants::default()
    };
    if let Some(b) = &m.branch {
        constants.branch = parse_sign(b)?;
    }
    if let Some(b) = &m.branch2 {
        constants.branch2 = parse_sign(b)?;
    }
    let ks = match m.k {
        Some(k) => vec![k_sign(k)?],
        None => vec![Sign::Plus, Sign::Minus],
    };
    let mut last = None;
    for k in ks {
        match ModelParams::new(n, q, k).and_then(|p| SolutionFamily::new(id, p, constants)) {
            Ok(f) => return Ok(f),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one sign tried").into())
}
