//! `catalog`: the family table filtered by dimension, power and sign.
//!
//! With a dimension, a family is listed when some admissible member exists
//! at that `(n, q, k)`. Without one, `--q` and `--power` select the families
//! whose power is fixed by the equation, in any dimension from 2 to 9; the
//! families defined for every `q` are only listed once a dimension is given.

use radialwave::catalog::{family_table, Constants, Convergence, FamilyId, FamilyInfo, SolutionFamily};
use radialwave::{ModelParams, PowerKind, Sign};
use serde::Serialize;

use crate::args::CatalogArgs;
use crate::error::{config, CliError};
use crate::model::k_sign;

const DIMS: std::ops::RangeInclusive<u32> = 2..=9;
/// Stand-in power for families defined at every `q`.
const GENERIC_Q: f64 = 3.0;

#[derive(Debug, Serialize)]
pub struct EnergyClass {
    pub tail_exponent: &'static str,
    pub axis_exponent: &'static str,
    /// Only with a concrete dimension and power; uses `c = 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail: Option<Convergence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<Convergence>,
}

#[derive(Debug, Serialize)]
pub struct CatalogRow {
    pub id: FamilyId,
    pub power: Option<PowerKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    pub constraints: &'static str,
    pub constants: Vec<&'static str>,
    pub formula: &'static str,
    pub singular_set: &'static str,
    pub energy: EnergyClass,
}

struct Filter {
    n: Option<u32>,
    q: Option<f64>,
    power: Option<PowerKind>,
    k: Option<Sign>,
}

/// A member of `id` at `(n, q)` with any admissible sign.
fn member(id: FamilyId, n: u32, q: f64, k: Option<Sign>) -> Option<SolutionFamily> {
    let signs = k.map(|s| vec![s]).unwrap_or_else(|| vec![Sign::Plus, Sign::Minus]);
    signs.into_iter().find_map(|k| {
        let p = ModelParams::new(n, q, k).ok()?;
        // U8 and U9 need c != 0; any other constants are admissible
        [Constants::with_c(1.0), Constants::default()].into_iter().find_map(|c| SolutionFamily::new(id, p, c).ok())
    })
}

fn powers_at(id: FamilyId, n: u32, f: &Filter) -> Option<f64> {
    let pinned = id.power().and_then(|kind| kind.value(n));
    let named = f.power.and_then(|kind| kind.value(n));
    let q = f.q.or(named).or(pinned);
    match (q, id.power()) {
        (Some(q), _) => Some(q),
        (None, None) => Some(GENERIC_Q),
        (None, Some(_)) => None,
    }
}

fn matching(id: FamilyId, f: &Filter) -> Option<(Option<f64>, Option<SolutionFamily>)> {
    if f.power.is_some_and(|kind| id.power() != Some(kind)) {
        return None;
    }
    match f.n {
        Some(n) => {
            let q = powers_at(id, n, f)?;
            let m = member(id, n, q, f.k)?;
            let concrete = f.q.is_some() || f.power.is_some() || id.power().is_some();
            Some((concrete.then_some(q), concrete.then_some(m)))
        }
        None => {
            if id.power().is_none() && (f.q.is_some() || f.power.is_some()) {
                return None;
            }
            let found = DIMS.filter_map(|n| powers_at(id, n, f).map(|q| (n, q))).any(|(n, q)| member(id, n, q, f.k).is_some());
            found.then_some((None, None))
        }
    }
}

pub fn rows(args: &CatalogArgs) -> Result<Vec<CatalogRow>, CliError> {
    if args.n.is_some_and(|n| n < 2) {
        return Err(config("dimension must be at least 2"));
    }
    let filter = Filter {
        n: args.n,
        q: args.q,
        power: args.power.as_deref().map(PowerKind::parse).transpose()?,
        k: args.k.map(k_sign).transpose()?,
    };
    let mut out = vec![];
    for info in family_table() {
        if info.id == FamilyId::IV6AsPrinted && !args.include_erratum {
            continue;
        }
        if let Some((q, member)) = matching(info.id, &filter) {
            out.push(row(info, q, member));
        }
    }
    Ok(out)
}

fn row(info: FamilyInfo, q: Option<f64>, member: Option<SolutionFamily>) -> CatalogRow {
    let class = member.map(|m| m.energy_class());
    CatalogRow {
        id: info.id,
        power: info.power,
        q,
        constraints: info.constraints,
        constants: info.constants,
        formula: info.formula,
        singular_set: info.singular_set,
        energy: EnergyClass {
            tail_exponent: info.tail_exponent,
            axis_exponent: info.axis_exponent,
            tail: class.map(|c| c.0),
            axis: class.map(|c| c.1),
        },
    }
}

fn conv(c: Option<Convergence>) -> &'static str {
    match c {
        Some(Convergence::Convergent) => "finite",
        Some(Convergence::Divergent) => "infinite",
        None => "-",
    }
}

pub fn render_table(rows: &[CatalogRow]) -> String {
    let header = ["family", "power", "constraints", "constants", "singular set", "tail", "axis", "energy tail/axis"];
    let cells: Vec<[String; 8]> = rows
        .iter()
        .map(|r| {
            [
                r.id.name().to_string(),
                r.power.map(|p| format!("{p:?}")).unwrap_or_else(|| "any".into()),
                r.constraints.to_string(),
                r.constants.join(" "),
                r.singular_set.to_string(),
                r.energy.tail_exponent.to_string(),
                r.energy.axis_exponent.to_string(),
                format!("{}/{}", conv(r.energy.tail), conv(r.energy.axis)),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cols: Vec<&str>| {
        let padded: Vec<String> = cols.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in &cells {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}
