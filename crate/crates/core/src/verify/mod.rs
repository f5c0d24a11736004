//! Verification suites shared by the command-line front end and the
//! acceptance tests. Every suite returns named checks with the residual each
//! one measured, so a report can be inspected without rerunning anything.

mod suites;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::FamilyId;
use crate::error::{Error, Result};
use crate::foliation::GridSpec;

pub use suites::{
    algebra_suite, erratum_checks, foliation_suite, group_closure_checks, pde_suite, potentials_suite, reconstruction_checks,
    reductions_suite, PDE_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Pde,
    Foliation,
    Algebra,
    Potentials,
    Reductions,
    All,
}

impl Scope {
    pub const SUITES: [Scope; 5] = [Scope::Pde, Scope::Foliation, Scope::Algebra, Scope::Potentials, Scope::Reductions];

    pub fn name(self) -> &'static str {
        match self {
            Scope::Pde => "pde",
            Scope::Foliation => "foliation",
            Scope::Algebra => "algebra",
            Scope::Potentials => "potentials",
            Scope::Reductions => "reductions",
            Scope::All => "all",
        }
    }

    pub fn parse(s: &str) -> Result<Scope> {
        Scope::SUITES
            .into_iter()
            .chain([Scope::All])
            .find(|x| x.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown scope {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyOptions {
    /// Restrict to one dimension.
    pub n: Option<u32>,
    /// Restrict the catalog checks to one family.
    pub family: Option<FamilyId>,
    /// Seed for the sampled interior points.
    pub seed: u64,
    /// Interior points per catalog instance.
    pub points: usize,
    pub grid: GridSpec,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { n: None, family: None, seed: 0, points: 50, grid: GridSpec::default() }
    }
}

impl VerifyOptions {
    pub(crate) fn wants_n(&self, n: u32) -> bool {
        self.n.is_none_or(|m| m == n)
    }

    pub(crate) fn dims(&self, all: std::ops::RangeInclusive<u32>) -> Vec<u32> {
        all.filter(|&n| self.wants_n(n)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    /// Passes when the residual is below the threshold.
    Below,
    /// Passes when the residual exceeds the threshold; used for negative
    /// controls that must fail.
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub expect: Expect,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Per-point residuals where the check sampled points.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

impl Check {
    pub fn below(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Check::new(name.into(), residual, threshold, Expect::Below, residual < threshold)
    }

    pub fn above(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Check::new(name.into(), residual, threshold, Expect::Above, residual > threshold)
    }

    /// An exact comparison; the residual is zero on equality and one otherwise.
    pub fn exact(name: impl Into<String>, equal: bool) -> Self {
        Check::new(name.into(), if equal { 0.0 } else { 1.0 }, 0.0, Expect::Below, equal)
    }

    /// A check that could not be evaluated.
    pub fn failed(name: impl Into<String>, err: &Error) -> Self {
        Check::new(name.into(), f64::NAN, 0.0, Expect::Below, false).with_note(err.to_string())
    }

    fn new(name: String, residual: f64, threshold: f64, expect: Expect, pass: bool) -> Self {
        Check { name, residual, threshold, expect, pass, note: None, samples: vec![], detail: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_samples(mut self, samples: Vec<f64>) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_detail(mut self, detail: serde_json::Value) -> Self {
        self.detail = Some(detail);
        self
    }

    /// Also requires `cond`, e.g. a minimum number of usable points.
    pub fn and(mut self, cond: bool, why: &str) -> Self {
        if !cond {
            self.pass = false;
            self.note = Some(match self.note.take() {
                Some(n) => format!("{n}; {why}"),
                None => why.to_string(),
            });
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Scope,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn new(suite: Scope, checks: Vec<Check>) -> Self {
        let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
        SuiteReport { suite, checks, pass }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub scope: Scope,
    pub options: VerifyOptions,
    pub suites: Vec<SuiteReport>,
    pub pass: bool,
}

fn run_one(scope: Scope, opts: &VerifyOptions) -> Result<SuiteReport> {
    match scope {
        Scope::Pde => pde_suite(opts),
        Scope::Foliation => foliation_suite(opts),
        Scope::Algebra => algebra_suite(opts),
        Scope::Potentials => potentials_suite(opts),
        Scope::Reductions => reductions_suite(opts),
        Scope::All => unreachable!("expanded by the caller"),
    }
}

/// Runs one suite or, for [`Scope::All`], every suite concurrently.
/// Configuration problems are errors; failed checks are not.
pub fn verify(scope: Scope, opts: &VerifyOptions) -> Result<VerifyReport> {
    if opts.points == 0 {
        return Err(Error::InvalidParams("need at least one sample point".into()));
    }
    if opts.n.is_some_and(|n| n < 2) {
        return Err(Error::InvalidParams("dimension must be at least 2".into()));
    }
    let scopes: Vec<Scope> = if scope == Scope::All { Scope::SUITES.to_vec() } else { vec![scope] };
    let suites = scopes.par_iter().map(|&s| run_one(s, opts)).collect::<Result<Vec<_>>>()?;
    let pass = suites.iter().all(|s| s.pass);
    Ok(VerifyReport { scope, options: *opts, suites, pass })
}
