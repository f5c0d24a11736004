//! `verify`: runs the library's suites and writes the JSON report.

use radialwave::catalog::FamilyId;
use radialwave::verify::{verify as run_suites, Scope, VerifyOptions, VerifyReport};

use crate::args::{ScopeArg, VerifyArgs};
use crate::error::{config, CliError};

fn scope(s: ScopeArg) -> Scope {
    match s {
        ScopeArg::Pde => Scope::Pde,
        ScopeArg::Foliation => Scope::Foliation,
        ScopeArg::Algebra => Scope::Algebra,
        ScopeArg::Potentials => Scope::Potentials,
        ScopeArg::Reductions => Scope::Reductions,
        ScopeArg::All => Scope::All,
    }
}

pub fn report(args: &VerifyArgs) -> Result<VerifyReport, CliError> {
    let scope = scope(args.scope.ok_or_else(|| config("--scope is required"))?);
    let defaults = VerifyOptions::default();
    let opts = VerifyOptions {
        n: args.n,
        family: args.family.as_deref().map(FamilyId::parse).transpose()?,
        seed: args.seed.unwrap_or(defaults.seed),
        points: args.points.unwrap_or(defaults.points),
        grid: defaults.grid,
    };
    Ok(run_suites(scope, &opts)?)
}

pub fn verify(args: VerifyArgs) -> Result<bool, CliError> {
    let report = report(&args)?;
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    match &args.out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))?,
        None => crate::emit(&(text + "\n")),
    }
    for suite in &report.suites {
        let failed: Vec<&str> = suite.failures().map(|c| c.name.as_str()).collect();
        eprintln!("{}: {} checks, {} failed", suite.suite.name(), suite.checks.len(), failed.len());
        for name in failed {
            eprintln!("  FAIL {name}");
        }
    }
    Ok(report.pass)
}
