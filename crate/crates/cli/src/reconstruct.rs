//! `reconstruct`: integrates a closed-form (G, H) pair back to `u(t, r)`.

use std::fs::File;
use std::io::BufWriter;

use radialwave::foliation::{FoliationChart, GhId, GhSolution, Subgroup};
use radialwave::reconstruct::{reconstruct as integrate, ReconGrid, ReconstructionProblem};
use radialwave::{ModelParams, Sign};
use serde::Serialize;

use crate::args::ReconstructArgs;
use crate::error::{config, CliError};
use crate::model::{k_sign, parse_sign, resolve_q, DEFAULT_N};

const DEFAULT_POINTS: usize = 16;

fn pair(v: &Option<Vec<f64>>, what: &str) -> Result<Option<(f64, f64)>, CliError> {
    match v.as_deref() {
        None => Ok(None),
        Some([a, b]) => Ok(Some((*a, *b))),
        Some(other) => Err(config(format!("{what} needs two comma-separated values, got {}", other.len()))),
    }
}

fn subgroup(name: &str) -> Result<Subgroup, CliError> {
    Subgroup::ALL
        .into_iter()
        .find(|s| s.name().eq_ignore_ascii_case(name.trim()))
        .ok_or_else(|| config(format!("unknown chart {name:?}")))
}

fn params(args: &ReconstructArgs, id: GhId) -> Result<ModelParams, CliError> {
    let n = args.n.unwrap_or(DEFAULT_N);
    if args.q.is_none() && args.power.is_none() && args.k.is_none() {
        return Ok(GhSolution::standard_params(id, n)?);
    }
    let q = resolve_q(n, args.q, args.power.as_deref(), id.power(), None)?;
    let k = args.k.map(k_sign).transpose()?.unwrap_or(Sign::Plus);
    Ok(ModelParams::new(n, q, k)?)
}

#[derive(Debug, Serialize)]
struct ReconSummary {
    gh: GhId,
    chart: &'static str,
    params: ModelParams,
    seed: (f64, f64),
    constant: f64,
    grid: ReconGrid,
    max_path_deviation: f64,
    checked_paths: usize,
    max_residual: f64,
    residual_tol: f64,
    pass: bool,
}

pub fn reconstruct(args: ReconstructArgs) -> Result<bool, CliError> {
    let id = GhId::parse(args.gh.as_deref().ok_or_else(|| config("--gh is required"))?)?;
    let params = params(&args, id)?;
    let chart = FoliationChart::new(args.chart.as_deref().map(subgroup).transpose()?.unwrap_or(id.chart()), params)?;
    let branch = args.branch.as_deref().map(parse_sign).transpose()?.unwrap_or(Sign::Plus);
    let gh = GhSolution::new(id, params, branch)?;
    let seed = pair(&args.seed_point, "--seed-point")?.ok_or_else(|| config("--seed-point t,r is required"))?;
    let constant = args.constant.ok_or_else(|| config("--constant is required"))?;
    let grid = ReconGrid {
        t: pair(&args.t, "--t")?.unwrap_or((seed.0, seed.0 + 1.0)),
        r: pair(&args.r, "--r")?.unwrap_or((0.5 * seed.1, 2.0 * seed.1)),
        nt: args.nt.unwrap_or(DEFAULT_POINTS),
        nr: args.nr.unwrap_or(DEFAULT_POINTS),
    };
    let problem = ReconstructionProblem::new(chart, gh, seed, constant, grid)?;
    let field = integrate(&problem)?;
    if let Some(path) = &args.out {
        let f = File::create(path).map_err(|e| CliError::io(path, e))?;
        field.write_csv(BufWriter::new(f))?;
    }
    let summary = ReconSummary {
        gh: id,
        chart: chart.subgroup.name(),
        params,
        seed,
        constant,
        grid,
        max_path_deviation: field.max_path_deviation,
        checked_paths: field.checked_paths,
        max_residual: field.max_residual,
        residual_tol: field.residual_tol,
        pass: field.pass,
    };
    crate::emit(&(serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"));
    Ok(field.pass)
}
