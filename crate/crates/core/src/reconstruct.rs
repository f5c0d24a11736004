//! Rebuilds `u(t, r)` from a closed-form `(G, H)` pair by integrating
//! `u_t` and `u_r` along axis-parallel paths.
//!
//! The gradient at a point of the graph is recovered from the chart's inverse
//! map, so on the scaling chart `u_t = r^(p-1) G(t/r, r^-p u)` and
//! `u_r = r^(p-1) H(t/r, r^-p u)`. Every grid value is reached by integrating
//! in `t` at the seed radius and then in `r`; a tenth of the points are
//! recomputed in the opposite order, which only agrees when the pair
//! satisfies the mixed-derivative condition.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::foliation::{FoliationChart, GhSolution};
use crate::initial::{fmt17, InitialData};
use crate::jet::Jet2;
use crate::numerics::rk::{integrate_scalar, RkOptions};

/// Something that supplies `(G, H)` as a function of the invariants.
pub trait ChartSource: Sync {
    /// `(G, H)` on jets, so that the residual can use exact derivatives.
    fn gh_jets(&self, x: Jet2, v: Jet2) -> Result<(Jet2, Jet2)>;
    fn gh(&self, x: f64, v: f64) -> Result<(f64, f64)> {
        let (g, h) = self.gh_jets(Jet2::constant(x), Jet2::constant(v))?;
        Ok((g.v, h.v))
    }
    /// Values of `x` that integration paths must not cross.
    fn singular_x(&self) -> &[f64];
}

impl ChartSource for GhSolution {
    fn gh_jets(&self, x: Jet2, v: Jet2) -> Result<(Jet2, Jet2)> {
        self.jets(x, v)
    }
    fn singular_x(&self) -> &[f64] {
        GhSolution::singular_x(self)
    }
}

/// Evenly spaced `(t, r)` grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReconGrid {
    pub t: (f64, f64),
    pub r: (f64, f64),
    pub nt: usize,
    pub nr: usize,
}

impl ReconGrid {
    fn axis((a, b): (f64, f64), m: usize) -> Vec<f64> {
        (0..m).map(|i| a + (b - a) * i as f64 / (m - 1) as f64).collect()
    }
    pub fn ts(&self) -> Vec<f64> {
        Self::axis(self.t, self.nt)
    }
    pub fn rs(&self) -> Vec<f64> {
        Self::axis(self.r, self.nr)
    }
}

/// Integration paths must agree to this relative tolerance.
pub const COMPATIBILITY_TOL: f64 = 1e-8;
/// Relative PDE residual allowed for the reconstructed grid.
pub const RESIDUAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
pub struct ReconstructionProblem<S = GhSolution> {
    pub chart: FoliationChart,
    pub source: S,
    /// `(t0, r0)`.
    pub seed: (f64, f64),
    /// The integration constant, fixed as the value of `u` at the seed.
    pub constant: f64,
    pub grid: ReconGrid,
}

impl ReconstructionProblem<GhSolution> {
    pub fn new(chart: FoliationChart, gh: GhSolution, seed: (f64, f64), constant: f64, grid: ReconGrid) -> Result<Self> {
        gh.check_chart(&chart)?;
        Self::with_source(chart, gh, seed, constant, grid)
    }
}

impl<S: ChartSource> ReconstructionProblem<S> {
    pub fn with_source(chart: FoliationChart, source: S, seed: (f64, f64), constant: f64, grid: ReconGrid) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        if grid.nt < 5 || grid.nr < 5 {
            return bad(format!("grid needs at least 5 x 5 points, got {} x {}", grid.nt, grid.nr));
        }
        if !(grid.t.0 < grid.t.1 && grid.r.0 < grid.r.1) {
            return bad(format!("empty grid box {:?} x {:?}", grid.t, grid.r));
        }
        if grid.r.0 <= 0.0 || seed.1 <= 0.0 {
            return bad("charts need r > 0".into());
        }
        let prob = ReconstructionProblem { chart, source, seed, constant, grid };
        if let Err(e) = prob.slopes(seed.0, seed.1, constant) {
            return bad(format!("seed (t, r, u) = ({}, {}, {constant}) outside the solution's domain: {e}", seed.0, seed.1));
        }
        Ok(prob)
    }

    pub fn with_constant(&self, constant: f64) -> Result<Self>
    where
        S: Clone,
    {
        Self::with_source(self.chart, self.source.clone(), self.seed, constant, self.grid)
    }

    /// `(u_t, u_r)` at a point of the graph.
    pub fn slopes(&self, t: f64, r: f64, u: f64) -> Result<(f64, f64)> {
        let (x, v) = self.chart.invariants(t, r, u)?;
        let (g, h) = self.source.gh(x, v)?;
        self.chart.from_chart(t, r, u, g, h)
    }

    fn x_at(&self, t: f64, r: f64) -> Result<f64> {
        // x depends on (t, r) only, so any positive u will do
        Ok(self.chart.invariants(t, r, 1.0)?.0)
    }

    /// Refuses segments along which `x` reaches a singular value.
    fn check_segment(&self, from: (f64, f64), to: (f64, f64)) -> Result<()> {
        const SAMPLES: usize = 256;
        let sing = self.source.singular_x();
        if sing.is_empty() {
            return Ok(());
        }
        let at = |i: usize| {
            let s = i as f64 / SAMPLES as f64;
            self.x_at(from.0 + s * (to.0 - from.0), from.1 + s * (to.1 - from.1))
        };
        let mut prev = at(0)?;
        for i in 0..=SAMPLES {
            let x = if i == 0 { prev } else { at(i)? };
            for &s in sing {
                if (x - s).abs() < 1e-12 || (prev - s) * (x - s) < 0.0 {
                    return Err(Error::PathSingular(format!(
                        "path ({}, {}) -> ({}, {}) crosses x = {s}",
                        from.0, from.1, to.0, to.1
                    )));
                }
            }
            prev = x;
        }
        Ok(())
    }

    fn along_t(&self, r: f64, t0: f64, u0: f64, t1: f64) -> Result<f64> {
        integrate_scalar(|t, u| Ok(self.slopes(t, r, u)?.0), t0, u0, t1, rk_options()).map_err(|e| singular(e, "t", r))
    }

    fn along_r(&self, t: f64, r0: f64, u0: f64, r1: f64) -> Result<f64> {
        integrate_scalar(|r, u| Ok(self.slopes(t, r, u)?.1), r0, u0, r1, rk_options()).map_err(|e| singular(e, "r", t))
    }
}

fn rk_options() -> RkOptions {
    RkOptions { rel_tol: 1e-10, abs_tol: 1e-14, ..RkOptions::default() }
}

fn singular(e: Error, var: &str, fixed: f64) -> Error {
    match e {
        Error::Domain(m) => Error::PathSingular(format!("integrating in {var} at {fixed}: {m}")),
        e => e,
    }
}

/// Values reached by chaining integrations outward from `start` through the
/// sorted targets.
fn chain(targets: &[f64], start: f64, u0: f64, mut step: impl FnMut(f64, f64, f64) -> Result<f64>) -> Result<Vec<f64>> {
    let mut out = vec![0.0; targets.len()];
    let split = targets.partition_point(|&s| s < start);
    let (mut s, mut u) = (start, u0);
    for i in split..targets.len() {
        u = step(s, u, targets[i])?;
        s = targets[i];
        out[i] = u;
    }
    let (mut s, mut u) = (start, u0);
    for i in (0..split).rev() {
        u = step(s, u, targets[i])?;
        s = targets[i];
        out[i] = u;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructedField {
    pub t: Vec<f64>,
    pub r: Vec<f64>,
    /// Row-major, `u[i * nr + j] = u(t_i, r_j)`.
    pub u: Vec<f64>,
    pub constant: f64,
    /// Largest relative deviation between the two path orders.
    pub max_path_deviation: f64,
    pub checked_paths: usize,
    /// Largest relative PDE residual over the grid. Second derivatives come
    /// from differentiating the chart gradient along the graph, not from
    /// difference quotients of the grid values.
    pub max_residual: f64,
    pub residual_tol: f64,
    pub pass: bool,
}

impl ReconstructedField {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.u[i * self.r.len() + j]
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "r", "u"])?;
        for (i, &t) in self.t.iter().enumerate() {
            for (j, &r) in self.r.iter().enumerate() {
                w.write_record([fmt17(t), fmt17(r), fmt17(self.at(i, j))])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Row `i` as simulator initial data, with `u_t` taken from the chart.
    pub fn initial_data<S: ChartSource>(&self, problem: &ReconstructionProblem<S>, i: usize) -> Result<InitialData> {
        let t0 = self.t[i];
        let mut ut = Vec::with_capacity(self.r.len());
        for (j, &r) in self.r.iter().enumerate() {
            ut.push(problem.slopes(t0, r, self.at(i, j))?.0);
        }
        let u = self.u[i * self.r.len()..(i + 1) * self.r.len()].to_vec();
        Ok(InitialData { t0, params: problem.chart.params, r: self.r.clone(), u, ut })
    }
}

pub fn reconstruct<S: ChartSource>(problem: &ReconstructionProblem<S>) -> Result<ReconstructedField> {
    let (t0, r0) = problem.seed;
    let (ts, rs) = (problem.grid.ts(), problem.grid.rs());
    let (tmin, tmax) = (problem.grid.t.0.min(t0), problem.grid.t.1.max(t0));
    let (rmin, rmax) = (problem.grid.r.0.min(r0), problem.grid.r.1.max(r0));
    problem.check_segment((tmin, r0), (tmax, r0))?;
    problem.check_segment((t0, rmin), (t0, rmax))?;
    for &t in &ts {
        problem.check_segment((t, rmin), (t, rmax))?;
    }

    // the seed column is a sequential prefix; rows then run independently
    let column = chain(&ts, t0, problem.constant, |a, u, b| problem.along_t(r0, a, u, b))?;
    let rows: Vec<Vec<f64>> = ts
        .par_iter()
        .zip(column.par_iter())
        .map(|(&t, &u)| chain(&rs, r0, u, |a, u, b| problem.along_r(t, a, u, b)))
        .collect::<Result<_>>()?;
    let u: Vec<f64> = rows.concat();

    let (nt, nr) = (ts.len(), rs.len());
    let sub: Vec<(usize, usize)> = (0..nt * nr).step_by(10).map(|k| (k / nr, k % nr)).collect();
    for &(_, j) in &sub {
        problem.check_segment((tmin, rs[j]), (tmax, rs[j]))?;
    }
    let deviations: Vec<f64> = sub
        .par_iter()
        .map(|&(i, j)| {
            let at_seed_time = problem.along_r(t0, r0, problem.constant, rs[j])?;
            let other = problem.along_t(rs[j], t0, at_seed_time, ts[i])?;
            let first = u[i * nr + j];
            Ok((other - first).abs() / first.abs().max(other.abs()).max(f64::MIN_POSITIVE))
        })
        .collect::<Result<_>>()?;
    let max_dev = deviations.iter().cloned().fold(0.0, f64::max);
    if max_dev > COMPATIBILITY_TOL {
        return Err(Error::Compatibility { deviation: max_dev, tol: COMPATIBILITY_TOL });
    }

    let max_residual = grid_residual(problem, &ts, &rs, &u)?;
    Ok(ReconstructedField {
        t: ts,
        r: rs,
        u,
        constant: problem.constant,
        max_path_deviation: max_dev,
        checked_paths: sub.len(),
        max_residual,
        residual_tol: RESIDUAL_TOL,
        pass: max_residual < RESIDUAL_TOL,
    })
}

fn grid_residual<S: ChartSource>(problem: &ReconstructionProblem<S>, ts: &[f64], rs: &[f64], u: &[f64]) -> Result<f64> {
    let nr = rs.len();
    let rows: Vec<f64> = (0..ts.len())
        .into_par_iter()
        .map(|i| {
            let mut worst: f64 = 0.0;
            for j in 0..nr {
                worst = worst.max(point_residual(problem, ts[i], rs[j], u[i * nr + j])?);
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().fold(0.0, f64::max))
}

/// Relative PDE residual of the solution through `(t, r, u)`.
pub fn point_residual<S: ChartSource>(problem: &ReconstructionProblem<S>, t: f64, r: f64, u: f64) -> Result<f64> {
    let params = problem.chart.params;
    let (ut, ur) = problem.slopes(t, r, u)?;
    let (tj, rj) = (Jet2::var_a(t), Jet2::var_b(r));
    let uj = Jet2 { v: u, da: ut, db: ur, ..Jet2::default() };
    let [x, v, _, _] = problem.chart.map_jets(tj, rj, uj, Jet2::constant(0.0), Jet2::constant(0.0))?;
    let (g, h) = problem.source.gh_jets(x, v)?;
    let (utj, urj) = problem.chart.gradient_from_chart_jets(tj, rj, uj, g, h)?;
    let (utt, urr) = (utj.da, urj.db);
    let damp = (params.nf() - 1.0) * ur / r;
    let nl = params.kf() * crate::params::rpow(u, params.q)?;
    let scale = [utt, urr, damp, nl].iter().fold(1.0f64, |m, z| m.max(z.abs()));
    Ok((utt - urr - damp - nl).abs() / scale)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepMember {
    pub constant: f64,
    pub max_residual: f64,
    pub max_path_deviation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub members: Vec<SweepMember>,
    /// Pairs of members whose fields coincide on the grid.
    pub duplicates: Vec<(usize, usize)>,
    pub pass: bool,
}

/// Relative grid distance below which two members count as the same field.
const DISTINCT_TOL: f64 = 1e-6;

/// One reconstruction per integration constant.
pub fn constant_sweep<S: ChartSource + Clone>(template: &ReconstructionProblem<S>, constants: &[f64]) -> Result<(SweepReport, Vec<ReconstructedField>)> {
    let fields: Vec<ReconstructedField> = constants
        .iter()
        .map(|&c| reconstruct(&template.with_constant(c)?))
        .collect::<Result<_>>()?;
    let mut duplicates = vec![];
    for a in 0..fields.len() {
        for b in a + 1..fields.len() {
            let dist = fields[a]
                .u
                .iter()
                .zip(&fields[b].u)
                .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE))
                .fold(0.0, f64::max);
            if dist < DISTINCT_TOL {
                duplicates.push((a, b));
            }
        }
    }
    let members: Vec<SweepMember> = fields
        .iter()
        .map(|f| SweepMember { constant: f.constant, max_residual: f.max_residual, max_path_deviation: f.max_path_deviation, pass: f.pass })
        .collect();
    let pass = duplicates.is_empty() && members.iter().all(|m| m.pass);
    Ok((SweepReport { members, duplicates, pass }, fields))
}
