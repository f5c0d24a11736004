//! Leapfrog finite differences for the radial wave equation on `[0, r_max]`.
//!
//! The axis uses an even ghost point and the regularized operator
//! `n u_rr + k u^q`; the outer edge is either driven by an exact solution or
//! left open with an outgoing condition.

mod analysis;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::catalog::SolutionFamily;
use crate::error::{Error, Result};
use crate::field::RadialField;
use crate::initial::{fmt17, InitialData};
use crate::params::{as_int, rpow, ModelParams};

pub use analysis::{
    fit_blowup_rate, fit_blowup_trace, run_convergence, BlowupFit, BlowupWindow, ConvergenceReport, ConvergenceRow,
    MIN_FIT_SAMPLES,
};

pub const DEFAULT_BLOWUP_THRESHOLD: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Outer value imposed from the exact solution providing the initial data.
    DirichletExact,
    /// `u_t + u_r + (n-1) u / (2r) = 0`.
    Sommerfeld,
}

/// Spatial discretization of the first-order term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Central,
    /// One-sided first-order `u_r`; only useful as a convergence control.
    Upwind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Nonlinearity {
    /// `u^q` with the real-power convention; non-integer `q` needs `u > 0`.
    Power,
    /// `u |u|^(q-1)`.
    SignPreserving,
    /// No `k u^q` term, for linear stability checks.
    Off,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialSource {
    /// Data and, for Dirichlet runs, the boundary trace from a catalog member.
    Exact { family: SolutionFamily, t0: f64 },
    Data(InitialData),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub params: ModelParams,
    pub r_max: f64,
    /// Number of intervals; the grid is `r_i = i r_max / N`, `i = 0..=N`.
    pub n: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub boundary: Boundary,
    pub initial: InitialSource,
    pub blowup_threshold: f64,
    /// Energy and snapshot output every this many steps; zero disables both.
    pub stride: usize,
    pub scheme: Scheme,
    pub nonlinearity: Nonlinearity,
    /// Values below the floor are raised to it before the power is taken.
    pub floor: Option<f64>,
    pub snapshots: bool,
}

impl SimConfig {
    pub fn exact(family: SolutionFamily, t0: f64, t_end: f64, r_max: f64, n: usize) -> Self {
        SimConfig {
            params: family.params,
            r_max,
            n,
            cfl: 0.5,
            t_end,
            boundary: Boundary::DirichletExact,
            initial: InitialSource::Exact { family, t0 },
            blowup_threshold: DEFAULT_BLOWUP_THRESHOLD,
            stride: 10,
            scheme: Scheme::Central,
            nonlinearity: Nonlinearity::Power,
            floor: None,
            snapshots: false,
        }
    }

    pub fn from_data(data: InitialData, t_end: f64) -> Self {
        let r_max = data.r.last().copied().unwrap_or(0.0);
        let n = data.len().saturating_sub(1);
        SimConfig {
            params: data.params,
            r_max,
            n,
            cfl: 0.5,
            t_end,
            boundary: Boundary::Sommerfeld,
            initial: InitialSource::Data(data),
            blowup_threshold: DEFAULT_BLOWUP_THRESHOLD,
            stride: 10,
            scheme: Scheme::Central,
            nonlinearity: Nonlinearity::Power,
            floor: None,
            snapshots: false,
        }
    }

    pub fn with_n(&self, n: usize) -> Self {
        SimConfig { n, ..self.clone() }
    }

    pub fn dr(&self) -> f64 {
        self.r_max / self.n as f64
    }

    pub fn t0(&self) -> f64 {
        match &self.initial {
            InitialSource::Exact { t0, .. } => *t0,
            InitialSource::Data(d) => d.t0,
        }
    }

    pub fn exact_family(&self) -> Option<&SolutionFamily> {
        match &self.initial {
            InitialSource::Exact { family, .. } => Some(family),
            InitialSource::Data(_) => None,
        }
    }

    /// Largest step allowed by the CFL number. The axis row propagates at
    /// speed `sqrt(n)`, so the number is measured against `dr / sqrt(n)`.
    pub fn max_dt(&self) -> f64 {
        self.cfl * self.dr() / self.params.nf().sqrt()
    }

    /// Number of steps and the step size that lands exactly on `t_end`.
    pub fn steps(&self) -> (usize, f64) {
        let span = self.t_end - self.t0();
        let steps = (span / self.max_dt()).ceil().max(1.0) as usize;
        (steps, span / steps as f64)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        if self.n < 16 {
            return bad(format!("need N >= 16 intervals, got {}", self.n));
        }
        if !self.n.is_multiple_of(2) {
            return bad(format!("Simpson energy needs an even N, got {}", self.n));
        }
        if !(self.r_max > 0.0 && self.r_max.is_finite()) {
            return bad(format!("r_max = {} must be positive", self.r_max));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return bad(format!("CFL number {} outside (0, 1)", self.cfl));
        }
        if !(self.t_end > self.t0()) {
            return bad(format!("t_end = {} must exceed t0 = {}", self.t_end, self.t0()));
        }
        if !(self.blowup_threshold > 0.0) {
            return bad("blow-up threshold must be positive".into());
        }
        match &self.initial {
            InitialSource::Exact { family, .. } if family.params != self.params => {
                return bad("initial family and run parameters differ".into())
            }
            InitialSource::Data(d) => {
                if d.params != self.params {
                    return bad("initial data and run parameters differ".into());
                }
                if d.len() != self.n + 1 {
                    return bad(format!("initial data has {} points, grid needs {}", d.len(), self.n + 1));
                }
                let dr = self.dr();
                if d.r.iter().enumerate().any(|(i, &r)| (r - i as f64 * dr).abs() > 1e-9 * self.r_max) {
                    return bad("initial data must sit on the uniform grid r_i = i dr".into());
                }
                if self.boundary == Boundary::DirichletExact {
                    return bad("Dirichlet boundary needs an exact solution as the source".into());
                }
            }
            _ => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Status {
    Running,
    Completed,
    Blowup { t: f64 },
    DomainError,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimState {
    pub r: Vec<f64>,
    pub u_prev: Vec<f64>,
    pub u: Vec<f64>,
    /// `u_t` at the current level, second-order accurate.
    pub ut: Vec<f64>,
    pub t: f64,
    pub dt: f64,
    pub steps: usize,
    /// `(t, E)` of the energy on `[0, r_max]`.
    pub energy: Vec<(f64, f64)>,
    /// `(t, E - W)` where `W` is the work done through the outer boundary,
    /// `dW/dt = u_t u_r r^(n-1)` at `r_max`; constant for the exact flow.
    pub balance: Vec<(f64, f64)>,
    pub boundary_work: f64,
    boundary_power: f64,
    pub status: Status,
}

impl SimState {
    pub fn max_abs(&self) -> f64 {
        self.u.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// `u_rr + (n-1) u_r / r + k f(u)` on the grid; the last entry is left at
/// zero because the boundary rule replaces it.
///
/// The central scheme uses the flux form
/// `(r_+^(n-1) (u_{i+1} - u_i) - r_-^(n-1) (u_i - u_{i-1})) / (V_i dr^2)`
/// with shell volumes `V_i`, which reduces to `2n (u_1 - u_0) / dr^2` on the
/// axis and keeps the discrete operator symmetric in the volume weights.
fn operator(config: &SimConfig, u: &[f64], out: &mut [f64]) -> Result<()> {
    let n = config.params.n as i32;
    let k = config.params.kf();
    let dr = config.dr();
    let last = u.len() - 1;
    for i in 0..last {
        let lap = match config.scheme {
            Scheme::Central => {
                let x = i as f64;
                let (lo, hi) = ((x - 0.5).max(0.0), x + 0.5);
                let vol = (hi.powi(n) - lo.powi(n)) / n as f64;
                let down = if i == 0 { 0.0 } else { lo.powi(n - 1) * (u[i] - u[i - 1]) };
                (hi.powi(n - 1) * (u[i + 1] - u[i]) - down) / (vol * dr * dr)
            }
            Scheme::Upwind if i == 0 => n as f64 * 2.0 * (u[1] - u[0]) / (dr * dr),
            Scheme::Upwind => {
                let urr = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (dr * dr);
                urr + (n as f64 - 1.0) * (u[i + 1] - u[i]) / (dr * i as f64 * dr)
            }
        };
        out[i] = lap + k * nonlinear(config, u[i])?;
    }
    out[last] = 0.0;
    Ok(())
}

fn nonlinear(config: &SimConfig, u: f64) -> Result<f64> {
    let q = config.params.q;
    let u = config.floor.map_or(u, |f| u.max(f));
    match config.nonlinearity {
        Nonlinearity::Off => Ok(0.0),
        Nonlinearity::SignPreserving => Ok(u * rpow(u.abs(), q - 1.0)?),
        Nonlinearity::Power => {
            if as_int(q).is_none() && u <= 0.0 {
                return Err(Error::domain(format!("u = {u} <= 0 under the non-integer power {q}")));
            }
            rpow(u, q)
        }
    }
}

/// New outer value. The outgoing condition uses the box scheme centred at
/// `(r_max - dr/2, t + dt/2)`, which needs the already updated neighbour.
fn boundary_value(config: &SimConfig, st: &SimState, t_next: f64, inner_next: f64) -> Result<f64> {
    let i = st.u.len() - 1;
    match config.boundary {
        Boundary::DirichletExact => {
            let fam = config.exact_family().ok_or_else(|| Error::InvalidParams("Dirichlet boundary without an exact source".into()))?;
            fam.value(t_next, config.r_max)
        }
        Boundary::Sommerfeld => {
            let dr = config.dr();
            let damp = (config.params.nf() - 1.0) / (2.0 * (config.r_max - 0.5 * dr));
            let (a, b, c) = (1.0 / (2.0 * st.dt), 1.0 / (2.0 * dr), damp / 4.0);
            let (edge, inner) = (st.u[i], st.u[i - 1]);
            let rhs = a * (edge - inner_next + inner) - b * (edge - inner - inner_next) - c * (edge + inner + inner_next);
            Ok(rhs / (a + b + c))
        }
    }
}

fn initial_profile(config: &SimConfig) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let dr = config.dr();
    let r: Vec<f64> = (0..=config.n).map(|i| i as f64 * dr).collect();
    match &config.initial {
        InitialSource::Exact { family, t0 } => {
            let d = InitialData::from_field(family, *t0, &r)?;
            Ok((r, d.u, d.ut))
        }
        InitialSource::Data(d) => Ok((r, d.u.clone(), d.ut.clone())),
    }
}

/// Sets up the state at `t0`; the first call to [`step`] bootstraps with RK2.
pub fn init(config: &SimConfig) -> Result<SimState> {
    config.validate()?;
    let (r, u, ut) = initial_profile(config)?;
    let (_, dt) = config.steps();
    let mut st = SimState {
        r,
        u_prev: vec![],
        u,
        ut,
        t: config.t0(),
        dt,
        steps: 0,
        energy: vec![],
        balance: vec![],
        boundary_work: 0.0,
        boundary_power: 0.0,
        status: Status::Running,
    };
    st.boundary_power = boundary_power(&st, config)?;
    if config.stride > 0 {
        record_energy(&mut st, config)?;
    }
    Ok(st)
}

/// Advances one step. Domain failures of the nonlinearity set the status
/// and are returned.
pub fn step(st: &mut SimState, config: &SimConfig) -> Result<()> {
    if st.status != Status::Running {
        return Err(Error::InvalidParams(format!("state is {:?}, not running", st.status)));
    }
    let res = advance(st, config);
    if let Err(Error::Domain(_)) = &res {
        st.status = Status::DomainError;
    }
    res
}

fn advance(st: &mut SimState, config: &SimConfig) -> Result<()> {
    let dt = st.dt;
    let m = st.u.len();
    let mut lu = vec![0.0; m];
    operator(config, &st.u, &mut lu)?;
    let t_next = st.t + dt;
    let prev_last = st.u_prev.last().copied().unwrap_or(0.0);
    let mut next = vec![0.0; m];
    if st.steps == 0 {
        // midpoint RK2 on (u, u_t): the velocity at the half step drives u
        let vhalf: Vec<f64> = (0..m).map(|i| st.ut[i] + 0.5 * dt * lu[i]).collect();
        for i in 0..m {
            next[i] = st.u[i] + dt * vhalf[i];
        }
        next[m - 1] = boundary_value(config, st, t_next, next[m - 2])?;
    } else {
        for i in 0..m - 1 {
            next[i] = 2.0 * st.u[i] - st.u_prev[i] + dt * dt * lu[i];
        }
        next[m - 1] = boundary_value(config, st, t_next, next[m - 2])?;
    }
    st.u_prev = std::mem::replace(&mut st.u, next);
    st.t = t_next;
    st.steps += 1;

    let mut lnext = vec![0.0; m];
    let over = st.u.iter().any(|x| !x.is_finite() || x.abs() > config.blowup_threshold);
    if over {
        st.status = Status::Blowup { t: st.t };
        return Ok(());
    }
    operator(config, &st.u, &mut lnext)?;
    for (i, l) in lnext.iter().enumerate().take(m - 1) {
        st.ut[i] = (st.u[i] - st.u_prev[i]) / dt + 0.5 * dt * l;
    }
    // the boundary row has no operator value; use the one-sided slope
    st.ut[m - 1] = if st.steps == 1 {
        (st.u[m - 1] - st.u_prev[m - 1]) / dt
    } else {
        (3.0 * st.u[m - 1] - 4.0 * st.u_prev[m - 1] + prev_last) / (2.0 * dt)
    };
    let power = boundary_power(st, config)?;
    st.boundary_work += 0.5 * dt * (st.boundary_power + power);
    st.boundary_power = power;
    if config.stride > 0 && st.steps.is_multiple_of(config.stride) {
        record_energy(st, config)?;
    }
    Ok(())
}

fn record_energy(st: &mut SimState, config: &SimConfig) -> Result<()> {
    let e = energy_of_state(st, config)?;
    st.energy.push((st.t, e));
    st.balance.push((st.t, e - st.boundary_work));
    Ok(())
}

fn boundary_power(st: &SimState, config: &SimConfig) -> Result<f64> {
    let i = st.u.len() - 1;
    let dr = config.dr();
    let ur = (3.0 * st.u[i] - 4.0 * st.u[i - 1] + st.u[i - 2]) / (2.0 * dr);
    Ok(st.ut[i] * ur * rpow(config.r_max, config.params.nf() - 1.0)?)
}

/// Composite Simpson rule for
/// `(u_t^2/2 + u_r^2/2 - k u^(q+1)/(q+1)) r^(n-1)` over the grid.
pub fn energy_of_state(st: &SimState, config: &SimConfig) -> Result<f64> {
    let (n, q, k) = (config.params.nf(), config.params.q, config.params.kf());
    let dr = config.dr();
    let m = st.u.len();
    let mut density = Vec::with_capacity(m);
    for i in 0..m {
        let ur = if i == 0 {
            0.0
        } else if i == m - 1 {
            (3.0 * st.u[i] - 4.0 * st.u[i - 1] + st.u[i - 2]) / (2.0 * dr)
        } else {
            (st.u[i + 1] - st.u[i - 1]) / (2.0 * dr)
        };
        let u = config.floor.map_or(st.u[i], |f| st.u[i].max(f));
        let pot = match config.nonlinearity {
            Nonlinearity::Off => 0.0,
            Nonlinearity::SignPreserving => rpow(u.abs(), q + 1.0)?,
            Nonlinearity::Power => rpow(u, q + 1.0)?,
        };
        let w = if i == 0 { 0.0 } else { rpow(st.r[i], n - 1.0)? };
        density.push((0.5 * st.ut[i] * st.ut[i] + 0.5 * ur * ur - k * pot / (q + 1.0)) * w);
    }
    let mut sum = density[0] + density[m - 1];
    for (i, d) in density.iter().enumerate().take(m - 1).skip(1) {
        sum += if i % 2 == 1 { 4.0 * d } else { 2.0 * d };
    }
    Ok(sum * dr / 3.0)
}

/// A completed run: final state plus the axis trace and snapshots.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimRun {
    pub state: SimState,
    /// `(t, u(t, 0))` after every step, starting at `t0`.
    pub axis: Vec<(f64, f64)>,
    /// `(t, u)` every `stride` steps when snapshots are enabled.
    pub snapshots: Vec<(f64, Vec<f64>)>,
}

impl SimRun {
    pub fn status(&self) -> Status {
        self.state.status
    }

    /// Largest relative change of the energy balance against its first value.
    pub fn energy_drift(&self) -> f64 {
        let Some(&(_, e0)) = self.state.balance.first() else { return 0.0 };
        self.state.balance.iter().map(|&(_, e)| (e - e0).abs() / e0.abs().max(f64::MIN_POSITIVE)).fold(0.0, f64::max)
    }

    /// Errors against an exact solution at the final time.
    pub fn errors_against<F: RadialField>(&self, exact: &F) -> Result<(f64, f64)> {
        let st = &self.state;
        let dr = st.r[1] - st.r[0];
        let (mut l2, mut linf) = (0.0f64, 0.0f64);
        for (i, &r) in st.r.iter().enumerate() {
            let e = (st.u[i] - exact.value(st.t, r)?).abs();
            l2 += e * e * dr;
            linf = linf.max(e);
        }
        Ok((l2.sqrt(), linf))
    }

    pub fn write_snapshots_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "r", "u"])?;
        for (t, u) in &self.snapshots {
            for (r, v) in self.state.r.iter().zip(u) {
                w.write_record([fmt17(*t), fmt17(*r), fmt17(*v)])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_energy_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "E"])?;
        for (t, e) in &self.state.energy {
            w.write_record([fmt17(*t), fmt17(*e)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Steps until `t_end`, blow-up or a domain error. Blow-up is a normal
/// outcome; a domain error is returned as an error.
pub fn run(config: &SimConfig) -> Result<SimRun> {
    let mut st = init(config)?;
    let (steps, _) = config.steps();
    let mut axis = vec![(st.t, st.u[0])];
    let mut snapshots = vec![];
    if config.snapshots && config.stride > 0 {
        snapshots.push((st.t, st.u.clone()));
    }
    for s in 0..steps {
        step(&mut st, config)?;
        axis.push((st.t, st.u[0]));
        if st.status != Status::Running {
            break;
        }
        if config.snapshots && config.stride > 0 && (s + 1) % config.stride == 0 {
            snapshots.push((st.t, st.u.clone()));
        }
    }
    if st.status == Status::Running {
        st.status = Status::Completed;
    }
    Ok(SimRun { state: st, axis, snapshots })
}
