//! `simulate`, `convergence` and `blowup`.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use radialwave::catalog::{Component, SolutionFamily};
use radialwave::initial::InitialData;
use radialwave::simulator::{
    fit_blowup_rate, run, run_convergence, BlowupFit, BlowupWindow, Boundary, ConvergenceReport, Nonlinearity, Scheme,
    SimConfig, SimRun, Status,
};
use radialwave::ModelParams;
use serde::Serialize;

use crate::args::{
    BlowupArgs, BoundaryArg, ConvergenceArgs, Expectation, ModelArgs, NonlinearityArg, RunArgs, SchemeArg, SimulateArgs,
};
use crate::error::{config, CliError};
use crate::model;

const DEFAULT_T0: f64 = 1.0;
const DEFAULT_SPAN: f64 = 1.0;
const DEFAULT_RMAX: f64 = 5.0;
const DEFAULT_GRID: usize = 400;
const DEFAULT_RESOLUTIONS: [usize; 3] = [100, 200, 400];
const BLOWUP_GRID: usize = 800;
const BLOWUP_RMAX: f64 = 1.0;

enum Source {
    Exact(SolutionFamily),
    Data(InitialData),
}

fn source(m: &ModelArgs, r: &RunArgs) -> Result<Source, CliError> {
    match &r.init {
        Some(path) => {
            if m.family.is_some() {
                return Err(config("--init and --family are mutually exclusive"));
            }
            let f = File::open(path).map_err(|e| CliError::io(path, e))?;
            Ok(Source::Data(InitialData::read_csv(f)?))
        }
        None => Ok(Source::Exact(model::family(m)?)),
    }
}

struct Timing {
    t0: f64,
    t_end: f64,
    r_max: f64,
    grid: usize,
}

/// Applies the discretization flags and validates the result.
fn configure(src: Source, r: &RunArgs, timing: Timing, stride: usize) -> Result<SimConfig, CliError> {
    let mut cfg = match src {
        Source::Exact(fam) => SimConfig::exact(fam, timing.t0, timing.t_end, timing.r_max, timing.grid),
        Source::Data(data) => {
            if r.t0.is_some() || r.rmax.is_some() {
                return Err(config("--t0 and --rmax come from the initial-data file"));
            }
            let cfg = SimConfig::from_data(data, timing.t_end);
            if timing.grid != cfg.n {
                return Err(config(format!("initial data has N = {}, but N = {} was requested", cfg.n, timing.grid)));
            }
            cfg
        }
    };
    if let Some(c) = r.cfl {
        cfg.cfl = c;
    }
    if let Some(b) = r.boundary {
        cfg.boundary = match b {
            BoundaryArg::Dirichlet => Boundary::DirichletExact,
            BoundaryArg::Sommerfeld => Boundary::Sommerfeld,
        };
    }
    if let Some(s) = r.scheme {
        cfg.scheme = match s {
            SchemeArg::Central => Scheme::Central,
            SchemeArg::Upwind => Scheme::Upwind,
        };
    }
    if let Some(nl) = r.nonlinearity {
        cfg.nonlinearity = match nl {
            NonlinearityArg::Power => Nonlinearity::Power,
            NonlinearityArg::SignPreserving => Nonlinearity::SignPreserving,
            NonlinearityArg::Off => Nonlinearity::Off,
        };
    }
    cfg.floor = r.floor;
    cfg.stride = r.stride.unwrap_or(stride);
    if let Some(th) = r.threshold {
        cfg.blowup_threshold = th;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Grid size of a data file, or the default.
fn data_grid(src: &Source, grid: Option<usize>, default: usize) -> usize {
    match src {
        Source::Data(d) => grid.unwrap_or(d.len().saturating_sub(1)),
        Source::Exact(_) => grid.unwrap_or(default),
    }
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    let path = dir.join(name);
    File::create(&path).map(BufWriter::new).map_err(|e| CliError::io(&path, e))
}

fn prepare(dir: &Option<PathBuf>) -> Result<Option<&Path>, CliError> {
    match dir {
        Some(d) => {
            std::fs::create_dir_all(d).map_err(|e| CliError::io(d, e))?;
            Ok(Some(d.as_path()))
        }
        None => Ok(None),
    }
}

fn write_summary<T: Serialize>(dir: Option<&Path>, summary: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(summary).expect("summary serializes");
    let text = text + "\n";
    crate::emit(&text);
    if let Some(d) = dir {
        let path = d.join("summary.json");
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    }
    Ok(())
}

fn write_axis(dir: &Path, out: &SimRun) -> Result<(), CliError> {
    let mut w = create(dir, "axis.csv")?;
    use std::io::Write;
    let io = |e| CliError::io(&dir.join("axis.csv"), e);
    writeln!(w, "t,u").map_err(io)?;
    for (t, u) in &out.axis {
        writeln!(w, "{t:.16e},{u:.16e}").map_err(io)?;
    }
    w.flush().map_err(io)
}

fn final_data(out: &SimRun, params: ModelParams) -> InitialData {
    let st = &out.state;
    InitialData { t0: st.t, params, r: st.r.clone(), u: st.u.clone(), ut: st.ut.clone() }
}

#[derive(Debug, Serialize)]
struct Errors {
    l2: f64,
    linf: f64,
}

#[derive(Debug, Serialize)]
struct SimSummary {
    family: Option<SolutionFamily>,
    params: ModelParams,
    t0: f64,
    t_end: f64,
    r_max: f64,
    #[serde(rename = "N")]
    grid: usize,
    dt: f64,
    steps: usize,
    #[serde(flatten)]
    status: Status,
    t_final: f64,
    /// Relative drift of the energy balance; absent when energy is off.
    energy_drift: Option<f64>,
    boundary_work: f64,
    errors: Option<Errors>,
    expect: Expectation,
    pass: bool,
}

pub fn simulate(args: SimulateArgs) -> Result<bool, CliError> {
    let src = source(&args.model, &args.run)?;
    let grid = data_grid(&src, args.grid, DEFAULT_GRID);
    let t0 = args.run.t0.unwrap_or(DEFAULT_T0);
    let timing = Timing {
        t0,
        t_end: args.run.tend.unwrap_or(t0 + DEFAULT_SPAN),
        r_max: args.run.rmax.unwrap_or(DEFAULT_RMAX),
        grid,
    };
    let mut cfg = configure(src, &args.run, timing, 10)?;
    let dir = prepare(&args.out)?;
    cfg.snapshots = dir.is_some();
    let expect = args.expect.unwrap_or(Expectation::Completed);
    let out = run(&cfg)?;
    let status = out.status();
    let errors = match (cfg.exact_family(), status) {
        (Some(fam), Status::Completed) => out.errors_against(fam).ok().map(|(l2, linf)| Errors { l2, linf }),
        _ => None,
    };
    let pass = match expect {
        Expectation::Completed => status == Status::Completed,
        Expectation::Blowup => matches!(status, Status::Blowup { .. }),
        Expectation::Any => true,
    };
    if let Some(d) = dir {
        if let Some(fam) = cfg.exact_family() {
            let r: Vec<f64> = out.state.r.clone();
            InitialData::from_field(fam, cfg.t0(), &r)?.write_csv(create(d, "initial.csv")?)?;
        } else if let radialwave::simulator::InitialSource::Data(data) = &cfg.initial {
            data.write_csv(create(d, "initial.csv")?)?;
        }
        final_data(&out, cfg.params).write_csv(create(d, "final.csv")?)?;
        out.write_snapshots_csv(create(d, "snapshots.csv")?)?;
        out.write_energy_csv(create(d, "energy.csv")?)?;
        write_axis(d, &out)?;
    }
    let summary = SimSummary {
        family: cfg.exact_family().copied(),
        params: cfg.params,
        t0: cfg.t0(),
        t_end: cfg.t_end,
        r_max: cfg.r_max,
        grid: cfg.n,
        dt: out.state.dt,
        steps: out.state.steps,
        status,
        t_final: out.state.t,
        energy_drift: (cfg.stride > 0).then(|| out.energy_drift()),
        boundary_work: out.state.boundary_work,
        errors,
        expect,
        pass,
    };
    write_summary(dir, &summary)?;
    Ok(pass)
}

#[derive(Debug, Serialize)]
struct ConvergenceSummary {
    family: SolutionFamily,
    t0: f64,
    t_end: f64,
    r_max: f64,
    #[serde(flatten)]
    report: ConvergenceReport,
    ratios: Vec<f64>,
}

pub fn convergence(args: ConvergenceArgs) -> Result<bool, CliError> {
    if args.run.init.is_some() {
        return Err(config("convergence needs a catalog member, not --init"));
    }
    let fam = model::family(&args.model)?;
    let grids = args.grids.clone().unwrap_or_else(|| DEFAULT_RESOLUTIONS.to_vec());
    if grids.len() < 2 {
        return Err(config("--N needs at least two resolutions"));
    }
    let t0 = args.run.t0.unwrap_or(DEFAULT_T0);
    let timing = Timing {
        t0,
        t_end: args.run.tend.unwrap_or(t0 + DEFAULT_SPAN),
        r_max: args.run.rmax.unwrap_or(DEFAULT_RMAX),
        grid: grids[0],
    };
    let template = configure(Source::Exact(fam), &args.run, timing, 0)?;
    for &n in &grids[1..] {
        template.with_n(n).validate()?;
    }
    let report = run_convergence(&template, &grids, &fam)?;
    let dir = prepare(&args.out)?;
    if let Some(d) = dir {
        report.write_csv(create(d, "convergence.csv")?)?;
    }
    let summary = ConvergenceSummary {
        family: fam,
        t0: template.t0(),
        t_end: template.t_end,
        r_max: template.r_max,
        ratios: report.ratios(),
        report,
    };
    write_summary(dir, &summary)?;
    Ok(true)
}

#[derive(Debug, Serialize)]
struct BlowupSummary {
    family: Option<SolutionFamily>,
    params: ModelParams,
    t0: f64,
    #[serde(rename = "N")]
    grid: usize,
    r_max: f64,
    /// First time `max|u|` exceeded the threshold.
    t_crossing: f64,
    predicted_t: Option<f64>,
    /// `|t_crossing - predicted_t| / (predicted_t - t0)`.
    time_error: Option<f64>,
    time_tol: f64,
    fit: BlowupFit,
    exponent_deviation: f64,
    exponent_tol: f64,
    pass: bool,
}

/// Start at the centre of a blow-up hyperbola, where the slice is regular.
fn default_start(fam: &SolutionFamily) -> Option<f64> {
    fam.singular_set().components.iter().find_map(|c| match *c {
        Component::Hyperbola { t_center, .. } => Some(t_center),
        _ => None,
    })
}

pub fn blowup(args: BlowupArgs) -> Result<bool, CliError> {
    let src = source(&args.model, &args.run)?;
    let (t0, predicted) = match &src {
        Source::Exact(fam) => {
            let t0 = args
                .run
                .t0
                .or_else(|| default_start(fam))
                .ok_or_else(|| config("no default start time for this member; pass --t0"))?;
            (t0, fam.singular_set().first_axis_time_after(t0))
        }
        Source::Data(d) => (d.t0, None),
    };
    let t_end = match (args.run.tend, predicted) {
        (Some(t), _) => t,
        (None, Some(p)) => t0 + 2.0 * (p - t0),
        (None, None) => return Err(config("no predicted blow-up time; pass --tend")),
    };
    let grid = data_grid(&src, args.grid, BLOWUP_GRID);
    let timing = Timing { t0, t_end, r_max: args.run.rmax.unwrap_or(BLOWUP_RMAX), grid };
    let cfg = configure(src, &args.run, timing, 0)?;
    let out = run(&cfg)?;
    let Status::Blowup { t: t_crossing } = out.status() else {
        eprintln!("run ended as {:?} at t = {}", out.status(), out.state.t);
        return Ok(false);
    };
    let window = BlowupWindow {
        t_b: None,
        fraction: args.fraction.unwrap_or(0.1),
        exclude_last: args.exclude_last.unwrap_or(3),
    };
    let fit = fit_blowup_rate(&out, &cfg.params, 0.0, &window)?;
    let exponent_tol = args.exponent_tol.unwrap_or(0.05);
    let time_tol = args.time_tol.unwrap_or(0.05);
    let time_error = predicted.map(|p| (t_crossing - p).abs() / (p - t0));
    let exponent_deviation = (fit.exponent - fit.reference_exponent).abs();
    let pass = exponent_deviation <= exponent_tol && time_error.is_none_or(|e| e <= time_tol);
    eprintln!(
        "blow-up exponent {:.4} against reference (1-n)/2 = {} (n = {})",
        fit.exponent, fit.reference_exponent, cfg.params.n
    );
    let dir = prepare(&args.out)?;
    if let Some(d) = dir {
        write_axis(d, &out)?;
    }
    let summary = BlowupSummary {
        family: cfg.exact_family().copied(),
        params: cfg.params,
        t0,
        grid: cfg.n,
        r_max: cfg.r_max,
        t_crossing,
        predicted_t: predicted,
        time_error,
        time_tol,
        fit,
        exponent_deviation,
        exponent_tol,
        pass,
    };
    write_summary(dir, &summary)?;
    Ok(pass)
}
