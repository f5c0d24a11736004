use super::{Check, Scope, SuiteReport, VerifyOptions};
use crate::catalog::{standard_instances, Constants, FamilyId, ResidualReport, SampleRegion, SolutionFamily};
use crate::error::{Error, Result};
use crate::field::RadialField;
use crate::foliation::{
    ansatz_coefficient_check, potential_check, resolving_residual, AnsatzCase, AnsatzOutcome, FoliationChart, GhId,
    GhSolution, GridSpec, PotentialId, PotentialSolution, Subgroup,
};
use crate::jet::Jet2;
use crate::liealg::{lie_bracket, GroupElement, GroupKind, SymmetryAlgebra, Transformed};
use crate::params::{ModelParams, PowerKind, Sign};
use crate::reconstruct::{reconstruct, ChartSource, ReconGrid, ReconstructedField, ReconstructionProblem};
use crate::reduction::{
    canonical_map, no_symmetry_witness, Anchor, Direction, OdeKind, QuadratureFamily, QuadratureKind,
    QuadratureSolution, ReducedOde, ZeroEnergyProfile,
};

/// Relative PDE residual bound for closed-form solutions.
pub const PDE_TOL: f64 = 1e-9;
const FOLIATION_TOL: f64 = 1e-9;
const INDUCED_TOL: f64 = 1e-10;
const QUADRATURE_TOL: f64 = 1e-6;
const RECONSTRUCTION_TOL: f64 = 1e-6;
const PATH_TOL: f64 = 1e-8;
const MIN_POINTS: usize = 20;

fn label(f: &SolutionFamily) -> String {
    let (p, c) = (&f.params, &f.constants);
    format!("{} n={} q={} k={} c={} s={}", f.id, p.n, p.q, p.k, c.c, c.branch)
}

/// Largest value of `f` over `items`, skipping points outside the real
/// domain. Returns the maximum and the number of points used.
fn sweep<T: Copy>(items: &[T], f: impl Fn(T) -> Result<f64>) -> Result<(f64, usize)> {
    let mut worst: f64 = 0.0;
    let mut used = 0;
    for &it in items {
        match f(it) {
            Ok(v) => {
                worst = worst.max(if v.is_nan() { f64::INFINITY } else { v });
                used += 1;
            }
            Err(Error::Domain(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok((worst, used))
}

fn settle(name: &str, res: Result<Check>) -> Check {
    res.unwrap_or_else(|e| Check::failed(name, &e))
}

fn residual_check(f: &SolutionFamily, rep: &ResidualReport) -> Check {
    let samples = rep.samples.iter().map(|s| s.residual.unwrap_or(f64::NAN)).collect();
    Check::below(label(f), rep.max_residual, PDE_TOL)
        .with_samples(samples)
        .and(rep.failed_samples == 0, "some samples failed to evaluate")
}

fn conformal_member(id: FamilyId, n: u32) -> Result<SolutionFamily> {
    SolutionFamily::new(id, ModelParams::at(n, PowerKind::Conformal, Sign::Plus)?, Constants::default())
}

fn static_points() -> Vec<(f64, f64)> {
    (1..=10).map(|i| (0.0, 0.3 * i as f64)).collect()
}

/// `r^((n-1)/2) u` of the printed and the corrected static conformal profile.
fn amplitudes(n: u32) -> Result<(f64, f64)> {
    let printed = conformal_member(FamilyId::IV6AsPrinted, n)?.value(0.0, 1.0)?;
    let corrected = conformal_member(FamilyId::IV6, n)?.value(0.0, 1.0)?;
    Ok((printed, corrected))
}

fn erratum_note(n: u32) -> Result<String> {
    let (printed, corrected) = amplitudes(n)?;
    Ok(format!(
        "erratum: the printed amplitude gives v = r^((n-1)/2) u = {printed} at n = {n}, k = +1, \
         but the constant solution of the reduced ODE needs v = {corrected}; use IV6"
    ))
}

/// The printed form is rejected with an O(1) residual; the corrected one passes.
pub fn erratum_checks() -> Result<Vec<Check>> {
    let n = 5;
    let printed = conformal_member(FamilyId::IV6AsPrinted, n)?;
    let corrected = conformal_member(FamilyId::IV6, n)?;
    let bad = printed.verify_residual(&static_points(), PDE_TOL);
    let good = corrected.verify_residual(&static_points(), PDE_TOL);
    let mut accepted = residual_check(&corrected, &good);
    accepted.name = format!("{} accepted", label(&corrected));
    Ok(vec![
        accepted,
        Check::above(format!("{} rejected", label(&printed)), bad.max_residual, 0.1).with_note(erratum_note(n)?),
    ])
}

pub fn pde_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    if opts.family == Some(FamilyId::IV6AsPrinted) {
        let n = opts.n.unwrap_or(5);
        let f = conformal_member(FamilyId::IV6AsPrinted, n)?;
        let rep = f.verify_residual(&static_points(), PDE_TOL);
        let check = residual_check(&f, &rep).with_note(erratum_note(n)?);
        return Ok(SuiteReport::new(Scope::Pde, vec![check]));
    }
    let mut checks = vec![];
    for (i, inst) in standard_instances().iter().enumerate() {
        let f = &inst.family;
        if !opts.wants_n(f.params.n) || opts.family.is_some_and(|id| id != f.id) {
            continue;
        }
        let name = label(f);
        let check = f
            .interior_points(&inst.region, opts.points, 0.05, opts.seed.wrapping_add(i as u64))
            .map(|pts| residual_check(f, &f.verify_residual(&pts, PDE_TOL)));
        checks.push(settle(&name, check));
    }
    if opts.family.is_none_or(|id| id == FamilyId::IV6) {
        checks.extend(erratum_checks()?);
    }
    if checks.is_empty() {
        return Err(Error::InvalidParams("no catalog instance matches the filters".into()));
    }
    Ok(SuiteReport::new(Scope::Pde, checks))
}

/// Runs on `grid`, falling back to larger `v` where a closed form is only
/// real for large `v`.
fn on_admissible_grid<R>(grid: &GridSpec, run: impl Fn(&GridSpec) -> Result<R>, points: impl Fn(&R) -> usize) -> Result<R> {
    let rep = run(grid)?;
    if points(&rep) >= MIN_POINTS {
        return Ok(rep);
    }
    run(&GridSpec { v: (4.0, 40.0), ..*grid })
}

pub fn foliation_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut checks = vec![];
    for id in GhId::ALL {
        for n in opts.dims(3..=6) {
            let Ok(params) = GhSolution::standard_params(id, n) else { continue };
            for branch in [Sign::Plus, Sign::Minus] {
                let Ok(gh) = GhSolution::new(id, params, branch) else { continue };
                for &sub in id.charts() {
                    let name = format!("{} on the {} system n={n} branch {branch}", id.name(), sub.name());
                    let check = FoliationChart::new(sub, params).and_then(|chart| {
                        let rep = on_admissible_grid(
                            &opts.grid,
                            |g| resolving_residual(&chart, &gh, &g.points(gh.singular_x()), FOLIATION_TOL),
                            |r| r.points,
                        )?;
                        Ok(Check::below(&name, rep.max_residual, FOLIATION_TOL)
                            .with_note(format!("{} points, {} outside the real domain", rep.points, rep.skipped))
                            .and(rep.points >= MIN_POINTS, "too few admissible points"))
                    });
                    checks.push(settle(&name, check));
                }
            }
        }
    }
    checks.extend(ansatz_checks(opts));
    if opts.wants_n(3) {
        checks.extend(reconstruction_checks());
    }
    Ok(SuiteReport::new(Scope::Foliation, checks))
}

fn ansatz_checks(opts: &VerifyOptions) -> Vec<Check> {
    let (mut min_defect, mut all_inconsistent) = (f64::INFINITY, true);
    let (mut max_defect, mut all_solved) = (0.0f64, true);
    for n in opts.dims(2..=6) {
        for q in [2.0, 3.0, 5.0, -3.0, 0.5] {
            for k in [Sign::Plus, Sign::Minus] {
                let rep = ansatz_coefficient_check(AnsatzCase::Q, n, q, k);
                all_inconsistent &= matches!(rep.outcome, AnsatzOutcome::Inconsistent { .. });
                min_defect = min_defect.min(rep.defect);
                let rep = ansatz_coefficient_check(AnsatzCase::HalfQPlusOne, n, q, k);
                match rep.outcome {
                    AnsatzOutcome::Solutions { .. } => max_defect = max_defect.max(rep.defect),
                    AnsatzOutcome::Inconsistent { .. } if k.value() * (q + 1.0) < 0.0 => {}
                    _ => all_solved = false,
                }
            }
        }
    }
    vec![
        Check::above("ansatz G, H ~ v^q leaves a nonzero coefficient", min_defect, 1e-12)
            .and(all_inconsistent, "some case was not found inconsistent"),
        Check::below("ansatz G, H ~ v^((q+1)/2) has constant solutions", max_defect, 1e-12)
            .and(all_solved, "a case with k/(q+1) > 0 had no solution"),
    ]
}

fn max_rel_error<F: RadialField>(field: &ReconstructedField, exact: &F) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (i, &t) in field.t.iter().enumerate() {
        for (j, &r) in field.r.iter().enumerate() {
            let e = exact.value(t, r)?;
            worst = worst.max((field.at(i, j) - e).abs() / e.abs());
        }
    }
    Ok(worst)
}

/// `(G, H)` with `H` scaled, which breaks the compatibility of the gradient.
#[derive(Clone)]
struct Perturbed(GhSolution, f64);

impl ChartSource for Perturbed {
    fn gh_jets(&self, x: Jet2, v: Jet2) -> Result<(Jet2, Jet2)> {
        let (g, h) = self.0.jets(x, v)?;
        Ok((g, h * self.1))
    }
    fn singular_x(&self) -> &[f64] {
        self.0.singular_x()
    }
}

/// Reconstruction of catalog members from the scaling solution S1 (giving
/// U1) and the conformal solution C1 (giving U6), plus the negative control.
pub fn reconstruction_checks() -> Vec<Check> {
    let mut checks = vec![];
    let s1 = |c: f64| -> Result<Vec<Check>> {
        let params = ModelParams::new(3, 3.0, Sign::Plus)?;
        let chart = FoliationChart::new(Subgroup::Scaling, params)?;
        let gh = GhSolution::new(GhId::S1, params, Sign::Minus)?;
        let grid = ReconGrid { t: (1.5, 3.0), r: (0.5, 2.0), nt: 16, nr: 16 };
        let seed = (2.0, 1.0);
        let prob = ReconstructionProblem::new(chart, gh, seed, 2f64.sqrt() / (seed.0 + c), grid)?;
        let field = reconstruct(&prob)?;
        let exact = SolutionFamily::new(crate::catalog::FamilyId::U1, params, Constants::with_c(c))?;
        Ok(vec![
            Check::below(format!("S1 reconstructs U1 c={c}"), max_rel_error(&field, &exact)?, RECONSTRUCTION_TOL),
            Check::below(format!("S1 mixed paths agree c={c}"), field.max_path_deviation, PATH_TOL)
                .with_note(format!("{} paths recomputed", field.checked_paths)),
        ])
    };
    for c in [-1.0, 0.0, 1.0] {
        match s1(c) {
            Ok(cs) => checks.extend(cs),
            Err(e) => checks.push(Check::failed(format!("S1 reconstructs U1 c={c}"), &e)),
        }
    }
    let c1_problem = |u0: f64| -> Result<ReconstructionProblem> {
        let params = ModelParams::at(3, PowerKind::Conformal, Sign::Plus)?;
        let chart = FoliationChart::new(Subgroup::Conformal, params)?;
        let gh = GhSolution::new(GhId::C1, params, Sign::Plus)?;
        let grid = ReconGrid { t: (2.0, 3.0), r: (0.5, 1.5), nt: 21, nr: 21 };
        ReconstructionProblem::new(chart, gh, (2.5, 1.0), u0, grid)
    };
    let c1 = |u0: f64| -> Result<Vec<Check>> {
        let prob = c1_problem(u0)?;
        let field = reconstruct(&prob)?;
        // the U6 member through the seed value, 1/u0 = 2 s a t0 + (t0^2 - r0^2) c
        let a = (1.0f64 / 8.0).sqrt();
        let (t0, r0) = prob.seed;
        let c = (1.0 / u0 - 2.0 * a * t0) / (t0 * t0 - r0 * r0);
        let exact = SolutionFamily::new(FamilyId::U6, prob.chart.params, Constants::with_c(c))?;
        Ok(vec![
            Check::below(format!("C1 reconstructs U6 u0={u0}"), max_rel_error(&field, &exact)?, RECONSTRUCTION_TOL),
            Check::below(format!("C1 mixed paths agree u0={u0}"), field.max_path_deviation, PATH_TOL)
                .with_note(format!("{} paths recomputed", field.checked_paths)),
        ])
    };
    for u0 in [0.3, 0.5, 1.0] {
        match c1(u0) {
            Ok(cs) => checks.extend(cs),
            Err(e) => checks.push(Check::failed(format!("C1 reconstructs U6 u0={u0}"), &e)),
        }
    }
    let name = "perturbed (G, H) is rejected as incompatible";
    let bad = c1_problem(0.5).and_then(|good| {
        let src = Perturbed(good.source, 1.0 + 1e-3);
        let prob = ReconstructionProblem::with_source(good.chart, src, good.seed, good.constant, good.grid)?;
        Ok(match reconstruct(&prob) {
            Err(Error::Compatibility { deviation, tol }) => Check::above(name, deviation, tol),
            Err(e) => Check::failed(name, &e),
            Ok(_) => Check::failed(name, &Error::InvalidParams("the perturbed pair was accepted".into())),
        })
    });
    checks.push(settle(name, bad));
    checks
}

pub fn algebra_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut checks = vec![];
    for n in opts.dims(2..=9) {
        let alg = SymmetryAlgebra::conformal(n)?;
        let two = crate::liealg::poly::int(2);
        let mut first = Check::exact(format!("[trans, scal] = trans n={n}"), lie_bracket(&alg.trans, &alg.scal) == alg.trans);
        if let Ok(v) = serde_json::to_value(alg.bracket_table()) {
            first = first.with_detail(v);
        }
        checks.push(first);
        checks.push(Check::exact(
            format!("[trans, inver] = 2 scal n={n}"),
            lie_bracket(&alg.trans, &alg.inver) == alg.scal.scale(&two),
        ));
        checks.push(Check::exact(format!("[scal, inver] = inver n={n}"), lie_bracket(&alg.scal, &alg.inver) == alg.inver));
        checks.push(Check::exact(format!("Jacobi identity n={n}"), alg.jacobi_defect().is_zero()));
    }
    checks.extend(group_closure_checks(opts));
    Ok(SuiteReport::new(Scope::Algebra, checks))
}

/// The point `(t, r)` at which `g . u` reads `u` at the given point.
fn preimage(g: GroupElement, t: f64, r: f64) -> Option<(f64, f64)> {
    let lam = g.lambda;
    let w = t * t - r * r;
    let out = match g.kind {
        GroupKind::Translation => (t - lam, r),
        GroupKind::Scaling => (t / lam, r / lam),
        GroupKind::Inversion => {
            let d = 1.0 - 2.0 * lam * t + lam * lam * w;
            if d <= 0.0 {
                return None;
            }
            ((t - w * lam) / d, r / d)
        }
        GroupKind::Involution => {
            if w <= 0.0 {
                return None;
            }
            (-t / w, r / w)
        }
    };
    (out.1 > 0.0).then_some(out)
}

fn element_name(g: GroupElement) -> String {
    match g.kind {
        GroupKind::Involution => "involution".into(),
        kind => format!("{kind:?}({})", g.lambda).to_lowercase(),
    }
}

/// Applies every compatible group element to every catalog instance and
/// checks the image against the PDE; also checks that the involution squares
/// to the identity.
pub fn group_closure_checks(opts: &VerifyOptions) -> Vec<Check> {
    let mut checks = vec![];
    for (i, inst) in standard_instances().iter().enumerate() {
        let f = inst.family;
        if !opts.wants_n(f.params.n) || opts.family.is_some_and(|id| id != f.id) {
            continue;
        }
        let pts = match f.interior_points(&inst.region, 20, 0.05, opts.seed.wrapping_add(i as u64)) {
            Ok(p) => p,
            Err(e) => {
                checks.push(Check::failed(format!("group action on {}", label(&f)), &e));
                continue;
            }
        };
        let conformal = f.params.is(PowerKind::Conformal);
        // the involution only acts inside the light cone of the origin
        let timelike: Vec<(f64, f64)> = if conformal {
            // radii beyond the largest |t| are never timelike
            let reg = inst.region;
            let r_top = reg.r.1.min(reg.t.0.abs().max(reg.t.1.abs()));
            let cone = SampleRegion::new(reg.t.0, reg.t.1, reg.r.0, r_top.max(reg.r.0 + 1e-3));
            match f.interior_points(&cone, 400, 0.05, opts.seed.wrapping_add(1000 + i as u64)) {
                Ok(p) => p.into_iter().filter(|&(t, r)| t * t > r * r + 0.05).take(20).collect(),
                Err(_) => vec![],
            }
        } else {
            vec![]
        };
        let mut elements = vec![GroupElement::translation(0.3), GroupElement::scaling(2.0)];
        if conformal {
            elements.extend([GroupElement::inversion(0.05), GroupElement::inversion(-0.05), GroupElement::involution()]);
        }
        // `None` when the element has no point in the family's real domain
        let closure = |name: &str, res: Result<(f64, usize)>| -> Option<Check> {
            match res {
                Ok((_, 0)) => None,
                Ok((worst, used)) => Some(Check::below(name, worst, PDE_TOL).and(used >= 10, "fewer than 10 usable points")),
                Err(e) => Some(Check::failed(name, &e)),
            }
        };
        for g in elements {
            let name = format!("{} applied to {}", element_name(g), label(&f));
            let source = if g.kind == GroupKind::Involution { &timelike } else { &pts };
            let res = Transformed::new(g, f).and_then(|tf| {
                let images: Vec<(f64, f64)> = source.iter().filter_map(|&(t, r)| preimage(g, t, r)).collect();
                sweep(&images, |(t, r)| tf.relative_residual(t, r))
            });
            let check = closure(&name, res);
            let check = if g.kind == GroupKind::Involution {
                check
            } else {
                check.or_else(|| Some(Check::failed(&name, &Error::domain("no usable points"))))
            };
            checks.extend(check);
        }
        if conformal {
            let name = format!("involution twice is the identity on {}", label(&f));
            let res = Transformed::new(GroupElement::involution(), f)
                .and_then(|once| Transformed::new(GroupElement::involution(), once))
                .and_then(|twice| {
                    sweep(&timelike, |(t, r)| {
                        let (a, b) = (twice.value(t, r)?, f.value(t, r)?);
                        Ok((a - b).abs() / b.abs().max(1.0))
                    })
                });
            checks.extend(closure(&name, res));
        }
    }
    checks
}

pub fn potentials_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut checks = vec![];
    for id in PotentialId::ALL {
        for n in opts.dims(3..=6) {
            let Ok(params) = GhSolution::standard_params(id.solution(), n) else { continue };
            for branch in [Sign::Plus, Sign::Minus] {
                let Ok(pot) = PotentialSolution::new(id, params, branch) else { continue };
                let tag = format!("{} n={n} branch {branch}", id.name());
                let rep = on_admissible_grid(
                    &opts.grid,
                    |g| potential_check(&pot, &g.points(pot.solution.singular_x()), FOLIATION_TOL),
                    |r| r.points,
                );
                match rep {
                    Ok(rep) => {
                        checks.push(
                            Check::below(format!("mixed partials of {tag}"), rep.max_curl, FOLIATION_TOL)
                                .and(rep.points >= MIN_POINTS, "too few admissible points"),
                        );
                        checks.push(
                            Check::below(
                                format!("{tag} induces {}", rep.solution.name()),
                                rep.max_gradient_mismatch,
                                INDUCED_TOL,
                            )
                            .and(rep.max_resolving_residual < FOLIATION_TOL, "the induced pair misses its system"),
                        );
                    }
                    Err(e) => checks.push(Check::failed(tag, &e)),
                }
            }
        }
    }
    Ok(SuiteReport::new(Scope::Potentials, checks))
}

fn crit_amplitude(n: f64) -> f64 {
    (n * (n - 2.0) / 4.0).powf((n - 2.0) / 4.0)
}

fn family(id: FamilyId, params: ModelParams, c: Constants) -> Result<SolutionFamily> {
    SolutionFamily::new(id, params, c)
}

/// Largest deviation of a quadrature from the closed form of `base` and of
/// the mapped profile from the matching catalog member.
fn zero_energy_deviation(
    sol: &QuadratureSolution,
    base: &QuadratureFamily,
    profile: ZeroEnergyProfile,
    map: OdeKind,
    member: &SolutionFamily,
    xs: &[f64],
    relative: bool,
) -> Result<(f64, usize)> {
    let n = sol.family.params.n;
    let t = if map == OdeKind::ScalCanonicalDil { 1.0 } else { 0.0 };
    sweep(xs, |x| {
        let v = sol.v_of(x)?;
        let closed = base.zero_energy(profile, x)?;
        let (a, u) = canonical_map(map, n, Direction::Inverse, (x, v))?;
        let expect = member.value(t, a)?;
        let scale = |y: f64| if relative { y.abs().max(1.0) } else { 1.0 };
        Ok(((v - closed).abs() / scale(closed)).max((u - expect).abs() / scale(expect)))
    })
}

fn quadrature_checks(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut checks = vec![];
    let mut push = |name: String, res: Result<(f64, usize)>| {
        checks.push(settle(&name, res.map(|(d, used)| Check::below(&name, d, QUADRATURE_TOL).and(used > 0, "no usable points"))));
    };
    for n in opts.dims(3..=5) {
        let name = format!("sech profile and IV3 from the quadrature n={n}");
        let res = (|| {
            let a = crit_amplitude(n as f64);
            let f = QuadratureFamily::new(QuadratureKind::TransScal, n, Sign::Plus, 0.0, 0.0, Sign::Minus)?;
            let sol = QuadratureSolution::solve(f, (0.2 * a, a), Anchor::Upper)?;
            let iv3 = family(FamilyId::IV3, f.params, Constants::default())?;
            let xs: Vec<f64> = [0.0, 0.1, 0.5, 1.0, 1.5].into_iter().filter(|&x| x <= sol.x_lo.max(sol.x_hi)).collect();
            zero_energy_deviation(&sol, &f, ZeroEnergyProfile::Sech, OdeKind::TransCanonicalScal, &iv3, &xs, false)
        })();
        push(name, res);
    }
    if opts.wants_n(3) {
        let n = 3u32;
        let res = (|| {
            let lo: f64 = 0.3;
            let base = QuadratureFamily::new(QuadratureKind::TransScal, n, Sign::Minus, 0.0, 0.0, Sign::Minus)?;
            let x_lo = ((n as f64 * (n as f64 - 2.0) / 4.0).sqrt() / lo.powf(2.0 / (n as f64 - 2.0))).asinh();
            let f = QuadratureFamily { c_tilde: -x_lo, ..base };
            let sol = QuadratureSolution::solve(f, (lo, 3.0), Anchor::Lower)?;
            let iv3 = family(FamilyId::IV3, f.params, Constants::default().branch(Sign::Minus))?;
            let (d, used) = sweep(&[0.2, 0.5, 1.0], |x| {
                let v = sol.v_of(x)?;
                let closed = base.zero_energy(ZeroEnergyProfile::Csch, x)?;
                let (r, u) = canonical_map(OdeKind::TransCanonicalScal, n, Direction::Inverse, (x, v))?;
                Ok((v - closed).abs().max((u - iv3.value(0.0, r)?).abs()))
            })?;
            Ok((d, used))
        })();
        push("csch profile and defocusing IV3 n=3".into(), res);

        let params = ModelParams::at(n, PowerKind::Critical, Sign::Plus)?;
        let a = crit_amplitude(3.0);
        let iv1 = family(FamilyId::IV1, params, Constants::default())?;
        let iv2 = family(FamilyId::IV2, params, Constants::default())?;
        let inside = QuadratureFamily::new(QuadratureKind::ScalDil, n, Sign::Plus, 0.0, 0.0, Sign::Plus)?;
        let outside = inside.with_s(Sign::Minus);
        let res = QuadratureSolution::solve(inside, (0.3 * a, a), Anchor::Upper).and_then(|sol| {
            zero_energy_deviation(&sol, &inside, ZeroEnergyProfile::Sech, OdeKind::ScalCanonicalDil, &iv1, &[-1.2, -0.6, -0.1], false)
        });
        push("sech profile and IV1 inside the light cone n=3".into(), res);
        let res = QuadratureSolution::solve(outside, (a, 3.0 * a), Anchor::Lower).and_then(|sol| {
            zero_energy_deviation(&sol, &outside, ZeroEnergyProfile::Sec, OdeKind::ScalCanonicalDil, &iv1, &[0.3, 0.8, 1.1], false)
        });
        push("sec profile and IV1 outside the light cone n=3".into(), res);
        let csc = QuadratureFamily { c_tilde: -std::f64::consts::FRAC_PI_2, branch: Sign::Minus, ..outside };
        let res = QuadratureSolution::solve(csc, (a, 3.0 * a), Anchor::Lower).and_then(|sol| {
            zero_energy_deviation(&sol, &outside, ZeroEnergyProfile::Csc, OdeKind::ScalCanonicalDil, &iv2, &[0.3, 0.8, 1.1], false)
        });
        push("csc profile and IV2 outside the light cone n=3".into(), res);
    }
    for n in opts.dims(4..=6) {
        let res = (|| {
            let f = QuadratureFamily::new(QuadratureKind::TransDil, n, Sign::Minus, 0.0, 0.0, Sign::Plus)?;
            let sol = QuadratureSolution::solve(f, (0.0, 3.0), Anchor::Lower)?;
            let iv4 = family(FamilyId::IV4, f.params, Constants::default().branch(Sign::Plus))?;
            zero_energy_deviation(&sol, &f, ZeroEnergyProfile::Power, OdeKind::TransCanonicalDil, &iv4, &[0.05, 0.3, 0.9], true)
        })();
        push(format!("power-law profile and IV4 n={n}"), res);
    }
    Ok(checks)
}

fn grid(a: f64, b: f64, m: usize) -> Vec<f64> {
    (0..m).map(|i| a + (b - a) * i as f64 / (m - 1) as f64).collect()
}

/// Catalog members reduce to solutions of the ODEs of their symmetry.
fn ode_checks(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let at = ModelParams::at;
    let statics = [
        family(FamilyId::IV3, at(3, PowerKind::Critical, Sign::Plus)?, Constants::default())?,
        family(FamilyId::IV3, at(5, PowerKind::Critical, Sign::Minus)?, Constants::default().branch(Sign::Minus))?,
        family(FamilyId::IV5, at(4, PowerKind::Critical, Sign::Plus)?, Constants::default())?,
        family(FamilyId::IV4, at(4, PowerKind::InverseDilation, Sign::Minus)?, Constants::default())?,
        family(FamilyId::IV6, at(5, PowerKind::Conformal, Sign::Plus)?, Constants::default())?,
        family(FamilyId::U3, at(5, PowerKind::InverseDilation, Sign::Minus)?, Constants::with_c(0.4))?,
    ];
    let scaling = [
        family(FamilyId::U1, ModelParams::new(3, 3.0, Sign::Plus)?, Constants::with_c(0.0))?,
        family(FamilyId::U2, ModelParams::new(4, 2.0, Sign::Plus)?, Constants::with_c(0.0))?,
        family(FamilyId::U4, at(5, PowerKind::StaticLine, Sign::Plus)?, Constants::with_c(0.0))?,
        family(FamilyId::U5, at(3, PowerKind::MinusThree, Sign::Minus)?, Constants::with_c(0.0))?,
        family(FamilyId::U6, at(3, PowerKind::Conformal, Sign::Plus)?, Constants::with_c(0.0))?,
        family(FamilyId::U7, at(4, PowerKind::Conformal, Sign::Plus)?, Constants::with_c(0.0))?,
        family(FamilyId::IV1, at(3, PowerKind::Critical, Sign::Plus)?, Constants::default())?,
        family(FamilyId::IV2, at(4, PowerKind::Critical, Sign::Plus)?, Constants::default())?,
    ];
    let mut checks = vec![];
    let reduce = |kind: OdeKind, f: &SolutionFamily, xs: &[f64]| -> Check {
        let name = format!("{} reduces under {kind:?}", label(f));
        let res = ReducedOde::new(kind, f.params).and_then(|ode| {
            let (worst, used) = sweep(xs, |x| ode.relative_residual(&ode.reduce_sample(f, x)?))?;
            Ok(Check::below(&name, worst, 1e-8).and(used >= xs.len() / 2, "too few usable points"))
        });
        settle(&name, res)
    };
    let rs = grid(0.3, 3.0, 20);
    for f in statics.iter().filter(|f| opts.wants_n(f.params.n)) {
        checks.push(reduce(OdeKind::Trans, f, &rs));
    }
    let xis: Vec<f64> = grid(0.05, 0.9, 10).into_iter().chain(grid(1.1, 3.0, 10)).collect();
    let inv: Vec<f64> = xis.iter().map(|x| 1.0 / x).collect();
    for f in scaling.iter().filter(|f| opts.wants_n(f.params.n)) {
        checks.push(reduce(OdeKind::Scal, f, &xis));
        checks.push(reduce(OdeKind::ScalStatic, f, &inv));
    }
    Ok(checks)
}

pub fn reductions_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut checks = quadrature_checks(opts)?;
    checks.extend(ode_checks(opts)?);
    for n in opts.dims(2..=7) {
        let name = format!("no point symmetry of the translation-inversion ODE n={n}");
        checks.push(settle(&name, no_symmetry_witness(n).map(|rep| Check::exact(&name, rep.pass))));
    }
    Ok(SuiteReport::new(Scope::Reductions, checks))
}
