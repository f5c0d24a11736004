//! Acceptance criteria 1 to 10. Runs without the test harness so that every
//! criterion prints one PASS or FAIL line; exits non-zero if any fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use radialwave::catalog::{Constants, FamilyId, SolutionFamily};
use radialwave::foliation::GhId;
use radialwave::simulator::{fit_blowup_rate, run, run_convergence, BlowupWindow, SimConfig, Status};
use radialwave::verify::{
    algebra_suite, erratum_checks, foliation_suite, group_closure_checks, pde_suite, potentials_suite,
    reconstruction_checks, reductions_suite, Check, VerifyOptions,
};
use radialwave::{ModelParams, PowerKind, Sign};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn require(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn all_pass(checks: &[&Check]) -> Result<(), String> {
    match checks.iter().find(|c| !c.pass) {
        None => Ok(()),
        Some(c) => Err(format!("{} failed: residual {:e} vs {:e} {}", c.name, c.residual, c.threshold, c.note.as_deref().unwrap_or(""))),
    }
}

fn worst(checks: &[&Check]) -> f64 {
    checks.iter().map(|c| c.residual).fold(0.0, f64::max)
}

fn within(elapsed: Duration, limit: f64) -> Result<(), String> {
    require(elapsed.as_secs_f64() < limit, || format!("took {:.1} s, limit {limit} s", elapsed.as_secs_f64()))
}

fn pde_residuals() -> Outcome {
    let start = Instant::now();
    let suite = pde_suite(&VerifyOptions::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let checks: Vec<&Check> =
        suite.checks.iter().filter(|c| !c.name.ends_with("accepted") && !c.name.ends_with("rejected")).collect();
    let mut per_family: BTreeMap<String, usize> = BTreeMap::new();
    for c in &checks {
        *per_family.entry(c.name.split(' ').next().unwrap_or("").to_string()).or_default() += 1;
    }
    require(per_family.len() == 15 && per_family.values().all(|&m| m == 3), || format!("instances per family {per_family:?}"))?;
    require(checks.iter().all(|c| c.samples.len() == 50), || "every instance needs 50 points".into())?;
    require(checks.iter().all(|c| c.threshold == 1e-9), || "threshold must be 1e-9".into())?;
    all_pass(&checks)?;
    within(elapsed, 5.0)?;
    Ok(format!("45 instances, max relative residual {:.1e}, {:.2} s", worst(&checks), elapsed.as_secs_f64()))
}

fn erratum() -> Outcome {
    let checks = erratum_checks().map_err(|e| e.to_string())?;
    let refs: Vec<&Check> = checks.iter().collect();
    all_pass(&refs)?;
    let printed = checks.iter().find(|c| c.name.ends_with("rejected")).ok_or("no printed-form check")?;
    let note = printed.note.as_deref().unwrap_or("");
    require(note.contains("= 4 at n = 5") && note.contains("needs v = 2"), || format!("note: {note}"))?;
    Ok(format!("corrected form residual {:.1e}, printed form residual {:.2}", checks[0].residual, printed.residual))
}

fn brackets() -> Outcome {
    let suite = algebra_suite(&VerifyOptions::default()).map_err(|e| e.to_string())?;
    let checks: Vec<&Check> = suite.checks.iter().filter(|c| c.name.starts_with('[') || c.name.starts_with("Jacobi")).collect();
    require(checks.len() == 32, || format!("{} bracket checks, expected 4 for each n in 2..=9", checks.len()))?;
    require(checks.iter().all(|c| c.threshold == 0.0 && c.residual == 0.0), || "brackets must be exactly equal".into())?;
    all_pass(&checks)?;
    Ok("three brackets and Jacobi, exact for n = 2..9".into())
}

fn foliation() -> Outcome {
    let suite = foliation_suite(&VerifyOptions::default()).map_err(|e| e.to_string())?;
    let resolving: Vec<&Check> = suite.checks.iter().filter(|c| c.name.contains(" system ")).collect();
    for id in GhId::ALL {
        let tag = format!("{} on the ", id.name());
        require(resolving.iter().any(|c| c.name.starts_with(&tag)), || format!("no resolving check for {}", id.name()))?;
    }
    require(resolving.iter().all(|c| c.threshold <= 1e-9), || "threshold must be 1e-9".into())?;
    all_pass(&resolving)?;
    let ansatz: Vec<&Check> = suite.checks.iter().filter(|c| c.name.starts_with("ansatz")).collect();
    require(ansatz.iter().any(|c| c.name.contains("v^q leaves a nonzero coefficient")), || "no a = b = q ansatz check".into())?;
    all_pass(&ansatz)?;
    Ok(format!("10 pairs on {} systems, max residual {:.1e}; a = b = q ansatz inconsistent", resolving.len(), worst(&resolving)))
}

fn potentials() -> Outcome {
    let suite = potentials_suite(&VerifyOptions::default()).map_err(|e| e.to_string())?;
    let checks: Vec<&Check> = suite.checks.iter().collect();
    let curl: Vec<&Check> = checks.iter().copied().filter(|c| c.name.starts_with("mixed partials")).collect();
    let induced: Vec<&Check> = checks.iter().copied().filter(|c| c.name.contains(" induces ")).collect();
    require(!curl.is_empty() && !induced.is_empty(), || "missing potential checks".into())?;
    require(curl.iter().all(|c| c.threshold <= 1e-9) && induced.iter().all(|c| c.threshold <= 1e-10), || "thresholds".into())?;
    all_pass(&checks)?;
    Ok(format!("mixed partials {:.1e}, induced pairs {:.1e}", worst(&curl), worst(&induced)))
}

fn reconstruction() -> Outcome {
    let checks = reconstruction_checks();
    let refs: Vec<&Check> = checks.iter().collect();
    all_pass(&refs)?;
    let perturbed = refs.iter().any(|c| c.name.starts_with("perturbed"));
    require(perturbed, || "no corrupted-pair check".into())?;
    let rel: Vec<&Check> = refs.iter().copied().filter(|c| c.name.contains("reconstructs")).collect();
    let paths: Vec<&Check> = refs.iter().copied().filter(|c| c.name.contains("mixed paths")).collect();
    Ok(format!("S1 -> U1 and C1 -> U6 within {:.1e}, paths agree to {:.1e}, corrupted pair rejected", worst(&rel), worst(&paths)))
}

fn quadratures() -> Outcome {
    let suite = reductions_suite(&VerifyOptions::default()).map_err(|e| e.to_string())?;
    let checks: Vec<&Check> = suite.checks.iter().filter(|c| c.name.contains(" profile ")).collect();
    require(checks.iter().any(|c| c.name.starts_with("sech")), || "no sech profile".into())?;
    require(checks.iter().any(|c| c.name.starts_with("power-law")), || "no power-law profile".into())?;
    require(checks.iter().all(|c| c.threshold <= 1e-6), || "threshold must be 1e-6".into())?;
    all_pass(&checks)?;
    Ok(format!("{} closed forms, max deviation {:.1e}", checks.len(), worst(&checks)))
}

fn smooth_member() -> SolutionFamily {
    let params = ModelParams::at(3, PowerKind::Conformal, Sign::Plus).expect("conformal power");
    SolutionFamily::new(FamilyId::U8, params, Constants::with_c(1.0).branch(Sign::Minus)).expect("valid member")
}

fn simulator_convergence() -> Outcome {
    let start = Instant::now();
    let u8 = smooth_member();
    let template = SimConfig::exact(u8, 1.0, 3.0, 5.0, 100);
    let rep = run_convergence(&template, &[100, 200, 400], &u8).map_err(|e| e.to_string())?;
    let mut cfg = template.with_n(400);
    cfg.stride = 10;
    let out = run(&cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    require((rep.order_linf - 2.0).abs() <= 0.2, || format!("order {:.3}", rep.order_linf))?;
    require(out.status() == Status::Completed, || format!("{:?}", out.status()))?;
    let drift = out.energy_drift();
    require(drift < 1e-4, || format!("energy drift {drift:e}"))?;
    within(elapsed, 60.0)?;
    Ok(format!("order {:.3}, energy drift {:.1e}, {:.1} s", rep.order_linf, drift, elapsed.as_secs_f64()))
}

fn blowup() -> Outcome {
    let start = Instant::now();
    let params = ModelParams::at(3, PowerKind::Conformal, Sign::Plus).expect("conformal power");
    let u6 = SolutionFamily::new(FamilyId::U6, params, Constants::with_c(-1.0).branch(Sign::Minus)).map_err(|e| e.to_string())?;
    let t_star = (1.0f64 / 8.0).sqrt();
    let t0 = -t_star;
    let predicted = u6.singular_set().first_axis_time_after(t0).ok_or("no predicted blow-up")?;
    let mut cfg = SimConfig::exact(u6, t0, t0 + 2.0 * (predicted - t0), 1.0, 800);
    cfg.stride = 0;
    let out = run(&cfg).map_err(|e| e.to_string())?;
    let Status::Blowup { t } = out.status() else { return Err(format!("run ended as {:?}", out.status())) };
    let fit = fit_blowup_rate(&out, &params, 0.0, &BlowupWindow::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let time_error = (t - predicted).abs() / (predicted - t0);
    require(time_error <= 0.05, || format!("blow-up at {t}, predicted {predicted}"))?;
    require(fit.reference_exponent == -1.0, || format!("reference {}", fit.reference_exponent))?;
    require((fit.exponent - fit.reference_exponent).abs() <= 0.05, || format!("exponent {:.4}", fit.exponent))?;
    within(elapsed, 120.0)?;
    Ok(format!(
        "blow-up at t = {t:.5} vs {predicted} ({:.2}% of the run), exponent {:.4} vs (1-n)/2 = -1, {:.1} s",
        100.0 * time_error,
        fit.exponent,
        elapsed.as_secs_f64()
    ))
}

fn group_closure() -> Outcome {
    let checks = group_closure_checks(&VerifyOptions::default());
    let refs: Vec<&Check> = checks.iter().collect();
    let twice: Vec<&Check> = refs.iter().copied().filter(|c| c.name.starts_with("involution twice")).collect();
    require(!twice.is_empty(), || "no involution round trips".into())?;
    require(refs.iter().all(|c| c.threshold <= 1e-9), || "threshold must be 1e-9".into())?;
    all_pass(&refs)?;
    Ok(format!("{} transformed members, max residual {:.1e}; involution twice within {:.1e}", refs.len() - twice.len(), worst(&refs), worst(&twice)))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("PDE residual certification", pde_residuals),
        ("erratum adjudication", erratum),
        ("Lie algebra brackets", brackets),
        ("foliation residuals", foliation),
        ("potential and conservation checks", potentials),
        ("reconstruction round trips", reconstruction),
        ("quadrature cross-check", quadratures),
        ("simulator convergence", simulator_convergence),
        ("blow-up reproduction", blowup),
        ("group-action closure", group_closure),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
