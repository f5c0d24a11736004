use super::canonical::from_canonical;
use super::*;
use crate::catalog::{Constants, FamilyId, SolutionFamily};
use crate::jet::Jet2;
use crate::liealg::{GroupElement, Transformed};

fn at(n: u32, kind: PowerKind, k: Sign) -> ModelParams {
    ModelParams::at(n, kind, k).unwrap()
}

fn fam(id: FamilyId, params: ModelParams, c: Constants) -> SolutionFamily {
    SolutionFamily::new(id, params, c).unwrap()
}

fn check_zero<F: RadialField>(ode: &ReducedOde, field: &F, xs: &[f64], tol: f64) -> usize {
    let mut used = 0;
    for &x in xs {
        match ode.reduce_sample(field, x) {
            Ok(pt) => {
                let r = ode.relative_residual(&pt).unwrap();
                assert!(r < tol, "{:?} at {x}: {r} ({pt:?})", ode.kind);
                used += 1;
            }
            Err(Error::Domain(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }
    used
}

fn grid(a: f64, b: f64, m: usize) -> Vec<f64> {
    (0..m).map(|i| a + (b - a) * i as f64 / (m - 1) as f64).collect()
}

#[test]
fn spec_constant_examples() {
    let ode = ReducedOde::new(OdeKind::TransCanonicalScal, at(4, PowerKind::Critical, Sign::Plus)).unwrap();
    assert_eq!(ode.residual(0.3, -1.0, 0.0, 0.0).unwrap(), 0.0);
    let ode = ReducedOde::new(OdeKind::InverCanonical, at(5, PowerKind::Conformal, Sign::Plus)).unwrap();
    assert!(ode.residual(0.3, 2.0, 0.0, 0.0).unwrap().abs() < 1e-14);
}

#[test]
fn kinds_enforce_powers_and_singular_points() {
    let generic = ModelParams::new(3, 2.0, Sign::Plus).unwrap();
    for kind in OdeKind::ALL {
        let r = ReducedOde::new(kind, generic);
        assert_eq!(r.is_ok(), kind.power().is_none(), "{kind:?}");
    }
    let scal = ReducedOde::new(OdeKind::Scal, generic).unwrap();
    for xi in [0.0, 1.0, -1.0] {
        assert!(matches!(scal.residual(xi, 1.0, 0.0, 0.0), Err(Error::Domain(_))));
    }
    let tr = ReducedOde::new(OdeKind::Trans, generic).unwrap();
    assert!(matches!(tr.residual(0.0, 1.0, 0.0, 0.0), Err(Error::Domain(_))));
}

#[test]
fn static_families_solve_the_radial_ode() {
    let rs = grid(0.3, 3.0, 20);
    let cases = [
        fam(FamilyId::IV3, at(3, PowerKind::Critical, Sign::Plus), Constants::default()),
        fam(FamilyId::IV3, at(5, PowerKind::Critical, Sign::Minus), Constants::default().branch(Sign::Minus)),
        fam(FamilyId::IV5, at(4, PowerKind::Critical, Sign::Plus), Constants::default()),
        fam(FamilyId::IV4, at(4, PowerKind::InverseDilation, Sign::Minus), Constants::default()),
        fam(FamilyId::IV6, at(5, PowerKind::Conformal, Sign::Plus), Constants::default()),
        fam(FamilyId::U3, at(5, PowerKind::InverseDilation, Sign::Minus), Constants::with_c(0.4)),
    ];
    for f in cases {
        let ode = ReducedOde::new(OdeKind::Trans, f.params).unwrap();
        let used = check_zero(&ode, &f, &rs, 1e-8);
        assert!(used >= 15, "{:?} {used}", f.id);
        let canon = match f.id {
            FamilyId::IV3 | FamilyId::IV5 => Some(OdeKind::TransCanonicalScal),
            FamilyId::IV4 | FamilyId::U3 => Some(OdeKind::TransCanonicalDil),
            _ => None,
        };
        if let Some(kind) = canon {
            let ode = ReducedOde::new(kind, f.params).unwrap();
            assert!(check_zero(&ode, &f, &rs, 1e-8) >= 10, "{:?} {kind:?}", f.id);
        }
    }
}

#[test]
fn scaling_invariant_families_solve_both_scaling_odes() {
    let xis: Vec<f64> = grid(0.05, 0.9, 10).into_iter().chain(grid(1.1, 3.0, 10)).collect();
    let cases = [
        fam(FamilyId::U1, ModelParams::new(3, 3.0, Sign::Plus).unwrap(), Constants::with_c(0.0)),
        fam(FamilyId::U2, ModelParams::new(4, 2.0, Sign::Plus).unwrap(), Constants::with_c(0.0)),
        fam(FamilyId::U4, at(5, PowerKind::StaticLine, Sign::Plus), Constants::with_c(0.0).branch(Sign::Plus)),
        fam(FamilyId::U5, at(3, PowerKind::MinusThree, Sign::Minus), Constants::with_c(0.0)),
        fam(FamilyId::U6, at(3, PowerKind::Conformal, Sign::Plus), Constants::with_c(0.0)),
        fam(FamilyId::U7, at(4, PowerKind::Conformal, Sign::Plus), Constants::with_c(0.0)),
        fam(FamilyId::IV1, at(3, PowerKind::Critical, Sign::Plus), Constants::default()),
        fam(FamilyId::IV2, at(4, PowerKind::Critical, Sign::Plus), Constants::default()),
    ];
    for f in cases {
        let scal = ReducedOde::new(OdeKind::Scal, f.params).unwrap();
        let stat = ReducedOde::new(OdeKind::ScalStatic, f.params).unwrap();
        let inv: Vec<f64> = xis.iter().map(|x| 1.0 / x).collect();
        let a = check_zero(&scal, &f, &xis, 1e-8);
        let b = check_zero(&stat, &f, &inv, 1e-8);
        assert!(a >= 8 && b >= 8, "{:?}: {a} {b}", f.id);
    }
    for (n, id) in [(3, FamilyId::IV1), (5, FamilyId::IV1), (4, FamilyId::IV2)] {
        let f = fam(id, at(n, PowerKind::Critical, Sign::Plus), Constants::default());
        let inside = ReducedOde::new(OdeKind::ScalCanonicalDil, f.params).unwrap();
        let outside = inside.with_s(Sign::Minus);
        if id == FamilyId::IV1 {
            assert_eq!(check_zero(&inside, &f, &grid(0.05, 0.9, 10), 1e-8), 10);
        }
        assert_eq!(check_zero(&outside, &f, &grid(1.1, 3.0, 10), 1e-8), 10);
    }
}

/// Members with `c != 0` are inversion images of the scaling-invariant member.
#[test]
fn inversion_images_reduce_after_undoing_the_inversion() {
    let xis: Vec<f64> = grid(0.1, 0.9, 10).into_iter().chain(grid(1.2, 3.0, 10)).collect();
    let p3 = at(3, PowerKind::Conformal, Sign::Plus);
    let a = (1.0f64 / 8.0).sqrt();
    let u6 = fam(FamilyId::U6, p3, Constants::with_c(0.3).branch(Sign::Plus));
    let back = Transformed::new(GroupElement::inversion(-0.3 / (2.0 * a)), &u6).unwrap();
    let scal = ReducedOde::new(OdeKind::Scal, p3).unwrap();
    assert!(check_zero(&scal, &back, &xis, 1e-8) >= 10);
    let p4 = at(4, PowerKind::Conformal, Sign::Plus);
    let u7 = fam(FamilyId::U7, p4, Constants::with_c(0.2));
    let back = Transformed::new(GroupElement::inversion(-0.2), &u7).unwrap();
    let zero = fam(FamilyId::U7, p4, Constants::with_c(0.0));
    for (t, r) in [(0.3, 1.0), (0.5, 2.0)] {
        let (x, y) = (back.value(t, r).unwrap(), zero.value(t, r).unwrap());
        assert!((x - y).abs() < 1e-10 * y.abs());
    }
    let scal = ReducedOde::new(OdeKind::Scal, p4).unwrap();
    assert!(check_zero(&scal, &back, &xis, 1e-8) >= 8);
}

#[test]
fn constant_profile_solves_inversion_odes() {
    for n in [3, 5, 7] {
        let f = fam(FamilyId::IV6, at(n, PowerKind::Conformal, Sign::Plus), Constants::default());
        for kind in [OdeKind::Inver, OdeKind::InverCanonical] {
            let ode = ReducedOde::new(kind, f.params).unwrap();
            assert!(check_zero(&ode, &f, &grid(0.2, 3.0, 20), 1e-10) == 20, "{kind:?}");
        }
        // IV6 is also invariant under translation plus inversion.
        let ode = ReducedOde::new(OdeKind::TransInver, f.params).unwrap();
        assert_eq!(check_zero(&ode, &f, &grid(0.2, 3.0, 20), 1e-10), 20);
    }
}

/// `u = weight * U(invariant)` for a smooth non-solution profile.
struct Profile {
    kind: OdeKind,
    params: ModelParams,
}

impl RadialField for Profile {
    fn params(&self) -> ModelParams {
        self.params
    }
    fn jet(&self, t: Jet2, r: Jet2) -> crate::Result<Jet2> {
        let p = self.params.p();
        let prof = |z: Jet2| (z * (1.0 / 3.0)).exp() + 1.0;
        Ok(match self.kind {
            OdeKind::Trans => prof(r),
            OdeKind::Scal => t.powf(p)? * prof(r.div_checked(t)?),
            OdeKind::ScalStatic => r.powf(p)? * prof(t.div_checked(r)?),
            OdeKind::Inver => r.powf(p)? * prof((t.sq() - r.sq()).div_checked(r)?),
            OdeKind::TransInver => r.powf(p)? * prof((t.sq() - r.sq() + 1.0).div_checked(r)?),
            _ => unreachable!(),
        })
    }
}

#[test]
fn pde_residual_factors_through_each_reduction() {
    let generic = ModelParams::new(4, 2.5, Sign::Minus).unwrap();
    let conf = at(4, PowerKind::Conformal, Sign::Minus);
    let cases = [
        (OdeKind::Trans, generic, -1.0),
        (OdeKind::Scal, generic, -1.0),
        (OdeKind::ScalStatic, generic, 1.0),
        (OdeKind::Inver, conf, -1.0),
        (OdeKind::TransInver, conf, -1.0),
    ];
    for (kind, params, factor) in cases {
        let field = Profile { kind, params };
        let ode = ReducedOde::new(kind, params).unwrap();
        for x in [0.4, 0.7, 1.6, 2.5] {
            let pt = ode.reduce_sample(&field, x).unwrap();
            let (t, r) = match kind {
                OdeKind::Trans => (0.0, x),
                OdeKind::Scal => (1.0, x),
                OdeKind::ScalStatic => (x, 1.0),
                OdeKind::Inver => ((x + 1.0).sqrt(), 1.0),
                _ => (x.sqrt(), 1.0),
            };
            let pde = field.sample(t, r).unwrap().residual(&params).unwrap();
            let ode_res = ode.residual_at(&pt).unwrap();
            assert!(ode_res.abs() > 1e-3, "test profile must not be a solution");
            assert!((pde - factor * ode_res).abs() < 1e-10 * pde.abs().max(1.0), "{kind:?} x={x}: {pde} vs {ode_res}");
        }
    }
}

/// The two written forms of the scaling reduction agree:
/// `E_static(1/xi) = -xi^(2-p) E_scal(xi)` for a scaling-invariant profile.
#[test]
fn scaling_reductions_agree_on_common_samples() {
    let params = ModelParams::new(3, 2.5, Sign::Plus).unwrap();
    let field = Profile { kind: OdeKind::Scal, params };
    let scal = ReducedOde::new(OdeKind::Scal, params).unwrap();
    let stat = ReducedOde::new(OdeKind::ScalStatic, params).unwrap();
    let p = params.p();
    for xi in [0.3, 0.6, 1.4, 2.2] {
        let a = scal.residual_at(&scal.reduce_sample(&field, xi).unwrap()).unwrap();
        let b = stat.residual_at(&stat.reduce_sample(&field, 1.0 / xi).unwrap()).unwrap();
        assert!((b + xi.powf(2.0 - p) * a).abs() < 1e-10 * b.abs().max(1.0), "{xi}: {a} {b}");
    }
}

// ---- quadratures ----

fn a_crit(n: f64) -> f64 {
    (n * (n - 2.0) / 4.0).powf((n - 2.0) / 4.0)
}

#[test]
fn trans_scal_zero_energy_matches_sech_and_iv3() {
    for n in [3u32, 4, 5] {
        let a = a_crit(n as f64);
        let f = QuadratureFamily::new(QuadratureKind::TransScal, n, Sign::Plus, 0.0, 0.0, Sign::Minus).unwrap();
        let sol = QuadratureSolution::solve(f, (0.2 * a, a), Anchor::Upper).unwrap();
        let iv3 = fam(FamilyId::IV3, f.params, Constants::default());
        let m = (n as f64 - 2.0) / 2.0;
        for x in [0.0, 0.1, 0.5, 1.0, 1.5] {
            if x > sol.x_lo.max(sol.x_hi) {
                continue;
            }
            let v = sol.v_of(x).unwrap();
            let closed = f.zero_energy(ZeroEnergyProfile::Sech, x).unwrap();
            assert!((v - closed).abs() < 1e-6, "n={n} x={x}: {v} vs {closed}");
            let (r, u) = canonical_map(OdeKind::TransCanonicalScal, n, Direction::Inverse, (x, v)).unwrap();
            assert!((u - iv3.value(0.0, r).unwrap()).abs() < 1e-6, "IV3 at r={r}");
            assert!((r.powf(m) * u - v).abs() < 1e-12);
        }
        let res = sol.residual_by_differences(0.5, 0.02).unwrap();
        // difference quotients amplify the ~1e-9 inversion error, so this is only a sanity bound
        assert!(res < 1e-5, "{res}");
        assert!(f.ode().relative_residual(&sol.jet_at(0.5).unwrap()).unwrap() < 1e-12);
    }
}

#[test]
fn trans_scal_defocusing_zero_energy_matches_csch() {
    let n = 3u32;
    let lo: f64 = 0.3;
    let fam0 = QuadratureFamily::new(QuadratureKind::TransScal, n, Sign::Minus, 0.0, 0.0, Sign::Minus).unwrap();
    // anchor so that x(lo) matches the closed form
    let x_lo = ((n as f64 * (n as f64 - 2.0) / 4.0).sqrt() / lo.powf(2.0 / (n as f64 - 2.0))).asinh();
    let f = QuadratureFamily { c_tilde: -x_lo, ..fam0 };
    let sol = QuadratureSolution::solve(f, (lo, 3.0), Anchor::Lower).unwrap();
    let iv3 = fam(FamilyId::IV3, f.params, Constants::default().branch(Sign::Minus));
    for x in [0.2, 0.5, 1.0] {
        let v = sol.v_of(x).unwrap();
        let closed = fam0.zero_energy(ZeroEnergyProfile::Csch, x).unwrap();
        assert!((v - closed).abs() < 1e-6, "x={x}: {v} vs {closed}");
        let (r, u) = canonical_map(OdeKind::TransCanonicalScal, n, Direction::Inverse, (x, v)).unwrap();
        assert!((u - iv3.value(0.0, r).unwrap()).abs() < 1e-6);
    }
}

#[test]
fn scal_dil_inside_light_cone_matches_trans_scal() {
    let n = 4;
    let a = a_crit(4.0);
    let t = QuadratureFamily::new(QuadratureKind::TransScal, n, Sign::Plus, 0.3, 0.1, Sign::Plus).unwrap();
    let s = QuadratureFamily::new(QuadratureKind::ScalDil, n, Sign::Plus, 0.3, 0.1, Sign::Plus).unwrap();
    let qt = QuadratureSolution::solve(t, (0.1, a), Anchor::Lower).unwrap();
    let qs = QuadratureSolution::solve(s, (0.1, a), Anchor::Lower).unwrap();
    for v in [0.1, 0.4, 0.8, a] {
        assert_eq!(qt.x_of(v).unwrap(), qs.x_of(v).unwrap());
    }
}

#[test]
fn scal_dil_zero_energy_gives_iv1_and_iv2() {
    let n = 3u32;
    let a = a_crit(3.0);
    let params = at(n, PowerKind::Critical, Sign::Plus);
    let iv1 = fam(FamilyId::IV1, params, Constants::default());
    let iv2 = fam(FamilyId::IV2, params, Constants::default());
    // inside: sech profile, xi = sech x
    let inside = QuadratureFamily::new(QuadratureKind::ScalDil, n, Sign::Plus, 0.0, 0.0, Sign::Plus).unwrap();
    let sol = QuadratureSolution::solve(inside, (0.3 * a, a), Anchor::Upper).unwrap();
    for x in [-1.2, -0.6, -0.1] {
        let v = sol.v_of(x).unwrap();
        assert!((v - inside.zero_energy(ZeroEnergyProfile::Sech, x).unwrap()).abs() < 1e-6);
        let (xi, u) = canonical_map(OdeKind::ScalCanonicalDil, n, Direction::Inverse, (x, v)).unwrap();
        assert!(xi < 1.0);
        assert!((u - iv1.value(1.0, xi).unwrap()).abs() < 1e-6);
    }
    // outside: sec profile gives IV1 again, csc gives IV2
    let out = QuadratureFamily::new(QuadratureKind::ScalDil, n, Sign::Plus, 0.0, 0.0, Sign::Plus).unwrap().with_s(Sign::Minus);
    let sec = QuadratureSolution::solve(out, (a, 3.0 * a), Anchor::Lower).unwrap();
    let csc_fam = QuadratureFamily { c_tilde: -std::f64::consts::FRAC_PI_2, branch: Sign::Minus, ..out };
    let csc = QuadratureSolution::solve(csc_fam, (a, 3.0 * a), Anchor::Lower).unwrap();
    for x in [0.3, 0.8, 1.1] {
        let v = sec.v_of(x).unwrap();
        assert!((v - out.zero_energy(ZeroEnergyProfile::Sec, x).unwrap()).abs() < 1e-6);
        let (xi, u) = canonical_map(OdeKind::ScalCanonicalDil, n, Direction::Inverse, (x, v)).unwrap();
        assert!(xi > 1.0 && (u - iv1.value(1.0, xi).unwrap()).abs() < 1e-6);

        let v = csc.v_of(x).unwrap();
        let closed = out.zero_energy(ZeroEnergyProfile::Csc, x).unwrap();
        assert!((v - closed).abs() < 1e-6, "csc x={x}: {v} vs {closed}");
        let (xi, u) = canonical_map(OdeKind::ScalCanonicalDil, n, Direction::Inverse, (x, v)).unwrap();
        assert!((u - iv2.value(1.0, xi).unwrap()).abs() < 1e-6);
    }
}

#[test]
fn trans_dil_zero_energy_gives_iv4() {
    for n in [4u32, 5, 6] {
        let f = QuadratureFamily::new(QuadratureKind::TransDil, n, Sign::Minus, 0.0, 0.0, Sign::Plus).unwrap();
        let sol = QuadratureSolution::solve(f, (0.0, 3.0), Anchor::Lower).unwrap();
        let iv4 = fam(FamilyId::IV4, f.params, Constants::default().branch(Sign::Plus));
        for x in [0.05, 0.3, 0.9] {
            let v = sol.v_of(x).unwrap();
            let closed = f.zero_energy(ZeroEnergyProfile::Power, x).unwrap();
            assert!((v - closed).abs() < 1e-6 * closed.max(1.0), "n={n} x={x}: {v} vs {closed}");
            let (r, u) = canonical_map(OdeKind::TransCanonicalDil, n, Direction::Inverse, (x, v)).unwrap();
            let expect = iv4.value(0.0, r).unwrap();
            assert!((u - expect).abs() < 1e-6 * expect.abs().max(1.0), "n={n} r={r}");
        }
    }
}

#[test]
fn trans_dil_with_energy_round_trips_and_turns() {
    let f = QuadratureFamily::new(QuadratureKind::TransDil, 5, Sign::Plus, 0.5, 0.0, Sign::Plus).unwrap();
    let v_turn = 3f64.powf(-1.5);
    assert!(f.radicand(v_turn).unwrap().abs() < 1e-14);
    let sol = QuadratureSolution::solve(f, (0.0, v_turn), Anchor::Lower).unwrap();
    for v0 in [0.01, 0.05, 0.1, 0.15, 0.19] {
        let x = sol.x_of(v0).unwrap();
        assert!((sol.v_of(x).unwrap() - v0).abs() < 1e-8);
    }
    let xm = 0.5 * (sol.x_lo + sol.x_hi);
    assert!(sol.residual_by_differences(xm, 0.01).unwrap() < 1e-6);
    let pt = sol.jet_at(xm).unwrap();
    assert!(f.ode().relative_residual(&pt).unwrap() < 1e-12);
    assert!(matches!(sol.v_of(sol.x_hi + 0.01), Err(Error::NonMonotone(_))));
    assert!(matches!(sol.v_of(sol.x_lo - 0.01), Err(Error::Domain(_))));
    assert!(matches!(QuadratureSolution::solve(f, (0.0, 1.0), Anchor::Lower), Err(Error::Domain(_))));
}

#[test]
fn closed_forms_need_zero_energy_and_matching_branch() {
    let f = QuadratureFamily::new(QuadratureKind::TransScal, 3, Sign::Plus, 0.1, 0.0, Sign::Plus).unwrap();
    assert!(matches!(f.zero_energy(ZeroEnergyProfile::Sech, 0.0), Err(Error::UnsupportedParams(_))));
    let f = QuadratureFamily { c: 0.0, ..f };
    assert!(matches!(f.zero_energy(ZeroEnergyProfile::Csch, 1.0), Err(Error::UnsupportedParams(_))));
}

#[test]
fn quadrature_table_csv() {
    let f = QuadratureFamily::new(QuadratureKind::TransDil, 4, Sign::Minus, 0.0, 0.0, Sign::Plus).unwrap();
    let sol = QuadratureSolution::solve(f, (0.0, 2.0), Anchor::Lower).unwrap();
    let mut buf = vec![];
    sol.write_csv(5, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "v,x");
    assert_eq!(lines.len(), 6);
    let last: Vec<f64> = lines[5].split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(last[0], 2.0);
    // n = 4: x = sqrt(2 v) exactly
    assert!((last[1] - 2.0).abs() < 1e-10);
}

#[test]
fn canonical_jets_from_quadrature_map_back_to_reduced_solutions() {
    let n = 4u32;
    let f = QuadratureFamily::new(QuadratureKind::TransScal, n, Sign::Plus, 0.2, 0.0, Sign::Plus).unwrap();
    let sol = QuadratureSolution::solve(f, (0.05, 1.0), Anchor::Lower).unwrap();
    let trans = ReducedOde::new(OdeKind::Trans, f.params).unwrap();
    for x in [0.05, 0.2, 0.4] {
        let pt = sol.jet_at(x).unwrap();
        let red = from_canonical(OdeKind::TransCanonicalScal, n, &pt).unwrap();
        assert!(trans.relative_residual(&red).unwrap() < 1e-10, "{red:?}");
    }
}

#[test]
fn witness_finds_no_symmetry() {
    for n in 2..=7 {
        let rep = no_symmetry_witness(n).unwrap();
        assert!(rep.pass, "{rep:?}");
        let get = |k: OdeKind, g: Generator| rep.entries.iter().find(|e| e.ode == k && e.generator == g).unwrap().defect;
        assert!(get(OdeKind::TransInver, Generator::Identity) == 0.0);
        assert!(get(OdeKind::Inver, Generator::XiScaling) < 1e-9);
        assert!(get(OdeKind::TransInver, Generator::XiScaling) > 1e-2);
        assert!(get(OdeKind::TransInver, Generator::Dilation) > 1e-2);
    }
}
