use super::*;
use crate::params::PowerKind;

fn fam(id: FamilyId, n: u32, q: f64, k: f64, c: Constants) -> SolutionFamily {
    SolutionFamily::new(id, ModelParams::with_k(n, q, k).unwrap(), c).unwrap()
}

fn conf(n: u32) -> f64 {
    PowerKind::Conformal.value(n).unwrap()
}

#[test]
fn u1_value_and_residual() {
    let f = fam(FamilyId::U1, 3, 3.0, 1.0, Constants::default());
    for r in [0.1, 1.0, 7.0] {
        let j = f.evaluate(1.0, r).unwrap();
        assert!((j.u - 2f64.sqrt()).abs() < 1e-15);
        assert!((j.u_tt - 2.0 * 2f64.sqrt()).abs() < 1e-14);
        assert!(j.residual(&f.params).unwrap().abs() < 1e-13);
    }
}

#[test]
fn u6_axis_value() {
    let f = fam(FamilyId::U6, 3, 3.0, 1.0, Constants::with_c(1.0));
    let u = f.evaluate(1.0, 0.0).unwrap().u;
    assert!((u - 1.0 / (1.0 / 2f64.sqrt() + 1.0)).abs() < 1e-15);
    assert!((u - 0.5857864).abs() < 1e-7);
}

#[test]
fn iv6_is_two_over_r_squared() {
    let f = fam(FamilyId::IV6, 5, 2.0, 1.0, Constants::default());
    for (t, r) in [(0.0, 0.5), (3.0, 2.0)] {
        let j = f.evaluate(t, r).unwrap();
        assert!((j.u - 2.0 / (r * r)).abs() < 1e-14);
        assert!(j.residual(&f.params).unwrap().abs() < 1e-12);
    }
}

#[test]
fn iv6_as_printed_fails() {
    let f = fam(FamilyId::IV6AsPrinted, 5, 2.0, 1.0, Constants::default());
    let j = f.evaluate(0.0, 1.0).unwrap();
    assert!((j.u - 4.0).abs() < 1e-14);
    let pts: Vec<_> = (1..=10).map(|i| (0.0, 0.3 * i as f64)).collect();
    let rep = f.verify_residual(&pts, 1e-9);
    assert!(!rep.pass);
    assert!(rep.max_residual > 0.1);
}

#[test]
fn iv6_vanishes_for_n3() {
    let f = fam(FamilyId::IV6, 3, 3.0, 1.0, Constants::default());
    assert_eq!(f.evaluate(0.0, 2.0).unwrap().u, 0.0);
    assert!(f.is_zero());
    assert!(f.singular_set().is_empty());
}

#[test]
fn u3_static_quadratic() {
    let f = fam(FamilyId::U3, 4, 0.0, -1.0, Constants::default());
    for r in [0.25, 1.0, 3.0] {
        let j = f.evaluate(0.7, r).unwrap();
        assert!((j.u - r * r / 8.0).abs() < 1e-15);
        assert!(j.residual(&f.params).unwrap().abs() < 1e-14);
    }
}

#[test]
fn u1_equals_u6_at_zero_constant() {
    let a = fam(FamilyId::U1, 3, 3.0, 1.0, Constants::default());
    let b = fam(FamilyId::U6, 3, 3.0, 1.0, Constants::default());
    for (t, r) in [(0.5, 0.1), (1.5, 2.0), (3.0, 0.7)] {
        let (x, y) = (a.evaluate(t, r).unwrap(), b.evaluate(t, r).unwrap());
        assert!((x.u - y.u).abs() <= 2.0 * f64::EPSILON * x.u.abs());
        assert!((x.u - 2f64.sqrt() / t).abs() < 1e-14);
    }
}

#[test]
fn u9_reduces_to_u8_without_second_constant() {
    for s in [Sign::Plus, Sign::Minus] {
        let c = Constants::with_c(1.3).branch(s);
        let u8 = fam(FamilyId::U8, 5, 2.0, 1.0, c);
        let u9 = fam(FamilyId::U9, 5, 2.0, 1.0, c);
        for (t, r) in [(0.2, 0.4), (-1.0, 2.5), (2.0, 0.3)] {
            let (x, y) = (u8.evaluate(t, r).unwrap(), u9.evaluate(t, r).unwrap());
            assert!((x.u - y.u).abs() < 1e-12 * x.u.abs(), "{s} {t} {r}");
        }
    }
}

#[test]
fn constraints_enforced() {
    let p = ModelParams::with_k(3, 3.0, 1.0).unwrap();
    assert!(SolutionFamily::new(FamilyId::U5, p, Constants::default()).is_err());
    let p = ModelParams::with_k(3, -3.0, 1.0).unwrap();
    assert!(matches!(
        SolutionFamily::new(FamilyId::U5, p, Constants::default()),
        Err(Error::UnsupportedParams(_))
    ));
    let p = ModelParams::with_k(3, 3.0, -1.0).unwrap();
    assert!(SolutionFamily::new(FamilyId::U6, p, Constants::default()).is_err());
    assert!(SolutionFamily::new(FamilyId::U8, p, Constants::default()).is_err());
    let p = ModelParams::with_k(4, 2.0, 1.0).unwrap();
    assert!(SolutionFamily::new(FamilyId::U2, ModelParams::with_k(3, 2.0, 1.0).unwrap(), Constants::default()).is_err());
    assert!(SolutionFamily::new(FamilyId::U1, p, Constants::default()).is_ok());
    // IV4 with k = +1 is real only for n = 4
    let p5 = ModelParams::with_k(5, -1.0 / 3.0, 1.0).unwrap();
    assert!(SolutionFamily::new(FamilyId::IV4, p5, Constants::default()).is_err());
}

#[test]
fn fractional_power_of_negative_base_is_domain_error() {
    let f = fam(FamilyId::U2, 3, 3.0, 1.0, Constants::default());
    // inside the light cone the base is negative and the exponent is -1/2
    assert!(matches!(f.evaluate(2.0, 0.5), Err(Error::Domain(_))));
}

#[test]
fn guard_rejects_points_on_singular_set() {
    let f = fam(FamilyId::U7, 3, 3.0, 1.0, Constants::with_c(1.0));
    assert!(matches!(f.evaluate(0.5, 0.5), Err(Error::Domain(_))));
}

#[test]
fn standard_instances_pass_residuals() {
    let insts = standard_instances();
    assert_eq!(insts.len(), 45);
    for (i, inst) in insts.iter().enumerate() {
        let pts = inst.family.interior_points(&inst.region, 50, 0.05, i as u64).unwrap();
        let rep = inst.family.verify_residual(&pts, 1e-9);
        assert!(rep.pass, "{} {:?} max {:e}", inst.family.id, inst.family.params, rep.max_residual);
    }
}

#[test]
fn u2_inside_spacelike_region() {
    let f = fam(FamilyId::U2, 3, 3.0, 1.0, Constants::default());
    let pts = f.interior_points(&SampleRegion::new(-1.0, 1.0, 1.1, 4.0), 100, 0.05, 11).unwrap();
    assert!(pts.iter().all(|(t, r)| t * t < r * r));
    let rep = f.verify_residual(&pts, 1e-10);
    assert!(rep.pass, "{:e}", rep.max_residual);
}

#[test]
fn u5_on_unit_interval() {
    let f = fam(FamilyId::U5, 3, -3.0, -1.0, Constants::with_c(1.0));
    let pts: Vec<_> = (1..20).map(|i| (i as f64 / 20.0, 0.5)).collect();
    assert!(f.verify_residual(&pts, 1e-9).pass);
}

#[test]
fn derivatives_match_central_differences() {
    for inst in standard_instances().iter().step_by(4) {
        let f = &inst.family;
        let pts = f.interior_points(&inst.region, 3, 0.2, 5).unwrap();
        for (t, r) in pts {
            let j = f.evaluate(t, r).unwrap();
            let err = |h: f64| {
                let u = |a: f64, b: f64| f.value(a, b).unwrap();
                let ut = (u(t + h, r) - u(t - h, r)) / (2.0 * h);
                let ur = (u(t, r + h) - u(t, r - h)) / (2.0 * h);
                (ut - j.u_t).abs() + (ur - j.u_r).abs()
            };
            let (e1, e2) = (err(1e-3), err(5e-4));
            if e1 < 1e-9 {
                continue; // polynomial in the variables or rounding dominated
            }
            let ratio = e1 / e2;
            assert!((3.5..=4.5).contains(&ratio), "{} at ({t},{r}): ratio {ratio}", f.id);
        }
    }
}

#[test]
fn singular_set_examples() {
    let f = fam(FamilyId::U7, 3, 3.0, 1.0, Constants::with_c(1.0));
    assert_eq!(
        f.singular_set().components,
        vec![
            Component::LightCone { t0: 0.0, half: Half::Both },
            Component::LightCone { t0: -1.0, half: Half::Both }
        ]
    );
    let f = fam(FamilyId::U4, 4, 1.5, 1.0, Constants::default());
    let set = f.singular_set();
    assert!(set.components.contains(&Component::Axis));
    assert!(set.components.iter().any(|c| matches!(c, Component::LightCone { t0, .. } if *t0 == 0.0)));
    let f = fam(FamilyId::U8, 3, 3.0, 1.0, Constants::with_c(1.0).branch(Sign::Minus));
    assert!(f.singular_set().is_empty());
    let f = fam(FamilyId::U6, 3, 3.0, 1.0, Constants::with_c(-1.0).branch(Sign::Minus));
    let t_star = (1.0f64 / 8.0).sqrt();
    assert_eq!(f.singular_set().components, vec![Component::Hyperbola { t_center: -t_star, t_star }]);
    assert_eq!(f.singular_set().first_axis_time_after(-t_star), Some(0.0));
}

/// Each declared component is approached from an admissible point; the jet
/// must grow without bound. Away from the set the solution stays bounded.
#[test]
fn singular_sets_probe() {
    let cases = vec![
        fam(FamilyId::U7, 3, 3.0, 1.0, Constants::with_c(1.0)),
        fam(FamilyId::U8, 5, 2.0, 1.0, Constants::with_c(1.0)),
        fam(FamilyId::U9, 5, 2.0, 1.0, Constants::with_c(1.0).c_tilde(0.5)),
        fam(FamilyId::U6, 3, 3.0, 1.0, Constants::with_c(-1.0).branch(Sign::Minus)),
        fam(FamilyId::U1, 3, 3.0, 1.0, Constants::with_c(0.5)),
        fam(FamilyId::U4, 4, 1.5, 1.0, Constants::default()),
        fam(FamilyId::IV3, 3, 5.0, -1.0, Constants::default().branch(Sign::Minus)),
        fam(FamilyId::U5, 3, -3.0, -1.0, Constants::with_c(1.0)),
    ];
    let size = |f: &SolutionFamily, t: f64, r: f64| -> Option<f64> {
        (*f).with_guard(0.0).evaluate(t, r).ok().map(|j| j.u.abs() + j.u_t.abs() + j.u_r.abs() + j.u_tt.abs() + j.u_rr.abs())
    };
    for f in cases {
        let set = f.singular_set();
        for comp in &set.components {
            // probe points near the component at several heights
            let mut hits = 0;
            for i in 0..40 {
                let r = 0.2 + 0.1 * i as f64;
                let base_t = match *comp {
                    Component::Line { t0 } => Some(t0),
                    Component::LightCone { t0, half } => match half {
                        Half::Past => Some(t0 - r),
                        _ => Some(t0 + r),
                    },
                    Component::Hyperbola { t_center, t_star } => Some(t_center + r.hypot(t_star)),
                    Component::Radius { .. } | Component::Axis => None,
                };
                let probes: Vec<(f64, f64, f64, f64)> = match *comp {
                    Component::Radius { r0 } => vec![(0.3, r0 + 1e-4, 0.3, r0 + 1e-2)],
                    Component::Axis => vec![(0.7, 1e-4, 0.7, 1e-2)],
                    _ => {
                        let t0 = base_t.unwrap();
                        vec![(t0 + 1e-4, r, t0 + 1e-2, r), (t0 - 1e-4, r, t0 - 1e-2, r)]
                    }
                };
                for (ta, ra, tb, rb) in probes {
                    if let (Some(near), Some(far)) = (size(&f, ta, ra), size(&f, tb, rb)) {
                        if set.distance(tb, rb) > 5e-3 {
                            assert!(near > 10.0 * far, "{} near {comp:?} at ({ta},{ra}): {near} vs {far}", f.id);
                            hits += 1;
                        }
                    }
                }
            }
            assert!(hits > 0, "{}: no admissible probe near {comp:?}", f.id);
        }
        for i in 0..30 {
            for j in 1..30 {
                let (t, r) = (-3.0 + 0.2 * i as f64, 0.15 * j as f64);
                if set.distance(t, r) > 0.05 {
                    if let Some(m) = size(&f, t, r) {
                        assert!(m < 1e7, "{} unexpectedly large at ({t},{r}): {m}", f.id);
                    }
                }
            }
        }
    }
}

#[test]
fn energy_examples() {
    let u8m = fam(FamilyId::U8, 3, 3.0, 1.0, Constants::with_c(1.0).branch(Sign::Minus));
    let e1 = u8m.energy(1.0, f64::INFINITY, 4000).unwrap();
    assert_eq!(e1.tail, Convergence::Convergent);
    let v1 = e1.total.finite().unwrap();
    for t0 in [1.5, 2.0, 3.0] {
        let v = u8m.energy(t0, f64::INFINITY, 4000).unwrap().total.finite().unwrap();
        assert!(((v - v1) / v1).abs() < 1e-6, "t0 = {t0}: {v} vs {v1}");
    }
    let iv5 = fam(FamilyId::IV5, 3, 5.0, 1.0, Constants::default());
    assert!(iv5.energy(0.0, 10.0, 1000).unwrap().total.is_infinite());
    let iv3 = fam(FamilyId::IV3, 3, 5.0, 1.0, Constants::default());
    let e = iv3.energy(0.0, f64::INFINITY, 4000).unwrap();
    assert!(!e.total.is_infinite());
    let iv6 = fam(FamilyId::IV6, 5, conf(5), 1.0, Constants::default());
    assert!(iv6.energy(0.0, 10.0, 1000).unwrap().total.is_infinite());
    let iv3m = fam(FamilyId::IV3, 3, 5.0, -1.0, Constants::default().branch(Sign::Minus));
    assert!(matches!(iv3m.energy(0.0, 5.0, 1000), Err(Error::Domain(_))));
}

#[test]
fn energy_positive_for_defocusing_sign() {
    let f = fam(FamilyId::IV3, 4, 3.0, -1.0, Constants::default().branch(Sign::Minus));
    let e = f.energy(0.0, 0.9, 1000).unwrap();
    assert!(e.total.is_infinite());
    assert!(e.truncated.unwrap() > 0.0);
}

#[test]
fn family_table_covers_all() {
    let t = family_table();
    assert_eq!(t.len(), 16);
    for id in FamilyId::ALL {
        assert!(t.iter().any(|row| row.id == id));
    }
    let json = serde_json::to_string(&t).unwrap();
    assert!(json.contains("invervinvdilsol-as-printed"));
}

#[test]
fn family_id_parse_round_trip() {
    for id in FamilyId::ALL {
        assert_eq!(FamilyId::parse(id.name()).unwrap(), id);
    }
    assert_eq!(FamilyId::parse("invervinvdilsol-as-printed").unwrap(), FamilyId::IV6AsPrinted);
    assert!(FamilyId::parse("U10").is_err());
}
