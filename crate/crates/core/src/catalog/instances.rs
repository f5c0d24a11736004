use serde::{Deserialize, Serialize};

use super::{Constants, FamilyId, SolutionFamily};
use crate::params::{ModelParams, PowerKind, Sign};

/// Axis-aligned box in the `(t, r)` half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRegion {
    pub t: (f64, f64),
    pub r: (f64, f64),
}

impl SampleRegion {
    pub const fn new(t0: f64, t1: f64, r0: f64, r1: f64) -> Self {
        SampleRegion { t: (t0, t1), r: (r0, r1) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardInstance {
    pub family: SolutionFamily,
    pub region: SampleRegion,
}

fn inst(id: FamilyId, n: u32, q: f64, k: Sign, c: Constants, region: SampleRegion) -> StandardInstance {
    let params = ModelParams::new(n, q, k).expect("valid standard parameters");
    let family = SolutionFamily::new(id, params, c).expect("valid standard instance");
    StandardInstance { family, region }
}

fn at(kind: PowerKind, n: u32) -> f64 {
    kind.value(n).expect("defined power")
}

/// Three parameter instantiations per family with sampling boxes inside
/// their real-validity domains.
pub fn standard_instances() -> Vec<StandardInstance> {
    use FamilyId::*;
    use PowerKind::*;
    use Sign::{Minus as M, Plus as P};
    let cc = Constants::with_c;
    let base = Constants::default;
    let region = SampleRegion::new;
    vec![
        inst(U1, 3, 3.0, P, base(), region(0.5, 2.0, 0.1, 3.0)),
        inst(U1, 4, 2.0, P, cc(0.5), region(0.0, 2.0, 0.1, 3.0)),
        inst(U1, 5, -2.0, M, base().branch(M), region(0.5, 2.0, 0.1, 3.0)),
        inst(U2, 3, 3.0, P, base(), region(-1.0, 1.0, 0.1, 3.0)),
        inst(U2, 4, 2.0, M, cc(0.3), region(0.0, 1.0, 0.2, 3.0)),
        inst(U2, 5, -0.5, P, base(), region(2.0, 3.0, 0.1, 1.5)),
        inst(U3, 4, at(InverseDilation, 4), M, base(), region(-1.0, 1.0, 0.1, 3.0)),
        inst(U3, 4, at(InverseDilation, 4), M, cc(0.5), region(-1.0, 1.0, 0.1, 3.0)),
        inst(U3, 5, at(InverseDilation, 5), M, cc(1.0), region(-1.0, 1.0, 0.2, 3.0)),
        inst(U4, 4, at(StaticLine, 4), P, base(), region(0.0, 2.0, 0.1, 3.0)),
        inst(U4, 5, at(StaticLine, 5), M, cc(1.0).branch(M), region(-1.0, 1.0, 0.1, 3.0)),
        inst(U4, 6, at(StaticLine, 6), P, cc(2.0), region(-1.0, 1.0, 0.1, 3.0)),
        inst(U5, 3, -3.0, M, cc(1.0), region(0.05, 1.0, 0.1, 3.0)),
        inst(U5, 4, -3.0, M, cc(-0.5).branch2(M), region(0.1, 1.8, 0.1, 3.0)),
        inst(U5, 5, -3.0, M, cc(1.0).branch(M), region(-0.95, -0.05, 0.1, 3.0)),
        inst(U6, 3, at(Conformal, 3), P, cc(1.0), region(0.1, 2.0, 0.1, 3.0)),
        inst(U6, 4, at(Conformal, 4), P, cc(-1.0).branch(M), region(-0.4, -0.05, 0.1, 2.0)),
        inst(U6, 5, at(Conformal, 5), P, cc(0.5), region(0.1, 2.0, 0.1, 3.0)),
        inst(U7, 3, at(Conformal, 3), P, cc(1.0), region(0.0, 1.0, 0.1, 2.0)),
        inst(U7, 5, at(Conformal, 5), P, base(), region(-1.0, 1.0, 0.1, 3.0)),
        inst(U7, 4, at(Conformal, 4), P, cc(-0.5), region(0.0, 1.0, 0.1, 3.0)),
        inst(U8, 3, at(Conformal, 3), P, cc(1.0).branch(M), region(-2.0, 3.0, 0.05, 5.0)),
        inst(U8, 5, at(Conformal, 5), P, cc(1.0), region(-2.0, 2.0, 0.1, 3.0)),
        inst(U8, 4, at(Conformal, 4), P, cc(2.0).branch(M), region(-2.0, 2.0, 0.1, 3.0)),
        inst(U9, 3, at(Conformal, 3), P, cc(1.0).branch(M).c_tilde(0.5), region(-2.0, 2.0, 0.1, 3.0)),
        inst(U9, 4, at(Conformal, 4), P, cc(1.5).branch(M).c_tilde(-0.3), region(-2.0, 2.0, 0.1, 3.0)),
        inst(U9, 5, at(Conformal, 5), P, cc(1.0).c_tilde(0.5), region(-2.0, 2.0, 0.1, 3.0)),
        inst(IV1, 3, at(Critical, 3), P, base(), region(0.2, 3.0, 0.1, 3.0)),
        inst(IV1, 4, at(Critical, 4), P, base(), region(0.2, 3.0, 0.1, 3.0)),
        inst(IV1, 6, at(Critical, 6), M, base(), region(0.2, 3.0, 0.1, 3.0)),
        inst(IV2, 3, at(Critical, 3), P, base(), region(-1.0, 1.0, 0.1, 3.0)),
        inst(IV2, 4, at(Critical, 4), P, base(), region(-1.0, 1.0, 0.1, 3.0)),
        inst(IV2, 6, at(Critical, 6), M, base(), region(-1.0, 1.0, 0.1, 3.0)),
        inst(IV3, 3, at(Critical, 3), P, base(), region(-1.0, 1.0, 0.05, 4.0)),
        inst(IV3, 4, at(Critical, 4), P, base(), region(-1.0, 1.0, 0.05, 4.0)),
        inst(IV3, 3, at(Critical, 3), M, base().branch(M), region(-1.0, 1.0, 1.05, 4.0)),
        inst(IV4, 4, at(InverseDilation, 4), P, base(), region(-1.0, 1.0, 0.1, 3.0)),
        inst(IV4, 5, at(InverseDilation, 5), M, base(), region(-1.0, 1.0, 0.1, 3.0)),
        inst(IV4, 6, at(InverseDilation, 6), M, base(), region(-1.0, 1.0, 0.1, 3.0)),
        inst(IV5, 3, at(Critical, 3), P, base(), region(-1.0, 1.0, 0.1, 3.0)),
        inst(IV5, 4, at(Critical, 4), P, base(), region(-1.0, 1.0, 0.1, 3.0)),
        inst(IV5, 6, at(Critical, 6), M, base(), region(-1.0, 1.0, 0.1, 3.0)),
        inst(IV6, 5, at(Conformal, 5), P, base(), region(-1.0, 1.0, 0.1, 3.0)),
        inst(IV6, 7, at(Conformal, 7), P, base(), region(-1.0, 1.0, 0.1, 3.0)),
        inst(IV6, 5, at(Conformal, 5), M, base(), region(-1.0, 1.0, 0.1, 3.0)),
    ]
}
