use serde::{Deserialize, Serialize};

use super::FamilyId;
use crate::params::PowerKind;

/// One row of the exported family table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyInfo {
    pub id: FamilyId,
    pub power: Option<PowerKind>,
    pub constraints: &'static str,
    pub constants: Vec<&'static str>,
    pub formula: &'static str,
    pub singular_set: &'static str,
    pub tail_exponent: &'static str,
    pub axis_exponent: &'static str,
}

pub fn family_table() -> Vec<FamilyInfo> {
    use FamilyId::*;
    let row = |id, constraints, constants: &[&'static str], formula, singular_set, tail_exponent, axis_exponent| FamilyInfo {
        id,
        power: FamilyId::power(id),
        constraints,
        constants: constants.to_vec(),
        formula,
        singular_set,
        tail_exponent,
        axis_exponent,
    };
    vec![
        row(U1, "q != -1, k/(q+1) > 0", &["c", "branch", "t_shift"],
            "(s sqrt(k/(2(q+1))) (q-1) (t+c))^(2/(1-q))", "line t = -c", "0", "0"),
        row(U2, "q != (n+1)/(n-1)", &["c", "t_shift"],
            "(k (q-1)^2/(2(q(1-n)+n+1)) ((t+c)^2 - r^2))^(1/(1-q))", "light cone r = |t+c|", "2/(1-q)", "0"),
        row(U3, "q = (4-n)/(n-2), n != 2,3, k = -1", &["c", "branch"],
            "(s (n-3)/(n-2)^(3/2) r + c r^(3-n))^((n-2)/(n-3))", "axis; sphere where the base vanishes", "(n-2)/(n-3)", "2-n if c != 0"),
        row(U4, "q = (n-1)/(n-2), n != 2,3", &["c", "branch", "t_shift"],
            "(k/((n-2)(n-3)) (c + s t - r) r)^(2-n)", "axis; half light cone r = c + s t", "2(2-n)", "2-n"),
        row(U5, "q = -3, k = -1", &["c", "branch", "branch2", "t_shift"],
            "s2 sqrt(2 s t (1 + c t))", "lines t = 0, t = -1/c", "0", "0"),
        row(U6, "q = (n+3)/(n-1), k = +1", &["c", "branch", "t_shift"],
            "(2 s sqrt(k/(n^2-1)) t + c (t^2 - r^2))^((1-n)/2)",
            "hyperbola |t - t_c| = sqrt(r^2 + t*^2), t_c = -s a/c, t* = a/|c|, a = sqrt(k/(n^2-1)); line t = 0 if c = 0",
            "1-n", "0"),
        row(U7, "q = (n+3)/(n-1)", &["c", "t_shift"],
            "(4k/(n-1)^2 (r^2 - t^2)(1 + 2ct + c^2 (t^2 - r^2)))^((1-n)/4)", "light cones at t = 0 and t = -1/c", "1-n", "0"),
        row(U8, "q = (n+3)/(n-1), c != 0", &["c", "branch", "t_shift"],
            "(4k/(n-1)^2 (t^2 - s/4 (1/c + s c (t^2 - r^2))^2))^((1-n)/4)",
            "branch -: empty; branch +: light cones at t = +-1/c", "1-n", "0"),
        row(U9, "q = (n+3)/(n-1), c != 0", &["c", "c_tilde", "branch", "t_shift"],
            "(4k/(n-1)^2 (r^2 - s/4 (c w - s Q/c)^2))^((1-n)/4), w = t^2 - r^2, Q = 1 + 2 c~ t + c~^2 w",
            "branch -: empty; branch +: light cones at t = 1/(c - c~), t = -1/(c + c~)", "1-n", "0"),
        row(IV1, "q = (n+2)/(n-2)", &["t_shift"],
            "(n(n-2)/(4k))^((n-2)/4) t^(1-n/2)", "line t = 0", "0", "0"),
        row(IV2, "q = (n+2)/(n-2)", &["t_shift"],
            "(n(n-2)/(4k))^((n-2)/4) (r^2 - t^2)^((2-n)/4)", "light cone at t = 0", "(2-n)/2", "0"),
        row(IV3, "q = (n+2)/(n-2)", &["branch"],
            "(s n(n-2)/k)^((n-2)/4) (r^2 + s)^(1-n/2)", "branch +: empty; branch -: sphere r = 1", "2-n", "0"),
        row(IV4, "q = (4-n)/(n-2), n != 2,3", &["branch"],
            "(s (n-3)/(n-2) sqrt(k/(2-n)))^((n-2)/(n-3)) r^((n-2)/(n-3))", "axis unless (n-2)/(n-3) is an integer", "(n-2)/(n-3)", "(n-2)/(n-3)"),
        row(IV5, "q = (n+2)/(n-2)", &[],
            "((n-2)^2/(4k))^((n-2)/4) r^(1-n/2)", "axis", "1-n/2", "1-n/2"),
        row(IV6, "q = (n+3)/(n-1)", &[],
            "((n-1)(n-3)/(4k))^((n-1)/4) r^((1-n)/2)", "axis (n != 3)", "(1-n)/2", "(1-n)/2"),
        row(IV6AsPrinted, "q = (n+3)/(n-1), k = +1", &[],
            "((n-1)(n-3)/(2 sqrt k))^((n-1)/4) r^((1-n)/2); not a solution", "axis", "(1-n)/2", "(1-n)/2"),
    ]
}
