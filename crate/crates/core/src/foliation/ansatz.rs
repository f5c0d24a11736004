//! Replays the power-balancing analysis of the scaling system for the ansatz
//! `G = g(x) v^m`, `H = h(x) v^m`.

use serde::{Deserialize, Serialize};

use crate::params::Sign;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnsatzCase {
    /// `m = (q + 1)/2`.
    HalfQPlusOne,
    /// `m = q`.
    Q,
}

impl AnsatzCase {
    pub fn exponent(self, q: f64) -> f64 {
        match self {
            AnsatzCase::HalfQPlusOne => (q + 1.0) / 2.0,
            AnsatzCase::Q => q,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AnsatzOutcome {
    Solutions { g: Vec<f64>, h: f64 },
    Inconsistent { reason: String, forced_h: Option<f64> },
    OutOfScope { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnsatzReport {
    pub case: AnsatzCase,
    pub n: u32,
    pub q: f64,
    pub k: Sign,
    pub exponent: f64,
    pub outcome: AnsatzOutcome,
    /// Largest coefficient left over by the candidate; zero for genuine solutions.
    pub defect: f64,
}

/// Coefficients of each power of `v` in both scaling-system equations after
/// substituting the ansatz with values `g, g', h, h'` at `x`.
#[allow(clippy::too_many_arguments)]
pub fn coefficient_equations(m: f64, p: f64, n: f64, k: f64, q: f64, x: f64, g: [f64; 2], h: [f64; 2]) -> Vec<(f64, f64, f64)> {
    let [g0, g1] = g;
    let [h0, h1] = h;
    let terms = [
        (m, (p - 1.0) * g0 - x * g1 - p * m * g0 - h1, g1 - (p + n - 2.0) * h0 + x * h1 + p * m * h0),
        // h G_v - g H_v cancels under a common power of v
        (2.0 * m - 1.0, 0.0, m * (g0 * g0 - h0 * h0)),
        (q, 0.0, -k),
    ];
    let mut out: Vec<(f64, f64, f64)> = vec![];
    for (e, c1, c2) in terms {
        match out.iter_mut().find(|(e2, _, _)| (e - *e2).abs() < 1e-12) {
            Some(slot) => {
                slot.1 += c1;
                slot.2 += c2;
            }
            None => out.push((e, c1, c2)),
        }
    }
    out
}

fn defect(coeffs: &[(f64, f64, f64)]) -> f64 {
    coeffs.iter().fold(0.0f64, |m, (_, a, b)| m.max(a.abs()).max(b.abs()))
}

pub fn ansatz_coefficient_check(case: AnsatzCase, n: u32, q: f64, k: Sign) -> AnsatzReport {
    let m = case.exponent(q);
    let report = |outcome, defect| AnsatzReport { case, n, q, k, exponent: m, outcome, defect };
    if n < 2 {
        return report(
            AnsatzOutcome::OutOfScope {
                reason: "n = 1 admits further constant-h branches; only n >= 2 is treated".into(),
            },
            f64::NAN,
        );
    }
    if q == 1.0 {
        return report(AnsatzOutcome::OutOfScope { reason: "q = 1 is linear".into() }, f64::NAN);
    }
    let (nf, kf, p) = (n as f64, k.value(), 2.0 / (1.0 - q));
    let samples = [0.3, 1.0, 2.7];
    match case {
        AnsatzCase::HalfQPlusOne => {
            // The v^m coefficients are linear ODEs (p - 1 - p m vanishes identically):
            //   x g' + h' = 0,   g' + x h' + (1 - n) h = 0,
            // and the v^q coefficient is algebraic: g^2 - h^2 = 2k/(q+1).
            // Differentiating the algebraic one gives g g' = h h' = -x h g', so
            // g' (g + x h) = 0. On g = -x h the second ODE collapses to n h = 0,
            // forcing g = h = 0 against the algebraic equation. Hence g' = 0,
            // then h' = 0 and (1 - n) h = 0, so h = 0 and g^2 = 2k/(q+1).
            let g2 = 2.0 * kf / (q + 1.0);
            if !(g2 > 0.0) {
                return report(
                    AnsatzOutcome::Inconsistent { reason: format!("g^2 = 2k/(q+1) = {g2} has no real root"), forced_h: Some(0.0) },
                    g2.abs(),
                );
            }
            let g0 = g2.sqrt();
            let d = [g0, -g0]
                .iter()
                .flat_map(|&g| samples.iter().map(move |&x| defect(&coefficient_equations(m, p, nf, kf, q, x, [g, 0.0], [0.0, 0.0]))))
                .fold(0.0f64, f64::max);
            report(AnsatzOutcome::Solutions { g: vec![g0, -g0], h: 0.0 }, d)
        }
        AnsatzCase::Q => {
            if q == 0.0 {
                return report(
                    AnsatzOutcome::OutOfScope { reason: "q = 0 makes the ansatz v-independent".into() },
                    f64::NAN,
                );
            }
            // The v^(2q-1) coefficient gives g = s h. The v^q coefficients then read
            //   h'(x + s) = h   and   h'(x + s) = n h + k,
            // so h = k/(1 - n) is constant, and the first equation forces h = 0.
            let h = kf / (1.0 - nf);
            let d = [1.0, -1.0]
                .iter()
                .flat_map(|&s| samples.iter().map(move |&x| defect(&coefficient_equations(m, p, nf, kf, q, x, [s * h, 0.0], [h, 0.0]))))
                .fold(f64::INFINITY, f64::min);
            report(
                AnsatzOutcome::Inconsistent {
                    reason: format!("h = k/(1-n) = {h} is forced, but h' = 0 then requires h = 0"),
                    forced_h: Some(h),
                },
                d,
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_case_reproduces_homogeneous_solution() {
        let r = ansatz_coefficient_check(AnsatzCase::HalfQPlusOne, 3, 3.0, Sign::Plus);
        match &r.outcome {
            AnsatzOutcome::Solutions { g, h } => {
                assert!((g[0] - 0.5f64.sqrt()).abs() < 1e-15);
                assert!((g[1] + 0.5f64.sqrt()).abs() < 1e-15);
                assert_eq!(*h, 0.0);
            }
            o => panic!("{o:?}"),
        }
        assert!(r.defect < 1e-14);
    }

    #[test]
    fn half_case_without_real_root() {
        let r = ansatz_coefficient_check(AnsatzCase::HalfQPlusOne, 3, 3.0, Sign::Minus);
        assert!(matches!(r.outcome, AnsatzOutcome::Inconsistent { .. }));
    }

    #[test]
    fn q_case_is_inconsistent() {
        for n in 2..8 {
            for k in [Sign::Plus, Sign::Minus] {
                let r = ansatz_coefficient_check(AnsatzCase::Q, n, 3.0, k);
                match r.outcome {
                    AnsatzOutcome::Inconsistent { forced_h: Some(h), .. } => {
                        assert!((h - k.value() / (1.0 - n as f64)).abs() < 1e-15)
                    }
                    o => panic!("{o:?}"),
                }
                assert!(r.defect > 1e-3, "candidate should leave a defect");
            }
        }
    }

    #[test]
    fn one_dimension_is_out_of_scope() {
        let r = ansatz_coefficient_check(AnsatzCase::HalfQPlusOne, 1, 3.0, Sign::Plus);
        assert!(matches!(r.outcome, AnsatzOutcome::OutOfScope { .. }));
    }

    #[test]
    fn slope_of_linear_term_vanishes() {
        // p - 1 - p(q+1)/2 = 0 for every q != 1.
        for q in [-3.0, -0.5, 0.3, 2.0, 7.0] {
            let p = 2.0 / (1.0 - q);
            let c = coefficient_equations((q + 1.0) / 2.0, p, 3.0, 1.0, q, 0.0, [1.0, 0.0], [0.0, 0.0]);
            let vm = c.iter().find(|(e, _, _)| (*e - (q + 1.0) / 2.0).abs() < 1e-12).unwrap();
            assert!(vm.1.abs() < 1e-14);
        }
    }
}
