use serde::{Deserialize, Serialize};

/// Which half of a light cone `r = |t - t0|` is singular.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Half {
    Future,
    Past,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Component {
    /// The time slice `t = t0`.
    Line { t0: f64 },
    /// The axis `r = 0`.
    Axis,
    LightCone { t0: f64, half: Half },
    /// `|t - t_center| = sqrt(r^2 + t_star^2)`.
    Hyperbola { t_center: f64, t_star: f64 },
    /// The static sphere `r = r0`.
    Radius { r0: f64 },
}

impl Component {
    /// Euclidean distance in the `(t, r)` half-plane, exact for lines and
    /// cones and a first-order estimate for the hyperbola.
    pub fn distance(&self, t: f64, r: f64) -> f64 {
        const S: f64 = std::f64::consts::FRAC_1_SQRT_2;
        match *self {
            Component::Line { t0 } => (t - t0).abs(),
            Component::Axis => r.abs(),
            Component::LightCone { t0, half } => {
                let dt = t - t0;
                let on_branch = match half {
                    Half::Both => true,
                    Half::Future => dt >= -r,
                    Half::Past => dt <= r,
                };
                if on_branch {
                    (r - dt.abs()).abs() * S
                } else {
                    dt.hypot(r)
                }
            }
            Component::Hyperbola { t_center, t_star } => {
                ((t - t_center).abs() - r.hypot(t_star)).abs() * S
            }
            Component::Radius { r0 } => (r - r0).abs(),
        }
    }

    /// Radii `r > 0` at which the slice `t = t0` meets this component.
    /// Returns `None` when the whole slice lies on it.
    pub fn slice_radii(&self, t: f64) -> Option<Vec<f64>> {
        Some(match *self {
            Component::Line { t0 } if t == t0 => return None,
            Component::Line { .. } | Component::Axis => vec![],
            Component::LightCone { t0, half } => {
                let dt = t - t0;
                let ok = match half {
                    Half::Both => dt != 0.0,
                    Half::Future => dt > 0.0,
                    Half::Past => dt < 0.0,
                };
                if ok { vec![dt.abs()] } else { vec![] }
            }
            Component::Hyperbola { t_center, t_star } => {
                let d2 = (t - t_center).powi(2) - t_star * t_star;
                if d2 > 0.0 { vec![d2.sqrt()] } else { vec![] }
            }
            Component::Radius { r0 } => vec![r0],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SingularSet {
    pub components: Vec<Component>,
}

impl SingularSet {
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn distance(&self, t: f64, r: f64) -> f64 {
        self.components
            .iter()
            .map(|c| c.distance(t, r))
            .fold(f64::INFINITY, f64::min)
    }

    /// Earliest time after `t_from` at which the axis meets the set.
    pub fn first_axis_time_after(&self, t_from: f64) -> Option<f64> {
        let mut times = vec![];
        for c in &self.components {
            match *c {
                Component::Line { t0 } => times.push(t0),
                Component::LightCone { t0, .. } => times.push(t0),
                Component::Hyperbola { t_center, t_star } => {
                    times.push(t_center - t_star);
                    times.push(t_center + t_star);
                }
                Component::Axis | Component::Radius { .. } => {}
            }
        }
        times.into_iter().filter(|&x| x > t_from).reduce(f64::min)
    }
}
