//! Profiles `f(ξ)` of `u = (T − t)^{−1/(m−1)} f(|x|)`.
//!
//! A phase orbit `(X, Y, Z)` is turned into a profile by inverting the
//! change of variables
//!
//! ```text
//! X = sqrt(m(m−1)) ξ^{−1} f^{(m−1)/2},   Y = 2 sqrt(m(m−1))/(m−1) · (f^{(m−1)/2})',
//! Z = (m−1) ξ^σ f^{m−1},                 dξ/dη = ξ X,
//! ```
//!
//! i.e. `ξ = (mZ/X²)^{1/(σ+2)}` and `f = (Z/((m−1)ξ^σ))^{1/(m−1)}`. The
//! [`oracle`] integrates the profile equation directly in ξ and serves as the
//! independent check of the reconstruction.

pub mod local;
pub mod oracle;
pub mod oscillation;
pub mod selfmap;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::fmt::{num, opt};
use crate::integrate::{Direction, Segment, Trajectory};
use crate::model::{h0, ModelParams};
use crate::shooting::{Fate, FateReport, Origin};
use crate::vectorfields::{ChartId, Vec3};

pub use local::{
    interface_slope, local_expansion, origin_p2_coefficient, tail_coefficient, BehaviorKind, LocalExpansion,
};
pub use oracle::{compare_profiles, cross_check, direct_ode_solve, CrossCheck, direct_ode_solve_with, ode_residual, Anchor, Comparison, OdeOptions};
pub use oscillation::{effective_dimension, g_transform, k_sigma, p3_exponent_fit, Extremum, GTransform};
pub use selfmap::{self_map_check, SelfMapReport};

/// Relative tolerance on the slope of `f^{(m−1)/2}` for an interface.
pub const INTERFACE_SLOPE_TOL: f64 = 0.01;
/// A reconstructed profile is declared to reach an interface only when its
/// last resolved value is below this level.
pub const INTERFACE_F_MAX: f64 = 1e-8;
/// Distance to P1 under which the end of an orbit is examined for an interface.
const P1_END_RADIUS: f64 = 1e-2;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Annotations {
    /// Interface point ξ0 (extrapolated from the last samples).
    pub interface: Option<f64>,
    /// Measured slope of `f^{(m−1)/2}` at the interface end.
    pub interface_slope: Option<f64>,
    /// Behaviour at the small-ξ end.
    pub start: Option<BehaviorKind>,
    /// Behaviour at the large-ξ end.
    pub end: Option<BehaviorKind>,
    /// The profile vanishes at its end but the slope test or the level test failed.
    pub touchdown_ambiguous: bool,
    pub fate: Option<Fate>,
}

/// Where dense evaluation of a profile comes from.
#[derive(Debug, Clone)]
enum Dense {
    /// A MAIN-chart orbit; ξ is monotone in η.
    Phase { traj: Trajectory, eta: Vec<f64> },
    /// Steps of the ξ-ODE `(f, (f^m)', ξ)` in internal time `t = s·(ξ − ξ_a)`.
    Xi { sign: f64, xi_anchor: f64, segments: Vec<Segment> },
}

/// Samples `(ξ_i, f_i)` with ξ strictly increasing.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileCurve {
    pub params: ModelParams,
    pub xi: Vec<f64>,
    pub f: Vec<f64>,
    pub annotations: Annotations,
    pub provenance: String,
    #[serde(skip)]
    dense: Option<Dense>,
}

/// `(X, Y, Z)` of a profile point from `ξ`, `f` and `W' = d f^{(m−1)/2}/dξ`.
pub fn phase_point(xi: f64, f: f64, w_slope: f64, p: &ModelParams) -> Vec3 {
    let (m, s) = (p.m(), p.sigma());
    let r = (m * (m - 1.0)).sqrt();
    let w = f.powf((m - 1.0) / 2.0);
    [r * w / xi, 2.0 * r / (m - 1.0) * w_slope, (m - 1.0) * xi.powf(s) * f.powf(m - 1.0)]
}

/// `(X, Y, Z)` from `ξ`, `f` and the flux `(f^m)'`.
pub fn phase_point_from_flux(xi: f64, f: f64, flux: f64, p: &ModelParams) -> Vec3 {
    let m = p.m();
    let w_slope = (m - 1.0) * flux / (2.0 * m * f.powf((m + 1.0) / 2.0));
    phase_point(xi, f, w_slope, p)
}

/// `(ξ, f)` of a MAIN state with `X, Z > 0`, computed in logarithms.
pub fn invert_phase_point(s: &[f64], p: &ModelParams) -> (f64, f64) {
    let (m, sg) = (p.m(), p.sigma());
    let ln_xi = (m.ln() + s[2].ln() - 2.0 * s[0].ln()) / (sg + 2.0);
    let ln_f = (s[2].ln() - (m - 1.0).ln() - sg * ln_xi) / (m - 1.0);
    (ln_xi.exp(), ln_f.exp())
}

/// `(f^m)'` at a MAIN state.
pub fn flux_at(s: &[f64], p: &ModelParams) -> f64 {
    let m = p.m();
    let (_, f) = invert_phase_point(s, p);
    (m / (m - 1.0)).sqrt() * f.powf((m + 1.0) / 2.0) * s[1]
}

fn start_tag(origin: Option<Origin>, fate: Option<Fate>, direction: Direction, p: &ModelParams) -> Option<BehaviorKind> {
    match origin? {
        Origin::P2E3 => Some(BehaviorKind::OriginP2),
        Origin::P0Unstable { .. } => Some(BehaviorKind::OutP0),
        Origin::Q1Out { .. } => Some(BehaviorKind::FlatQ1),
        Origin::Q5Out { .. } => Some(BehaviorKind::AsymptoteQ5),
        Origin::P1Backward { .. } if direction == Direction::Backward => match fate? {
            Fate::EscapesQ5 if p.n() > 2.0 + 1e-12 => Some(BehaviorKind::AsymptoteQ5),
            Fate::EscapesQ5 => Some(BehaviorKind::LogQ1N2),
            _ => None,
        },
        _ => None,
    }
}

/// Invert a MAIN-chart orbit into a profile.
///
/// End points on the boundary `X = 0` or `Z = 0` are dropped; a vanishing
/// `X` or `Z` anywhere else is an error. With a fate report, the ends are
/// tagged by the orbit's origin and fate; an end near P1 is examined for an
/// interface whether or not a report is given.
pub fn reconstruct_profile(traj: &Trajectory, report: Option<&FateReport>) -> Result<ProfileCurve> {
    if traj.chart != ChartId::Main {
        return Err(Error::BadSpec(format!(
            "profiles are reconstructed from MAIN orbits (got {})",
            traj.chart
        )));
    }
    let p = traj.params;
    let n = traj.len();
    let mut idx = Vec::with_capacity(n);
    for i in 0..n {
        let s = traj.state(i);
        let ok = s[0] > 0.0 && s[2] > 0.0 && s.iter().all(|v| v.is_finite());
        if ok {
            idx.push(i);
        } else if i != 0 && i != n - 1 {
            return Err(Error::DegenerateTrajectory(format!(
                "X = {} or Z = {} not positive at eta = {}",
                s[0], s[2], traj.etas[i]
            )));
        }
    }
    if idx.len() < 2 {
        return Err(Error::DegenerateTrajectory("fewer than two interior samples".into()));
    }
    let mut pts: Vec<(f64, f64, f64)> = idx
        .iter()
        .map(|&i| {
            let (xi, f) = invert_phase_point(traj.state(i), &p);
            (xi, f, traj.etas[i])
        })
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.dedup_by(|a, b| a.0 == b.0);

    let origin = report.and_then(|r| r.origin);
    let fate = report.map(|r| r.fate);
    let mut ann = Annotations {
        fate,
        start: start_tag(origin, fate, traj.direction, &p),
        ..Default::default()
    };
    if fate == Some(Fate::EntersP3) {
        ann.end = Some(BehaviorKind::TailP3);
    }

    // The large-ξ end: forward orbits end there, backward orbits start there.
    let end_state: Vec<f64> = {
        let i = if traj.direction == Direction::Forward { idx[idx.len() - 1] } else { idx[0] };
        traj.state(i).to_vec()
    };
    let d1 = (end_state[0].powi(2) + (end_state[1] + h0(p.m())).powi(2) + end_state[2].powi(2)).sqrt();
    if d1 < P1_END_RADIUS && pts.len() >= 3 {
        let m = p.m();
        let k = pts.len();
        let w = |f: f64| f.powf((m - 1.0) / 2.0);
        let (xa, fa, _) = pts[k - 2];
        let (xb, fb, _) = pts[k - 1];
        let slope = (w(fb) - w(fa)) / (xb - xa);
        let c = interface_slope(m);
        let slope_ok = (slope / -c - 1.0).abs() < INTERFACE_SLOPE_TOL;
        if slope_ok && fb < INTERFACE_F_MAX {
            ann.interface = Some(xb - w(fb) / slope);
            ann.interface_slope = Some(slope);
            ann.end = Some(BehaviorKind::Interface);
        } else {
            ann.interface_slope = Some(slope);
            ann.touchdown_ambiguous = true;
        }
    }

    let provenance = match origin {
        Some(o) => format!("orbit {o} {} {}", traj.direction.name(), fate.map(|f| f.name()).unwrap_or("")),
        None => format!("orbit MAIN {}", traj.direction.name()),
    };
    Ok(ProfileCurve {
        params: p,
        xi: pts.iter().map(|t| t.0).collect(),
        f: pts.iter().map(|t| t.1).collect(),
        annotations: ann,
        provenance: provenance.trim_end().to_string(),
        dense: Some(Dense::Phase {
            traj: traj.clone(),
            eta: pts.iter().map(|t| t.2).collect(),
        }),
    })
}

impl ProfileCurve {
    pub(crate) fn from_xi_steps(
        params: ModelParams,
        samples: Vec<(f64, f64)>,
        annotations: Annotations,
        provenance: String,
        sign: f64,
        xi_anchor: f64,
        segments: Vec<Segment>,
    ) -> Self {
        let mut samples = samples;
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        samples.dedup_by(|a, b| a.0 == b.0);
        ProfileCurve {
            params,
            xi: samples.iter().map(|s| s.0).collect(),
            f: samples.iter().map(|s| s.1).collect(),
            annotations,
            provenance,
            dense: Some(Dense::Xi {
                sign,
                xi_anchor,
                segments,
            }),
        }
    }

    /// A curve from bare samples (evaluated by linear interpolation).
    pub fn from_samples(params: ModelParams, xi: Vec<f64>, f: Vec<f64>, provenance: &str) -> Result<Self> {
        if xi.len() != f.len() || xi.len() < 2 {
            return Err(Error::BadSpec("profile needs at least two (xi, f) pairs".into()));
        }
        if !xi.windows(2).all(|w| w[1] > w[0]) || xi[0] <= 0.0 {
            return Err(Error::BadSpec("xi samples must be positive and increasing".into()));
        }
        Ok(ProfileCurve {
            params,
            xi,
            f,
            annotations: Annotations::default(),
            provenance: provenance.into(),
            dense: None,
        })
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    pub fn xi_range(&self) -> (f64, f64) {
        (self.xi[0], self.xi[self.len() - 1])
    }

    /// `f(ξ)` from the dense output of the source; `None` outside the range.
    pub fn eval(&self, xi: f64) -> Option<f64> {
        let (lo, hi) = self.xi_range();
        let slack = 1e-12 * hi;
        if !(xi >= lo - slack && xi <= hi + slack) {
            return None;
        }
        let xi = xi.clamp(lo, hi);
        let p = &self.params;
        match &self.dense {
            Some(Dense::Phase { traj, eta }) => {
                let i = self.xi.partition_point(|&x| x < xi);
                if self.xi[i.min(self.len() - 1)] == xi {
                    return Some(self.f[i]);
                }
                let (mut a, mut b) = (eta[i - 1], eta[i]);
                let ln_xi = |e: f64| -> f64 {
                    let s = traj.interpolate(e).expect("inside the orbit");
                    invert_phase_point(&s, p).0.ln()
                };
                let target = xi.ln();
                let up = ln_xi(b) > ln_xi(a);
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if mid == a || mid == b {
                        break;
                    }
                    if (ln_xi(mid) < target) == up {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                let s = traj.interpolate(0.5 * (a + b))?;
                Some(invert_phase_point(&s, p).1)
            }
            Some(Dense::Xi {
                sign,
                xi_anchor,
                segments,
            }) => {
                let t = sign * (xi - xi_anchor);
                let first = segments.first()?;
                let last = segments.last()?;
                let t = t.clamp(first.t0, last.t1());
                let k = segments.partition_point(|s| s.t1() < t);
                let seg = segments.get(k).unwrap_or(last);
                Some(seg.eval(t)[0])
            }
            None => {
                let i = self.xi.partition_point(|&x| x < xi).clamp(1, self.len() - 1);
                let (x0, x1) = (self.xi[i - 1], self.xi[i]);
                let th = (xi - x0) / (x1 - x0);
                Some(self.f[i - 1] + th * (self.f[i] - self.f[i - 1]))
            }
        }
    }

    /// `(f^m)'(ξ)` from the dense output of the source (`None` for bare samples).
    pub fn flux(&self, xi: f64) -> Option<f64> {
        match &self.dense {
            Some(Dense::Xi {
                sign,
                xi_anchor,
                segments,
            }) => {
                self.eval(xi)?;
                let first = segments.first()?;
                let last = segments.last()?;
                let t = (sign * (xi - xi_anchor)).clamp(first.t0, last.t1());
                let k = segments.partition_point(|s| s.t1() < t);
                Some(segments.get(k).unwrap_or(last).eval(t)[1])
            }
            Some(Dense::Phase { .. }) => {
                let f = self.eval(xi)?;
                let m = self.params.m();
                let ws = self.w_slope_fd(xi, 1e-6)?;
                Some(2.0 * m / (m - 1.0) * f.powf((m + 1.0) / 2.0) * ws)
            }
            None => None,
        }
    }

    /// `(ξ, f, (f^m)')` at sample `i`. For a phase-space source the flux is
    /// read off the orbit state exactly; otherwise it comes from [`Self::flux`].
    pub fn cauchy_datum(&self, i: usize) -> Option<(f64, f64, f64)> {
        let (xi, f) = (*self.xi.get(i)?, self.f[i]);
        match &self.dense {
            Some(Dense::Phase { traj, eta }) => {
                let s = traj.interpolate(eta[i])?;
                Some((xi, f, flux_at(&s, &self.params)))
            }
            _ => Some((xi, f, self.flux(xi)?)),
        }
    }

    /// `η` of sample `i` on a phase-space source (`None` for other sources).
    pub fn phase_eta(&self, i: usize) -> Option<f64> {
        match &self.dense {
            Some(Dense::Phase { eta, .. }) => eta.get(i).copied(),
            _ => None,
        }
    }

    /// Phase variable `Y` at sample `i` of a phase-space source (`None` for
    /// other sources).
    pub fn phase_y(&self, i: usize) -> Option<f64> {
        match &self.dense {
            Some(Dense::Phase { traj, eta }) => traj.interpolate(*eta.get(i)?).map(|s| s[1]),
            _ => None,
        }
    }

    /// Central finite difference of `f^{(m−1)/2}` at ξ with step `h·ξ`.
    pub fn w_slope_fd(&self, xi: f64, h: f64) -> Option<f64> {
        let e = (self.params.m() - 1.0) / 2.0;
        let d = h * xi;
        let a = self.eval(xi - d)?.powf(e);
        let b = self.eval(xi + d)?.powf(e);
        Some((b - a) / (2.0 * d))
    }

    /// Largest relative deviation between the given MAIN states and the
    /// phase points recomputed from this profile (`Y` by finite differences).
    pub fn phase_round_trip_error(&self, states: &[Vec3]) -> f64 {
        let p = &self.params;
        let mut worst: f64 = 0.0;
        for s in states {
            if !(s[0] > 0.0 && s[2] > 0.0) {
                continue;
            }
            let (xi, f) = invert_phase_point(s, p);
            let Some(ws) = self.w_slope_fd(xi, 1e-5) else { continue };
            let q = phase_point(xi, f, ws, p);
            for k in 0..3 {
                let scale = s[k].abs().max(1.0);
                worst = worst.max((q[k] - s[k]).abs() / scale);
            }
        }
        worst
    }

    pub fn max_f(&self) -> f64 {
        self.f.iter().cloned().fold(0.0, f64::max)
    }

    pub fn csv_header(&self) -> String {
        let p = &self.params;
        let a = &self.annotations;
        format!(
            "# sepvar {} profile m={} N={} sigma={} provenance=\"{}\" start={} end={} interface={}\n",
            env!("CARGO_PKG_VERSION"),
            num(p.m()),
            num(p.n()),
            num(p.sigma()),
            self.provenance,
            a.start.map(|k| k.name()).unwrap_or(""),
            a.end.map(|k| k.name()).unwrap_or(""),
            opt(a.interface),
        )
    }

    /// CSV with columns `xi,f`.
    pub fn to_csv(&self) -> String {
        let mut s = self.csv_header();
        s.push_str("xi,f\n");
        for (x, f) in self.xi.iter().zip(&self.f) {
            s.push_str(&num(*x));
            s.push(',');
            s.push_str(&num(*f));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self, with_samples: bool) -> serde_json::Value {
        let p = &self.params;
        let mut v = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "params": {"m": p.m(), "N": p.n(), "sigma": p.sigma()},
            "provenance": self.provenance,
            "annotations": self.annotations,
            "n_samples": self.len(),
            "xi_range": [self.xi[0], self.xi[self.len() - 1]],
        });
        if with_samples {
            v["xi"] = json!(self.xi);
            v["f"] = json!(self.f);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::{integrate, IntegrationControls};
    use crate::shooting::{classify_fate, seed, SeedSpec};

    #[test]
    fn hyperbola_is_the_line_z_equals_one() {
        let p = ModelParams::new(2.0, 4.0, 0.5).unwrap();
        let e = local_expansion(BehaviorKind::Hyperbola, None, &p).unwrap();
        for xi in [0.1, 1.0, 7.0] {
            let s = phase_point_from_flux(xi, e.eval(xi), e.flux(xi), &p);
            assert!((s[2] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn inversion_round_trip() {
        let p = ModelParams::new(2.5, 3.0, 0.7).unwrap();
        for s in [[0.3, -0.2, 0.9], [1e-3, 0.5, 4.0], [20.0, 1.0, 1e-4]] {
            let (xi, f) = invert_phase_point(&s, &p);
            let q = phase_point_from_flux(xi, f, flux_at(&s, &p), &p);
            for k in 0..3 {
                assert!((q[k] - s[k]).abs() < 1e-12 * s[k].abs().max(1.0));
            }
        }
    }

    #[test]
    fn reconstructed_orbit_is_consistent() {
        let p = ModelParams::new(2.0, 4.0, 0.5).unwrap();
        let (chart, s0) = seed(&SeedSpec::new(Origin::P2E3), &p).unwrap();
        let c = IntegrationControls::default().with_span(60.0);
        let t = integrate(chart, &s0, &p, &c, &[]).unwrap();
        let prof = reconstruct_profile(&t, None).unwrap();
        assert!(prof.xi.windows(2).all(|w| w[1] > w[0]));
        assert!(prof.f.iter().all(|&f| f > 0.0));
        let inner: Vec<Vec3> = t.states[5..t.len() - 5].to_vec();
        assert!(prof.phase_round_trip_error(&inner) < 1e-8);
    }

    #[test]
    fn backward_p1_orbit_has_an_interface() {
        let p = ModelParams::new(2.0, 4.0, 1.5).unwrap();
        let spec = SeedSpec::new(Origin::P1Backward { d: 1.0 });
        let rep = classify_fate(&spec, &p, &IntegrationControls::default()).unwrap();
        let (chart, s0) = seed(&spec, &p).unwrap();
        let c = IntegrationControls::default().with_span(5.0).backward();
        let t = integrate(chart, &s0, &p, &c, &[]).unwrap();
        let prof = reconstruct_profile(&t, Some(&rep)).unwrap();
        assert_eq!(prof.annotations.end, Some(BehaviorKind::Interface));
        let slope = prof.annotations.interface_slope.unwrap();
        assert!((slope / -interface_slope(2.0) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn wrong_chart_and_degenerate_orbits() {
        let p = ModelParams::new(2.0, 4.0, 0.5).unwrap();
        let c = IntegrationControls::default().with_span(1.0);
        let t = integrate(ChartId::ChartQ1, &[0.1, 0.1, 0.1], &p, &c, &[]).unwrap();
        assert_eq!(reconstruct_profile(&t, None).unwrap_err().code(), "BAD_SPEC");
        let t = integrate(ChartId::Main, &[0.0, 0.1, 0.5], &p, &c, &[]).unwrap();
        assert_eq!(reconstruct_profile(&t, None).unwrap_err().code(), "DEGENERATE_TRAJECTORY");
    }
}
