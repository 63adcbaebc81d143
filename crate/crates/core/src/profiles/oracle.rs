//! Direct integration of the profile equation
//!
//! ```text
//! (f^m)'' + (N−1)/ξ (f^m)' − f/(m−1) + ξ^σ f^m = 0
//! ```
//!
//! as the first-order system for `(f, q = (f^m)')` with ξ as independent
//! variable. It shares nothing with the phase-space route except the datum.

use serde::Serialize;

use super::local::{interface_slope, BehaviorKind, LocalExpansion};
use super::{Annotations, ProfileCurve, INTERFACE_SLOPE_TOL};
use crate::error::{Error, Result};
use crate::integrate::{StepFailure, Stepper};
use crate::model::ModelParams;
use crate::vectorfields::Vec3;

/// Cauchy datum of the ξ-ODE.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Anchor {
    /// Start on a local behaviour at `xi`.
    Expansion { expansion: LocalExpansion, xi: f64 },
    /// Start from `f(xi)` and `(f^m)'(xi)`.
    Cauchy { xi: f64, f: f64, flux: f64 },
}

impl Anchor {
    /// Start on `expansion` at distance `delta` from its singular point, on
    /// the side where it is positive. Tails and the hyperbola have their
    /// singular point at infinity and need an explicit ξ.
    pub fn offset(expansion: LocalExpansion, delta: f64) -> Result<Anchor> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::BadSpec(format!("anchor offset must be positive (got {delta})")));
        }
        let x0 = expansion.anchor();
        let xi = match expansion.kind {
            BehaviorKind::Interface => x0 - delta,
            BehaviorKind::OutP0 => x0 + delta,
            BehaviorKind::TailP3 | BehaviorKind::Hyperbola => {
                return Err(Error::BadSpec(format!(
                    "{} is anchored at infinity; give the starting xi",
                    expansion.kind
                )))
            }
            _ => delta,
        };
        if xi <= 0.0 {
            return Err(Error::BadSpec(format!("offset {delta} puts the start at xi = {xi} <= 0")));
        }
        Ok(Anchor::Expansion { expansion, xi })
    }

    pub fn datum(&self) -> (f64, f64, f64) {
        match *self {
            Anchor::Expansion { expansion, xi } => (xi, expansion.eval(xi), expansion.flux(xi)),
            Anchor::Cauchy { xi, f, flux } => (xi, f, flux),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: u64,
    /// `f` above this counts as blow-up.
    pub blowup: f64,
    /// `f^{(m−1)/2}` below this fraction of its running maximum triggers the
    /// interface slope test.
    pub vanish_fraction: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rel_tol: 1e-12,
            abs_tol: 1e-15,
            max_steps: 2_000_000,
            blowup: 1e12,
            vanish_fraction: 1e-3,
        }
    }
}

pub fn direct_ode_solve(p: &ModelParams, anchor: Anchor, xi_end: f64) -> Result<ProfileCurve> {
    direct_ode_solve_with(p, anchor, xi_end, &OdeOptions::default())
}

/// Integrates from the anchor to `xi_end` (either side). Stops early, with an
/// interface annotation, when `f^{(m−1)/2}` runs into zero with the slope
/// `∓c`; fails with `TOUCHDOWN` when it runs into zero with another slope and
/// with `BLOWUP` when `f` diverges.
pub fn direct_ode_solve_with(p: &ModelParams, anchor: Anchor, xi_end: f64, opt: &OdeOptions) -> Result<ProfileCurve> {
    let (xi0, f0, q0) = anchor.datum();
    if !(xi0 > 0.0 && xi_end > 0.0 && xi0.is_finite() && xi_end.is_finite()) {
        return Err(Error::BadSpec(format!("xi range [{xi0}, {xi_end}] must be positive")));
    }
    if !(f0 > 0.0 && f0.is_finite() && q0.is_finite()) {
        return Err(Error::BadConstants(format!("datum f = {f0}, (f^m)' = {q0} at xi = {xi0}")));
    }
    let (m, n, sg) = (p.m(), p.n(), p.sigma());
    let sign = if xi_end >= xi0 { 1.0 } else { -1.0 };
    let span = (xi_end - xi0).abs();
    let rhs = move |y: &Vec3| -> Vec3 {
        let (f, q, xi) = (y[0], y[1], y[2]);
        if !(f > 0.0) || !(xi > 0.0) {
            return [f64::NAN; 3];
        }
        let df = q / (m * f.powf(m - 1.0));
        let dq = -(n - 1.0) * q / xi + f / (m - 1.0) - xi.powf(sg) * f.powf(m);
        [sign * df, sign * dq, sign]
    };
    let mut st = Stepper::new(rhs, 3, [f0, q0, xi0], opt.rel_tol, opt.abs_tol);
    let w = |f: f64| f.powf((m - 1.0) / 2.0);
    let w_slope = |f: f64, q: f64| (m - 1.0) * q / (2.0 * m * f.powf((m + 1.0) / 2.0));
    let c = interface_slope(m);

    let mut samples = vec![(xi0, f0)];
    let mut segments = Vec::new();
    let mut w_max = w(f0);
    let mut ann = Annotations::default();
    if let Anchor::Expansion { expansion, .. } = anchor {
        if sign > 0.0 {
            ann.start = Some(expansion.kind);
        } else {
            ann.end = Some(expansion.kind);
        }
    }
    let mut steps = 0u64;
    loop {
        let left = span - st.t();
        if left <= 1e-14 * span.max(1.0) {
            break;
        }
        let seg = match st.step(left) {
            Ok(s) => s,
            Err(StepFailure::Underflow { y, .. }) => {
                if w(y[0]) < opt.vanish_fraction * w_max {
                    return Err(Error::Touchdown(y[2]));
                }
                return Err(Error::StepUnderflow {
                    eta: y[2],
                    state: y.to_vec(),
                });
            }
        };
        steps += 1;
        let [f, q, xi] = seg.y1;
        segments.push(seg);
        if !f.is_finite() || f > opt.blowup {
            return Err(Error::Blowup(xi));
        }
        samples.push((xi, f));
        let wf = w(f);
        w_max = w_max.max(wf);
        if wf < opt.vanish_fraction * w_max {
            let ws = w_slope(f, q);
            // Approaching the zero in the integration direction means W
            // decreases along it: slope −c going right, +c going left.
            if (sign * ws / -c - 1.0).abs() < INTERFACE_SLOPE_TOL {
                let x0 = xi - wf / ws;
                if sign > 0.0 {
                    ann.interface = Some(x0);
                    ann.interface_slope = Some(ws);
                    ann.end = Some(BehaviorKind::Interface);
                } else {
                    ann.start = Some(BehaviorKind::OutP0);
                }
                break;
            }
        }
        if steps >= opt.max_steps {
            return Err(Error::BadSpec(format!("ξ-ODE exceeded {} steps", opt.max_steps)));
        }
    }
    let provenance = match anchor {
        Anchor::Expansion { expansion, xi } => format!("xi-ode {} from xi={xi}", expansion.kind),
        Anchor::Cauchy { xi, .. } => format!("xi-ode cauchy from xi={xi}"),
    };
    Ok(ProfileCurve::from_xi_steps(*p, samples, ann, provenance, sign, xi0, segments))
}

/// `(f^m)'' + (N−1)/ξ (f^m)' − f/(m−1) + ξ^σ f^m` at ξ for `f` given with
/// its flux; the flux derivative is a central difference with step `1e−5·ξ`.
pub fn ode_residual<F: Fn(f64) -> f64, Q: Fn(f64) -> f64>(p: &ModelParams, f: F, flux: Q, xi: f64) -> f64 {
    let (m, n, s) = (p.m(), p.n(), p.sigma());
    let h = 1e-5 * xi;
    let dq = (flux(xi + h) - flux(xi - h)) / (2.0 * h);
    let fx = f(xi);
    dq + (n - 1.0) / xi * flux(xi) - fx / (m - 1.0) + xi.powf(s) * fx.powf(m)
}

/// Maximal relative deviation of `candidate` from `reference` on the
/// reference samples inside both ranges, ignoring samples with
/// `f < floor·max f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub max_rel_error: f64,
    pub points: usize,
    pub xi_lo: f64,
    pub xi_hi: f64,
}

pub fn compare_profiles(reference: &ProfileCurve, candidate: &ProfileCurve, floor: f64) -> Comparison {
    let (a0, a1) = reference.xi_range();
    let (b0, b1) = candidate.xi_range();
    let (lo, hi) = (a0.max(b0), a1.min(b1));
    let cut = floor * reference.max_f();
    let mut out = Comparison {
        max_rel_error: 0.0,
        points: 0,
        xi_lo: lo,
        xi_hi: hi,
    };
    for (&x, &f) in reference.xi.iter().zip(&reference.f) {
        if x < lo || x > hi || f < cut {
            continue;
        }
        if let Some(g) = candidate.eval(x) {
            out.points += 1;
            out.max_rel_error = out.max_rel_error.max((g - f).abs() / f.abs());
        }
    }
    out
}

/// `|Y|` beyond which a phase-space profile is not used as reference: past
/// it the orbit is heading for a vertical touchdown (Q3) and the ξ-ODE is
/// stiff.
pub const CROSS_CHECK_Y_MAX: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossCheck {
    pub anchor_xi: f64,
    pub xi_end: f64,
    pub comparison: Comparison,
}

/// Re-solves the ξ-ODE from a Cauchy datum taken on `profile` and compares.
///
/// The solve runs in the direction the source itself was computed in, away
/// from the seed end (upward for orbits out of P2, P0 or Q1, downward for
/// orbits integrated back from an interface), and only over samples with
/// `|Y| ≤` [`CROSS_CHECK_Y_MAX`]. Integrating the other way, into a vertical
/// touchdown or into an interface, amplifies the datum error by many orders
/// of magnitude. The datum sits at the first usable sample past `2 ξ_lo`
/// (upward) or at the last sample with `f ≥ 10⁻³ max f` (downward).
pub fn cross_check(profile: &ProfileCurve, floor: f64) -> Result<CrossCheck> {
    let n = profile.len();
    if n < 4 {
        return Err(Error::DegenerateTrajectory(format!("profile has only {n} samples")));
    }
    let usable = |k: usize| profile.phase_y(k).is_none_or(|y| y.abs() <= CROSS_CHECK_Y_MAX);
    let upward = match (profile.phase_eta(0), profile.phase_eta(n - 1)) {
        (Some(a), Some(b)) => a.abs() <= b.abs(),
        _ => true,
    };
    let lo = profile.xi[0];
    let fmin = 1e-3 * profile.max_f();
    let (i0, j) = if upward {
        let i0 = (0..n - 1).find(|&k| profile.xi[k] >= 2.0 * lo && usable(k));
        let i0 = i0.ok_or_else(|| Error::DegenerateTrajectory("no usable anchor sample".into()))?;
        let j = (i0..n).take_while(|&k| usable(k)).last().unwrap_or(i0);
        (i0, j)
    } else {
        let i0 = (1..n).rev().find(|&k| usable(k) && profile.f[k] >= fmin);
        let i0 = i0.ok_or_else(|| Error::DegenerateTrajectory("no usable anchor sample".into()))?;
        let j = (0..=i0).rev().take_while(|&k| usable(k) && profile.xi[k] >= 2.0 * lo).last().unwrap_or(i0);
        (i0, j)
    };
    if i0.abs_diff(j) < 2 {
        return Err(Error::DegenerateTrajectory(format!(
            "no usable samples beyond the anchor at xi = {}",
            profile.xi[i0]
        )));
    }
    let (xi, f, flux) = profile
        .cauchy_datum(i0)
        .ok_or_else(|| Error::DegenerateTrajectory("profile has no dense source".into()))?;
    let candidate = direct_ode_solve(&profile.params, Anchor::Cauchy { xi, f, flux }, profile.xi[j])?;
    let end = if upward { candidate.xi_range().1 } else { candidate.xi_range().0 };
    Ok(CrossCheck {
        anchor_xi: xi,
        xi_end: end,
        comparison: compare_profiles(profile, &candidate, floor),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::local::local_expansion;

    fn p(n: f64, s: f64) -> ModelParams {
        ModelParams::new(2.0, n, s).unwrap()
    }

    #[test]
    fn hyperbola_is_not_a_solution() {
        let q = p(4.0, 0.5);
        let e = local_expansion(BehaviorKind::Hyperbola, None, &q).unwrap();
        let r = ode_residual(&q, |x| e.eval(x), |x| e.flux(x), 1.0);
        // f^m = B^m ξ^k, k = −σm/(m−1) = −1, B^m = 1: residual k(k+N−2) ξ^{k−2} = −1.
        assert!((r + 1.0).abs() < 1e-6, "{r}");
    }

    #[test]
    fn flat_start_is_insensitive_to_delta() {
        let q = p(3.0, 0.4);
        let e = local_expansion(BehaviorKind::FlatQ1, Some(1.2), &q).unwrap();
        let vals: Vec<f64> = [1e-5, 1e-6, 1e-7]
            .iter()
            .map(|&d| {
                let prof = direct_ode_solve(&q, Anchor::offset(e, d).unwrap(), 1.0).unwrap();
                prof.eval(1.0).unwrap()
            })
            .collect();
        assert!((vals[0] - vals[2]).abs() < 1e-8 * vals[2], "{vals:?}");
        assert!((vals[1] - vals[2]).abs() < 1e-9 * vals[2], "{vals:?}");
        // Initially (f^m)'' = a/(N(m−1)) > 0: f grows off the axis.
        assert!(vals[2] > 1.2);
    }

    #[test]
    fn interface_start_integrated_backward_matches_slope() {
        let q = p(4.0, 1.5);
        let e = local_expansion(BehaviorKind::Interface, Some(1.0), &q).unwrap();
        let x0 = e.anchor();
        let prof = direct_ode_solve(&q, Anchor::offset(e, 1e-4).unwrap(), 0.5 * x0).unwrap();
        assert_eq!(prof.annotations.end, Some(BehaviorKind::Interface));
        let x = x0 - 1e-3;
        let f = prof.eval(x).unwrap();
        let c = interface_slope(2.0);
        let ratio = f / (x0 - x).powi(2) / (c * c);
        assert!((ratio - 1.0).abs() < 0.01, "{ratio}");
    }

    #[test]
    fn steeper_data_touch_down_before_the_interface() {
        // Integrate away from an interface, then back towards it from an
        // interior datum with a slightly steeper flux: f reaches zero with
        // an infinite slope of f^{(m−1)/2}.
        let q = p(4.0, 0.5);
        let e = local_expansion(BehaviorKind::Interface, Some(1.0), &q).unwrap();
        let x0 = e.anchor();
        let back = direct_ode_solve(&q, Anchor::offset(e, 1e-4).unwrap(), 0.5 * x0).unwrap();
        let xs = 0.6 * x0;
        let datum = Anchor::Cauchy {
            xi: xs,
            f: back.eval(xs).unwrap(),
            flux: 1.01 * back.flux(xs).unwrap(),
        };
        match direct_ode_solve(&q, datum, 2.0 * x0) {
            Err(Error::Touchdown(x)) => assert!(x < x0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_ranges() {
        let q = p(4.0, 0.5);
        let a = Anchor::Cauchy { xi: 1.0, f: 1.0, flux: 0.0 };
        assert_eq!(direct_ode_solve(&q, a, -1.0).unwrap_err().code(), "BAD_SPEC");
        let a = Anchor::Cauchy { xi: 1.0, f: -1.0, flux: 0.0 };
        assert_eq!(direct_ode_solve(&q, a, 2.0).unwrap_err().code(), "BAD_CONSTANTS");
        let e = local_expansion(BehaviorKind::TailP3, None, &q).unwrap();
        assert!(Anchor::offset(e, 1e-3).is_err());
    }

    #[test]
    fn cross_check_runs_away_from_the_seed() {
        use crate::integrate::IntegrationControls;
        use crate::profiles::reconstruct_profile;
        use crate::shooting::{main_orbit, Origin, SeedSpec};
        let q = p(4.0, 0.3);
        let spec = SeedSpec::new(Origin::P2E3);
        let traj = main_orbit(&spec, &q, &IntegrationControls::default().with_span(30.0)).unwrap();
        let prof = reconstruct_profile(&traj, None).unwrap();
        let cc = cross_check(&prof, 1e-6).unwrap();
        assert!(cc.xi_end > cc.anchor_xi);
        assert!(cc.comparison.points > 100);
        assert!(cc.comparison.max_rel_error < 1e-6, "{cc:?}");
    }
}
