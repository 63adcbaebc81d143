//! Seeded orbits as MAIN-chart trajectories, for profile reconstruction and
//! plot data.

use super::seed::{seed, SeedSpec};
use crate::error::{Error, Result};
use crate::integrate::{integrate, IntegrationControls, Trajectory};
use crate::model::ModelParams;
use crate::vectorfields::{to_main, ChartId};

/// Max-norm of the MAIN image at which an orbit seeded in a chart at
/// infinity is handed over to MAIN.
pub const MAIN_ENTRY_NORM: f64 = 10.0;

/// Integrates the seeded orbit in MAIN, in the direction of its origin.
/// Seeds in a chart at infinity are first followed in their own chart until
/// their MAIN image has max-norm at most [`MAIN_ENTRY_NORM`]; η of the
/// returned trajectory is then counted from that hand-over point.
pub fn main_orbit(spec: &SeedSpec, p: &ModelParams, controls: &IntegrationControls) -> Result<Trajectory> {
    let (chart, s0) = seed(spec, p)?;
    let mut c = *controls;
    c.direction = spec.origin.direction();
    if chart == ChartId::Main {
        return integrate(chart, &s0[..chart.dim()], p, &c, &[]);
    }
    let pre = integrate(chart, &s0[..chart.dim()], p, &c, &[])?;
    let entry = (0..pre.len()).find_map(|i| {
        let mut s = [0.0; 3];
        s[..chart.dim()].copy_from_slice(pre.state(i));
        let q = to_main(chart, &s, p);
        let norm = q.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        (q.iter().all(|v| v.is_finite()) && norm <= MAIN_ENTRY_NORM).then_some((i, q))
    });
    let Some((i, q)) = entry else {
        return Err(Error::DegenerateTrajectory(format!(
            "orbit from {} never reaches the finite region |state| <= {MAIN_ENTRY_NORM}",
            spec.origin
        )));
    };
    let left = c.max_span - pre.etas[i].abs();
    if !(left > 0.0) {
        return Err(Error::DegenerateTrajectory("no span left after the chart hand-over".into()));
    }
    integrate(ChartId::Main, &q, p, &c.with_span(left), &[])
}
