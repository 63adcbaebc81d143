//! Adaptive integration of any chart's field with dense output, forward or
//! backward time, and event detection.

pub mod dopri;
pub mod events;
pub mod trajectory;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::vectorfields::charts::{check_admissible, field3, to_vec3};
use crate::vectorfields::{ChartId, Vec3};

pub use dopri::{Segment, StepFailure, Stepper};
pub use events::{CrossDir, Event, EventKind, EventSpec, SurfaceId};
pub use trajectory::{Termination, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegrationControls {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximal |η| span.
    pub max_span: f64,
    pub max_steps: u64,
    /// Max-norm of the chart state at which the orbit is handed to another chart.
    pub handoff_threshold: f64,
    pub direction: Direction,
}

impl Default for IntegrationControls {
    fn default() -> Self {
        IntegrationControls {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_span: 1e4,
            max_steps: 10_000_000,
            handoff_threshold: 1e3,
            direction: Direction::Forward,
        }
    }
}

impl IntegrationControls {
    pub fn backward(mut self) -> Self {
        self.direction = Direction::Backward;
        self
    }

    pub fn with_span(mut self, span: f64) -> Self {
        self.max_span = span;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.max_span > 0.0
            && self.handoff_threshold > 0.0
            && self.max_steps > 0
            && self.rel_tol.is_finite()
            && self.abs_tol.is_finite()
            && !self.max_span.is_nan();
        if ok {
            Ok(())
        } else {
            Err(Error::BadSpec(format!("invalid integration controls {self:?}")))
        }
    }
}

/// What the per-event callback of [`run`] asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

fn max_norm(s: &Vec3) -> f64 {
    s.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

/// Integration loop shared by [`integrate`] and [`poincare_section`]. Every
/// detected event is logged and passed to `on_event`; returning `Stop`
/// terminates the orbit at that event.
pub fn run<C: FnMut(&Event) -> Control>(
    chart: ChartId,
    initial: &[f64],
    p: &ModelParams,
    controls: &IntegrationControls,
    specs: &[EventSpec],
    mut on_event: C,
) -> Result<Trajectory> {
    controls.validate()?;
    let s0 = to_vec3(chart, initial)?;
    check_admissible(chart, &s0, p)?;
    let sgn = controls.direction.sign();
    let dim = chart.dim();
    let field = |y: &Vec3| {
        let f = field3(chart, y, p).expect("chart validated at start");
        [sgn * f[0], sgn * f[1], sgn * f[2]]
    };
    let mut st = Stepper::new(field, dim, s0, controls.rel_tol, controls.abs_tol);
    let mut traj = Trajectory {
        chart,
        params: *p,
        direction: controls.direction,
        etas: vec![0.0],
        states: vec![s0],
        segments: Vec::new(),
        events: Vec::new(),
        termination: Termination::MaxSpan,
    };
    let handoff = events::EventKind::Escape {
        component: None,
        threshold: controls.handoff_threshold,
    };
    let mut steps = 0u64;
    loop {
        if steps >= controls.max_steps {
            traj.termination = Termination::MaxSteps;
            break;
        }
        let remaining = controls.max_span - st.t();
        if remaining <= 0.0 {
            traj.termination = Termination::MaxSpan;
            break;
        }
        let seg = match st.step(remaining) {
            Ok(seg) => seg,
            Err(StepFailure::Underflow { t, y }) => {
                return Err(Error::StepUnderflow {
                    eta: sgn * t,
                    state: y[..dim].to_vec(),
                })
            }
        };
        steps += 1;

        // Collect the events of this step in time order.
        let mut found: Vec<(f64, Vec3, usize)> = specs
            .iter()
            .enumerate()
            .filter_map(|(i, sp)| {
                events::check_event(&sp.kind, chart, &seg, p).map(|(t, s)| (t, s, i))
            })
            .collect();
        found.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut stop_at: Option<(f64, Vec3)> = None;
        for (t, s, i) in found {
            let ev = Event {
                kind: specs[i].kind,
                eta: sgn * t,
                state: s[..dim].to_vec(),
                spec: i,
            };
            let ctl = on_event(&ev);
            traj.events.push(ev);
            if ctl == Control::Stop {
                stop_at = Some((t, s));
                break;
            }
        }
        traj.segments.push(seg);
        if let Some((t, s)) = stop_at {
            if t > *traj.etas.last().unwrap() * sgn {
                traj.etas.push(sgn * t);
                traj.states.push(s);
            }
            traj.termination = Termination::TerminalEvent;
            break;
        }
        if max_norm(&seg.y1) > controls.handoff_threshold {
            let (t, s) = events::first_crossing(&seg, CrossDir::Up, |y| {
                events::event_value(&handoff, chart, y, p)
            })
            .unwrap_or((seg.t1(), seg.y1));
            traj.etas.push(sgn * t);
            traj.states.push(s);
            traj.termination = Termination::Handoff;
            break;
        }
        traj.etas.push(sgn * seg.t1());
        traj.states.push(seg.y1);
    }
    Ok(traj)
}

/// Integrates `initial` in `chart` until the first terminal event, `max_span`,
/// `max_steps`, or a handoff (max-norm above `handoff_threshold`).
pub fn integrate(
    chart: ChartId,
    initial: &[f64],
    p: &ModelParams,
    controls: &IntegrationControls,
    specs: &[EventSpec],
) -> Result<Trajectory> {
    run(chart, initial, p, controls, specs, |ev| {
        if specs[ev.spec].terminal {
            Control::Stop
        } else {
            Control::Continue
        }
    })
}

/// A coordinate hyperplane `{state[axis] = level}`; `direction = None` keeps
/// the direction of the first crossing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub axis: usize,
    pub level: f64,
    #[serde(default)]
    pub direction: Option<CrossDir>,
}

impl<'de> Deserialize<'de> for CrossDir {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.to_ascii_lowercase().as_str() {
            "up" => Ok(CrossDir::Up),
            "down" => Ok(CrossDir::Down),
            "either" => Ok(CrossDir::Either),
            _ => Err(serde::de::Error::custom(format!("bad crossing direction '{s}'"))),
        }
    }
}

/// Successive same-direction crossings of `section`, up to `n_returns`. A
/// crossing at the very start (initial point on the section) is not counted.
pub fn poincare_section(
    chart: ChartId,
    initial: &[f64],
    section: Section,
    n_returns: usize,
    p: &ModelParams,
    controls: &IntegrationControls,
) -> Result<Vec<Vec<f64>>> {
    if section.axis >= chart.dim() {
        return Err(Error::BadSpec(format!(
            "section axis {} outside chart {} of dimension {}",
            section.axis,
            chart,
            chart.dim()
        )));
    }
    let spec = EventSpec::observe(EventKind::PlaneCross {
        axis: section.axis,
        level: section.level,
        direction: CrossDir::Either,
    });
    let mut dir = section.direction;
    let mut hits: Vec<Vec<f64>> = Vec::new();
    let start_tol = 1e-9;
    run(chart, initial, p, controls, &[spec], |ev| {
        if ev.eta.abs() <= start_tol {
            return Control::Continue;
        }
        // Direction of this crossing from the field at the event.
        let s = to_vec3(chart, &ev.state).expect("event state has chart dimension");
        let f = field3(chart, &s, p).expect("validated chart");
        let rate = controls.direction.sign() * f[section.axis];
        let this = if rate >= 0.0 { CrossDir::Up } else { CrossDir::Down };
        let want = *dir.get_or_insert(this);
        if want == this || want == CrossDir::Either {
            hits.push(ev.state.clone());
        }
        if hits.len() >= n_returns {
            Control::Stop
        } else {
            Control::Continue
        }
    })?;
    if hits.len() < n_returns {
        return Err(Error::NoReturn {
            found: hits.len(),
            requested: n_returns,
        });
    }
    Ok(hits)
}
