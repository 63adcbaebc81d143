//! Fate classification. A seeded orbit is integrated through the finite chart
//! and the charts at infinity until one of the terminal rules fires.
//!
//! Rules, in the order they are tested after every accepted step:
//! - MAIN: downward crossings of `{Y = 0}` are logged, and P3 damping is
//!   tested on them. Forward orbits near P1 are tested for capture by the local
//!   stable manifold. Large states are handed off to ALT (`X ≥ |Y|`) or to
//!   CHART_Q23 with the sign of Y.
//! - ALT: return to MAIN, backward arrival at the Q4/Q5 node, or a switch to
//!   CHART_Q23 when `|Y/X| > 3`.
//! - CHART_Q23: return to MAIN, forward arrival at Q3 (minus branch), backward
//!   arrival at Q2 (plus branch) or Q5 (minus branch), or a switch to ALT when
//!   `|X/Y| > 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::seed::{seed, Origin, SeedSpec};
use crate::error::{Error, Result};
use crate::integrate::events::first_crossing;
use crate::integrate::{
    CrossDir, Direction, Event, EventKind, IntegrationControls, Segment, StepFailure, Stepper,
};
use crate::model::{h0, k1, ModelParams};
use crate::vectorfields::charts::{check_admissible, field3, from_main, main_field, to_main, to_vec3};
use crate::vectorfields::{manifold_approx, Branch, ChartId, ManifoldApprox, ManifoldBase, PointId, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Fate {
    EntersP1,
    EntersP3,
    EntersQ3,
    /// Backward-time arrival at the merged Q4/Q5 unstable node.
    EscapesQ5,
    /// Backward-time arrival at the unstable node Q2 (`Y → +∞`).
    FromQ2,
    CycleSuspect,
    Indeterminate,
}

impl Fate {
    pub const ALL: [Fate; 7] = [
        Fate::EntersP1,
        Fate::EntersP3,
        Fate::EntersQ3,
        Fate::EscapesQ5,
        Fate::FromQ2,
        Fate::CycleSuspect,
        Fate::Indeterminate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fate::EntersP1 => "ENTERS_P1",
            Fate::EntersP3 => "ENTERS_P3",
            Fate::EntersQ3 => "ENTERS_Q3",
            Fate::EscapesQ5 => "ESCAPES_Q5",
            Fate::FromQ2 => "FROM_Q2",
            Fate::CycleSuspect => "CYCLE_SUSPECT",
            Fate::Indeterminate => "INDETERMINATE",
        }
    }

    pub fn is_conclusive(self) -> bool {
        self != Fate::Indeterminate
    }
}

impl fmt::Display for Fate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Fate::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::BadSpec(format!("unknown fate '{s}'")))
    }
}

/// Profile type read off the origin of an orbit and its fate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProfileClass {
    GoodP1Behavior,
    GoodP2Behavior,
    GoodP3Behavior,
    Tail,
    NotGood,
}

pub fn profile_class(origin: Option<Origin>, fate: Fate) -> Option<ProfileClass> {
    let origin = origin?;
    let regular_start = matches!(
        origin,
        Origin::P2E3 | Origin::P0Unstable { .. } | Origin::Q1Out { .. }
    );
    match fate {
        Fate::EntersP1 => match origin {
            Origin::Q1Out { .. } => Some(ProfileClass::GoodP1Behavior),
            Origin::P2E3 => Some(ProfileClass::GoodP2Behavior),
            Origin::P0Unstable { .. } => Some(ProfileClass::GoodP3Behavior),
            Origin::Q5Out { .. } => Some(ProfileClass::NotGood),
            _ => None,
        },
        Fate::EntersP3 if regular_start => Some(ProfileClass::Tail),
        Fate::EntersQ3 | Fate::EscapesQ5 | Fate::FromQ2 => Some(ProfileClass::NotGood),
        _ => None,
    }
}

/// Thresholds of the terminal rules. `ball_radius` and `field_gate` are the
/// most result-sensitive knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifyOptions {
    /// Final BALL_ENTRY(P1) radius.
    pub ball_radius: f64,
    /// Field-norm gate of BALL_ENTRY(P1).
    pub field_gate: f64,
    /// Radius around P1 inside which stable-manifold capture is attempted.
    pub capture_radius: f64,
    /// Capture tolerance `|Z − Z1(X, H)| ≤ κ ρ³`.
    pub capture_kappa: f64,
    /// Ball radius for the hyperbolic nodes at infinity (Q2, Q3, Q4/Q5).
    pub node_radius: f64,
    pub damping_x_max: f64,
    pub damping_r_max: f64,
    pub damping_count: usize,
    pub cycle_returns: usize,
    pub cycle_band: f64,
    /// Span allowed to the reduced flow on the P1 stable manifold.
    pub reduced_span: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            ball_radius: 1e-4,
            field_gate: 1e-6,
            capture_radius: 1e-2,
            capture_kappa: 10.0,
            node_radius: 1e-3,
            damping_x_max: 0.05,
            damping_r_max: 0.5,
            damping_count: 4,
            cycle_returns: 5,
            cycle_band: 0.01,
            reduced_span: 1e3,
        }
    }
}

impl ClassifyOptions {
    pub fn validate(&self) -> Result<()> {
        let pos = [
            self.ball_radius,
            self.field_gate,
            self.capture_radius,
            self.capture_kappa,
            self.node_radius,
            self.damping_x_max,
            self.damping_r_max,
            self.cycle_band,
            self.reduced_span,
        ];
        if pos.iter().all(|v| v.is_finite() && *v > 0.0)
            && self.damping_count >= 2
            && self.cycle_returns >= 2
        {
            Ok(())
        } else {
            Err(Error::BadSpec(format!("invalid classifier options {self:?}")))
        }
    }
}

/// A downward crossing of `{Y = 0}` in MAIN variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub eta: f64,
    pub state: Vec3,
}

impl Crossing {
    /// Section amplitude `|Z − 1|` (distance from P3 on the section).
    pub fn amplitude(&self) -> f64 {
        (self.state[2] - 1.0).abs()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FateReport {
    pub origin: Option<Origin>,
    pub params: ModelParams,
    pub direction: Direction,
    pub fate: Fate,
    pub terminal_event: Option<Event>,
    /// Chart of the terminal event (or of the last state).
    pub terminal_chart: ChartId,
    /// Total |η| integrated, summed over all charts.
    pub eta_span: f64,
    /// Signed final η.
    pub terminal_eta: f64,
    /// Final state in MAIN variables (non-finite at points at infinity).
    pub terminal_state: Vec3,
    pub crossings: Vec<Crossing>,
    pub profile_class: Option<ProfileClass>,
    pub critical_case: bool,
    /// Smallest distance to P1 seen at step ends in MAIN.
    pub min_p1_distance: f64,
    pub diagnostics: Vec<String>,
}

impl FateReport {
    /// Report for a probe that could not be run at all.
    pub fn failed(origin: Option<Origin>, p: &ModelParams, direction: Direction, err: &Error) -> Self {
        FateReport {
            origin,
            params: *p,
            direction,
            fate: Fate::Indeterminate,
            terminal_event: None,
            terminal_chart: ChartId::Main,
            eta_span: 0.0,
            terminal_eta: 0.0,
            terminal_state: [f64::NAN; 3],
            crossings: Vec::new(),
            profile_class: None,
            critical_case: p.is_critical(),
            min_p1_distance: f64::INFINITY,
            diagnostics: vec![err.to_string()],
        }
    }
}

/// Minimal relative decrease between successive section amplitudes that
/// counts as damping.
const DAMPING_MARGIN: f64 = 1e-9;

fn norm3(v: &Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn max_norm(v: &Vec3) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

struct Outcome {
    fate: Fate,
    event: Option<Event>,
    chart: ChartId,
    state: Vec3,
}

enum Next {
    Switch(ChartId, Vec3),
    Done(Outcome),
}

struct Run<'a> {
    p: &'a ModelParams,
    c: &'a IntegrationControls,
    o: &'a ClassifyOptions,
    sgn: f64,
    p3_attracting: bool,
    manifold: Option<ManifoldApprox>,
    p1: Vec3,
    tau: f64,
    steps: u64,
    crossings: Vec<Crossing>,
    diagnostics: Vec<String>,
    min_p1: f64,
}

fn ball_event(point: PointId, center: Vec3, radius: f64, gate: f64, eta: f64, state: &[f64]) -> Event {
    Event {
        kind: EventKind::BallEntry {
            point,
            center,
            radius,
            field_gate: gate,
        },
        eta,
        state: state.to_vec(),
        spec: 0,
    }
}

impl<'a> Run<'a> {
    fn eta(&self) -> f64 {
        self.sgn * self.tau
    }

    fn done(&self, fate: Fate, event: Option<Event>, chart: ChartId, state: Vec3) -> Next {
        Next::Done(Outcome {
            fate,
            event,
            chart,
            state,
        })
    }

    fn segment(&mut self, chart: ChartId, s0: Vec3) -> Next {
        let sgn = self.sgn;
        let p = *self.p;
        let field = move |y: &Vec3| {
            let f = field3(chart, y, &p).unwrap_or([f64::NAN; 3]);
            [sgn * f[0], sgn * f[1], sgn * f[2]]
        };
        let mut st = Stepper::new(field, chart.dim(), s0, self.c.rel_tol, self.c.abs_tol);
        loop {
            if self.steps >= self.c.max_steps {
                self.diagnostics.push(format!("max_steps {} reached", self.c.max_steps));
                return self.done(Fate::Indeterminate, None, chart, st.y());
            }
            let remaining = self.c.max_span - self.tau;
            if remaining <= 0.0 {
                return self.at_max_span(chart, st.y());
            }
            let seg = match st.step(remaining) {
                Ok(seg) => seg,
                Err(StepFailure::Underflow { t, y }) => {
                    let e = Error::StepUnderflow {
                        eta: sgn * (self.tau + t),
                        state: y.to_vec(),
                    };
                    self.diagnostics.push(format!("{e} in {chart}"));
                    return self.done(Fate::Indeterminate, None, chart, y);
                }
            };
            let tau0 = self.tau;
            self.steps += 1;
            self.tau += seg.h;
            if !seg.y1.iter().all(|v| v.is_finite()) {
                self.diagnostics
                    .push(format!("non-finite state in {chart} at eta = {}", self.eta()));
                return self.done(Fate::Indeterminate, None, chart, seg.y1);
            }
            let next = match chart {
                ChartId::Main => self.main_rules(&seg, tau0),
                ChartId::Alt => self.alt_rules(&seg.y1),
                ChartId::ChartQ23(b) => self.q23_rules(b, &seg.y1),
                _ => unreachable!("classification runs only in MAIN, ALT and CHART_Q23"),
            };
            if let Some(n) = next {
                return n;
            }
        }
    }

    fn damped(&self) -> bool {
        let k = self.o.damping_count;
        if self.crossings.len() < k {
            return false;
        }
        let last = &self.crossings[self.crossings.len() - k..];
        // A relative margin keeps round-off on a closed cycle (X = 0) from
        // passing as damping.
        last.iter().all(|c| {
            c.state[0] > 0.0 && c.state[0] < self.o.damping_x_max && c.amplitude() < self.o.damping_r_max
        }) && last
            .windows(2)
            .all(|w| w[1].amplitude() < w[0].amplitude() * (1.0 - DAMPING_MARGIN))
    }

    fn main_rules(&mut self, seg: &Segment, tau0: f64) -> Option<Next> {
        let y = seg.y1;
        if let Some((t, s)) = first_crossing(seg, CrossDir::Down, |v| v[1]) {
            let eta = self.sgn * (tau0 + (t - seg.t0));
            self.crossings.push(Crossing { eta, state: s });
            if self.p3_attracting && self.damped() {
                let k = self.o.damping_count;
                let amps: Vec<String> = self.crossings[self.crossings.len() - k..]
                    .iter()
                    .map(|c| format!("{:.3e}", c.amplitude()))
                    .collect();
                self.diagnostics
                    .push(format!("p3_damping: last {k} section amplitudes [{}]", amps.join(", ")));
                let ev = Event {
                    kind: EventKind::PlaneCross {
                        axis: 1,
                        level: 0.0,
                        direction: CrossDir::Down,
                    },
                    eta,
                    state: s.to_vec(),
                    spec: 0,
                };
                return Some(self.done(Fate::EntersP3, Some(ev), ChartId::Main, s));
            }
        }

        let d = norm3(&sub(&y, &self.p1));
        self.min_p1 = self.min_p1.min(d);
        if self.sgn > 0.0 && d < self.o.capture_radius {
            let f = main_field(&y, self.p);
            let approaching = (0..3).map(|i| (y[i] - self.p1[i]) * f[i]).sum::<f64>() < 0.0;
            if approaching {
                if let Some(n) = self.capture(&y) {
                    return Some(n);
                }
            }
        }

        if max_norm(&y) > self.c.handoff_threshold {
            let target = if y[0] >= y[1].abs() {
                ChartId::Alt
            } else {
                ChartId::ChartQ23(Branch::of(y[1]))
            };
            return Some(self.switch(ChartId::Main, target, from_main(target, &y, self.p)));
        }
        None
    }

    fn switch(&mut self, from: ChartId, to: ChartId, s: Vec3) -> Next {
        self.diagnostics
            .push(format!("handoff {from} -> {to} at eta = {}", self.eta()));
        Next::Switch(to, s)
    }

    /// Stable-manifold capture near P1 followed by the reduced flow on the
    /// manifold graph down to the final ball.
    fn capture(&mut self, y: &Vec3) -> Option<Next> {
        let mf = self.manifold?;
        let hz = h0(self.p.m());
        let (x, hh) = (y[0], y[1] + hz);
        let rho = x.hypot(hh);
        let dev = (y[2] - mf.z(x, hh)).abs();
        let tol = self.o.capture_kappa * rho.powi(3);
        if dev > tol {
            return None;
        }
        self.diagnostics.push(format!(
            "p1_capture: rho = {rho:.6e}, |Z - Z1| = {dev:.3e} <= {tol:.3e} (order-{} manifold)",
            mf.order
        ));
        let p = *self.p;
        let f2 = move |v: &Vec3| {
            let f = main_field(&[v[0], v[1] - hz, mf.z(v[0], v[1])], &p);
            [f[0], f[1], 0.0]
        };
        let mut st = Stepper::new(f2, 2, [x, hh, 0.0], self.c.rel_tol, self.c.abs_tol);
        let tau_start = self.tau;
        loop {
            let elapsed = self.tau - tau_start;
            if elapsed >= self.o.reduced_span {
                self.diagnostics
                    .push("reduced flow on the P1 stable manifold did not reach the ball".into());
                let s = st.y();
                return Some(self.done(
                    Fate::Indeterminate,
                    None,
                    ChartId::Main,
                    [s[0], s[1] - hz, mf.z(s[0], s[1])],
                ));
            }
            let seg = match st.step(self.o.reduced_span - elapsed) {
                Ok(seg) => seg,
                Err(StepFailure::Underflow { .. }) => {
                    self.diagnostics.push("step underflow in the reduced P1 flow".into());
                    return Some(self.done(Fate::Indeterminate, None, ChartId::Main, *y));
                }
            };
            self.tau += seg.h;
            let v = seg.y1;
            let q = [v[0], v[1] - hz, mf.z(v[0], v[1])];
            let r = norm3(&sub(&q, &self.p1));
            self.min_p1 = self.min_p1.min(r);
            let fnorm = norm3(&main_field(&q, self.p));
            if r < self.o.ball_radius && fnorm < self.o.field_gate {
                let ev = ball_event(
                    PointId::P1,
                    self.p1,
                    self.o.ball_radius,
                    self.o.field_gate,
                    self.eta(),
                    &q,
                );
                return Some(self.done(Fate::EntersP1, Some(ev), ChartId::Main, q));
            }
        }
    }

    fn alt_rules(&mut self, y: &Vec3) -> Option<Next> {
        let [a, b, c] = *y;
        let big_x = 1.0 / a.sqrt();
        let q = [big_x, b * big_x, c / a];
        if max_norm(&q) < self.c.handoff_threshold / 10.0 {
            return Some(self.switch(ChartId::Alt, ChartId::Main, q));
        }
        if self.sgn < 0.0 {
            let (m, n) = (self.p.m(), self.p.n());
            let bs = (2.0 - n) / m;
            let hyperbolic = (n - 2.0).abs() > 1e-6;
            let near = if hyperbolic {
                norm3(&[a, b - bs, c]) < self.o.node_radius
            } else {
                // N = 2: saddle-node at the ALT origin; x and z decay
                // exponentially, y only algebraically.
                a < 1e-6 && c.abs() < 1e-6 && (b - bs).abs() < 0.05
            };
            if near {
                let ev = ball_event(
                    PointId::Q5,
                    [0.0, bs, 0.0],
                    self.o.node_radius,
                    f64::INFINITY,
                    self.eta(),
                    y,
                );
                return Some(self.done(Fate::EscapesQ5, Some(ev), ChartId::Alt, *y));
            }
        }
        if b.abs() > 3.0 {
            let sa = a.sqrt();
            let to = ChartId::ChartQ23(Branch::of(b));
            return Some(self.switch(ChartId::Alt, to, [1.0 / b, c / (b * sa), sa / b]));
        }
        None
    }

    fn q23_rules(&mut self, br: Branch, y: &Vec3) -> Option<Next> {
        let [x, z, w] = *y;
        let chart = ChartId::ChartQ23(br);
        let q = [x / w, 1.0 / w, z / w];
        if max_norm(&q) < self.c.handoff_threshold / 10.0 {
            return Some(self.switch(chart, ChartId::Main, q));
        }
        let r0 = norm3(y);
        let hit = |pt: PointId, center: Vec3, s: &Self| {
            ball_event(pt, center, s.o.node_radius, f64::INFINITY, s.eta(), y)
        };
        match (br, self.sgn > 0.0) {
            (Branch::Minus, true) if r0 < self.o.node_radius => {
                let ev = hit(PointId::Q3, [0.0; 3], self);
                return Some(self.done(Fate::EntersQ3, Some(ev), chart, *y));
            }
            (Branch::Plus, false) if r0 < self.o.node_radius => {
                let ev = hit(PointId::Q2, [0.0; 3], self);
                return Some(self.done(Fate::FromQ2, Some(ev), chart, *y));
            }
            (Branch::Minus, false) if self.p.n() > 2.0 + 1e-6 => {
                let xs = -self.p.m() / (self.p.n() - 2.0);
                if norm3(&[x - xs, z, w]) < self.o.node_radius {
                    let ev = hit(PointId::Q5, [xs, 0.0, 0.0], self);
                    return Some(self.done(Fate::EscapesQ5, Some(ev), chart, *y));
                }
            }
            _ => {}
        }
        if x.abs() > 1.0 {
            let s = [w * w / (x * x), 1.0 / x, z * w / (x * x)];
            return Some(self.switch(chart, ChartId::Alt, s));
        }
        None
    }

    fn at_max_span(&mut self, chart: ChartId, state: Vec3) -> Next {
        let k = self.o.cycle_returns;
        if self.crossings.len() >= k {
            let last = &self.crossings[self.crossings.len() - k..];
            let band = self.o.cycle_band;
            let ratios: Vec<f64> = last
                .windows(2)
                .map(|w| w[1].amplitude() / w[0].amplitude())
                .collect();
            let flat = ratios.iter().all(|r| (1.0 - band..=1.0 + band).contains(r));
            let decreasing = ratios.iter().all(|r| *r < 1.0 - DAMPING_MARGIN);
            if flat && !decreasing {
                self.diagnostics.push(format!(
                    "cycle_suspect: last {k} amplitude ratios {:?}",
                    ratios
                ));
                let c = last[k - 1];
                let ev = Event {
                    kind: EventKind::PlaneCross {
                        axis: 1,
                        level: 0.0,
                        direction: CrossDir::Down,
                    },
                    eta: c.eta,
                    state: c.state.to_vec(),
                    spec: 0,
                };
                return self.done(Fate::CycleSuspect, Some(ev), chart, state);
            }
        }
        self.diagnostics
            .push(format!("max_span {} reached without a terminal rule", self.c.max_span));
        if self.p.is_critical() {
            self.diagnostics
                .push("critical_case: sigma = sigma_c, the P3 damping rule is disabled".into());
        }
        self.done(Fate::Indeterminate, None, chart, state)
    }
}

/// Classifies the orbit through `state` (given in `chart`), integrated in
/// `controls.direction`. Input errors are returned; numerical failures end in
/// an INDETERMINATE report with a diagnostic.
pub fn classify_state(
    chart: ChartId,
    state: &[f64],
    p: &ModelParams,
    controls: &IntegrationControls,
    options: &ClassifyOptions,
    origin: Option<Origin>,
) -> Result<FateReport> {
    controls.validate()?;
    options.validate()?;
    let s = to_vec3(chart, state)?;
    check_admissible(chart, &s, p)?;
    // Start in one of the three charts the classifier runs in.
    let (mut chart, mut s) = match chart {
        ChartId::Main | ChartId::Alt | ChartId::ChartQ23(_) => (chart, s),
        ChartId::ChartQ1 => (ChartId::Alt, [s[2] * s[2], s[0], s[1] * s[2]]),
        _ => (ChartId::Main, to_main(chart, &s, p)),
    };
    if !s.iter().all(|v| v.is_finite()) {
        return Err(Error::BadSpec(format!("start state {state:?} has no finite image")));
    }
    let critical = p.is_critical();
    let manifold = manifold_approx(ManifoldBase::P1, if critical { 3 } else { 2 }, p).ok();
    let mut run = Run {
        p,
        c: controls,
        o: options,
        sgn: controls.direction.sign(),
        p3_attracting: !critical && controls.direction.sign() * k1(p) < 0.0,
        manifold,
        p1: [0.0, -h0(p.m()), 0.0],
        tau: 0.0,
        steps: 0,
        crossings: Vec::new(),
        diagnostics: Vec::new(),
        min_p1: f64::INFINITY,
    };
    let out = loop {
        match run.segment(chart, s) {
            Next::Switch(c, s2) => {
                chart = c;
                s = s2;
            }
            Next::Done(out) => break out,
        }
    };
    Ok(FateReport {
        origin,
        params: *p,
        direction: controls.direction,
        fate: out.fate,
        terminal_event: out.event,
        terminal_chart: out.chart,
        eta_span: run.tau,
        terminal_eta: run.eta(),
        terminal_state: to_main(out.chart, &out.state, p),
        crossings: run.crossings,
        profile_class: profile_class(origin, out.fate),
        critical_case: critical,
        min_p1_distance: run.min_p1,
        diagnostics: run.diagnostics,
    })
}

/// Seeds `spec` and classifies its orbit with default thresholds. The
/// integration direction is the one of the origin (backward for P1_BACKWARD),
/// whatever `controls.direction` says.
pub fn classify_fate(spec: &SeedSpec, p: &ModelParams, controls: &IntegrationControls) -> Result<FateReport> {
    classify_fate_with(spec, p, controls, &ClassifyOptions::default())
}

pub fn classify_fate_with(
    spec: &SeedSpec,
    p: &ModelParams,
    controls: &IntegrationControls,
    options: &ClassifyOptions,
) -> Result<FateReport> {
    let (chart, s) = seed(spec, p)?;
    let mut c = *controls;
    c.direction = spec.origin.direction();
    classify_state(chart, &s[..chart.dim()], p, &c, options, Some(spec.origin))
}
