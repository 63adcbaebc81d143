//! Event specifications, event functions and localisation on dense output.

use serde::Serialize;

use super::dopri::Segment;
use crate::geometry::surface::surface_eval;
use crate::model::ModelParams;
use crate::vectorfields::{charts::field3, to_main, ChartId, ManifoldApprox, PointId, Vec3};

/// Bisection iterations and η-resolution for event localisation.
pub const LOCATE_MAX_ITER: usize = 80;
pub const LOCATE_TOL: f64 = 1e-12;
/// Sub-samples per step used to catch double crossings inside one step.
const SUBSAMPLES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CrossDir {
    Up,
    Down,
    Either,
}

impl CrossDir {
    fn accepts(self, before: f64, after: f64) -> bool {
        let up = before < 0.0 && after >= 0.0;
        let down = before > 0.0 && after <= 0.0;
        match self {
            CrossDir::Up => up,
            CrossDir::Down => down,
            CrossDir::Either => up || down,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub enum SurfaceId {
    /// The separatrix quadric `Z = Z(X, Y)`; the event function is `Z − Z(X, Y)`.
    Separatrix,
    /// A Taylor graph of a P0/P1 invariant manifold; `Z − Z_k(X, H)`.
    Manifold(ManifoldApprox),
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(tag = "type", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EventKind {
    /// `state[axis]` crosses `level` (axis is a chart component index).
    PlaneCross {
        axis: usize,
        level: f64,
        direction: CrossDir,
    },
    /// Crossing of a surface given in main variables.
    SurfaceCross { surface: SurfaceId, direction: CrossDir },
    /// Entry into the ball of `radius` around `center` with the field norm
    /// below `field_gate` there.
    BallEntry {
        point: PointId,
        center: Vec3,
        radius: f64,
        field_gate: f64,
    },
    /// `|state[component]|` (or the max-norm when `None`) exceeds `threshold`.
    Escape {
        component: Option<usize>,
        threshold: f64,
    },
    /// Field norm below `tol`.
    Stall { tol: f64 },
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EventSpec {
    pub kind: EventKind,
    pub terminal: bool,
}

impl EventSpec {
    pub fn terminal(kind: EventKind) -> Self {
        EventSpec {
            kind,
            terminal: true,
        }
    }

    pub fn observe(kind: EventKind) -> Self {
        EventSpec {
            kind,
            terminal: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Event {
    pub kind: EventKind,
    pub eta: f64,
    pub state: Vec<f64>,
    /// Index of the spec in the caller's list.
    pub spec: usize,
}

fn norm(v: &Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Signed event function; the event sits on its zero set.
pub fn event_value(kind: &EventKind, chart: ChartId, s: &Vec3, p: &ModelParams) -> f64 {
    match kind {
        EventKind::PlaneCross { axis, level, .. } => s[*axis] - level,
        EventKind::SurfaceCross { surface, .. } => {
            let q = to_main(chart, s, p);
            match surface {
                SurfaceId::Separatrix => q[2] - surface_eval(q[0], q[1], p),
                SurfaceId::Manifold(mf) => q[2] - mf.z(q[0], mf.shift(q[1])),
            }
        }
        EventKind::BallEntry { center, radius, .. } => {
            let d = [s[0] - center[0], s[1] - center[1], s[2] - center[2]];
            norm(&d) - radius
        }
        EventKind::Escape {
            component,
            threshold,
        } => match component {
            Some(c) => s[*c].abs() - threshold,
            None => s.iter().fold(0.0f64, |a, v| a.max(v.abs())) - threshold,
        },
        EventKind::Stall { tol } => {
            let f = field3(chart, s, p).unwrap_or([f64::INFINITY; 3]);
            norm(&f) - tol
        }
    }
}

/// Bisection for a sign change of `g` on `[a, b]` (internal time), returning
/// the time just past the crossing and the state there.
pub fn locate<G: Fn(&Vec3) -> f64>(seg: &Segment, mut a: f64, mut b: f64, g: G) -> (f64, Vec3) {
    let ga = g(&seg.eval(a));
    for _ in 0..LOCATE_MAX_ITER {
        if b - a <= LOCATE_TOL {
            break;
        }
        let c = 0.5 * (a + b);
        let gc = g(&seg.eval(c));
        if gc == 0.0 {
            b = c;
            break;
        }
        if (gc < 0.0) == (ga < 0.0) {
            a = c;
        } else {
            b = c;
        }
    }
    (b, seg.eval(b))
}

/// First crossing of `g` inside a step with the requested direction; the
/// step is sub-sampled so that a double crossing inside one step is not missed.
pub fn first_crossing<G: Fn(&Vec3) -> f64>(
    seg: &Segment,
    dir: CrossDir,
    g: G,
) -> Option<(f64, Vec3)> {
    let mut t_prev = seg.t0;
    let mut g_prev = g(&seg.y0);
    for k in 1..=SUBSAMPLES {
        let t = if k == SUBSAMPLES {
            seg.t1()
        } else {
            seg.t0 + seg.h * k as f64 / SUBSAMPLES as f64
        };
        let y = if k == SUBSAMPLES { seg.y1 } else { seg.eval(t) };
        let gv = g(&y);
        if dir.accepts(g_prev, gv) {
            return Some(locate(seg, t_prev, t, &g));
        }
        t_prev = t;
        g_prev = gv;
    }
    None
}

/// Checks one spec against one step. Returns the internal time and state of
/// the event if it fires.
pub fn check_event(
    kind: &EventKind,
    chart: ChartId,
    seg: &Segment,
    p: &ModelParams,
) -> Option<(f64, Vec3)> {
    let g = |s: &Vec3| event_value(kind, chart, s, p);
    match kind {
        EventKind::PlaneCross { direction, .. } | EventKind::SurfaceCross { direction, .. } => {
            first_crossing(seg, *direction, g)
        }
        EventKind::Escape { .. } => first_crossing(seg, CrossDir::Up, g),
        EventKind::BallEntry { field_gate, .. } => {
            if g(&seg.y1) >= 0.0 {
                return None;
            }
            let fnorm = |s: &Vec3| norm(&field3(chart, s, p).unwrap_or([f64::INFINITY; 3]));
            let (t, s) = if g(&seg.y0) >= 0.0 {
                locate(seg, seg.t0, seg.t1(), g)
            } else {
                (seg.t1(), seg.y1)
            };
            (fnorm(&s) < *field_gate).then_some((t, s))
        }
        EventKind::Stall { .. } => (g(&seg.y1) < 0.0).then_some((seg.t1(), seg.y1)),
    }
}
