//! Integrated orbits with dense output and their CSV/JSON serialisations.

use std::io::Write;

use serde::Serialize;
use serde_json::json;

use super::dopri::Segment;
use super::events::Event;
use super::Direction;
use crate::fmt::num;
use crate::model::ModelParams;
use crate::vectorfields::{ChartId, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Termination {
    TerminalEvent,
    MaxSpan,
    MaxSteps,
    /// A component exceeded the handoff threshold: the orbit leaves the chart.
    Handoff,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub chart: ChartId,
    pub params: ModelParams,
    pub direction: Direction,
    /// Sample times; strictly increasing forward, strictly decreasing backward.
    pub etas: Vec<f64>,
    pub states: Vec<Vec3>,
    /// Dense segments in internal (always increasing) time `|η|`.
    pub(crate) segments: Vec<Segment>,
    pub events: Vec<Event>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.etas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.etas.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn state(&self, i: usize) -> &[f64] {
        &self.states[i][..self.dim()]
    }

    pub fn last_state(&self) -> &[f64] {
        self.state(self.len() - 1)
    }

    pub fn last_eta(&self) -> f64 {
        *self.etas.last().unwrap()
    }

    /// Interpolated state at `eta` (5th-order step, 4th-order interpolant),
    /// `None` outside the integrated span.
    pub fn interpolate(&self, eta: f64) -> Option<Vec<f64>> {
        let t = self.direction.sign() * eta;
        let first = self.segments.first()?;
        let last = self.segments.last()?;
        if t < first.t0 || t > last.t1() {
            return None;
        }
        let idx = self.segments.partition_point(|s| s.t1() < t);
        let seg = self.segments.get(idx).unwrap_or(last);
        Some(seg.eval(t)[..self.dim()].to_vec())
    }

    pub fn csv_header(&self) -> String {
        let mut s = format!(
            "# sepvar {} chart={} m={} N={} sigma={} direction={}\n",
            env!("CARGO_PKG_VERSION"),
            self.chart,
            num(self.params.m()),
            num(self.params.n()),
            num(self.params.sigma()),
            self.direction.name(),
        );
        s.push_str("eta");
        for v in self.chart.variables() {
            s.push(',');
            s.push_str(v);
        }
        s.push('\n');
        s
    }

    /// CSV: a `#` comment line with params and tool version, then
    /// `eta,<components>` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(self.csv_header().as_bytes())?;
        for i in 0..self.len() {
            let mut line = num(self.etas[i]);
            for v in self.state(i) {
                line.push(',');
                line.push_str(&num(*v));
            }
            line.push('\n');
            w.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    /// JSON envelope: chart, params, direction, termination, events and the
    /// final state. Samples are included when `with_samples` is set.
    pub fn to_json(&self, with_samples: bool) -> serde_json::Value {
        let mut v = json!({
            "tool": "sepvar",
            "version": env!("CARGO_PKG_VERSION"),
            "chart": self.chart,
            "params": self.params,
            "direction": self.direction,
            "termination": self.termination,
            "n_samples": self.len(),
            "eta_end": self.last_eta(),
            "final_state": self.last_state(),
            "events": self.events,
        });
        if with_samples {
            let rows: Vec<Vec<f64>> = (0..self.len())
                .map(|i| {
                    let mut r = vec![self.etas[i]];
                    r.extend_from_slice(self.state(i));
                    r
                })
                .collect();
            v["samples"] = json!(rows);
        }
        v
    }
}
