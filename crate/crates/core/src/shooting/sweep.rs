//! Fate sweeps and transition bisection over σ or over the seed label.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::classify::{classify_fate_with, ClassifyOptions, Fate, FateReport};
use super::seed::{Origin, SeedSpec, DEFAULT_EPSILON};
use crate::error::{Error, Result};
use crate::fmt::num;
use crate::integrate::IntegrationControls;
use crate::model::ModelParams;
use crate::par::{self, Execution};

/// Which scalar is varied. `D` stands for the seed's shooting label: D for
/// P1_BACKWARD, θ for P0_UNSTABLE, φ for Q1_OUT and Q5_OUT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parameter {
    #[serde(rename = "SIGMA")]
    Sigma,
    #[serde(rename = "D")]
    D,
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parameter::Sigma => "SIGMA",
            Parameter::D => "D",
        })
    }
}

impl FromStr for Parameter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SIGMA" => Ok(Parameter::Sigma),
            "D" => Ok(Parameter::D),
            _ => Err(Error::BadSpec(format!("unknown parameter '{s}' (SIGMA or D)"))),
        }
    }
}

/// Everything a probe needs besides the varied value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Shooting {
    pub origin: Origin,
    pub epsilon: f64,
    pub params: ModelParams,
    pub controls: IntegrationControls,
    pub options: ClassifyOptions,
    pub execution: Execution,
}

impl Shooting {
    pub fn new(origin: Origin, params: ModelParams) -> Self {
        Shooting {
            origin,
            epsilon: DEFAULT_EPSILON,
            params,
            controls: IntegrationControls::default(),
            options: ClassifyOptions::default(),
            execution: Execution::default(),
        }
    }

    /// Seed spec and parameters at `value` of `parameter`.
    pub fn at(&self, parameter: Parameter, value: f64) -> Result<(SeedSpec, ModelParams)> {
        match parameter {
            Parameter::Sigma => Ok((
                SeedSpec::new(self.origin).with_epsilon(self.epsilon),
                self.params.with_sigma(value)?,
            )),
            Parameter::D => Ok((
                SeedSpec::new(self.origin.with_label(value)?).with_epsilon(self.epsilon),
                self.params,
            )),
        }
    }

    pub fn probe(&self, parameter: Parameter, value: f64) -> Result<FateReport> {
        let (spec, p) = self.at(parameter, value)?;
        classify_fate_with(&spec, &p, &self.controls, &self.options)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub value: f64,
    pub report: FateReport,
}

/// A change of fate between two consecutive conclusive grid points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FateChange {
    pub lo: f64,
    pub hi: f64,
    pub fate_lo: Fate,
    pub fate_hi: Fate,
}

#[derive(Debug, Clone, Serialize)]
pub struct Sweep {
    pub parameter: Parameter,
    pub setup: Shooting,
    pub points: Vec<SweepPoint>,
}

/// Classifies every grid value independently (in parallel with the
/// `parallel` feature). Per-point failures become INDETERMINATE rows.
pub fn sweep(parameter: Parameter, grid: &[f64], setup: &Shooting) -> Result<Sweep> {
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::BadSpec("sweep grid contains non-finite values".into()));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::BadSpec("sweep grid must be sorted".into()));
    }
    let points = par::map(grid, setup.execution, |&v| {
        let report = setup.probe(parameter, v).unwrap_or_else(|e| {
            let p = setup.at(parameter, v).map(|x| x.1).unwrap_or(setup.params);
            let origin = setup.origin.with_label(v).ok().filter(|_| parameter == Parameter::D);
            FateReport::failed(origin.or(Some(setup.origin)), &p, setup.origin.direction(), &e)
        });
        SweepPoint { value: v, report }
    });
    Ok(Sweep {
        parameter,
        setup: *setup,
        points,
    })
}

impl Sweep {
    pub fn fates(&self) -> Vec<Fate> {
        self.points.iter().map(|p| p.report.fate).collect()
    }

    /// All fate changes between consecutive conclusive points, in grid order.
    pub fn transitions(&self) -> Vec<FateChange> {
        let conclusive: Vec<&SweepPoint> = self
            .points
            .iter()
            .filter(|p| p.report.fate.is_conclusive())
            .collect();
        conclusive
            .windows(2)
            .filter(|w| w[0].report.fate != w[1].report.fate)
            .map(|w| FateChange {
                lo: w[0].value,
                hi: w[1].value,
                fate_lo: w[0].report.fate,
                fate_hi: w[1].report.fate,
            })
            .collect()
    }

    pub fn indeterminate_fraction(&self) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        let k = self.points.iter().filter(|p| !p.report.fate.is_conclusive()).count();
        k as f64 / self.points.len() as f64
    }

    pub fn csv_header(&self) -> String {
        let p = &self.setup.params;
        format!(
            "# sepvar {} origin={} parameter={} m={} N={} sigma={} epsilon={} rel_tol={}\n\
             value,fate,eta_span,terminal_eta,terminal_X,terminal_Y,terminal_Z,profile_class,diagnostics\n",
            env!("CARGO_PKG_VERSION"),
            self.setup.origin,
            self.parameter,
            num(p.m()),
            num(p.n()),
            num(p.sigma()),
            num(self.setup.epsilon),
            num(self.setup.controls.rel_tol),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.csv_header();
        for pt in &self.points {
            let r = &pt.report;
            let class = r
                .profile_class
                .map(|c| serde_json::to_value(c).unwrap().as_str().unwrap().to_string())
                .unwrap_or_default();
            let diag = r.diagnostics.join("; ").replace(['"', ','], " ");
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},\"{}\"\n",
                num(pt.value),
                r.fate,
                num(r.eta_span),
                num(r.terminal_eta),
                num(r.terminal_state[0]),
                num(r.terminal_state[1]),
                num(r.terminal_state[2]),
                class,
                diag
            ));
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .points
            .iter()
            .map(|pt| {
                let r = &pt.report;
                serde_json::json!({
                    "value": pt.value,
                    "fate": r.fate,
                    "eta_span": r.eta_span,
                    "terminal_eta": r.terminal_eta,
                    "terminal_state": r.terminal_state,
                    "terminal_chart": r.terminal_chart,
                    "terminal_event": r.terminal_event,
                    "profile_class": r.profile_class,
                    "critical_case": r.critical_case,
                    "crossings": r.crossings.len(),
                    "min_p1_distance": r.min_p1_distance,
                    "diagnostics": r.diagnostics,
                })
            })
            .collect();
        serde_json::json!({
            "tool": "sepvar",
            "version": env!("CARGO_PKG_VERSION"),
            "parameter": self.parameter,
            "setup": self.setup,
            "points": rows,
            "transitions": self.transitions(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Probe {
    pub value: f64,
    pub fate: Fate,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransitionBracket {
    pub parameter: Parameter,
    pub origin: Origin,
    pub lo: f64,
    pub hi: f64,
    pub fate_lo: Fate,
    pub fate_hi: Fate,
    pub width: f64,
    /// Every classification made, in order.
    pub probes: Vec<Probe>,
}

impl TransitionBracket {
    pub fn indeterminate(&self) -> usize {
        self.probes.iter().filter(|p| !p.fate.is_conclusive()).count()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("bracket serialises");
        v["tool"] = "sepvar".into();
        v["version"] = env!("CARGO_PKG_VERSION").into();
        v
    }
}

/// Bisection on the discrete fate function. Keeps the FIRST transition from
/// `lo` upward: a conclusive midpoint with the fate of `lo` moves `lo`, any
/// other conclusive fate moves `hi`. An INDETERMINATE midpoint is replaced by
/// the first conclusive point among the 3/8, 5/8, 1/4 and 3/4 points of the
/// bracket (probing both sub-intervals).
pub fn bisect_transition(
    parameter: Parameter,
    lo: f64,
    hi: f64,
    tol: f64,
    setup: &Shooting,
) -> Result<TransitionBracket> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::BadSpec(format!("need finite lo < hi (got {lo}, {hi})")));
    }
    if !(tol > 0.0) {
        return Err(Error::BadSpec(format!("tolerance must be positive (got {tol})")));
    }
    let mut probes: Vec<Probe> = Vec::new();
    let run = |v: f64, probes: &mut Vec<Probe>| -> Result<Fate> {
        let f = setup.probe(parameter, v)?.fate;
        probes.push(Probe { value: v, fate: f });
        Ok(f)
    };
    let ends = par::map(&[lo, hi], setup.execution, |&v| setup.probe(parameter, v));
    let mut fates = Vec::new();
    for (v, r) in [lo, hi].into_iter().zip(ends) {
        let f = r?.fate;
        probes.push(Probe { value: v, fate: f });
        fates.push(f);
    }
    let (mut flo, mut fhi) = (fates[0], fates[1]);
    for (v, f) in [(lo, flo), (hi, fhi)] {
        if !f.is_conclusive() {
            return Err(Error::BadSpec(format!("endpoint {v} classifies as INDETERMINATE")));
        }
    }
    if flo == fhi {
        return Err(Error::SameFateAtEndpoints(flo.name().into()));
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let w = b - a;
        let mut chosen = None;
        for frac in [0.5, 0.375, 0.625, 0.25, 0.75] {
            let v = a + frac * w;
            if v <= a || v >= b {
                break;
            }
            let f = run(v, &mut probes)?;
            if f.is_conclusive() {
                chosen = Some((v, f));
                break;
            }
        }
        let indet = probes.iter().filter(|p| !p.fate.is_conclusive()).count();
        if 2 * indet > probes.len() {
            return Err(Error::TooManyIndeterminate {
                indeterminate: indet,
                probes: probes.len(),
            });
        }
        let Some((v, f)) = chosen else {
            if b - a == w {
                return Err(Error::TooManyIndeterminate {
                    indeterminate: indet,
                    probes: probes.len(),
                });
            }
            continue;
        };
        if f == flo {
            a = v;
        } else {
            b = v;
            fhi = f;
        }
    }
    flo = probes
        .iter()
        .rev()
        .find(|p| p.value == a)
        .map(|p| p.fate)
        .unwrap_or(flo);
    Ok(TransitionBracket {
        parameter,
        origin: setup.origin,
        lo: a,
        hi: b,
        fate_lo: flo,
        fate_hi: fhi,
        width: b - a,
        probes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_names() {
        assert_eq!("sigma".parse::<Parameter>().unwrap(), Parameter::Sigma);
        assert_eq!("D".parse::<Parameter>().unwrap(), Parameter::D);
        assert!("x".parse::<Parameter>().is_err());
    }

    #[test]
    fn unsorted_grid_is_rejected() {
        let s = Shooting::new(Origin::P2E3, ModelParams::new(2.0, 4.0, 0.5).unwrap());
        assert_eq!(sweep(Parameter::Sigma, &[0.3, 0.2], &s).unwrap_err().code(), "BAD_SPEC");
    }

    #[test]
    fn same_fate_endpoints() {
        let s = Shooting::new(Origin::P2E3, ModelParams::new(2.0, 4.0, 0.5).unwrap());
        let e = bisect_transition(Parameter::Sigma, 0.4, 0.5, 1e-2, &s).unwrap_err();
        assert_eq!(e.code(), "SAME_FATE_AT_ENDPOINTS");
    }

    #[test]
    fn label_bisection_needs_a_label() {
        let s = Shooting::new(Origin::P2E3, ModelParams::new(2.0, 4.0, 0.5).unwrap());
        assert_eq!(bisect_transition(Parameter::D, 0.1, 1.0, 1e-2, &s).unwrap_err().code(), "BAD_SPEC");
    }
}
