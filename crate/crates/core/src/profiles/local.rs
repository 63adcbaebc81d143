//! Local behaviours of profiles near their singular points, as explicit
//! functions of ξ together with the flux `(f^m)'` they induce.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{h0, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BehaviorKind {
    /// `f ~ (K − cξ)_+^{2/(m−1)}`: interface at `ξ0 = K/c` (orbits entering P1).
    Interface,
    /// `f ~ (cξ − K)_+^{2/(m−1)}`: left contact at `ξ0 = K/c` (orbits out of P0).
    OutP0,
    /// `f ~ A ξ^{2/(m−1)}` as ξ → 0 (the orbit out of P2).
    OriginP2,
    /// `f ~ (1/(m−1))^{1/(m−1)} ξ^{−σ/(m−1)}` as ξ → ∞ (orbits entering P3).
    TailP3,
    /// `f(0) = a > 0`, `f'(0) = 0` (orbits out of Q1).
    FlatQ1,
    /// `f ~ C ξ^{(2−N)/m}` as ξ → 0 (orbits out of Q5).
    AsymptoteQ5,
    /// `f ~ D (−ln ξ)^{1/m}` as ξ → 0 (N = 2, orbits out of the saddle-node).
    LogQ1N2,
    /// The exact curve `f = (1/(m−1))^{1/(m−1)} ξ^{−σ/(m−1)}` (`Z ≡ 1`); not a solution.
    Hyperbola,
}

impl BehaviorKind {
    pub const ALL: [BehaviorKind; 8] = [
        BehaviorKind::Interface,
        BehaviorKind::OutP0,
        BehaviorKind::OriginP2,
        BehaviorKind::TailP3,
        BehaviorKind::FlatQ1,
        BehaviorKind::AsymptoteQ5,
        BehaviorKind::LogQ1N2,
        BehaviorKind::Hyperbola,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BehaviorKind::Interface => "INTERFACE",
            BehaviorKind::OutP0 => "OUT_P0",
            BehaviorKind::OriginP2 => "ORIGIN_P2",
            BehaviorKind::TailP3 => "TAIL_P3",
            BehaviorKind::FlatQ1 => "FLAT_Q1",
            BehaviorKind::AsymptoteQ5 => "ASYMPTOTE_Q5",
            BehaviorKind::LogQ1N2 => "LOG_Q1_N2",
            BehaviorKind::Hyperbola => "HYPERBOLA",
        }
    }

    /// Whether the kind carries a free constant (K, a, C or D).
    pub fn needs_constant(self) -> bool {
        matches!(
            self,
            BehaviorKind::Interface
                | BehaviorKind::OutP0
                | BehaviorKind::FlatQ1
                | BehaviorKind::AsymptoteQ5
                | BehaviorKind::LogQ1N2
        )
    }
}

impl fmt::Display for BehaviorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BehaviorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BehaviorKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::BadSpec(format!("unknown behaviour '{s}'")))
    }
}

/// Slope constant `c = (m−1)h0 / (2 sqrt(m(m−1)))` of `f^{(m−1)/2}` at an
/// interface or a left contact point.
pub fn interface_slope(m: f64) -> f64 {
    (m - 1.0) * h0(m) / (2.0 * (m * (m - 1.0)).sqrt())
}

/// Coefficient of the P2 behaviour `f ~ A ξ^{2/(m−1)}`.
pub fn origin_p2_coefficient(m: f64, n: f64) -> f64 {
    ((m - 1.0) / (2.0 * m * (m * n - n + 2.0))).powf(1.0 / (m - 1.0))
}

/// Coefficient of the hyperbola/tail `(1/(m−1))^{1/(m−1)}`.
pub fn tail_coefficient(m: f64) -> f64 {
    (1.0 / (m - 1.0)).powf(1.0 / (m - 1.0))
}

/// One local behaviour with its constant fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalExpansion {
    pub kind: BehaviorKind,
    pub constant: Option<f64>,
    pub params: ModelParams,
}

pub fn local_expansion(kind: BehaviorKind, constant: Option<f64>, p: &ModelParams) -> Result<LocalExpansion> {
    match (kind.needs_constant(), constant) {
        (true, Some(c)) if c.is_finite() && c > 0.0 => {}
        (true, c) => {
            return Err(Error::BadConstants(format!(
                "{kind} needs a positive constant (got {c:?})"
            )))
        }
        (false, Some(c)) => {
            return Err(Error::BadConstants(format!("{kind} takes no constant (got {c})")))
        }
        (false, None) => {}
    }
    if kind == BehaviorKind::LogQ1N2 && (p.n() - 2.0).abs() > 1e-12 {
        return Err(Error::BadConstants(format!(
            "LOG_Q1_N2 exists only for N = 2 (got N = {})",
            p.n()
        )));
    }
    Ok(LocalExpansion {
        kind,
        constant,
        params: *p,
    })
}

impl LocalExpansion {
    fn k(&self) -> f64 {
        self.constant.unwrap_or(f64::NAN)
    }

    /// Singular point of the behaviour: ξ0 for INTERFACE/OUT_P0, 0 for the
    /// behaviours at the origin, +∞ for the tail and the hyperbola.
    pub fn anchor(&self) -> f64 {
        let c = interface_slope(self.params.m());
        match self.kind {
            BehaviorKind::Interface | BehaviorKind::OutP0 => self.k() / c,
            BehaviorKind::TailP3 | BehaviorKind::Hyperbola => f64::INFINITY,
            _ => 0.0,
        }
    }

    /// Coefficient and exponent of the pure power behaviours `f = A ξ^e`.
    fn power(&self) -> Option<(f64, f64)> {
        let (m, n, s) = (self.params.m(), self.params.n(), self.params.sigma());
        match self.kind {
            BehaviorKind::OriginP2 => Some((origin_p2_coefficient(m, n), 2.0 / (m - 1.0))),
            BehaviorKind::TailP3 | BehaviorKind::Hyperbola => Some((tail_coefficient(m), -s / (m - 1.0))),
            BehaviorKind::AsymptoteQ5 => Some((self.k(), (2.0 - n) / m)),
            _ => None,
        }
    }

    /// FLAT_Q1 series `f^m = a^m + b ξ² + c ξ^{σ+2}`.
    fn flat_series(&self) -> (f64, f64, f64) {
        let (m, n, s) = (self.params.m(), self.params.n(), self.params.sigma());
        let a = self.k();
        let b = a / (2.0 * n * (m - 1.0));
        let c = -a.powf(m) / ((s + 2.0) * (s + n));
        (a.powf(m), b, c)
    }

    /// The behaviour evaluated at ξ (0 beyond an interface or before a
    /// contact point, NaN where undefined).
    pub fn eval(&self, xi: f64) -> f64 {
        let m = self.params.m();
        let c = interface_slope(m);
        let e = 2.0 / (m - 1.0);
        match self.kind {
            BehaviorKind::Interface => (self.k() - c * xi).max(0.0).powf(e),
            BehaviorKind::OutP0 => (c * xi - self.k()).max(0.0).powf(e),
            BehaviorKind::FlatQ1 => {
                let (am, b, cc) = self.flat_series();
                (am + b * xi * xi + cc * xi.powf(self.params.sigma() + 2.0)).powf(1.0 / m)
            }
            BehaviorKind::LogQ1N2 => {
                if xi < 1.0 {
                    self.k() * (-xi.ln()).powf(1.0 / m)
                } else {
                    f64::NAN
                }
            }
            _ => {
                let (a, ex) = self.power().expect("power behaviour");
                a * xi.powf(ex)
            }
        }
    }

    /// `(f^m)'(ξ)` of the behaviour, used as the Cauchy datum of the ξ-ODE.
    pub fn flux(&self, xi: f64) -> f64 {
        let m = self.params.m();
        let c = interface_slope(m);
        let q = (m + 1.0) / (m - 1.0);
        let e = 2.0 * m / (m - 1.0);
        match self.kind {
            BehaviorKind::Interface => -c * e * (self.k() - c * xi).max(0.0).powf(q),
            BehaviorKind::OutP0 => c * e * (c * xi - self.k()).max(0.0).powf(q),
            BehaviorKind::FlatQ1 => {
                let (_, b, cc) = self.flat_series();
                let s = self.params.sigma();
                2.0 * b * xi + cc * (s + 2.0) * xi.powf(s + 1.0)
            }
            BehaviorKind::LogQ1N2 => -self.k().powf(m) / xi,
            _ => {
                let (a, ex) = self.power().expect("power behaviour");
                a.powf(m) * m * ex * xi.powf(m * ex - 1.0)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: f64, s: f64) -> ModelParams {
        ModelParams::new(2.0, n, s).unwrap()
    }

    #[test]
    fn origin_p2_at_m2_n4() {
        let e = local_expansion(BehaviorKind::OriginP2, None, &p(4.0, 0.5)).unwrap();
        assert!((e.eval(2.0) - 4.0 / 24.0).abs() < 1e-15);
    }

    #[test]
    fn asymptote_exponent() {
        let e = local_expansion(BehaviorKind::AsymptoteQ5, Some(3.0), &p(4.0, 0.5)).unwrap();
        assert!((e.eval(2.0) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn constants_are_validated() {
        let q = p(4.0, 0.5);
        for (k, c) in [
            (BehaviorKind::Interface, None),
            (BehaviorKind::FlatQ1, Some(-1.0)),
            (BehaviorKind::TailP3, Some(1.0)),
            (BehaviorKind::LogQ1N2, Some(1.0)),
        ] {
            assert_eq!(local_expansion(k, c, &q).unwrap_err().code(), "BAD_CONSTANTS");
        }
        assert!(local_expansion(BehaviorKind::LogQ1N2, Some(1.0), &p(2.0, 0.2)).is_ok());
    }

    #[test]
    fn positive_on_their_side() {
        let q = p(4.0, 0.5);
        let e = local_expansion(BehaviorKind::Interface, Some(1.0), &q).unwrap();
        let x0 = e.anchor();
        assert!(e.eval(0.99 * x0) > 0.0 && e.eval(1.01 * x0) == 0.0);
        let e = local_expansion(BehaviorKind::OutP0, Some(1.0), &q).unwrap();
        assert!(e.eval(1.01 * x0) > 0.0 && e.eval(0.99 * x0) == 0.0);
    }

    #[test]
    fn flux_is_derivative_of_fm() {
        let q = p(2.0, 0.2);
        for (k, c, x) in [
            (BehaviorKind::Interface, Some(1.3), 0.7),
            (BehaviorKind::OutP0, Some(0.4), 2.0),
            (BehaviorKind::OriginP2, None, 0.3),
            (BehaviorKind::TailP3, None, 5.0),
            (BehaviorKind::FlatQ1, Some(0.8), 0.1),
            (BehaviorKind::AsymptoteQ5, Some(2.0), 0.2),
            (BehaviorKind::LogQ1N2, Some(1.5), 0.2),
        ] {
            let e = local_expansion(k, c, &q).unwrap();
            let h = 1e-5 * x;
            let fm = |t: f64| e.eval(t).powi(2);
            let fd = (fm(x + h) - fm(x - h)) / (2.0 * h);
            assert!((fd - e.flux(x)).abs() < 1e-7 * (1.0 + fd.abs()), "{k}: {fd} vs {}", e.flux(x));
        }
    }
}
