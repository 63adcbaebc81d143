//! Initial points on the invariant manifolds the good orbits come from.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrate::Direction;
use crate::model::{e3, h0, p2_location, ModelParams};
use crate::vectorfields::{manifold_approx, ChartId, ManifoldBase, Vec3};

/// Where an orbit is launched from. The angle/label parameters make the
/// launched orbit (not just the point) independent of ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "origin", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Origin {
    /// The unique orbit leaving P2 along its unstable eigenvector e3.
    P2E3,
    /// The orbit `Z ≈ D X²`, `D = tan θ`, on the 2D unstable manifold of P0.
    P0Unstable { theta: f64 },
    /// The orbit `z ≈ C w^{σ+1}`, `C = tan φ`, on the 2D unstable manifold of
    /// Q1 (chart Q1).
    Q1Out { phi: f64 },
    /// The orbit `Z ≈ D X²` on the 2D stable manifold of P1 (integrated
    /// backward).
    P1Backward { d: f64 },
    /// A point at distance ε from Q5 in chart Q1, direction φ in the (w, z) plane.
    Q5Out { phi: f64 },
    /// `(X, Y, Z) = (x0, 0, 1 + r0)`.
    NearP3 { x0: f64, r0: f64 },
}

impl Origin {
    pub fn name(&self) -> &'static str {
        match self {
            Origin::P2E3 => "P2_E3",
            Origin::P0Unstable { .. } => "P0_UNSTABLE",
            Origin::Q1Out { .. } => "Q1_OUT",
            Origin::P1Backward { .. } => "P1_BACKWARD",
            Origin::Q5Out { .. } => "Q5_OUT",
            Origin::NearP3 { .. } => "NEAR_P3",
        }
    }

    /// The scalar shooting label (θ, φ, D), if the origin has one.
    pub fn label(&self) -> Option<f64> {
        match *self {
            Origin::P0Unstable { theta } => Some(theta),
            Origin::Q1Out { phi } | Origin::Q5Out { phi } => Some(phi),
            Origin::P1Backward { d } => Some(d),
            _ => None,
        }
    }

    /// Same origin with the label replaced.
    pub fn with_label(&self, v: f64) -> Result<Origin> {
        Ok(match self {
            Origin::P0Unstable { .. } => Origin::P0Unstable { theta: v },
            Origin::Q1Out { .. } => Origin::Q1Out { phi: v },
            Origin::Q5Out { .. } => Origin::Q5Out { phi: v },
            Origin::P1Backward { .. } => Origin::P1Backward { d: v },
            _ => {
                return Err(Error::BadSpec(format!(
                    "origin {} has no shooting label",
                    self.name()
                )))
            }
        })
    }

    pub fn direction(&self) -> Direction {
        match self {
            Origin::P1Backward { .. } => Direction::Backward,
            _ => Direction::Forward,
        }
    }
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label() {
            Some(v) => write!(f, "{}({v})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeedSpec {
    #[serde(flatten)]
    pub origin: Origin,
    pub epsilon: f64,
}

impl SeedSpec {
    pub fn new(origin: Origin) -> Self {
        SeedSpec {
            origin,
            epsilon: DEFAULT_EPSILON,
        }
    }

    pub fn with_epsilon(mut self, eps: f64) -> Self {
        self.epsilon = eps;
        self
    }
}

fn bad(msg: String) -> Error {
    Error::BadSpec(msg)
}

fn check_angle(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && (0.0..std::f64::consts::FRAC_PI_2).contains(&v) {
        Ok(())
    } else {
        Err(bad(format!("{name} must lie in [0, π/2) (got {v})")))
    }
}

/// Solves `w² + C² w^{2k} = ε²` for `w ∈ (0, ε]`.
fn radius_split(c: f64, k: f64, eps: f64) -> f64 {
    if c == 0.0 {
        return eps;
    }
    let g = |w: f64| w * w + c * c * w.powf(2.0 * k) - eps * eps;
    let (mut a, mut b) = (0.0, eps);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if g(mid) > 0.0 {
            b = mid;
        } else {
            a = mid;
        }
        if b - a <= 1e-17 * eps {
            break;
        }
    }
    0.5 * (a + b)
}

/// The launch chart and state of `spec`.
pub fn seed(spec: &SeedSpec, p: &ModelParams) -> Result<(ChartId, Vec3)> {
    let eps = spec.epsilon;
    if !(eps > 0.0 && eps <= 1e-3) {
        return Err(bad(format!("epsilon must lie in (0, 1e-3] (got {eps})")));
    }
    let (m, n, sigma) = (p.m(), p.n(), p.sigma());
    Ok(match spec.origin {
        Origin::P2E3 => {
            let v = e3(p);
            let nv = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            let c = p2_location(p);
            // e3's third component is 1 > 0, so the seed lies in {Z > 0}.
            (
                ChartId::Main,
                [c[0] + eps * v[0] / nv, c[1] + eps * v[1] / nv, eps * v[2] / nv],
            )
        }
        Origin::P0Unstable { theta } => {
            check_angle("theta", theta)?;
            let d = theta.tan();
            // X² + D²X⁴ = ε², in the cancellation-free form.
            let x = (2.0 * eps * eps / (1.0 + (1.0 + 4.0 * d * d * eps * eps).sqrt())).sqrt();
            let z = d * x * x;
            let mf = manifold_approx(ManifoldBase::P0, 2, p)?;
            let hb = mf
                .solve_h(x, z)
                .ok_or_else(|| bad(format!("P0 manifold has no point above X={x}, Z={z}")))?;
            (ChartId::Main, [x, h0(m) + hb, z])
        }
        Origin::Q1Out { phi } => {
            check_angle("phi", phi)?;
            let c = phi.tan();
            let w = radius_split(c, sigma + 1.0, eps);
            let z = c * w.powf(sigma + 1.0);
            let y = w * w / n - z * w / (sigma + n);
            (ChartId::ChartQ1, [y, z, w])
        }
        Origin::P1Backward { d } => {
            if !(d.is_finite() && d > 0.0) {
                return Err(bad(format!("P1_BACKWARD needs D > 0 (got {d})")));
            }
            let mf = manifold_approx(ManifoldBase::P1, 2, p)?;
            let z = d * eps * eps;
            let hh = mf
                .solve_h(eps, z)
                .ok_or_else(|| bad(format!("P1 manifold has no point above X={eps}, Z={z}")))?;
            (ChartId::Main, [eps, -h0(m) + hh, z])
        }
        Origin::Q5Out { phi } => {
            check_angle("phi", phi)?;
            if n <= 2.0 {
                return Err(bad("Q5_OUT needs N > 2 (Q5 merges with Q1 at N = 2)".into()));
            }
            let (s, c) = phi.sin_cos();
            (ChartId::ChartQ1, [(2.0 - n) / m, eps * s, eps * c.max(1e-3)])
        }
        Origin::NearP3 { x0, r0 } => {
            if !(x0.is_finite() && x0 >= 0.0 && r0.is_finite() && r0 > -1.0) {
                return Err(bad(format!("NEAR_P3 needs x0 >= 0, r0 > -1 (got {x0}, {r0})")));
            }
            (ChartId::Main, [x0, 0.0, 1.0 + r0])
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> ModelParams {
        ModelParams::new(2.0, 4.0, 0.5).unwrap()
    }

    #[test]
    fn p1_backward_tends_to_p1() {
        let p = p();
        for eps in [1e-4, 1e-6, 1e-8_f64.max(1e-7)] {
            let (c, s) = seed(&SeedSpec::new(Origin::P1Backward { d: 1.0 }).with_epsilon(eps), &p).unwrap();
            assert_eq!(c, ChartId::Main);
            let d = ((s[0]).powi(2) + (s[1] + h0(2.0)).powi(2) + s[2].powi(2)).sqrt();
            assert!(d < 2.0 * eps);
        }
    }

    #[test]
    fn p1_backward_matches_beam_formula() {
        let p = p();
        let eps = 1e-6;
        let (_, s) = seed(&SeedSpec::new(Origin::P1Backward { d: 3.0 }), &p).unwrap();
        let beam = -h0(2.0) - 2.0 * 3.0 * eps / 7.0;
        assert!((s[1] - beam).abs() < 10.0 * eps * eps);
        assert!((s[2] - 3.0 * eps * eps).abs() < 1e-25);
    }

    #[test]
    fn p0_seed_on_manifold() {
        let p = p();
        let mf = manifold_approx(ManifoldBase::P0, 2, &p).unwrap();
        let (_, s) = seed(&SeedSpec::new(Origin::P0Unstable { theta: 0.7 }).with_epsilon(1e-4), &p).unwrap();
        let res = s[2] - mf.z(s[0], s[1] - h0(2.0));
        assert!(res.abs() < 1e-14);
        assert!((s[0].hypot(s[2]) - 1e-4).abs() < 1e-16);
    }

    #[test]
    fn bad_specs() {
        let p = p();
        for o in [
            Origin::P1Backward { d: -1.0 },
            Origin::P0Unstable { theta: 2.0 },
            Origin::Q1Out { phi: -0.1 },
        ] {
            assert_eq!(seed(&SeedSpec::new(o), &p).unwrap_err().code(), "BAD_SPEC");
        }
        let e = seed(&SeedSpec::new(Origin::P2E3).with_epsilon(0.1), &p).unwrap_err();
        assert_eq!(e.code(), "BAD_SPEC");
    }

    #[test]
    fn q1_seed_radius() {
        let p = p();
        let (c, s) = seed(&SeedSpec::new(Origin::Q1Out { phi: 0.9 }), &p).unwrap();
        assert_eq!(c, ChartId::ChartQ1);
        assert!((s[1].hypot(s[2]) - 1e-6).abs() < 1e-18);
        assert!((s[1] - 0.9f64.tan() * s[2].powf(1.5)).abs() < 1e-22);
    }
}
