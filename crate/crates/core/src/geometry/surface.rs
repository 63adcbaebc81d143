//! The separatrix quadric `Z(X, Y)`, its normal, and the sign of the flow
//! across it.
//!
//! The surface is written three ways: in `(X, Y)`, in shifted `(X, H)` with
//! `H = Y + h0`, and as a completed square. The tests check that the three
//! forms agree. The flux `F(X)` is the closed form of `n̄ · field` on the
//! surface. It depends on `X` only, and [`flux_by_dot_product`] recomputes it
//! pointwise.

use serde::Serialize;

use crate::model::{h0, k1, ModelParams};
use crate::vectorfields::{charts::field3, main_field, ChartId};

/// `Z(X, Y)` in main variables.
pub fn surface_eval(x: f64, y: f64, p: &ModelParams) -> f64 {
    let (m, n, s) = (p.m(), p.n(), p.sigma());
    let q = 2.0 * n + s - 2.0;
    -(s + 2.0) * q * x * x / (8.0 * m) - q * x * y / 2.0 - m * y * y + 2.0 * m / (m + 1.0)
}

/// The same surface written in `(X, H)`, `H = Y + h0`.
pub fn surface_eval_shifted(x: f64, h: f64, p: &ModelParams) -> f64 {
    let (m, n, s) = (p.m(), p.n(), p.sigma());
    let hh = h0(m);
    let q = 2.0 * n + s - 2.0;
    -m * h * h - (s + 2.0) * q * x * x / (8.0 * m) - (n - 1.0 + s / 2.0) * x * h
        + q * hh * x / 2.0
        + 2.0 * m * hh * h
}

/// Completed-square form: `2m/(m+1) − m[Y + qX/(4m)]² − q(σ+6−2N)X²/(16m)`,
/// with `q = 2N+σ−2`.
pub fn surface_eval_paraboloid(x: f64, y: f64, p: &ModelParams) -> f64 {
    let (m, n, s) = (p.m(), p.n(), p.sigma());
    let q = 2.0 * n + s - 2.0;
    let t = y + q * x / (4.0 * m);
    2.0 * m / (m + 1.0) - m * t * t - q * (s + 6.0 - 2.0 * n) * x * x / (16.0 * m)
}

/// True when the quadric is an elliptic paraboloid: `(2N+σ−2)(σ+6−2N) > 0`.
pub fn is_elliptic(p: &ModelParams) -> bool {
    let (n, s) = (p.n(), p.sigma());
    (2.0 * n + s - 2.0) * (s + 6.0 - 2.0 * n) > 0.0
}

/// Normal `(∂Z/∂X, ∂Z/∂H, −1)` at shifted `(X, H)`.
pub fn surface_normal(x: f64, h: f64, p: &ModelParams) -> [f64; 3] {
    let (m, n, s) = (p.m(), p.n(), p.sigma());
    let hh = h0(m);
    let q = 2.0 * n + s - 2.0;
    [
        -(s + 2.0) * q * x / (4.0 * m) - q * h / 2.0 + q * hh / 2.0,
        -2.0 * m * h - q * x / 2.0 + 2.0 * m * hh,
        -1.0,
    ]
}

/// Closed-form flux `F(X) = −K1 X/(2(m+1)) − (2N−σ−6)(2N+σ−2)(σ+2)X³/(16m)`.
pub fn surface_flux(x: f64, p: &ModelParams) -> f64 {
    let (m, n, s) = (p.m(), p.n(), p.sigma());
    -k1(p) * x / (2.0 * (m + 1.0))
        - (2.0 * n - s - 6.0) * (2.0 * n + s - 2.0) * (s + 2.0) * x.powi(3) / (16.0 * m)
}

/// Coefficients `(linear, cubic)` of `F(X)`.
pub fn flux_coefficients(p: &ModelParams) -> (f64, f64) {
    let (m, n, s) = (p.m(), p.n(), p.sigma());
    (
        -k1(p) / (2.0 * (m + 1.0)),
        -(2.0 * n - s - 6.0) * (2.0 * n + s - 2.0) * (s + 2.0) / (16.0 * m),
    )
}

/// `n̄ · field` at the surface point above shifted `(X, H)`, computed from
/// the shifted field without any algebraic simplification.
pub fn flux_by_dot_product(x: f64, h: f64, p: &ModelParams) -> f64 {
    let z = surface_eval_shifted(x, h, p);
    let f = field3(ChartId::Shifted, &[x, h, z], p).expect("shifted chart always defined");
    let nn = surface_normal(x, h, p);
    nn[0] * f[0] + nn[1] * f[1] + nn[2] * f[2]
}

/// Flux in the rescaled variable `U = σX`:
/// `F(U) = K(λ)U/(2(m+1)) − (2λ+1)(2λN−2λ+1)(2λN−6λ−1)U³/(16m)`.
pub fn rescaled_flux(u: f64, p: &ModelParams) -> Option<f64> {
    let lam = crate::model::lambda(p)?;
    let (m, n) = (p.m(), p.n());
    let kl = crate::model::k_lambda(p, lam);
    Some(
        kl * u / (2.0 * (m + 1.0))
            - (2.0 * lam + 1.0) * (2.0 * lam * n - 2.0 * lam + 1.0) * (2.0 * lam * n - 6.0 * lam - 1.0)
                * u.powi(3)
                / (16.0 * m),
    )
}

/// Rescaled flux recomputed as `n̄ · field` in the RESCALED chart, where
/// the surface reads `Z(U/σ, Y)`.
pub fn rescaled_flux_by_dot_product(u: f64, y: f64, p: &ModelParams) -> Option<f64> {
    let lam = crate::model::lambda(p)?;
    let (m, n, s) = (p.m(), p.n(), p.sigma());
    let q = 2.0 * n + s - 2.0;
    let x = lam * u;
    let z = surface_eval(x, y, p);
    let f = field3(ChartId::Rescaled, &[u, y, z], p).ok()?;
    let zu = lam * (-(s + 2.0) * q * x / (4.0 * m) - q * y / 2.0);
    let zy = -q * x / 2.0 - 2.0 * m * y;
    Some(zu * f[0] + zy * f[1] - f[2])
}

/// `d/dη [Z − Z_surface(X, Y)]` along the main flow at a point.
pub fn surface_gap_rate(s: &[f64; 3], p: &ModelParams) -> f64 {
    let (m, n, sg) = (p.m(), p.n(), p.sigma());
    let q = 2.0 * n + sg - 2.0;
    let f = main_field(s, p);
    let zx = -(sg + 2.0) * q * s[0] / (4.0 * m) - q * s[1] / 2.0;
    let zy = -q * s[0] / 2.0 - 2.0 * m * s[1];
    f[2] - zx * f[0] - zy * f[1]
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SeparatrixSurface {
    pub params: ModelParams,
    pub elliptic: bool,
}

impl SeparatrixSurface {
    pub fn new(p: &ModelParams) -> Self {
        SeparatrixSurface {
            params: *p,
            elliptic: is_elliptic(p),
        }
    }

    pub fn z(&self, x: f64, y: f64) -> f64 {
        surface_eval(x, y, &self.params)
    }

    pub fn normal(&self, x: f64, h: f64) -> [f64; 3] {
        surface_normal(x, h, &self.params)
    }

    pub fn flux(&self, x: f64) -> f64 {
        surface_flux(x, &self.params)
    }

    pub fn rescaled_flux(&self, u: f64) -> Option<f64> {
        rescaled_flux(u, &self.params)
    }
}
