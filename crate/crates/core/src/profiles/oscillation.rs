//! Oscillation of profiles around the hyperbola.
//!
//! With `G = (m−1)^{1/(m−1)} ξ^{σ/(m−1)} f = Z^{1/(m−1)}` and
//! `ζ = 2 ξ^{(σ+2)/2}/(σ+2)` the hyperbola is `G ≡ 1`, and along a profile
//! the energy `Φ(G) = G^{2m}/(2m) − G^{m+1}/(m+1)` (plus the kinetic part,
//! which vanishes at extrema of G) is damped when the effective dimension
//! `N̄ = 1 − K1/((m−1)(σ+2))` exceeds one.

use serde::Serialize;

use super::ProfileCurve;
use crate::model::{k1, k2, ModelParams};
use crate::shooting::Crossing;

/// `N̄ = 1 − K1/((m−1)(σ+2))`.
pub fn effective_dimension(p: &ModelParams) -> f64 {
    1.0 - k1(p) / ((p.m() - 1.0) * (p.sigma() + 2.0))
}

/// `K(σ) = −4mσK2/((m−1)²(σ+2)²)`.
pub fn k_sigma(p: &ModelParams) -> f64 {
    let (m, s) = (p.m(), p.sigma());
    -4.0 * m * s * k2(p) / ((m - 1.0).powi(2) * (s + 2.0).powi(2))
}

pub fn potential(g: f64, m: f64) -> f64 {
    g.powf(2.0 * m) / (2.0 * m) - g.powf(m + 1.0) / (m + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub zeta: f64,
    pub g: f64,
    pub is_max: bool,
    /// `|G − 1|`.
    pub amplitude: f64,
    /// `Φ(G) − Φ(1) ≥ 0`.
    pub energy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GTransform {
    pub zeta: Vec<f64>,
    pub g: Vec<f64>,
    pub extrema: Vec<Extremum>,
    pub effective_dimension: f64,
    pub k_sigma: f64,
    /// Successive `|G − 1|` at extrema, maxima and minima interleaved.
    pub amplitudes_decreasing: bool,
    pub maxima_decreasing: bool,
    pub minima_decreasing: bool,
    pub energy_decreasing: bool,
    /// `|G − 1|` at the last sample.
    pub final_deviation: f64,
}

fn strictly_decreasing<I: Iterator<Item = f64>>(it: I) -> bool {
    let v: Vec<f64> = it.collect();
    v.windows(2).all(|w| w[1] < w[0])
}

/// Vertex of the parabola through three points.
fn vertex(x: [f64; 3], y: [f64; 3]) -> (f64, f64) {
    let d1 = (y[1] - y[0]) / (x[1] - x[0]);
    let d2 = (y[2] - y[1]) / (x[2] - x[1]);
    let a = (d2 - d1) / (x[2] - x[0]);
    if a == 0.0 {
        return (x[1], y[1]);
    }
    let b = d1 - a * (x[0] + x[1]);
    let xv = (-b / (2.0 * a)).clamp(x[0], x[2]);
    let yv = y[0] + d1 * (xv - x[0]) + a * (xv - x[0]) * (xv - x[1]);
    (xv, yv)
}

/// G and ζ on the profile's own samples, and the extrema of G refined by a
/// parabola through the neighbouring samples.
pub fn g_transform(profile: &ProfileCurve) -> GTransform {
    let p = &profile.params;
    let (m, s) = (p.m(), p.sigma());
    let cst = (m - 1.0).powf(1.0 / (m - 1.0));
    let zeta: Vec<f64> = profile.xi.iter().map(|&x| 2.0 * x.powf((s + 2.0) / 2.0) / (s + 2.0)).collect();
    let g: Vec<f64> = profile
        .xi
        .iter()
        .zip(&profile.f)
        .map(|(&x, &f)| cst * x.powf(s / (m - 1.0)) * f)
        .collect();
    let phi1 = potential(1.0, m);
    let mut extrema = Vec::new();
    for i in 1..g.len().saturating_sub(1) {
        let (a, b, c) = (g[i - 1], g[i], g[i + 1]);
        let is_max = b > a && b >= c;
        let is_min = b < a && b <= c;
        // Round-off ripples on a flat G are not extrema.
        let relief = (b - a).abs().max((b - c).abs());
        if !(is_max || is_min) || relief <= 1e-12 * b.abs() {
            continue;
        }
        let (zv, gv) = vertex([zeta[i - 1], zeta[i], zeta[i + 1]], [a, b, c]);
        extrema.push(Extremum {
            zeta: zv,
            g: gv,
            is_max,
            amplitude: (gv - 1.0).abs(),
            energy: potential(gv, m) - phi1,
        });
    }
    GTransform {
        amplitudes_decreasing: strictly_decreasing(extrema.iter().map(|e| e.amplitude)),
        maxima_decreasing: strictly_decreasing(extrema.iter().filter(|e| e.is_max).map(|e| e.amplitude)),
        minima_decreasing: strictly_decreasing(extrema.iter().filter(|e| !e.is_max).map(|e| e.amplitude)),
        energy_decreasing: strictly_decreasing(extrema.iter().map(|e| e.energy)),
        final_deviation: g.last().map(|v| (v - 1.0).abs()).unwrap_or(f64::NAN),
        zeta,
        g,
        extrema,
        effective_dimension: effective_dimension(p),
        k_sigma: k_sigma(p),
    }
}

/// Least-squares slope of `ln X` against `ln r`, `r = sqrt((σX)² + (m−1)(Z−1)²)`,
/// over section crossings with `X < x_max`: the exponent in `z ~ C r^{K3}` of
/// the normal form at P3.
pub fn p3_exponent_fit(crossings: &[Crossing], p: &ModelParams, x_max: f64) -> Option<f64> {
    let (m, s) = (p.m(), p.sigma());
    let pts: Vec<(f64, f64)> = crossings
        .iter()
        .map(|c| c.state)
        .filter(|st| st[0] > 0.0 && st[0] < x_max)
        .map(|st| {
            let r = ((s * st[0]).powi(2) + (m - 1.0) * (st[2] - 1.0).powi(2)).sqrt();
            (r.ln(), st[0].ln())
        })
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|q| q.0).sum::<f64>() / n;
    let my = pts.iter().map(|q| q.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|q| (q.0 - mx) * (q.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|q| (q.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::sigma_c;
    use crate::profiles::local::{local_expansion, BehaviorKind};

    #[test]
    fn effective_dimension_is_one_at_sigma_c() {
        for (m, n) in [(2.0, 4.0), (3.0, 5.0), (1.5, 2.5)] {
            let p = ModelParams::new(m, n, sigma_c(m, n)).unwrap();
            assert!((effective_dimension(&p) - 1.0).abs() < 1e-14);
        }
        let below = ModelParams::new(2.0, 4.0, 0.5).unwrap();
        assert!(effective_dimension(&below) > 1.0);
    }

    #[test]
    fn hyperbola_has_g_identically_one() {
        let p = ModelParams::new(2.0, 4.0, 0.5).unwrap();
        let e = local_expansion(BehaviorKind::Hyperbola, None, &p).unwrap();
        let xi: Vec<f64> = (1..200).map(|i| 0.05 * i as f64).collect();
        let f = xi.iter().map(|&x| e.eval(x)).collect();
        let prof = ProfileCurve::from_samples(p, xi, f, "hyperbola").unwrap();
        let gt = g_transform(&prof);
        assert!(gt.g.iter().all(|g| (g - 1.0).abs() < 1e-14));
        assert!(gt.extrema.is_empty());
    }

    #[test]
    fn vertex_of_parabola() {
        let (x, y) = vertex([0.0, 1.0, 3.0], [1.0, 2.5, 2.5]);
        // y = 1 + 2x − x²/2: vertex at 2, value 3.
        assert!((x - 2.0).abs() < 1e-14 && (y - 3.0).abs() < 1e-14);
    }
}
