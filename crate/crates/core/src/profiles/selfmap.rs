//! The self-map at `N* = (4m+2)/(m+1)`, `σ = σ_c(N*) = 2(m−1)/(m+1)`:
//! with `ξ = (2mη/(m+1))^{(m+1)/(2m)}` and `F(η) = f(ξ)·(2mη/(m+1))^{1/m}`,
//! profiles at `(N*, σ_c(N*))` become solutions of the profile equation with
//! `N = 1`, `σ = 0`, namely `(F^m)'' − F/(m−1) + F^m = 0`.

use serde::Serialize;

use super::{reconstruct_profile, BehaviorKind, ProfileCurve};
use crate::error::{Error, Result};
use crate::integrate::{integrate, IntegrationControls};
use crate::model::{n_star, ModelParams};
use crate::shooting::{classify_fate, seed, Origin, SeedSpec};

/// `ξ(η)`.
pub fn xi_of_eta(eta: f64, m: f64) -> f64 {
    (2.0 * m * eta / (m + 1.0)).powf((m + 1.0) / (2.0 * m))
}

/// `η(ξ)`, the inverse of [`xi_of_eta`].
pub fn eta_of_xi(xi: f64, m: f64) -> f64 {
    (m + 1.0) / (2.0 * m) * xi.powf(2.0 * m / (m + 1.0))
}

/// `F(η)` from `f(ξ(η))`.
pub fn forward_map(eta: f64, f: f64, m: f64) -> f64 {
    f * (2.0 * m * eta / (m + 1.0)).powf(1.0 / m)
}

/// `f(ξ)` from `F(η(ξ))`.
pub fn inverse_map(xi: f64, big_f: f64, m: f64) -> f64 {
    big_f * (2.0 * m * eta_of_xi(xi, m) / (m + 1.0)).powf(-1.0 / m)
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfMapReport {
    pub m: f64,
    pub n_star: f64,
    pub sigma: f64,
    /// Exponent of `ξ = (2mη/(m+1))^{e}`: `(m+1)/(2m)`.
    pub xi_exponent: f64,
    /// Exponent of the factor in `f = F·(2mη/(m+1))^{−1/m}`.
    pub f_exponent: f64,
    pub interface: Option<f64>,
    pub eta_range: (f64, f64),
    pub points: usize,
    /// sup |(F^m)'' − F/(m−1) + F^m| on the grid.
    pub residual_sup: f64,
    /// sup |F/(m−1)|, the size of the individual terms.
    pub term_scale: f64,
    /// max relative error of `inverse_map(forward_map(f))` on the samples.
    pub round_trip_error: f64,
    pub provenance: String,
}

/// The profile used by the check: the orbit leaving P1 backward (an
/// interface profile) at `(N*, σ_c(N*))`, reconstructed from phase space.
pub fn self_map_profile(m: f64) -> Result<ProfileCurve> {
    let ns = n_star(m);
    let p = ModelParams::new(m, ns, 2.0 * (m - 1.0) / (m + 1.0))?;
    // A small seed offset so that the first sample lies below the
    // interface level for every m, and an absolute tolerance far below the
    // state near P1 so that the reconstructed ξ stays monotone there.
    let spec = SeedSpec::new(Origin::P1Backward { d: 1.0 }).with_epsilon(1e-8);
    let controls = IntegrationControls {
        abs_tol: 1e-26,
        ..IntegrationControls::default()
    };
    let report = classify_fate(&spec, &p, &controls).map_err(|e| Error::NoProfile(e.to_string()))?;
    let (chart, s0) = seed(&spec, &p)?;
    let traj = integrate(chart, &s0, &p, &controls.with_span(200.0).backward(), &[])
        .map_err(|e| Error::NoProfile(e.to_string()))?;
    let prof = reconstruct_profile(&traj, Some(&report)).map_err(|e| Error::NoProfile(e.to_string()))?;
    if prof.annotations.end != Some(BehaviorKind::Interface) || prof.len() < 20 {
        return Err(Error::NoProfile(format!(
            "orbit out of P1 at N* = {ns} does not resolve an interface profile"
        )));
    }
    Ok(prof)
}

pub fn self_map_check(m: f64) -> Result<SelfMapReport> {
    if !(m > 1.0 && m.is_finite()) {
        return Err(Error::MOutOfRange(m));
    }
    let prof = self_map_profile(m)?;
    let (xi_lo, xi_hi) = prof.xi_range();
    let (e_lo, e_hi) = (eta_of_xi(xi_lo, m), eta_of_xi(xi_hi, m));
    let points = 400;
    let h = (e_hi - e_lo) / (points as f64 + 4.0);
    let big_fm = |eta: f64| -> Option<f64> {
        let xi = xi_of_eta(eta, m).clamp(xi_lo, xi_hi);
        prof.eval(xi).map(|f| forward_map(eta, f, m).powf(m))
    };
    let mut residual_sup: f64 = 0.0;
    let mut term_scale: f64 = 0.0;
    for k in 0..points {
        let eta = e_lo + (k as f64 + 2.5) * h;
        let v: Option<Vec<f64>> = (-2..=2).map(|j| big_fm(eta + j as f64 * h)).collect();
        let Some(v) = v else { continue };
        let d2 = (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h);
        let big_f = v[2].powf(1.0 / m);
        let r = d2 - big_f / (m - 1.0) + v[2];
        residual_sup = residual_sup.max(r.abs());
        term_scale = term_scale.max(big_f / (m - 1.0));
    }
    let round_trip_error = prof
        .xi
        .iter()
        .zip(&prof.f)
        .map(|(&x, &f)| {
            let back = inverse_map(x, forward_map(eta_of_xi(x, m), f, m), m);
            (back - f).abs() / f
        })
        .fold(0.0, f64::max);
    Ok(SelfMapReport {
        m,
        n_star: prof.params.n(),
        sigma: prof.params.sigma(),
        xi_exponent: (m + 1.0) / (2.0 * m),
        f_exponent: -1.0 / m,
        interface: prof.annotations.interface,
        eta_range: (e_lo, e_hi),
        points,
        residual_sup,
        term_scale,
        round_trip_error,
        provenance: prof.provenance.clone(),
    })
}
