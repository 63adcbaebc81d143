//! Validated parameters and the closed-form constants of the phase-space
//! analysis. Every other module reads its formulas from here.
//!
//! Notation: `m > 1` is the diffusion exponent, `N > 1` the (possibly
//! fractional) dimension, `σ ≥ 0` the weight exponent, and
//! `s = sqrt(2(mN − N + 2))` appears in the coordinates of P2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance under which `K1` counts as zero (σ = σ_c).
pub const K1_ZERO_TOL: f64 = 1e-14;

/// Validated triple `(m, N, σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    m: f64,
    #[serde(rename = "N")]
    n: f64,
    sigma: f64,
    physical: bool,
}

/// Checks ranges and builds [`ModelParams`]; `physical` is set when N is an
/// integer ≥ 2.
pub fn validate_params(m: f64, n: f64, sigma: f64) -> Result<ModelParams> {
    if !m.is_finite() || m <= 1.0 {
        return Err(Error::MOutOfRange(m));
    }
    if !n.is_finite() || n <= 1.0 {
        return Err(Error::NOutOfRange(n));
    }
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(Error::SigmaNegative(sigma));
    }
    let physical = n >= 2.0 && n.fract() == 0.0;
    Ok(ModelParams {
        m,
        n,
        sigma,
        physical,
    })
}

impl ModelParams {
    pub fn new(m: f64, n: f64, sigma: f64) -> Result<Self> {
        validate_params(m, n, sigma)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn is_physical(&self) -> bool {
        self.physical
    }

    pub fn with_sigma(&self, sigma: f64) -> Result<Self> {
        validate_params(self.m, self.n, sigma)
    }

    pub fn constants(&self) -> DerivedConstants {
        derived_constants(self)
    }

    pub fn coefficients(&self) -> CoefficientPack {
        coefficient_pack(self)
    }

    /// `true` when `|K1| < K1_ZERO_TOL`, i.e. σ sits on σ_c.
    pub fn is_critical(&self) -> bool {
        k1(self).abs() < K1_ZERO_TOL
    }

    /// N > N*: the regime of the N ≥ 4 theorems under the real-N convention.
    pub fn above_n_star(&self) -> bool {
        self.n > n_star(self.m)
    }
}

/// Parameter-only constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub sigma_c: f64,
    pub h0: f64,
    pub n_star: f64,
    pub sigma_c_at_nstar: f64,
    pub alpha: f64,
}

pub fn derived_constants(p: &ModelParams) -> DerivedConstants {
    DerivedConstants {
        sigma_c: sigma_c(p.m, p.n),
        h0: h0(p.m),
        n_star: n_star(p.m),
        sigma_c_at_nstar: 2.0 * (p.m - 1.0) / (p.m + 1.0),
        alpha: 1.0 / (p.m - 1.0),
    }
}

pub fn sigma_c(m: f64, n: f64) -> f64 {
    2.0 * (n - 1.0) * (m - 1.0) / (3.0 * m + 1.0)
}

pub fn h0(m: f64) -> f64 {
    (2.0 / (m + 1.0)).sqrt()
}

pub fn n_star(m: f64) -> f64 {
    (4.0 * m + 2.0) / (m + 1.0)
}

/// All σ-dependent coefficients in one value. Quantities whose defining
/// condition fails are `None` rather than NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientPack {
    pub k1: f64,
    pub k2: f64,
    pub k3: Option<f64>,
    pub critical: bool,
    pub lambda3_p2: f64,
    pub l_sigma: f64,
    pub e3: [f64; 3],
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub x0_sq: Option<f64>,
    pub k_mnsigma: f64,
    pub u0_sq: Option<f64>,
    pub u1_sq: Option<f64>,
    pub x1_sq: Option<f64>,
    #[serde(rename = "L_sigma")]
    pub big_l_sigma: f64,
    pub r_sigma: f64,
}

pub fn coefficient_pack(p: &ModelParams) -> CoefficientPack {
    let k1v = k1(p);
    let critical = k1v.abs() < K1_ZERO_TOL;
    let positive = |v: f64| (v.is_finite() && v > 0.0).then_some(v);
    let (u0_sq, u1_sq) = match lambda(p) {
        Some(l) => (positive(u0_sq(p, l)), positive(u1_sq(p, l))),
        None => (None, None),
    };
    let [a, b, c, d, e] = manifold_coefficients(p);
    CoefficientPack {
        k1: k1v,
        k2: k2(p),
        k3: if critical { None } else { Some(k3_raw(p)) },
        critical,
        lambda3_p2: lambda3_p2(p),
        l_sigma: l_sigma(p),
        e3: e3(p),
        a,
        b,
        c,
        d,
        e,
        f: f_coefficient(p),
        x0_sq: positive(x0_sq(p)),
        k_mnsigma: k_mnsigma(p),
        u0_sq,
        u1_sq,
        x1_sq: positive(x1_sq(p)),
        big_l_sigma: big_l(p),
        r_sigma: r_sigma(p),
    }
}

// ---------------------------------------------------------------------------
// Normal-form and spectral coefficients
// ---------------------------------------------------------------------------

pub fn k1(p: &ModelParams) -> f64 {
    (3.0 * p.m + 1.0) * p.sigma - 2.0 * (p.m - 1.0) * (p.n - 1.0)
}

pub fn k2(p: &ModelParams) -> f64 {
    p.sigma * ((p.m - 1.0) * (p.n - 2.0) - p.m * p.sigma)
}

/// `K3 = −2(σ+2)(m−1)/K1`; infinite at σ_c, use [`CoefficientPack::k3`].
pub fn k3_raw(p: &ModelParams) -> f64 {
    -2.0 * (p.sigma + 2.0) * (p.m - 1.0) / k1(p)
}

/// `K(m,N,σ) = 2m(σ+1) − (N−2)(m−1)`: Q5 is an unstable node when positive.
pub fn k_mnsigma(p: &ModelParams) -> f64 {
    2.0 * p.m * (p.sigma + 1.0) - (p.n - 2.0) * (p.m - 1.0)
}

/// `s = sqrt(2(mN − N + 2))`.
pub fn s_p2(p: &ModelParams) -> f64 {
    (2.0 * (p.m * p.n - p.n + 2.0)).sqrt()
}

pub fn p2_location(p: &ModelParams) -> [f64; 3] {
    [
        (p.m - 1.0) / s_p2(p),
        (2.0 / (p.m * p.n - p.n + 2.0)).sqrt(),
        0.0,
    ]
}

/// Eigenvalue of P2 transverse to {Z=0}: `(m−1)(σ+2)/s`.
pub fn lambda3_p2(p: &ModelParams) -> f64 {
    (p.m - 1.0) * (p.sigma + 2.0) / s_p2(p)
}

/// Sum of P2's in-plane eigenvalues.
pub fn p2_inplane_trace(p: &ModelParams) -> f64 {
    -((p.m - 1.0) * p.n + 2.0 * (p.m + 1.0)) / s_p2(p)
}

/// Product of P2's in-plane eigenvalues.
pub fn p2_inplane_det(p: &ModelParams) -> f64 {
    ((p.m + 1.0) * (p.m - 1.0) + (p.n - 1.0) * (p.m - 1.0).powi(2)) / (p.m * p.n - p.n + 2.0)
}

/// Normaliser of the P2 unstable eigenvector.
pub fn l_sigma(p: &ModelParams) -> f64 {
    let (m, n, s) = (p.m, p.n, p.sigma);
    (m - 1.0) * s * s + (m * n + 6.0 * m - n - 2.0) * s + 4.0 * (m * n + 2.0 * m - n + 1.0)
}

/// Eigenvector of P2 for `lambda3_p2`, third component 1.
pub fn e3(p: &ModelParams) -> [f64; 3] {
    let s = s_p2(p);
    let l = l_sigma(p);
    [
        -(p.m - 1.0) * s / (2.0 * l),
        -(p.sigma + 3.0) * s / l,
        1.0,
    ]
}

// ---------------------------------------------------------------------------
// Invariant-manifold coefficients at P1 (and P0 with the mirrored signs)
// ---------------------------------------------------------------------------

/// `[A, B, C, D, E]` of `Z1(X,H) = AX + BH + CX² + DH² + EXH`.
pub fn manifold_coefficients(p: &ModelParams) -> [f64; 5] {
    let (m, n, s) = (p.m, p.n, p.sigma);
    let h = h0(m);
    let a = 4.0 * m * (n - 1.0) * h / (3.0 * m + 1.0);
    let b = 2.0 * m * h;
    let c = 2.0 * (n - 1.0) * (m * n - 4.0 * m * s - 6.0 * m - n + 2.0)
        / ((3.0 * m + 1.0) * (5.0 * m - 1.0));
    let d = -m;
    let e = -4.0 * m * (n + s - 1.0) / (5.0 * m - 1.0);
    [a, b, c, d, e]
}

/// Cubic coefficient of the P1 stable manifold at σ = σ_c (independent of σ
/// as a formula; only meaningful at σ_c).
pub fn f_coefficient(p: &ModelParams) -> f64 {
    let (m, n) = (p.m, p.n);
    -4.0 * (n - 1.0) * (m * n + 2.0 * m - n + 2.0) * (m * (n - 4.0) + n - 2.0) * (2.0 * (m + 1.0)).sqrt()
        / ((5.0 * m - 1.0) * (3.0 * m + 1.0).powi(3))
}

/// Factored form of `C(σ_c)`: `−2(N−1)(mN+2m−N+2)/(3m+1)²`.
pub fn c_at_sigma_c_factored(p: &ModelParams) -> f64 {
    let (m, n) = (p.m, p.n);
    -2.0 * (n - 1.0) * (m * n + 2.0 * m - n + 2.0) / (3.0 * m + 1.0).powi(2)
}

/// Coefficients of `Z1 − Z_surface = −K1/2 · X · [c_h·h0 + H/(5m−1) + c_x X]`:
/// returns `(leading X coefficient, c_x)`.
pub fn dif_p1_coefficients(p: &ModelParams) -> (f64, f64) {
    let (m, n, s) = (p.m, p.n, p.sigma);
    let lead = -k1(p) / 2.0 * h0(m) / (3.0 * m + 1.0);
    let cx = (8.0 * m * n - 5.0 * m * s - 18.0 * m + s + 2.0)
        / (4.0 * m * (3.0 * m + 1.0) * (5.0 * m - 1.0));
    (lead, cx)
}

// ---------------------------------------------------------------------------
// Separatrix-surface constants (existence and classification arguments)
// ---------------------------------------------------------------------------

/// `X0² = −8mK1/((2N−σ−6)(2N+σ−2)(σ+2)(m+1))`, raw (may be ≤ 0 or infinite).
pub fn x0_sq(p: &ModelParams) -> f64 {
    let (m, n, s) = (p.m, p.n, p.sigma);
    -8.0 * m * k1(p) / ((2.0 * n - s - 6.0) * (2.0 * n + s - 2.0) * (s + 2.0) * (m + 1.0))
}

/// Factored `X0(m,N,0)² − X(P2)²`.
pub fn x0_sq_minus_xp2_sq_at_zero_factored(p: &ModelParams) -> f64 {
    let (m, n) = (p.m, p.n);
    (3.0 * m - 1.0) * (m - 1.0) * (m * n - n + m + 3.0)
        / (2.0 * (m * n - n + 2.0) * (m + 1.0) * (n - 3.0))
}

/// Factored `Z_surface(X(P2), Y(P2))` as a polynomial in σ.
pub fn surface_at_p2_factored(p: &ModelParams) -> f64 {
    let (m, n, s) = (p.m, p.n, p.sigma);
    (m - 1.0) / (4.0 * m * (m * n - n + 2.0))
        * ((3.0 * m - 1.0) * (m - 1.0) * (n - 1.0) / (m + 1.0)
            - (m * n + 4.0 * m - n) / 2.0 * s
            - (m - 1.0) / 4.0 * s * s)
}

/// Factored `Z_surface(X(P2), Y(P2))` at σ = σ_c.
pub fn surface_at_p2_critical_factored(p: &ModelParams) -> f64 {
    let (m, n) = (p.m, p.n);
    -(m - 1.0).powi(3) * (n - 1.0) * (m * (n - 4.0) + n - 2.0)
        / ((m * n - n + 2.0) * (m + 1.0) * (3.0 * m + 1.0).powi(2))
}

/// `R(σ)`: minus `8m(m−1)²` times the X² coefficient of the surface restricted
/// to the plane `Y = 2X/(m−1)`.
pub fn r_sigma(p: &ModelParams) -> f64 {
    let (m, n, s) = (p.m, p.n, p.sigma);
    (m - 1.0).powi(2) * s * s
        + 2.0 * (m - 1.0) * (m * n + 4.0 * m - n) * s
        + 4.0 * (m - 1.0) * (5.0 * m - 1.0) * n
        + 4.0 * (3.0 * m * m + 6.0 * m - 1.0)
}

/// `X1² = 16m²(m−1)²/((m+1)R)`: where that parabola meets {Z=0}.
pub fn x1_sq(p: &ModelParams) -> f64 {
    let m = p.m;
    16.0 * m * m * (m - 1.0).powi(2) / ((m + 1.0) * r_sigma(p))
}

/// `L(σ) = (m²−1)σ² + 2(m+1)(mN+4m−N)σ − 4(m−1)(3m−1)(N−1)`.
pub fn big_l(p: &ModelParams) -> f64 {
    let (m, n, s) = (p.m, p.n, p.sigma);
    (m * m - 1.0) * s * s + 2.0 * (m + 1.0) * (m * n + 4.0 * m - n) * s
        - 4.0 * (m - 1.0) * (3.0 * m - 1.0) * (n - 1.0)
}

/// `Z0(σ)`: height of the `Y = 2X/(m−1)` parabola at `X = X0`, direct form.
pub fn z0_sigma(p: &ModelParams) -> f64 {
    let m = p.m;
    2.0 * m / (m + 1.0) - r_sigma(p) / (8.0 * m * (m - 1.0).powi(2)) * x0_sq(p)
}

/// `Z0(σ)` through its factorisation with `L(σ)`.
pub fn z0_sigma_factored(p: &ModelParams) -> f64 {
    let (m, n, s) = (p.m, p.n, p.sigma);
    (2.0 * m * n + (m - 1.0) * s + 6.0 * m - 2.0 * n + 2.0) * big_l(p)
        / ((m - 1.0).powi(2) * (m + 1.0) * (2.0 * n - 6.0 - s) * (2.0 * n + s - 2.0) * (s + 2.0))
}

// ---------------------------------------------------------------------------
// Large-σ quantities in the rescaled variables U = σX, λ = 1/σ
// ---------------------------------------------------------------------------

/// `λ = 1/σ`, absent at σ = 0.
pub fn lambda(p: &ModelParams) -> Option<f64> {
    (p.sigma > 0.0).then(|| 1.0 / p.sigma)
}

/// `K(λ) = 2λ(m−1)(N−1) − (3m+1)`.
pub fn k_lambda(p: &ModelParams, l: f64) -> f64 {
    2.0 * l * (p.m - 1.0) * (p.n - 1.0) - (3.0 * p.m + 1.0)
}

fn lambda_denominator(p: &ModelParams, l: f64) -> f64 {
    let n = p.n;
    (2.0 * l + 1.0) * (2.0 * l * n - 2.0 * l + 1.0) * (2.0 * l * n - 6.0 * l - 1.0)
}

pub fn u0_sq(p: &ModelParams, l: f64) -> f64 {
    8.0 * p.m * k_lambda(p, l) / ((p.m + 1.0) * lambda_denominator(p, l))
}

pub fn u1_sq(p: &ModelParams, l: f64) -> f64 {
    let (m, n) = (p.m, p.n);
    16.0 * m * m / ((m + 1.0) * (2.0 * l + 1.0) * (2.0 * l * n - 2.0 * l + 1.0))
}

pub fn u1_sq_minus_u0_sq_factored(p: &ModelParams, l: f64) -> f64 {
    let (m, n) = (p.m, p.n);
    8.0 * m * (2.0 * l * (m * n - 5.0 * m + n - 1.0) + m + 1.0) / ((m + 1.0) * lambda_denominator(p, l))
}

/// Maximum over Y of the surface restricted to `U = U0`.
pub fn m_lambda(p: &ModelParams, l: f64) -> f64 {
    let (m, n) = (p.m, p.n);
    (2.0 * l * m * n + 6.0 * l * m - 2.0 * l * n + 2.0 * l + m - 1.0)
        / (2.0 * (2.0 * l + 1.0) * (m + 1.0))
}

pub fn m_lambda_minus_one_factored(p: &ModelParams, l: f64) -> f64 {
    let (m, n) = (p.m, p.n);
    (2.0 * l * (m - 1.0) * (n + 1.0) - (m + 3.0)) / (2.0 * (2.0 * l + 1.0) * (m + 1.0))
}

/// `B(λ) = 1 − (m+1)U0²/(2(m−1)²)`, direct form.
pub fn b_lambda(p: &ModelParams, l: f64) -> f64 {
    1.0 - (p.m + 1.0) / (2.0 * (p.m - 1.0).powi(2)) * u0_sq(p, l)
}

/// Cubic numerator `A(λ,m,N)` of `B`.
pub fn a_lambda(p: &ModelParams, l: f64) -> f64 {
    let (m, n) = (p.m, p.n);
    let q = (m - 1.0).powi(2);
    8.0 * (n - 1.0) * (n - 3.0) * q * l.powi(3) + 4.0 * (n * n - 4.0 * n + 1.0) * q * l * l
        - 2.0 * (m - 1.0) * (4.0 * m * n - m - 3.0) * l
        + 11.0 * m * m
        + 6.0 * m
        - 1.0
}

pub fn b_lambda_factored(p: &ModelParams, l: f64) -> f64 {
    a_lambda(p, l) / ((p.m - 1.0).powi(2) * lambda_denominator(p, l))
}

/// `lim_{λ→0} B(λ) = −(11m²+6m−1)/(m−1)²`.
pub fn b_lambda_limit(p: &ModelParams) -> f64 {
    let m = p.m;
    -(11.0 * m * m + 6.0 * m - 1.0) / (m - 1.0).powi(2)
}
