//! Fold–Hopf normal form at P3 = (0, 0, 1).
//!
//! Near P3 use `v = (m−1)Y + σX`, `u = sqrt(m−1)(Z − 1)`, `z = X` and the
//! complex coordinate `w = v + iu`. The linear part is `ż = 0`,
//! `ẇ = i·sqrt(m−1)·w`; the quadratic parts are described by the Taylor tables
//! `g_jkl` (for ż) and `h_jkl` (for ẇ), indexed by powers of `(z, w, w̄)` with
//! `g(z,w,w̄) = Σ g_jkl z^j w^k w̄^l / (j! k! l!)`.
//!
//! The truncated normal form in cylindrical coordinates reads
//! `ż = B z²`, `ṙ = a z r`, `θ̇ = sqrt(m−1)` with `B = g200/2` and
//! `a = Re h110`. These are computed twice: from closed forms and from tables
//! extracted numerically out of the main field, and the two must agree.

use num_complex::Complex64;
use serde::Serialize;

use super::charts::main_field;
use super::critical::P3Role;
use crate::model::{k1, k2, k3_raw, ModelParams, K1_ZERO_TOL};

/// Second-order Taylor tables. Index order: `[200, 020, 002, 110, 101, 011]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GhTables {
    #[serde(serialize_with = "ser_c6")]
    pub g: [Complex64; 6],
    #[serde(serialize_with = "ser_c6")]
    pub h: [Complex64; 6],
}

fn ser_c6<S: serde::Serializer>(
    v: &[Complex64; 6],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
    pairs.serialize(s)
}

pub const I200: usize = 0;
pub const I020: usize = 1;
pub const I002: usize = 2;
pub const I110: usize = 3;
pub const I101: usize = 4;
pub const I011: usize = 5;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormalFormP3 {
    /// Coefficient of z² in ż: −(σ+2)/2.
    pub z_coef: f64,
    /// Coefficient of z·r in ṙ: K1/(4(m−1)).
    pub radial_coef: f64,
    /// Angular speed sqrt(m−1).
    pub rotation: f64,
    /// Exponent in z ~ C r^{K3}; absent at σ = σ_c.
    pub k3: Option<f64>,
    pub critical_case: bool,
    pub role: P3Role,
    pub tables: GhTables,
    /// max |closed form − table route| over z_coef and radial_coef.
    pub table_discrepancy: f64,
}

/// Closed-form tables.
pub fn gh_tables_closed_form(p: &ModelParams) -> GhTables {
    let (m, sigma) = (p.m(), p.sigma());
    let r = (m + 1.0) / (4.0 * (m - 1.0));
    let c = |x: f64| Complex64::new(x, 0.0);
    let mut g = [c(0.0); 6];
    g[I200] = c(-(sigma + 2.0));
    g[I110] = c(0.25);
    g[I101] = c(0.25);
    let mut h = [c(0.0); 6];
    h[I200] = c(2.0 * k2(p) / (m - 1.0));
    h[I020] = c(0.5 - r);
    h[I002] = c(-(0.5 + r));
    h[I110] = c(k1(p) / (4.0 * (m - 1.0)));
    h[I101] = h[I110];
    h[I011] = c(-r);
    GhTables { g, h }
}

/// The main field written in `(v, u, z)`, P3 at the origin.
fn field_vuz(p: &ModelParams, q: [f64; 3]) -> [f64; 3] {
    let (m, sigma) = (p.m(), p.sigma());
    let sq = (m - 1.0).sqrt();
    let [v, u, z] = q;
    let x = z;
    let y = (v - sigma * z) / (m - 1.0);
    let zz = 1.0 + u / sq;
    let f = main_field(&[x, y, zz], p);
    [(m - 1.0) * f[1] + sigma * f[0], sq * f[2], f[0]]
}

/// Tables extracted from the main field. Since the field is exactly quadratic
/// in `(v, u, z)`, polarisation recovers the Hessian without truncation error;
/// Wirtinger derivatives then give the complex coefficients.
pub fn gh_tables_from_field(p: &ModelParams) -> GhTables {
    let f = |q: [f64; 3]| field_vuz(p, q);
    let f0 = f([0.0; 3]);
    let unit = |i: usize| {
        let mut e = [0.0; 3];
        e[i] = 1.0;
        e
    };
    // hess[c][i][j] = ∂²f_c/∂q_i∂q_j with q = (v, u, z).
    let mut hess = [[[0.0f64; 3]; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let (fi, fj) = (f(unit(i)), f(unit(j)));
            let mut e = unit(i);
            e[j] += 1.0;
            let fij = f(e);
            for c in 0..3 {
                let val = if i == j {
                    // q(2e) − 2q(e) + q(0)
                    fij[c] - 2.0 * fi[c] + f0[c]
                } else {
                    fij[c] - fi[c] - fj[c] + f0[c]
                };
                hess[c][i][j] = val;
                hess[c][j][i] = val;
            }
        }
    }
    let (iv, iu, iz) = (0, 1, 2);
    let i = Complex64::i();
    // Coefficients of a complex-valued quadratic form given Hessians of its
    // real and imaginary parts.
    let table = |re: &[[f64; 3]; 3], im: &[[f64; 3]; 3]| {
        let hc = |a: usize, b: usize| Complex64::new(re[a][b], im[a][b]);
        let mut t = [Complex64::new(0.0, 0.0); 6];
        t[I200] = hc(iz, iz);
        t[I020] = 0.25 * (hc(iv, iv) - 2.0 * i * hc(iv, iu) - hc(iu, iu));
        t[I002] = 0.25 * (hc(iv, iv) + 2.0 * i * hc(iv, iu) - hc(iu, iu));
        t[I011] = 0.25 * (hc(iv, iv) + hc(iu, iu));
        t[I110] = 0.5 * (hc(iz, iv) - i * hc(iz, iu));
        t[I101] = 0.5 * (hc(iz, iv) + i * hc(iz, iu));
        t
    };
    let zero = [[0.0; 3]; 3];
    let g = table(&hess[2], &zero);
    let h = table(&hess[0], &hess[1]);
    GhTables { g, h }
}

pub fn normal_form_p3(p: &ModelParams) -> NormalFormP3 {
    let (m, sigma) = (p.m(), p.sigma());
    let kk1 = k1(p);
    let critical = kk1.abs() < K1_ZERO_TOL;
    let z_coef = -(sigma + 2.0) / 2.0;
    let radial_coef = if critical { 0.0 } else { kk1 / (4.0 * (m - 1.0)) };
    let tables = gh_tables_from_field(p);
    let z_tab = tables.g[I200].re / 2.0;
    let r_tab = tables.h[I110].re;
    let table_discrepancy = (z_tab - z_coef)
        .abs()
        .max(if critical { 0.0 } else { (r_tab - radial_coef).abs() });
    debug_assert!(
        table_discrepancy < 1e-10 * (1.0 + sigma * sigma),
        "normal-form tables disagree with closed forms: {table_discrepancy}"
    );
    let role = if critical {
        P3Role::CriticalCase
    } else if kk1 < 0.0 {
        P3Role::AttractorForPositiveX
    } else {
        P3Role::RepellerForPositiveX
    };
    NormalFormP3 {
        z_coef,
        radial_coef,
        rotation: (m - 1.0).sqrt(),
        k3: if critical { None } else { Some(k3_raw(p)) },
        critical_case: critical,
        role,
        tables,
        table_discrepancy,
    }
}
