//! Pointwise sign certificates for the inequalities of the classification
//! and non-existence arguments.
//!
//! Every claim is evaluated at the given parameters and reports its value,
//! the sign the argument needs, and the parameter range on which the
//! argument asserts it. Outside that range the verdict is `n/a`: the value is
//! still reported so that sweeps can locate where a sign first changes.
//!
//! Ranges for statements made "for σ small" are `0 < σ ≤ σ_c/4`; statements
//! made "for λ small" (`λ = 1/σ`) use the intersection of the explicit
//! λ-windows read off the printed factors (see [`lambda_window`]).

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::geometry::surface::{flux_coefficients, rescaled_flux, surface_eval, surface_flux};
use crate::model::{
    b_lambda, b_lambda_limit, big_l, dif_p1_coefficients, f_coefficient, h0, lambda, m_lambda,
    n_star, p2_location, r_sigma, sigma_c, u0_sq, u1_sq, validate_params, x0_sq, x1_sq, z0_sigma, ModelParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectedSign {
    Positive,
    Negative,
}

impl ExpectedSign {
    pub fn symbol(self) -> &'static str {
        match self {
            ExpectedSign::Positive => ">0",
            ExpectedSign::Negative => "<0",
        }
    }

    pub fn holds(self, v: f64) -> bool {
        match self {
            ExpectedSign::Positive => v > 0.0,
            ExpectedSign::Negative => v < 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "n/a",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Claim {
    pub id: &'static str,
    pub statement: &'static str,
    pub value: f64,
    pub expected_sign: ExpectedSign,
    pub range: String,
    pub in_range: bool,
    pub pass: Verdict,
}

impl Serialize for Claim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Claim", 6)?;
        st.serialize_field("claim", self.id)?;
        st.serialize_field("statement", self.statement)?;
        st.serialize_field("value", &self.value)?;
        st.serialize_field("expected_sign", self.expected_sign.symbol())?;
        st.serialize_field("range", &self.range)?;
        st.serialize_field("pass", self.pass.as_str())?;
        st.end()
    }
}

/// All claims at one parameter point; serializes as the bare array of claims.
#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub params: ModelParams,
    pub claims: Vec<Claim>,
}

impl Serialize for CertificateReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(&self.claims)
    }
}

impl CertificateReport {
    pub fn get(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }

    pub fn in_range(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| c.in_range)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| c.pass == Verdict::Fail)
    }

    /// True when every claim whose range contains the parameters passes.
    pub fn all_in_range_pass(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// Claim identifiers in report order.
pub const CLAIM_IDS: &[&str] = &[
    "x0_sq_positive",
    "x0_sq_minus_xp2_sq_at_zero_positive",
    "xp2_sq_below_x0_sq",
    "surface_at_p2_positive",
    "r_sigma_positive",
    "x1_sq_positive",
    "l_sigma_negative",
    "z0_sigma_negative",
    "x1_plane_parabola_max_positive",
    "dif_p1_lead_positive",
    "dif_p0_lead_negative",
    "surface_at_p2_critical_negative",
    "f_coefficient_negative",
    "flux_at_sigma_c_negative",
    "dif_p1_lead_negative_above_sigma_c",
    "dif_p0_cubic_at_sigma_c_positive",
    "surface_at_p2_negative_above_sigma_c",
    "surface_at_large_x0_negative",
    "flux_negative_up_to_2n_minus_6",
    "f_coefficient_positive_below_n_star",
    "surface_at_p2_critical_positive_below_n_star",
    "u0_sq_positive",
    "flux_u_negative_below_u0",
    "m_lambda_minus_one_negative",
    "surface_u_y0_positive_below_u1",
    "u1_sq_minus_u0_sq_negative",
    "b_lambda_negative",
    "b_lambda_limit_negative",
    "u0_sq_scaled_minus_h0_sq_positive",
];

/// The λ-window on which the large-σ argument is run: `λ` below every
/// positive root of the factors whose sign the argument fixes, namely
/// `2λN−6λ−1` (for `N > 3`), `K(λ)`, `2λ(mN−5m+N−1)+m+1` (when its slope is
/// negative) and `2λ(m−1)(N+1)−(m+3)`.
pub fn lambda_window(p: &ModelParams) -> f64 {
    let (m, n) = (p.m(), p.n());
    let mut w = u0_window(p);
    let slope = m * n - 5.0 * m + n - 1.0;
    if slope < 0.0 {
        w = w.min((m + 1.0) / (-2.0 * slope));
    }
    w.min(m_window(p))
}

/// `U0² > 0` needs `2λN−6λ−1 < 0` and `K(λ) < 0`.
fn u0_window(p: &ModelParams) -> f64 {
    let (m, n) = (p.m(), p.n());
    let mut w = (3.0 * m + 1.0) / (2.0 * (m - 1.0) * (n - 1.0));
    if n > 3.0 {
        w = w.min(1.0 / (2.0 * n - 6.0));
    }
    w
}

/// The printed window of `M(λ) − 1 < 0`.
fn m_window(p: &ModelParams) -> f64 {
    let (m, n) = (p.m(), p.n());
    (m + 3.0) / (2.0 * (m - 1.0) * (n + 1.0))
}

/// Upper end of "σ small".
pub fn small_sigma_limit(p: &ModelParams) -> f64 {
    sigma_c(p.m(), p.n()) / 4.0
}

fn at_sigma(p: &ModelParams, s: f64) -> ModelParams {
    validate_params(p.m(), p.n(), s).expect("same m, N with a nonnegative σ")
}

fn log_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(move |i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
}

struct Builder {
    claims: Vec<Claim>,
}

impl Builder {
    fn push(&mut self, id: &'static str, statement: &'static str, value: f64, sign: ExpectedSign, range: String, in_range: bool) {
        let pass = if !in_range {
            Verdict::NotApplicable
        } else if value.is_finite() && sign.holds(value) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        self.claims.push(Claim {
            id,
            statement,
            value,
            expected_sign: sign,
            range,
            in_range,
            pass,
        });
    }
}

pub fn proof_certificates(p: &ModelParams) -> CertificateReport {
    use ExpectedSign::{Negative, Positive};
    let (m, n, s) = (p.m(), p.n(), p.sigma());
    let sc = sigma_c(m, n);
    let ns = n_star(m);
    let small = small_sigma_limit(p);
    let p_c = at_sigma(p, sc);
    let p_0 = at_sigma(p, 0.0);
    let n4 = n >= 4.0;
    let small_in = n4 && s > 0.0 && s <= small;
    let small_txt = format!("N >= 4, 0 < sigma <= sigma_c/4 = {small}");
    let z_p2 = |q: &ModelParams| {
        let [x, y, _] = p2_location(q);
        surface_eval(x, y, q)
    };
    let mut b = Builder { claims: Vec::new() };

    // Classification for σ near zero.
    b.push(
        "x0_sq_positive",
        "X0^2 = -8mK1/((2N-sigma-6)(2N+sigma-2)(sigma+2)(m+1)) > 0",
        x0_sq(p),
        Positive,
        format!("N >= 4, 0 < sigma < sigma_c = {sc}"),
        n4 && s > 0.0 && s < sc,
    );
    b.push(
        "x0_sq_minus_xp2_sq_at_zero_positive",
        "X0(m,N,0)^2 - X(P2)^2 > 0 at sigma = 0",
        x0_sq(&p_0) - p2_location(&p_0)[0].powi(2),
        Positive,
        "N >= 4 (evaluated at sigma = 0)".into(),
        n4,
    );
    b.push(
        "xp2_sq_below_x0_sq",
        "X0^2 - X(P2)^2 > 0",
        x0_sq(p) - p2_location(p)[0].powi(2),
        Positive,
        small_txt.clone(),
        small_in,
    );
    b.push(
        "surface_at_p2_positive",
        "Z(X(P2), Y(P2)) > 0",
        z_p2(p),
        Positive,
        small_txt.clone(),
        small_in,
    );
    b.push(
        "r_sigma_positive",
        "R(sigma) > 0",
        r_sigma(p),
        Positive,
        small_txt.clone(),
        small_in,
    );
    b.push(
        "x1_sq_positive",
        "X1^2 = 16m^2(m-1)^2/((m+1)R(sigma)) > 0",
        x1_sq(p),
        Positive,
        small_txt.clone(),
        small_in,
    );
    b.push(
        "l_sigma_negative",
        "L(sigma) < 0",
        big_l(p),
        Negative,
        small_txt.clone(),
        small_in,
    );
    b.push(
        "z0_sigma_negative",
        "Z0(sigma) < 0 (parabola over Y = 2X/(m-1) at X0)",
        z0_sigma(p),
        Negative,
        small_txt.clone(),
        small_in,
    );
    // Maximum over Y of the surface on the plane X = X1, by completing the
    // square: 2m/(m+1) − (2N+σ−2)(σ+6−2N)X1²/(16m).
    let x1s = x1_sq(p);
    b.push(
        "x1_plane_parabola_max_positive",
        "max_Y Z(X1, Y) > 0",
        2.0 * m / (m + 1.0) - (2.0 * n + s - 2.0) * (s + 6.0 - 2.0 * n) * x1s / (16.0 * m),
        Positive,
        small_txt,
        small_in,
    );
    let (lead, _) = dif_p1_coefficients(p);
    b.push(
        "dif_p1_lead_positive",
        "Z1 - Z ~ -K1/2 * h0/(3m+1) * X > 0 near X = 0",
        lead,
        Positive,
        format!("0 < sigma < sigma_c = {sc}"),
        s > 0.0 && s < sc,
    );
    b.push(
        "dif_p0_lead_negative",
        "Z0 - Z ~ +K1/2 * h0/(3m+1) * X < 0 near X = 0",
        -lead,
        Negative,
        format!("0 < sigma < sigma_c = {sc}"),
        s > 0.0 && s < sc,
    );

    // σ = σ_c and beyond.
    let fc = f_coefficient(p);
    b.push(
        "surface_at_p2_critical_negative",
        "Z(X(P2), Y(P2)) < 0 at sigma = sigma_c",
        z_p2(&p_c),
        Negative,
        "N >= 4 (evaluated at sigma = sigma_c)".into(),
        n4,
    );
    b.push(
        "f_coefficient_negative",
        "F < 0 in Z1 - Z = F X^3 + ... at sigma = sigma_c",
        fc,
        Negative,
        format!("N > n_star = {ns} (evaluated at sigma = sigma_c)"),
        n > ns,
    );
    let flux_c = log_grid(1e-2, 1e2, 41).map(|x| surface_flux(x, &p_c) / x.powi(3)).fold(f64::NEG_INFINITY, f64::max);
    b.push(
        "flux_at_sigma_c_negative",
        "F(X) < 0 for X > 0 at sigma = sigma_c (max of F(X)/X^3 on a grid)",
        flux_c,
        Negative,
        "N >= 4 (evaluated at sigma = sigma_c)".into(),
        n4,
    );
    b.push(
        "dif_p1_lead_negative_above_sigma_c",
        "Z1 - Z < 0 near P1",
        lead,
        Negative,
        format!("N >= 4, sigma > sigma_c = {sc}"),
        n4 && s > sc,
    );
    b.push(
        "dif_p0_cubic_at_sigma_c_positive",
        "Z0 - Z = -F X^3 + ... > 0 at sigma = sigma_c",
        -fc,
        Positive,
        "N >= 4 (evaluated at sigma = sigma_c)".into(),
        n4,
    );
    b.push(
        "surface_at_p2_negative_above_sigma_c",
        "Z(X(P2), Y(P2)) < 0",
        z_p2(p),
        Negative,
        format!("N >= 4, sigma >= sigma_c = {sc}"),
        n4 && s >= sc,
    );
    b.push(
        "surface_at_large_x0_negative",
        "Z(x0, 0) ~ -(sigma+2)(2N+sigma-2)/(8m) x0^2 < 0 as x0 -> infinity",
        -(s + 2.0) * (2.0 * n + s - 2.0) / (8.0 * m),
        Negative,
        "all parameters".into(),
        true,
    );
    let (lin, cub) = flux_coefficients(p);
    let flux_sup = log_grid(1e-2, 1e2, 41).map(|x| lin + cub * x * x).fold(f64::NEG_INFINITY, f64::max);
    b.push(
        "flux_negative_up_to_2n_minus_6",
        "F(X) < 0 for X > 0 (max of F(X)/X on a grid)",
        flux_sup,
        Negative,
        format!("N >= 4, sigma_c = {sc} < sigma <= 2(N-3)"),
        n4 && s > sc && s <= 2.0 * (n - 3.0),
    );

    // Dimensions below n_star.
    b.push(
        "f_coefficient_positive_below_n_star",
        "F > 0 at sigma = sigma_c",
        fc,
        Positive,
        format!("N < n_star = {ns} (evaluated at sigma = sigma_c)"),
        n < ns,
    );
    b.push(
        "surface_at_p2_critical_positive_below_n_star",
        "Z(X(P2), Y(P2)) > 0 at sigma = sigma_c",
        z_p2(&p_c),
        Positive,
        format!("N < n_star = {ns} (evaluated at sigma = sigma_c)"),
        n < ns,
    );

    // Large σ, λ = 1/σ.
    let lam = lambda(p);
    let l = lam.unwrap_or(f64::INFINITY);
    let uw = u0_window(p);
    let lw = lambda_window(p);
    let mw = m_window(p);
    let u_in = lam.is_some() && l < uw;
    let l_in = lam.is_some() && l < lw;
    let u_txt = format!("0 < lambda = 1/sigma < {uw}");
    let l_txt = format!("0 < lambda = 1/sigma < {lw}");
    let u0s = u0_sq(p, l);
    b.push(
        "u0_sq_positive",
        "U0^2 = 8mK(lambda)/((m+1)(2l+1)(2lN-2l+1)(2lN-6l-1)) > 0",
        u0s,
        Positive,
        u_txt.clone(),
        u_in,
    );
    let flux_u = if u0s > 0.0 && lam.is_some() {
        let u0 = u0s.sqrt();
        (1..100)
            .filter_map(|i| {
                let u = u0 * i as f64 / 100.0;
                rescaled_flux(u, p).map(|f| f / u)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    } else {
        f64::NAN
    };
    b.push(
        "flux_u_negative_below_u0",
        "F(U) < 0 for 0 < U < U0 (max of F(U)/U on a grid)",
        flux_u,
        Negative,
        u_txt,
        u_in,
    );
    b.push(
        "m_lambda_minus_one_negative",
        "M(lambda) - 1 < 0",
        m_lambda(p, l) - 1.0,
        Negative,
        format!("0 < lambda < (m+3)/(2(m-1)(N+1)) = {mw}"),
        lam.is_some() && l < mw,
    );
    let u1s = u1_sq(p, l);
    let z_half_u1 = if lam.is_some() { surface_eval(l * 0.5 * u1s.sqrt(), 0.0, p) } else { f64::NAN };
    b.push(
        "surface_u_y0_positive_below_u1",
        "Z(U, 0) > 0 for U < U1 (at U = U1/2)",
        z_half_u1,
        Positive,
        "lambda > 0".into(),
        lam.is_some(),
    );
    b.push(
        "u1_sq_minus_u0_sq_negative",
        "U1^2 - U0^2 < 0",
        u1s - u0s,
        Negative,
        l_txt.clone(),
        l_in,
    );
    b.push(
        "b_lambda_negative",
        "B(lambda) = 1 - (m+1)U0^2/(2(m-1)^2) < 0",
        b_lambda(p, l),
        Negative,
        l_txt.clone(),
        l_in,
    );
    b.push(
        "b_lambda_limit_negative",
        "lim_{lambda->0} B = -(11m^2+6m-1)/(m-1)^2 < 0",
        b_lambda_limit(p),
        Negative,
        "all parameters".into(),
        true,
    );
    b.push(
        "u0_sq_scaled_minus_h0_sq_positive",
        "U0^2/(m-1)^2 - h0^2 > 0",
        u0s / (m - 1.0).powi(2) - h0(m).powi(2),
        Positive,
        l_txt,
        l_in,
    );
    CertificateReport {
        params: *p,
        claims: b.claims,
    }
}
