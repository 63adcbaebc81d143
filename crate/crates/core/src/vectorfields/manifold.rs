//! Taylor approximations of the two-dimensional invariant manifolds at P1
//! (stable) and P0 (unstable), as graphs `Z = Z(X, H)`.
//!
//! At P1 the shift is `H = Y + h0`. At P0 it is `H̄ = Y − h0`, and the
//! coefficients change sign as `(−A, −B, +C, +D, +E, −F)`.

use serde::Serialize;

use super::charts::Vec3;
use crate::error::{Error, Result};
use crate::model::{f_coefficient, h0, manifold_coefficients, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ManifoldBase {
    P0,
    P1,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ManifoldApprox {
    pub base: ManifoldBase,
    pub order: u8,
    /// Signed coefficients of `X, H, X², H², XH, X³` for this base point.
    pub coefficients: [f64; 6],
    /// Y-coordinate of the base point (`−h0` for P1, `+h0` for P0).
    pub y_base: f64,
}

pub fn manifold_approx(base: ManifoldBase, order: u8, p: &ModelParams) -> Result<ManifoldApprox> {
    match order {
        2 => {}
        3 if p.is_critical() => {}
        3 => {
            return Err(Error::OrderUnavailable {
                order,
                sigma: p.sigma(),
            })
        }
        _ => {
            return Err(Error::BadSpec(format!(
                "manifold order must be 2 or 3 (got {order})"
            )))
        }
    }
    let [a, b, c, d, e] = manifold_coefficients(p);
    let f = if order == 3 { f_coefficient(p) } else { 0.0 };
    let h = h0(p.m());
    let (coefficients, y_base) = match base {
        ManifoldBase::P1 => ([a, b, c, d, e, f], -h),
        ManifoldBase::P0 => ([-a, -b, c, d, e, -f], h),
    };
    Ok(ManifoldApprox {
        base,
        order,
        coefficients,
        y_base,
    })
}

impl ManifoldApprox {
    /// `Z` on the manifold above the shifted point `(X, H)`.
    pub fn z(&self, x: f64, h: f64) -> f64 {
        let [a, b, c, d, e, f] = self.coefficients;
        a * x + b * h + c * x * x + d * h * h + e * x * h + f * x * x * x
    }

    /// `(∂Z/∂X, ∂Z/∂H)`.
    pub fn gradient(&self, x: f64, h: f64) -> (f64, f64) {
        let [a, b, c, d, e, f] = self.coefficients;
        (
            a + 2.0 * c * x + e * h + 3.0 * f * x * x,
            b + 2.0 * d * h + e * x,
        )
    }

    /// Shift coordinate of a main-chart `Y`.
    pub fn shift(&self, y: f64) -> f64 {
        y - self.y_base
    }

    /// Main-chart point on the manifold above `(X, H)`.
    pub fn point(&self, x: f64, h: f64) -> Vec3 {
        [x, h + self.y_base, self.z(x, h)]
    }

    /// Solves `Z(X, H) = z` for the root `H` closest to 0 (the branch through
    /// the base point). `None` when no real root exists.
    pub fn solve_h(&self, x: f64, z: f64) -> Option<f64> {
        let [a, b, c, d, e, f] = self.coefficients;
        // d H² + (b + e x) H + (a x + c x² + f x³ − z) = 0
        let qa = d;
        let qb = b + e * x;
        let qc = a * x + c * x * x + f * x * x * x - z;
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            return None;
        }
        // Stable form of the small root.
        let sq = disc.sqrt();
        let denom = -qb - sq.copysign(qb);
        if denom == 0.0 {
            return Some(0.0);
        }
        Some(2.0 * qc / denom)
    }

    /// Invariance defect `Ż − Z_X·Ẋ − Z_H·Ẏ` at the manifold point above `(X, H)`.
    ///
    /// The field is expanded around the base point, where
    /// `1 − (m+1)Y_b²/2 = 0` cancels exactly; forming `Y = Y_b + H` first
    /// would leave a rounding floor of about 1e−16 in `Ẏ`, above the
    /// order-3 defect at `ρ = 1e−4`.
    pub fn invariance_defect(&self, x: f64, h: f64, p: &ModelParams) -> f64 {
        let (m, n, sigma) = (p.m(), p.n(), p.sigma());
        let yb = self.y_base;
        let z = self.z(x, h);
        let y = yb + h;
        let fx = x * (0.5 * (m - 1.0) * y - x);
        let fy = -0.5 * (m + 1.0) * h * (2.0 * yb + h) - z - (n - 1.0) * x * y;
        let fz = z * ((m - 1.0) * y + sigma * x);
        let (zx, zh) = self.gradient(x, h);
        fz - zx * fx - zh * fy
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vectorfields::main_field;

    #[test]
    fn passes_through_base_point() {
        let p = ModelParams::new(2.0, 4.0, 0.5).unwrap();
        for base in [ManifoldBase::P0, ManifoldBase::P1] {
            let mf = manifold_approx(base, 2, &p).unwrap();
            assert_eq!(mf.z(0.0, 0.0), 0.0);
        }
    }

    #[test]
    fn order_three_only_at_sigma_c() {
        let p = ModelParams::new(2.0, 4.0, 0.5).unwrap();
        let e = manifold_approx(ManifoldBase::P1, 3, &p).unwrap_err();
        assert_eq!(e.code(), "ORDER_UNAVAILABLE");
        let pc = ModelParams::new(2.0, 4.0, 6.0 / 7.0).unwrap();
        let mf = manifold_approx(ManifoldBase::P1, 3, &pc).unwrap();
        assert!(mf.coefficients[5] < 0.0);
        let pc2 = ModelParams::new(2.0, 2.0, 2.0 / 7.0).unwrap();
        let mf2 = manifold_approx(ManifoldBase::P1, 3, &pc2).unwrap();
        assert!(mf2.coefficients[5] > 0.0);
    }

    #[test]
    fn defect_matches_main_field_form() {
        let p = ModelParams::new(2.0, 4.0, 0.5).unwrap();
        for base in [ManifoldBase::P0, ManifoldBase::P1] {
            let mf = manifold_approx(base, 2, &p).unwrap();
            let (x, h) = (0.05, -0.03);
            let s = mf.point(x, h);
            let f = main_field(&s, &p);
            let (zx, zh) = mf.gradient(x, h);
            let direct = f[2] - zx * f[0] - zh * f[1];
            assert!((mf.invariance_defect(x, h, &p) - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn solve_h_inverts_z() {
        let p = ModelParams::new(2.0, 4.0, 0.5).unwrap();
        let mf = manifold_approx(ManifoldBase::P1, 2, &p).unwrap();
        let (x, h) = (1e-3, -4e-4);
        let z = mf.z(x, h);
        assert!((mf.solve_h(x, z).unwrap() - h).abs() < 1e-15);
    }
}
