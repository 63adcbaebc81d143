//! Periodic orbits of the invariant plane `{X = 0}`.
//!
//! On `{X = 0}` the system has the first integral
//! `K = Z^{(m+1)/(m−1)} (2/(m+1) − Z/m − Y²)`. Its level sets with
//! `0 < K < K_max = (m−1)/(m(m+1))` are closed curves around P3. `K = 0` is
//! the curve through P0 and P1, and `K < 0` curves cross `{Z = 0}`.

/// `Y²` on the level set `K` at height `Z` (may be negative off the curve).
pub fn cycle_eval(z: f64, k: f64, m: f64) -> f64 {
    2.0 / (m + 1.0) - z / m - k * z.powf(-(m + 1.0) / (m - 1.0))
}

/// First integral at `(Y, Z)`.
pub fn first_integral(y: f64, z: f64, m: f64) -> f64 {
    z.powf((m + 1.0) / (m - 1.0)) * (2.0 / (m + 1.0) - z / m - y * y)
}

/// Value of the first integral at P3, the top of the cycle family.
pub fn k_max(m: f64) -> f64 {
    (m - 1.0) / (m * (m + 1.0))
}

/// `Z`-range `[z_lo, z_hi]` of the cycle with level `K ∈ (0, K_max)`, i.e.
/// the two roots of `cycle_eval(Z, K) = 0` around `Z = 1`.
pub fn cycle_z_range(k: f64, m: f64) -> Option<(f64, f64)> {
    if !(k > 0.0 && k < k_max(m)) {
        return None;
    }
    let g = |z: f64| first_integral(0.0, z, m) - k;
    let bisect = |mut a: f64, mut b: f64| {
        // g(a) < 0 < g(b) or the reverse; keep the sign pattern.
        let ga = g(a);
        for _ in 0..200 {
            let c = 0.5 * (a + b);
            if (g(c) < 0.0) == (ga < 0.0) {
                a = c;
            } else {
                b = c;
            }
            if b - a <= 1e-16 * b.abs() {
                break;
            }
        }
        0.5 * (a + b)
    };
    let top = 2.0 * m / (m + 1.0);
    Some((bisect(0.0, 1.0), bisect(1.0, top)))
}
