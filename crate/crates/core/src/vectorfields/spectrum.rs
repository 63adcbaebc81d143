//! Eigenvalues of 2×2 and 3×3 real matrices, from the characteristic
//! polynomial. 2×2 blocks use the closed form; 3×3 matrices go through the
//! cubic (trigonometric or Cardano branch), and every root is Newton-polished
//! on the monic cubic in complex arithmetic.

use num_complex::Complex64;
use serde::Serialize;

use super::charts::Mat3;

/// Imaginary parts below this are treated as zero (real eigenvalue).
pub const IMAG_TOL: f64 = 1e-12;
/// Real parts within this (relative) band count as zero (center direction).
pub const CENTER_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Dims {
    pub stable: usize,
    pub unstable: usize,
    pub center: usize,
}

fn clean(z: Complex64) -> Complex64 {
    if z.im.abs() <= IMAG_TOL * z.re.abs().max(1.0) {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

fn sort(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Roots of `λ² − tλ + d`.
pub fn eig2(t: f64, d: f64) -> [Complex64; 2] {
    let disc = t * t / 4.0 - d;
    let mut out = if disc >= 0.0 {
        let r = disc.sqrt();
        // Avoid cancellation for the smaller root.
        let big = t / 2.0 + r.copysign(t);
        let small = if big != 0.0 { d / big } else { t / 2.0 - r };
        [Complex64::new(small, 0.0), Complex64::new(big, 0.0)]
    } else {
        let r = (-disc).sqrt();
        [Complex64::new(t / 2.0, -r), Complex64::new(t / 2.0, r)]
    };
    sort(&mut out);
    out
}

pub fn eigenvalues2(j: &[[f64; 2]; 2]) -> [Complex64; 2] {
    eig2(j[0][0] + j[1][1], j[0][0] * j[1][1] - j[0][1] * j[1][0])
}

/// Coefficients `(a, b, c)` of the monic characteristic polynomial
/// `λ³ + aλ² + bλ + c`.
pub fn char_poly3(j: &Mat3) -> (f64, f64, f64) {
    let tr = j[0][0] + j[1][1] + j[2][2];
    let minors = j[0][0] * j[1][1] - j[0][1] * j[1][0] + j[0][0] * j[2][2] - j[0][2] * j[2][0]
        + j[1][1] * j[2][2]
        - j[1][2] * j[2][1];
    let det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1])
        - j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0])
        + j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
    (-tr, minors, -det)
}

fn polish(a: f64, b: f64, c: f64, mut z: Complex64) -> Complex64 {
    for _ in 0..8 {
        let p = ((z + a) * z + b) * z + c;
        let dp = (z * 3.0 + 2.0 * a) * z + b;
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        z -= step;
        if step.norm() <= 1e-17 * z.norm().max(1.0) {
            break;
        }
    }
    z
}

/// Roots of `λ³ + aλ² + bλ + c`, sorted by real part.
pub fn cubic_roots(a: f64, b: f64, c: f64) -> [Complex64; 3] {
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let shift = -a / 3.0;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let mut roots: [Complex64; 3];
    if p == 0.0 && q == 0.0 {
        roots = [Complex64::new(shift, 0.0); 3];
    } else if disc <= 0.0 {
        // Three real roots: trigonometric form.
        let r = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * r)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        roots = [0, 1, 2].map(|k| {
            let t = r * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
            Complex64::new(t + shift, 0.0)
        });
    } else {
        let sq = disc.sqrt();
        let u = (-q / 2.0 + sq).cbrt();
        let v = (-q / 2.0 - sq).cbrt();
        let real = polish(a, b, c, Complex64::new(u + v + shift, 0.0)).re;
        // Deflate: λ² + (a + r)λ + (b + (a + r)r).
        let bb = a + real;
        let cc = b + bb * real;
        let quad = eig2(-bb, cc);
        roots = [Complex64::new(real, 0.0), quad[0], quad[1]];
    }
    for r in roots.iter_mut() {
        *r = clean(polish(a, b, c, *r));
    }
    // Keep complex pairs exactly conjugate after polishing.
    if roots.iter().filter(|z| z.im != 0.0).count() == 2 {
        let (i, j) = {
            let idx: Vec<usize> = (0..3).filter(|&k| roots[k].im != 0.0).collect();
            (idx[0], idx[1])
        };
        let re = 0.5 * (roots[i].re + roots[j].re);
        let im = 0.5 * (roots[i].im.abs() + roots[j].im.abs());
        roots[i] = Complex64::new(re, -im);
        roots[j] = Complex64::new(re, im);
    }
    sort(&mut roots);
    roots
}

pub fn eigenvalues3(j: &Mat3) -> [Complex64; 3] {
    let (a, b, c) = char_poly3(j);
    cubic_roots(a, b, c)
}

/// Eigenvalues of the `dim`-dimensional upper-left block.
pub fn spectrum(j: &Mat3, dim: usize) -> Vec<Complex64> {
    match dim {
        2 => eigenvalues2(&[[j[0][0], j[0][1]], [j[1][0], j[1][1]]]).to_vec(),
        _ => eigenvalues3(j).to_vec(),
    }
}

pub fn dims_of(spec: &[Complex64]) -> Dims {
    let scale = spec.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut d = Dims {
        stable: 0,
        unstable: 0,
        center: 0,
    };
    for z in spec {
        if z.re.abs() <= CENTER_TOL * scale {
            d.center += 1;
        } else if z.re < 0.0 {
            d.stable += 1;
        } else {
            d.unstable += 1;
        }
    }
    d
}

/// A unit eigenvector for a real eigenvalue `lam` of a 3×3 matrix, from the
/// largest cross product of two rows of `J − λI`.
pub fn real_eigenvector3(j: &Mat3, lam: f64) -> [f64; 3] {
    let mut a = *j;
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= lam;
    }
    let cross = |u: &[f64; 3], v: &[f64; 3]| {
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    };
    let cands = [cross(&a[0], &a[1]), cross(&a[0], &a[2]), cross(&a[1], &a[2])];
    let norm = |v: &[f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let best = cands
        .iter()
        .max_by(|u, v| norm(u).total_cmp(&norm(v)))
        .copied()
        .unwrap();
    let n = norm(&best);
    if n == 0.0 {
        // J − λI vanishes identically along two rows: any vector orthogonal
        // to the remaining row works; fall back to a coordinate axis.
        let k = (0..3)
            .min_by(|&p, &q| norm(&a[p]).total_cmp(&norm(&a[q])))
            .unwrap();
        let mut e = [0.0; 3];
        e[k] = 1.0;
        return e;
    }
    best.map(|v| v / n)
}
