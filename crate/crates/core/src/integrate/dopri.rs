//! Dormand–Prince RK5(4) stepper with PI step-size control and the pair's
//! continuous extension (Hairer–Nørsett–Wanner). The fields are autonomous,
//! so the stage nodes `c_i` never enter.
//!
//! The stepper always advances its internal time `t` forward; backward
//! integration is done by the caller negating the field.

use crate::vectorfields::Vec3;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
// Error coefficients: 5th-order weights minus the embedded 4th-order ones.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// Continuous extension: y(t0 + θh) = y0 + h Σ_j θ^{j+1} Σ_i P[i][j] k_i with
// the pair's quintic-in-θ weights b_i(θ), b_i(1) = b_i (row i = stage i+1;
// stage 2 has zero weight).
const P: [[f64; 5]; 7] = [
    [
        1.0,
        -4034104133.0 / 1410260304.0,
        105330401.0 / 33982176.0,
        -13107642775.0 / 11282082432.0,
        6542295.0 / 470086768.0,
    ],
    [
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        0.0,
        132343189600.0 / 32700410799.0,
        -833316000.0 / 131326951.0,
        91412856700.0 / 32700410799.0,
        -523383600.0 / 10900136933.0,
    ],
    [
        0.0,
        -115792950.0 / 29380423.0,
        185270875.0 / 16991088.0,
        -12653452475.0 / 1880347072.0,
        98134425.0 / 235043384.0,
    ],
    [
        0.0,
        70805911779.0 / 24914598704.0,
        -4531260609.0 / 600351776.0,
        988140236175.0 / 199316789632.0,
        -14307999165.0 / 24914598704.0,
    ],
    [
        0.0,
        -331320693.0 / 205662961.0,
        31361737.0 / 7433601.0,
        -2426908385.0 / 822651844.0,
        97305120.0 / 205662961.0,
    ],
    [
        0.0,
        44764047.0 / 29380423.0,
        -1532549.0 / 353981.0,
        90730570.0 / 29380423.0,
        -8293050.0 / 29380423.0,
    ],
];

// PI controller (Hairer's defaults).
const SAFE: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;

#[inline]
fn axpy(y: &Vec3, h: f64, terms: &[(f64, &Vec3)]) -> Vec3 {
    let mut out = *y;
    for i in 0..3 {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

/// One accepted step with its continuous extension.
#[derive(Debug, Clone, Copy)]
pub struct Segment {
    pub t0: f64,
    pub h: f64,
    pub y0: Vec3,
    pub y1: Vec3,
    q: [Vec3; 5],
}

impl Segment {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    /// Dense output at internal time `t ∈ [t0, t0 + h]`.
    pub fn eval(&self, t: f64) -> Vec3 {
        let th = (t - self.t0) / self.h;
        let [q1, q2, q3, q4, q5] = &self.q;
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = self.y0[i]
                + th * (q1[i] + th * (q2[i] + th * (q3[i] + th * (q4[i] + th * q5[i]))));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepFailure {
    /// The step size fell below the representable resolution of `t`.
    Underflow { t: f64, y: Vec3 },
}

pub struct Stepper<F> {
    f: F,
    dim: usize,
    rtol: f64,
    atol: f64,
    t: f64,
    y: Vec3,
    k1: Vec3,
    h: f64,
    facold: f64,
    rejected: bool,
    pub evaluations: u64,
}

impl<F: Fn(&Vec3) -> Vec3> Stepper<F> {
    pub fn new(f: F, dim: usize, y0: Vec3, rtol: f64, atol: f64) -> Self {
        let k1 = f(&y0);
        let mut s = Stepper {
            f,
            dim,
            rtol,
            atol,
            t: 0.0,
            y: y0,
            k1,
            h: 0.0,
            facold: 1e-4,
            rejected: false,
            evaluations: 1,
        };
        s.h = s.initial_step();
        s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> Vec3 {
        self.y
    }

    /// Field value at the current state (first stage of the next step).
    pub fn slope(&self) -> Vec3 {
        self.k1
    }

    fn sk(&self, a: &Vec3, b: &Vec3, i: usize) -> f64 {
        self.atol + self.rtol * a[i].abs().max(b[i].abs())
    }

    fn initial_step(&mut self) -> f64 {
        let n = self.dim as f64;
        let (mut dnf, mut dny) = (0.0, 0.0);
        for i in 0..self.dim {
            let sk = self.atol + self.rtol * self.y[i].abs();
            dnf += (self.k1[i] / sk).powi(2);
            dny += (self.y[i] / sk).powi(2);
        }
        dnf /= n;
        dny /= n;
        let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
            1e-6
        } else {
            0.01 * (dny / dnf).sqrt()
        };
        let y1 = axpy(&self.y, h, &[(1.0, &self.k1)]);
        let f1 = (self.f)(&y1);
        self.evaluations += 1;
        let mut der2 = 0.0;
        for i in 0..self.dim {
            let sk = self.atol + self.rtol * self.y[i].abs();
            der2 += ((f1[i] - self.k1[i]) / sk).powi(2);
        }
        let der2 = (der2 / n).sqrt() / h;
        let der12 = der2.abs().max(dnf.sqrt());
        let h1 = if der12 <= 1e-15 {
            (h * 1e-3).max(1e-6)
        } else {
            (0.01 / der12).powf(0.2)
        };
        h = (100.0 * h).min(h1);
        if !h.is_finite() || h <= 0.0 {
            1e-6
        } else {
            h
        }
    }

    /// Advances by one accepted step of length at most `h_max`.
    pub fn step(&mut self, h_max: f64) -> Result<Segment, StepFailure> {
        let expo = 0.2 - BETA * 0.75;
        loop {
            let h = self.h.min(h_max);
            if h <= 1e-14 * self.t.abs().max(1.0) && h < h_max {
                return Err(StepFailure::Underflow {
                    t: self.t,
                    y: self.y,
                });
            }
            let y = &self.y;
            let k1 = self.k1;
            let f = &self.f;
            let k2 = f(&axpy(y, h, &[(A21, &k1)]));
            let k3 = f(&axpy(y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(&axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(&axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
            let ys = axpy(
                y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            );
            let k6 = f(&ys);
            let y1 = axpy(
                y,
                h,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let k7 = f(&y1);
            self.evaluations += 6;

            let mut err = 0.0;
            let mut finite = true;
            for i in 0..self.dim {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                        + E7 * k7[i]);
                finite &= y1[i].is_finite() && k7[i].is_finite();
                err += (e / self.sk(y, &y1, i)).powi(2);
            }
            let err = (err / self.dim as f64).sqrt();
            if !finite || !err.is_finite() {
                self.h = h * 0.1;
                self.rejected = true;
                continue;
            }
            let fac11 = err.powf(expo);
            if err <= 1.0 {
                let fac = (fac11 / self.facold.powf(BETA) / SAFE).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
                let mut hnew = h / fac;
                if self.rejected {
                    hnew = hnew.min(h);
                }
                self.facold = err.max(1e-4);
                self.rejected = false;

                let ks = [&k1, &k2, &k3, &k4, &k5, &k6, &k7];
                let mut q = [[0.0; 3]; 5];
                for (j, qj) in q.iter_mut().enumerate() {
                    for i in 0..3 {
                        let mut acc = 0.0;
                        for (row, k) in P.iter().zip(ks.iter()) {
                            acc += row[j] * k[i];
                        }
                        qj[i] = h * acc;
                    }
                }
                let seg = Segment {
                    t0: self.t,
                    h,
                    y0: *y,
                    y1,
                    q,
                };
                self.t += h;
                self.y = y1;
                self.k1 = k7;
                self.h = hnew;
                return Ok(seg);
            }
            self.h = h / (fac11 / SAFE).min(1.0 / FAC_MIN);
            self.rejected = true;
        }
    }
}
