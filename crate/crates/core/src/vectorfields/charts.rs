//! Right-hand sides of every chart, their analytic Jacobians, and the
//! coordinate dictionaries linking each chart back to the main `(X, Y, Z)`
//! variables.
//!
//! Internally all states are `[f64; 3]`; two-dimensional charts use the first
//! two slots and keep the third at zero.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::ModelParams;

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

/// Which end of the `Y` axis a `CHART_Q23` instance covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `Y → +∞`, the point Q2.
    Plus,
    /// `Y → −∞`, the point Q3.
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn of(y: f64) -> Branch {
        if y >= 0.0 {
            Branch::Plus
        } else {
            Branch::Minus
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChartId {
    /// `(X, Y, Z)`.
    Main,
    /// `(X, H, Z)` with `H = Y + h0`, so P1 sits at the origin.
    Shifted,
    /// `(X, Y)` on the invariant plane `{Z = 0}`.
    PlaneZ0,
    /// `(Y, Z)` on the invariant plane `{X = 0}`.
    PlaneX0,
    /// `(x, y, z) = (1/X², Y/X, Z/X²)`, the chart resolving Q4.
    Alt,
    /// `(U, Y, Z)` with `U = σX`; needs σ > 0.
    Rescaled,
    /// `(y, z, w) = (Y/X, Z/X, 1/X)` around Q1 and Q5.
    ChartQ1,
    /// `(x, z, w) = (X/Y, Z/Y, 1/Y)` around Q2 (`Plus`) or Q3 (`Minus`).
    ChartQ23(Branch),
}

pub const ALL_CHARTS: [ChartId; 9] = [
    ChartId::Main,
    ChartId::Shifted,
    ChartId::PlaneZ0,
    ChartId::PlaneX0,
    ChartId::Alt,
    ChartId::Rescaled,
    ChartId::ChartQ1,
    ChartId::ChartQ23(Branch::Plus),
    ChartId::ChartQ23(Branch::Minus),
];

impl ChartId {
    pub fn dim(self) -> usize {
        match self {
            ChartId::PlaneZ0 | ChartId::PlaneX0 => 2,
            _ => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ChartId::Main => "MAIN",
            ChartId::Shifted => "SHIFTED",
            ChartId::PlaneZ0 => "PLANE_Z0",
            ChartId::PlaneX0 => "PLANE_X0",
            ChartId::Alt => "ALT",
            ChartId::Rescaled => "RESCALED",
            ChartId::ChartQ1 => "CHART_Q1",
            ChartId::ChartQ23(Branch::Plus) => "CHART_Q23+",
            ChartId::ChartQ23(Branch::Minus) => "CHART_Q23-",
        }
    }

    /// Component names, used for CSV headers.
    pub fn variables(self) -> &'static [&'static str] {
        match self {
            ChartId::Main => &["X", "Y", "Z"],
            ChartId::Shifted => &["X", "H", "Z"],
            ChartId::PlaneZ0 => &["X", "Y"],
            ChartId::PlaneX0 => &["Y", "Z"],
            ChartId::Alt => &["x", "y", "z"],
            ChartId::Rescaled => &["U", "Y", "Z"],
            ChartId::ChartQ1 => &["y", "z", "w"],
            ChartId::ChartQ23(_) => &["x", "z", "w"],
        }
    }
}

impl fmt::Display for ChartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChartId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase();
        Ok(match up.as_str() {
            "MAIN" => ChartId::Main,
            "SHIFTED" => ChartId::Shifted,
            "PLANE_Z0" => ChartId::PlaneZ0,
            "PLANE_X0" => ChartId::PlaneX0,
            "ALT" => ChartId::Alt,
            "RESCALED" => ChartId::Rescaled,
            "CHART_Q1" | "Q1" => ChartId::ChartQ1,
            "CHART_Q23+" | "Q2" => ChartId::ChartQ23(Branch::Plus),
            "CHART_Q23-" | "Q3" => ChartId::ChartQ23(Branch::Minus),
            _ => return Err(Error::BadSpec(format!("unknown chart '{s}'"))),
        })
    }
}

impl Serialize for ChartId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for ChartId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Copies a slice into the internal fixed-size state after checking its length.
pub fn to_vec3(chart: ChartId, state: &[f64]) -> Result<Vec3> {
    if state.len() != chart.dim() {
        return Err(Error::DimMismatch {
            chart: chart.name(),
            expected: chart.dim(),
            got: state.len(),
        });
    }
    let mut v = [0.0; 3];
    v[..state.len()].copy_from_slice(state);
    Ok(v)
}

fn rescaled_lambda(p: &ModelParams) -> Result<f64> {
    if p.sigma() > 0.0 {
        Ok(1.0 / p.sigma())
    } else {
        Err(Error::BadSpec(
            "the RESCALED chart U = σX needs sigma > 0".into(),
        ))
    }
}

/// Field of the main system at a point given in main variables.
#[inline]
pub fn main_field(s: &Vec3, p: &ModelParams) -> Vec3 {
    let (m, n, sigma) = (p.m(), p.n(), p.sigma());
    let [x, y, z] = *s;
    [
        0.5 * (m - 1.0) * x * y - x * x,
        -0.5 * (m + 1.0) * y * y + 1.0 - z - (n - 1.0) * x * y,
        z * ((m - 1.0) * y + sigma * x),
    ]
}

#[inline]
fn main_jacobian(s: &Vec3, p: &ModelParams) -> Mat3 {
    let (m, n, sigma) = (p.m(), p.n(), p.sigma());
    let [x, y, z] = *s;
    let a = 0.5 * (m - 1.0);
    [
        [a * y - 2.0 * x, a * x, 0.0],
        [-(n - 1.0) * y, -(m + 1.0) * y - (n - 1.0) * x, -1.0],
        [sigma * z, (m - 1.0) * z, (m - 1.0) * y + sigma * x],
    ]
}

/// Field on the fixed-size state. For 2D charts slot 2 of the result is 0.
/// Only the RESCALED chart can fail (σ = 0).
pub fn field3(chart: ChartId, s: &Vec3, p: &ModelParams) -> Result<Vec3> {
    let (m, n, sigma) = (p.m(), p.n(), p.sigma());
    let a = 0.5 * (m - 1.0);
    let b = 0.5 * (m + 1.0);
    Ok(match chart {
        ChartId::Main => main_field(s, p),
        ChartId::Shifted => {
            let h0 = crate::model::h0(m);
            main_field(&[s[0], s[1] - h0, s[2]], p)
        }
        ChartId::PlaneZ0 => {
            let f = main_field(&[s[0], s[1], 0.0], p);
            [f[0], f[1], 0.0]
        }
        ChartId::PlaneX0 => {
            let [y, z, _] = *s;
            [-b * y * y + 1.0 - z, (m - 1.0) * y * z, 0.0]
        }
        ChartId::Alt => {
            let [x, y, z] = *s;
            [
                x * (2.0 - (m - 1.0) * y),
                -m * y * y - (n - 2.0) * y + x - z,
                (sigma + 2.0) * z,
            ]
        }
        ChartId::Rescaled => {
            let lam = rescaled_lambda(p)?;
            let [u, y, z] = *s;
            [
                a * u * y - lam * u * u,
                -b * y * y + 1.0 - z - (n - 1.0) * lam * u * y,
                z * ((m - 1.0) * y + u),
            ]
        }
        ChartId::ChartQ1 => {
            let [y, z, w] = *s;
            [
                -(n - 2.0) * y - m * y * y - z * w + w * w,
                (sigma + 1.0) * z + a * y * z,
                w - a * y * w,
            ]
        }
        ChartId::ChartQ23(br) => {
            let [x, z, w] = *s;
            let c = 0.5 * (3.0 * m - 1.0);
            let sg = br.sign();
            [
                sg * (m * x + (n - 2.0) * x * x - x * w * w + x * z * w),
                sg * (c * z + (sigma + n - 1.0) * x * z + z * z * w - z * w * w),
                sg * (b * w + (n - 1.0) * x * w + z * w * w - w * w * w),
            ]
        }
    })
}

/// Analytic Jacobian on the fixed-size state (2D charts fill the upper-left block).
pub fn jacobian3(chart: ChartId, s: &Vec3, p: &ModelParams) -> Result<Mat3> {
    let (m, n, sigma) = (p.m(), p.n(), p.sigma());
    let a = 0.5 * (m - 1.0);
    let b = 0.5 * (m + 1.0);
    Ok(match chart {
        ChartId::Main => main_jacobian(s, p),
        ChartId::Shifted => {
            let h0 = crate::model::h0(m);
            main_jacobian(&[s[0], s[1] - h0, s[2]], p)
        }
        ChartId::PlaneZ0 => {
            let j = main_jacobian(&[s[0], s[1], 0.0], p);
            [[j[0][0], j[0][1], 0.0], [j[1][0], j[1][1], 0.0], [0.0; 3]]
        }
        ChartId::PlaneX0 => {
            let [y, z, _] = *s;
            [
                [-2.0 * b * y, -1.0, 0.0],
                [(m - 1.0) * z, (m - 1.0) * y, 0.0],
                [0.0; 3],
            ]
        }
        ChartId::Alt => {
            let [x, y, _] = *s;
            [
                [2.0 - (m - 1.0) * y, -(m - 1.0) * x, 0.0],
                [1.0, -2.0 * m * y - (n - 2.0), -1.0],
                [0.0, 0.0, sigma + 2.0],
            ]
        }
        ChartId::Rescaled => {
            let lam = rescaled_lambda(p)?;
            let [u, y, z] = *s;
            [
                [a * y - 2.0 * lam * u, a * u, 0.0],
                [-(n - 1.0) * lam * y, -2.0 * b * y - (n - 1.0) * lam * u, -1.0],
                [z, (m - 1.0) * z, (m - 1.0) * y + u],
            ]
        }
        ChartId::ChartQ1 => {
            let [y, z, w] = *s;
            [
                [-(n - 2.0) - 2.0 * m * y, -w, -z + 2.0 * w],
                [a * z, sigma + 1.0 + a * y, 0.0],
                [-a * w, 0.0, 1.0 - a * y],
            ]
        }
        ChartId::ChartQ23(br) => {
            let [x, z, w] = *s;
            let c = 0.5 * (3.0 * m - 1.0);
            let sg = br.sign();
            let j = [
                [
                    m + 2.0 * (n - 2.0) * x - w * w + z * w,
                    x * w,
                    -2.0 * x * w + x * z,
                ],
                [
                    (sigma + n - 1.0) * z,
                    c + (sigma + n - 1.0) * x + 2.0 * z * w - w * w,
                    z * z - 2.0 * z * w,
                ],
                [
                    (n - 1.0) * w,
                    w * w,
                    b + (n - 1.0) * x + 2.0 * z * w - 3.0 * w * w,
                ],
            ];
            j.map(|row| row.map(|v| sg * v))
        }
    })
}

/// Vector field of `chart` at `state`.
pub fn eval_field(chart: ChartId, state: &[f64], p: &ModelParams) -> Result<Vec<f64>> {
    let s = to_vec3(chart, state)?;
    let f = field3(chart, &s, p)?;
    Ok(f[..chart.dim()].to_vec())
}

/// Analytic Jacobian of `chart` at `state`, row-major.
pub fn jacobian(chart: ChartId, state: &[f64], p: &ModelParams) -> Result<Vec<Vec<f64>>> {
    let s = to_vec3(chart, state)?;
    let j = jacobian3(chart, &s, p)?;
    let d = chart.dim();
    Ok(j[..d].iter().map(|row| row[..d].to_vec()).collect())
}

/// Maps a chart state to main variables `(X, Y, Z)`. Points at infinity
/// (`w = 0`, `x = 0` in ALT) map to non-finite values.
pub fn to_main(chart: ChartId, s: &Vec3, p: &ModelParams) -> Vec3 {
    match chart {
        ChartId::Main => *s,
        ChartId::Shifted => [s[0], s[1] - crate::model::h0(p.m()), s[2]],
        ChartId::PlaneZ0 => [s[0], s[1], 0.0],
        ChartId::PlaneX0 => [0.0, s[0], s[1]],
        ChartId::Alt => {
            let x = 1.0 / s[0].sqrt();
            [x, s[1] * x, s[2] / s[0]]
        }
        ChartId::Rescaled => [s[0] / p.sigma(), s[1], s[2]],
        ChartId::ChartQ1 => {
            let w = s[2];
            [1.0 / w, s[0] / w, s[1] / w]
        }
        ChartId::ChartQ23(_) => {
            let w = s[2];
            [s[0] / w, 1.0 / w, s[1] / w]
        }
    }
}

/// Maps main variables into `chart`. Components outside the chart's domain
/// (for instance Z ≠ 0 for PLANE_Z0) are dropped.
pub fn from_main(chart: ChartId, s: &Vec3, p: &ModelParams) -> Vec3 {
    let [x, y, z] = *s;
    match chart {
        ChartId::Main => *s,
        ChartId::Shifted => [x, y + crate::model::h0(p.m()), z],
        ChartId::PlaneZ0 => [x, y, 0.0],
        ChartId::PlaneX0 => [y, z, 0.0],
        ChartId::Alt => [1.0 / (x * x), y / x, z / (x * x)],
        ChartId::Rescaled => [p.sigma() * x, y, z],
        ChartId::ChartQ1 => [y / x, z / x, 1.0 / x],
        ChartId::ChartQ23(_) => [x / y, z / y, 1.0 / y],
    }
}

/// Factor `c` with `(push-forward of the main field) = c · (chart field)` at a
/// point given in main variables. It is the ratio of the two time variables.
pub fn time_rescale(chart: ChartId, main_state: &Vec3) -> f64 {
    match chart {
        ChartId::Alt | ChartId::ChartQ1 => main_state[0],
        ChartId::ChartQ23(_) => main_state[1].abs(),
        _ => 1.0,
    }
}

/// Admissibility of a starting point: the physically meaningful octant of
/// each chart (X ≥ 0, Z ≥ 0 in main variables).
pub fn check_admissible(chart: ChartId, s: &Vec3, p: &ModelParams) -> Result<()> {
    let d = chart.dim();
    if s[..d].iter().any(|v| !v.is_finite()) {
        return Err(Error::InadmissibleStart(format!(
            "non-finite component in {chart} state {:?}",
            &s[..d]
        )));
    }
    let bad = |what: &str| {
        Err(Error::InadmissibleStart(format!(
            "{chart} state {:?} violates {what}",
            &s[..d]
        )))
    };
    match chart {
        ChartId::Main | ChartId::Shifted => {
            if s[0] < 0.0 || s[2] < 0.0 {
                return bad("X >= 0, Z >= 0");
            }
        }
        ChartId::PlaneZ0 => {
            if s[0] < 0.0 {
                return bad("X >= 0");
            }
        }
        ChartId::PlaneX0 => {
            if s[1] < 0.0 {
                return bad("Z >= 0");
            }
        }
        ChartId::Alt => {
            if s[0] < 0.0 || s[2] < 0.0 {
                return bad("x >= 0, z >= 0");
            }
        }
        ChartId::Rescaled => {
            rescaled_lambda(p)?;
            if s[0] < 0.0 || s[2] < 0.0 {
                return bad("U >= 0, Z >= 0");
            }
        }
        ChartId::ChartQ1 => {
            if s[1] < 0.0 || s[2] < 0.0 {
                return bad("z >= 0, w >= 0");
            }
        }
        ChartId::ChartQ23(br) => {
            let sg = br.sign();
            if sg * s[0] < 0.0 || sg * s[1] < 0.0 || sg * s[2] < 0.0 {
                return bad("x, z, w carrying the sign of the branch");
            }
        }
    }
    Ok(())
}
