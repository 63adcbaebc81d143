//! Critical points in the finite part (P0–P3) and at infinity (Q1–Q5), each
//! with its Jacobian spectrum and a qualitative tag.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use super::charts::{jacobian3, Branch, ChartId, Vec3};
use super::normal_form::normal_form_p3;
use super::spectrum::{dims_of, spectrum, Dims};
use crate::model::{h0, k_mnsigma, p2_location, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PointId {
    P0,
    P1,
    P2,
    P3,
    Q1,
    Q2,
    Q3,
    Q4,
    Q5,
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Tag {
    UnstableNode,
    StableNode,
    Saddle,
    SaddleNode,
    Nonhyperbolic,
}

/// Extra qualifier for P3, from the sign of the radial normal-form coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum P3Role {
    /// σ < σ_c: orbits with X > 0 near P3 spiral into it.
    AttractorForPositiveX,
    /// σ > σ_c: orbits with X > 0 near P3 spiral away from it.
    RepellerForPositiveX,
    /// σ = σ_c: the radial coefficient vanishes and no tag is given.
    CriticalCase,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalPoint {
    pub id: PointId,
    pub chart: ChartId,
    pub location: Vec<f64>,
    #[serde(serialize_with = "ser_spectrum")]
    pub spectrum: Vec<Complex64>,
    pub dims: Dims,
    pub tag: Tag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p3_role: Option<P3Role>,
    /// Q4 and Q5 carry this flag: both are treated as one destination.
    pub merged_node: bool,
}

fn ser_spectrum<S: serde::Serializer>(
    spec: &[Complex64],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(spec.len()))?;
    for z in spec {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

fn tag_from(d: Dims) -> Tag {
    match (d.stable, d.unstable, d.center) {
        (_, _, c) if c > 0 && d.stable + d.unstable == 0 => Tag::Nonhyperbolic,
        (_, _, c) if c > 0 => Tag::SaddleNode,
        (0, _, _) => Tag::UnstableNode,
        (_, 0, _) => Tag::StableNode,
        _ => Tag::Saddle,
    }
}

fn build(id: PointId, chart: ChartId, loc: Vec3, p: &ModelParams) -> CriticalPoint {
    // Every chart used here is polynomial and defined for σ ≥ 0.
    let j = jacobian3(chart, &loc, p).expect("chart defined for all sigma");
    let spec = spectrum(&j, chart.dim());
    let dims = dims_of(&spec);
    CriticalPoint {
        id,
        chart,
        location: loc[..chart.dim()].to_vec(),
        spectrum: spec,
        dims,
        tag: tag_from(dims),
        p3_role: None,
        merged_node: false,
    }
}

pub fn finite_critical_points(p: &ModelParams) -> Vec<CriticalPoint> {
    let h = h0(p.m());
    let mut out = vec![
        build(PointId::P0, ChartId::Main, [0.0, h, 0.0], p),
        build(PointId::P1, ChartId::Main, [0.0, -h, 0.0], p),
        build(PointId::P2, ChartId::Main, p2_location(p), p),
        build(PointId::P3, ChartId::Main, [0.0, 0.0, 1.0], p),
    ];
    let nf = normal_form_p3(p);
    out[3].tag = Tag::Nonhyperbolic;
    out[3].p3_role = Some(nf.role);
    out
}

pub fn infinity_critical_points(p: &ModelParams) -> Vec<CriticalPoint> {
    let (m, n) = (p.m(), p.n());
    let q45 = (2.0 - n) / m;
    let mut q4 = build(PointId::Q4, ChartId::Alt, [0.0, q45, 0.0], p);
    let mut q5 = build(PointId::Q5, ChartId::ChartQ1, [q45, 0.0, 0.0], p);
    q4.merged_node = true;
    q5.merged_node = true;
    // The diagonal Jacobian at Q5 makes the node/saddle split exactly the
    // sign of K(m,N,σ) when N > 2; the computed dims already reflect that.
    debug_assert!(n <= 2.0 || (k_mnsigma(p) > 0.0) == (q5.dims.unstable == 3));
    vec![
        build(PointId::Q1, ChartId::ChartQ1, [0.0; 3], p),
        build(PointId::Q2, ChartId::ChartQ23(Branch::Plus), [0.0; 3], p),
        build(PointId::Q3, ChartId::ChartQ23(Branch::Minus), [0.0; 3], p),
        q4,
        q5,
    ]
}

pub fn all_critical_points(p: &ModelParams) -> Vec<CriticalPoint> {
    let mut v = finite_critical_points(p);
    v.extend(infinity_critical_points(p));
    v
}
