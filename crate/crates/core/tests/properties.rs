//! Property tests over random parameters and states.

use proptest::prelude::*;

use sepvar::geometry::{first_integral, flux_by_dot_product, surface_flux};
use sepvar::integrate::{integrate, IntegrationControls};
use sepvar::model::{k1, sigma_c};
use sepvar::par::Execution;
use sepvar::shooting::{sweep, Origin, Parameter, Shooting};
use sepvar::vectorfields::{from_main, to_main, ChartId, ALL_CHARTS};
use sepvar::ModelParams;

fn params() -> impl Strategy<Value = ModelParams> {
    (1.2f64..4.0, 1.0f64..8.0, 0.05f64..6.0).prop_map(|(m, n, s)| ModelParams::new(m, n, s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sigma_c_zeroes_k1(m in 1.05f64..6.0, n in 1.0f64..12.0) {
        let p = ModelParams::new(m, n, sigma_c(m, n)).unwrap();
        prop_assert!(k1(&p).abs() < 1e-12 * (1.0 + m * n));
    }

    #[test]
    fn flux_depends_on_x_alone(p in params(), x in 0.0f64..3.0, h in -3.0f64..3.0) {
        let dot = flux_by_dot_product(x, h, &p);
        let closed = surface_flux(x, &p);
        prop_assert!((dot - closed).abs() <= 1e-9 * (1.0 + closed.abs() + x.powi(3)), "{dot} vs {closed}");
    }

    #[test]
    fn chart_changes_invert(p in params(), a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0) {
        for chart in ALL_CHARTS {
            let mut s = [a, b, c];
            for v in s.iter_mut().skip(chart.dim()) {
                *v = 0.0;
            }
            let main = to_main(chart, &s, &p);
            // Points of the chart at infinity have no MAIN image.
            if main.iter().any(|v| !v.is_finite() || v.abs() > 1e6) {
                continue;
            }
            let back = from_main(chart, &main, &p);
            for k in 0..chart.dim() {
                prop_assert!((back[k] - s[k]).abs() <= 1e-8 * (1.0 + s[k].abs()), "{chart}: {s:?} -> {main:?} -> {back:?}");
            }
        }
    }

    #[test]
    fn plane_x0_orbits_keep_their_first_integral(y in -0.6f64..0.6, z in 0.2f64..1.2, m in 1.5f64..3.0) {
        let p = ModelParams::new(m, 4.0, 0.5).unwrap();
        let k0 = first_integral(y, z, m);
        let t = integrate(ChartId::PlaneX0, &[y, z], &p, &IntegrationControls::default().with_span(20.0), &[]).unwrap();
        for i in 0..t.len() {
            let s = t.state(i);
            if s[1] > 0.0 && s[0].abs() < 10.0 {
                let k = first_integral(s[0], s[1], m);
                prop_assert!((k - k0).abs() <= 1e-7 * (1.0 + k0.abs()), "K drifted from {k0} to {k}");
            }
        }
    }
}

#[test]
fn sweeps_agree_between_parallel_and_sequential() {
    let p = ModelParams::new(2.0, 4.0, 0.5).unwrap();
    let grid: Vec<f64> = (0..16).map(|k| 0.1 + 0.1 * k as f64).collect();
    let par = Shooting::new(Origin::P2E3, p);
    let seq = Shooting {
        execution: Execution::Sequential,
        ..par
    };
    let a = sweep(Parameter::Sigma, &grid, &par).unwrap();
    let b = sweep(Parameter::Sigma, &grid, &seq).unwrap();
    assert_eq!(a.fates(), b.fates());
    assert_eq!(a.to_csv(), b.to_csv());
}
