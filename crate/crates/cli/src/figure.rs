//! Plot-ready data for the three phase portraits:
//! 1. the cycle family of the invariant plane `{X = 0}`;
//! 2. orbits from every seed origin at `m = 2, N = 4, σ ∈ {0.5, 0.84}`;
//! 3. the same orbits at `σ = 5` plus a mesh of the separatrix surface.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;

use sepvar::fmt::num;
use sepvar::geometry::{cycle_eval, cycle_z_range, k_max, surface_eval};
use sepvar::model::h0;
use sepvar::par;
use sepvar::shooting::{classify_fate_with, main_orbit, FateReport, Origin, SeedSpec};
use sepvar::ModelParams;

use crate::commands::Status;
use crate::config::{invalid, RunConfig};
use crate::output::{write_all, Artifact};
use crate::VERSION;

/// Multiples of `K_max` drawn in figure 1.
pub const CYCLE_LEVELS: [f64; 5] = [0.0, 0.2, 0.4, 0.6, 0.8];
/// Samples per branch of a cycle curve.
const CYCLE_SAMPLES: usize = 200;
/// `|η|` span of the plotted orbits.
const ORBIT_SPAN: f64 = 100.0;

/// Orbits drawn in figures 2 and 3: the P2 orbit and three members of each
/// labelled family.
pub fn figure_origins() -> Vec<Origin> {
    let mut v = vec![Origin::P2E3];
    for k in 1..=3 {
        let a = k as f64 * PI / 8.0;
        v.push(Origin::P0Unstable { theta: a });
    }
    for k in 1..=3 {
        let a = k as f64 * PI / 8.0;
        v.push(Origin::Q1Out { phi: a });
    }
    for d in [0.1, 1.0, 10.0] {
        v.push(Origin::P1Backward { d });
    }
    v.push(Origin::Q5Out { phi: PI / 4.0 });
    v
}

pub fn figure(cfg: &RunConfig, id: u8) -> anyhow::Result<Status> {
    let artifacts = match id {
        1 => figure1(cfg)?,
        2 => {
            let mut a = Vec::new();
            let mut fates = fates_header(cfg, 2)?;
            for sigma in [0.5, 0.84] {
                let (traj, rows) = orbit_bundle(cfg, sigma)?;
                a.push(Artifact::new(format!("fig2_orbits_sigma_{sigma}.csv"), traj));
                fates.push_str(&rows);
            }
            a.push(Artifact::new("fig2_fates.csv", fates));
            a
        }
        3 => {
            let (traj, rows) = orbit_bundle(cfg, 5.0)?;
            let mut fates = fates_header(cfg, 3)?;
            fates.push_str(&rows);
            vec![
                Artifact::new("fig3_orbits_sigma_5.csv", traj),
                Artifact::new("fig3_surface.csv", surface_mesh(&figure_params(cfg, 5.0)?)),
                Artifact::new("fig3_fates.csv", fates),
            ]
        }
        _ => return Err(invalid(format!("figure id must be 1, 2 or 3 (got {id})"))),
    };
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from(format!("figure-{id}")));
    write_all(&dir, &artifacts)?;
    Ok(Status::Ok)
}

/// `(m, N)` default to `(2, 4)`; σ is fixed by the figure.
fn figure_params(cfg: &RunConfig, sigma: f64) -> anyhow::Result<ModelParams> {
    Ok(ModelParams::new(cfg.m.unwrap_or(2.0), cfg.n.unwrap_or(4.0), sigma)?)
}

fn figure1(cfg: &RunConfig) -> anyhow::Result<Vec<Artifact>> {
    let m = cfg.m.unwrap_or(2.0);
    let p = ModelParams::new(m, cfg.n.unwrap_or(4.0), 0.0)?;
    let kmax = k_max(p.m());
    let mut s = format!(
        "# sepvar {VERSION} figure=1 plane=X0 m={} K_max={} h0={}\nK,Y,Z\n",
        num(m),
        num(kmax),
        num(h0(m))
    );
    for c in CYCLE_LEVELS {
        for (y, z) in cycle_curve(c * kmax, m) {
            writeln!(s, "{},{},{}", num(c * kmax), num(y), num(z))?;
        }
    }
    Ok(vec![Artifact::new("fig1_cycles.csv", s)])
}

/// Points `(Y, Z)` of the level set `K`: the upper branch for increasing Z,
/// then the lower branch back. `K = 0` is the open arc from `(h0, 0)` over
/// `Z = 2m/(m+1)` to `(−h0, 0)`.
pub fn cycle_curve(k: f64, m: f64) -> Vec<(f64, f64)> {
    let (lo, hi) = if k == 0.0 {
        (0.0, 2.0 * m / (m + 1.0))
    } else {
        match cycle_z_range(k, m) {
            Some(r) => r,
            None => return Vec::new(),
        }
    };
    let n = CYCLE_SAMPLES;
    // Cosine spacing resolves the turning points where |dY/dZ| blows up.
    let zs: Vec<f64> = (0..=n)
        .map(|j| lo + (hi - lo) * 0.5 * (1.0 - (PI * j as f64 / n as f64).cos()))
        .collect();
    let y_of = |z: f64| {
        let y2 = if k == 0.0 {
            2.0 / (m + 1.0) - z / m
        } else {
            cycle_eval(z, k, m)
        };
        y2.max(0.0).sqrt()
    };
    let mut pts: Vec<(f64, f64)> = zs.iter().map(|&z| (y_of(z), z)).collect();
    pts.extend(zs.iter().rev().skip(1).map(|&z| (-y_of(z), z)));
    pts
}

fn fates_header(cfg: &RunConfig, id: u8) -> anyhow::Result<String> {
    Ok(format!(
        "# sepvar {VERSION} figure={id} m={} N={} epsilon={} ball_radius={}\n\
         sigma,origin,label,fate,min_p1_distance,enters_p1_ball,terminal_X,terminal_Y,terminal_Z,diagnostics\n",
        num(cfg.m.unwrap_or(2.0)),
        num(cfg.n.unwrap_or(4.0)),
        num(cfg.epsilon()?),
        num(cfg.classify_options()?.ball_radius),
    ))
}

/// Trajectory CSV (MAIN variables) and fate rows for every figure origin.
fn orbit_bundle(cfg: &RunConfig, sigma: f64) -> anyhow::Result<(String, String)> {
    let p = figure_params(cfg, sigma)?;
    let controls = cfg.controls()?;
    let options = cfg.classify_options()?;
    let eps = cfg.epsilon()?;
    let origins = figure_origins();
    let runs = par::map(&origins, cfg.execution(), |&o| {
        let spec = SeedSpec::new(o).with_epsilon(eps);
        let report = classify_fate_with(&spec, &p, &controls, &options)
            .unwrap_or_else(|e| FateReport::failed(Some(o), &p, o.direction(), &e));
        let traj = main_orbit(&spec, &p, &controls.with_span(ORBIT_SPAN));
        (report, traj)
    });
    let mut traj_csv = format!(
        "# sepvar {VERSION} figure orbits m={} N={} sigma={} span={}\norigin,label,eta,X,Y,Z\n",
        num(p.m()),
        num(p.n()),
        num(p.sigma()),
        num(ORBIT_SPAN)
    );
    let mut fates = String::new();
    for (o, (report, traj)) in origins.iter().zip(runs) {
        let label = o.label().map(num).unwrap_or_default();
        let mut diag = report.diagnostics.clone();
        match traj {
            Ok(t) => {
                for i in 0..t.len() {
                    let s = t.state(i);
                    writeln!(
                        traj_csv,
                        "{},{},{},{},{},{}",
                        o.name(),
                        label,
                        num(t.etas[i]),
                        num(s[0]),
                        num(s[1]),
                        num(s[2])
                    )?;
                }
            }
            Err(e) => diag.push(format!("no plotted orbit: {e}")),
        }
        let t = report.terminal_state;
        writeln!(
            fates,
            "{},{},{},{},{},{},{},{},{},\"{}\"",
            num(sigma),
            o.name(),
            label,
            report.fate,
            num(report.min_p1_distance),
            report.min_p1_distance <= options.ball_radius,
            num(t[0]),
            num(t[1]),
            num(t[2]),
            diag.join("; ").replace(['"', ','], " ")
        )?;
    }
    Ok((traj_csv, fates))
}

/// `Z = S(X, Y)` on a 41 × 41 grid over `X ∈ [0, 2]`, `Y ∈ [−2, 2]`.
pub fn surface_mesh(p: &ModelParams) -> String {
    let mut s = format!(
        "# sepvar {VERSION} separatrix surface m={} N={} sigma={}\nX,Y,Z\n",
        num(p.m()),
        num(p.n()),
        num(p.sigma())
    );
    let n = 40;
    for i in 0..=n {
        let x = 2.0 * i as f64 / n as f64;
        for j in 0..=n {
            let y = -2.0 + 4.0 * j as f64 / n as f64;
            let _ = writeln!(s, "{},{},{}", num(x), num(y), num(surface_eval(x, y, p)));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_level_passes_through_h0() {
        let c = cycle_curve(0.0, 2.0);
        let h = h0(2.0);
        assert!((c[0].0 - h).abs() < 1e-15 && c[0].1 == 0.0);
        let last = c[c.len() - 1];
        assert!((last.0 + h).abs() < 1e-15 && last.1 == 0.0);
    }

    #[test]
    fn positive_levels_are_closed() {
        for c in &CYCLE_LEVELS[1..] {
            let k = c * k_max(2.0);
            let pts = cycle_curve(k, 2.0);
            let (a, b) = (pts[0], pts[pts.len() - 1]);
            assert!((a.0 - b.0).abs() < 1e-6 && (a.1 - b.1).abs() < 1e-15);
            for &(y, z) in pts.iter().step_by(37) {
                let kk = sepvar::geometry::first_integral(y, z, 2.0);
                assert!((kk - k).abs() < 1e-9, "K {kk} vs {k}");
            }
        }
    }
}
