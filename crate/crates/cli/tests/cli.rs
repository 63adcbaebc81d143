use std::path::Path;
use std::process::{Command, Output};

fn sepvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sepvar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

/// Data rows (no `#` comment, no column header) of a CSV text.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn report_prints_sigma_c() {
    let o = sepvar(&["report", "--m", "2", "--N", "4", "--sigma", "0.5"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("sigma_c = 0.857142857"), "{out}");
    assert!(out.contains("critical = false"));
    for id in ["P0", "P1", "P2", "P3", "Q1", "Q2", "Q3", "Q4", "Q5"] {
        assert!(out.lines().any(|l| l.trim_start().starts_with(&format!("{id} "))), "{id}");
    }
    assert!(out.contains("certificates: "));
}

#[test]
fn report_flags_nine_digit_sigma_c_as_critical() {
    let o = sepvar(&["report", "--m", "2", "--N", "4", "--sigma", "0.857142857"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("critical = true"), "{out}");
    let k1: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("K1 = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(k1.abs() < 1e-8);
}

#[test]
fn report_json_is_valid() {
    let o = sepvar(&["report", "--m", "2", "--N", "4", "--sigma", "6/7", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["critical"], true);
    assert_eq!(v["critical_points"].as_array().unwrap().len(), 9);
}

#[test]
fn invalid_m_exits_2() {
    let o = sepvar(&["report", "--m", "1", "--N", "4", "--sigma", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("M_OUT_OF_RANGE"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&sepvar(&["report", "--m", "2"])), 2);
    assert_eq!(code(&sepvar(&["frobnicate"])), 2);
    assert_eq!(code(&sepvar(&["figure", "7"])), 2);
    assert_eq!(code(&sepvar(&["classify", "--m", "2", "--N", "4", "--origin", "P9", "--sigma-range", "0:1"])), 2);
    let o = sepvar(&["integrate", "--m", "2", "--N", "4", "--sigma", "0.5", "--start", "1,2"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("DIM_MISMATCH"));
}

#[test]
fn p2_sweep_has_p3_prefix_and_q3_suffix() {
    let o = sepvar(&["classify", "--origin", "P2", "--m", "2", "--N", "4", "--sigma-range", "0.1:0.85:0.05"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("# sepvar "));
    let fates: Vec<String> = rows(&out).into_iter().map(|r| r[1].clone()).collect();
    assert_eq!(fates.len(), 16);
    let k = fates.iter().position(|f| f != "ENTERS_P3").unwrap();
    assert!(k > 0);
    assert!(fates[k..].iter().all(|f| f == "ENTERS_Q3"), "{fates:?}");
}

#[test]
fn bisect_writes_bracket_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = sepvar(&[
        "bisect", "--origin", "P2", "--m", "2", "--N", "4", "--lo", "0.5", "--hi", "0.857142", "--tol", "1e-3", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&read(dir.path(), "bisect.json")).unwrap();
    let (lo, hi) = (v["lo"].as_f64().unwrap(), v["hi"].as_f64().unwrap());
    assert!(hi - lo <= 1e-3 && lo > 0.5 && hi < 0.857142);
    assert_eq!(v["fate_lo"], "ENTERS_P3");
    assert_eq!(v["fate_hi"], "ENTERS_Q3");
}

#[test]
fn bisect_same_fate_exits_2() {
    let o = sepvar(&["bisect", "--origin", "P2", "--m", "2", "--N", "4", "--lo", "0.2", "--hi", "0.3", "--tol", "1e-3"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("SAME_FATE_AT_ENDPOINTS"));
}

#[test]
fn q1_sweep_at_n2_refines_to_orbits_into_p1() {
    let o = sepvar(&[
        "classify", "--origin", "Q1", "--label", "0.963", "--m", "2", "--N", "2", "--sigma-range", "0.1:σ_c", "--refine",
        "1e-14",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let fates: Vec<String> = rows(&stdout(&o)).into_iter().map(|r| r[1].clone()).collect();
    assert!(fates.iter().any(|f| f == "ENTERS_P3"));
    assert!(fates.iter().any(|f| f == "ENTERS_Q3"));
    assert!(fates.iter().any(|f| f == "ENTERS_P1"), "{fates:?}");
}

#[test]
fn mostly_indeterminate_sweep_exits_3() {
    // φ = 0 seeds in the invariant plane {Z = 0}: never conclusive.
    let o = sepvar(&["classify", "--origin", "Q1", "--m", "2", "--N", "2", "--sigma", "0.2", "--label-range", "0:0:1"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("INDETERMINATE"));
}

#[test]
fn degenerate_oracle_exits_4() {
    let o = sepvar(&[
        "profile", "--origin", "P2", "--m", "2", "--N", "4", "--sigma", "0.5", "--span", "1e-6", "--oracle",
    ]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("DEGENERATE_TRAJECTORY"));
}

#[test]
fn profile_with_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let o = sepvar(&[
        "profile", "--origin", "P2", "--m", "2", "--N", "4", "--sigma", "0.3", "--span", "40", "--oracle", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&read(dir.path(), "profile.json")).unwrap();
    assert!(v["oracle"]["comparison"]["max_rel_error"].as_f64().unwrap() < 1e-6);
    let csv = read(dir.path(), "profile.csv");
    assert!(csv.lines().nth(1) == Some("xi,f"));
    assert!(rows(&csv).len() > 100);
}

#[test]
fn certify_emits_array() {
    let o = sepvar(&["certify", "--m", "2", "--N", "4", "--sigma", "0.01"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let claims = v.as_array().unwrap();
    assert_eq!(claims.len(), 29);
    assert!(claims.iter().all(|c| c["pass"] != "fail"));
}

#[test]
fn certify_grid_csv() {
    let o = sepvar(&["certify", "--m", "2", "--n-list", "4,5", "--sigma-range", "0.05:6", "--points", "4"]);
    assert_eq!(code(&o), 0);
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 2 * 4 * 29);
    assert!(r.iter().all(|row| row[6] != "fail"));
}

#[test]
fn integrate_from_origin_and_start() {
    let o = sepvar(&["integrate", "--origin", "P0", "--m", "2", "--N", "4", "--sigma", "0.5", "--span", "5"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().nth(1), Some("eta,X,Y,Z"));
    let o = sepvar(&["integrate", "--start", "0.1,0,1.1", "--m", "2", "--N", "4", "--sigma", "0.5", "--span", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["eta_end"], 1.0);
    assert!(v["samples"].as_array().is_some_and(|s| s.len() > 2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"m": 2, "N": 4, "sigma": 0.5, "classify": {"origin": "P2", "sigma_range": "0.1:0.2:0.1"}}"#,
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let o = sepvar(&["report", "--config", c]);
    assert!(stdout(&o).contains("sigma = 0.5"));
    let o = sepvar(&["report", "--config", c, "--sigma", "0.25"]);
    assert!(stdout(&o).contains("sigma = 0.25"));
    let o = sepvar(&["classify", "--config", c]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(rows(&stdout(&o)).len(), 2);

    std::fs::write(&cfg, r#"{"m": 2, "N": 4, "classify": {"orign": "P2"}}"#).unwrap();
    let o = sepvar(&["classify", "--config", c]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("orign"));
}

#[test]
fn figure1_zero_level_passes_through_h0() {
    let dir = tempfile::tempdir().unwrap();
    let o = sepvar(&["figure", "1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = rows(&read(dir.path(), "fig1_cycles.csv"));
    let h0 = (2.0f64 / 3.0).sqrt();
    let zero: Vec<(f64, f64)> = r
        .iter()
        .filter(|row| row[0].parse::<f64>().unwrap() == 0.0)
        .map(|row| (row[1].parse().unwrap(), row[2].parse().unwrap()))
        .collect();
    assert!(zero.iter().any(|&(y, z)| (y - h0).abs() < 1e-15 && z == 0.0));
    assert!(zero.iter().any(|&(y, z)| (y + h0).abs() < 1e-15 && z == 0.0));
    let levels: std::collections::BTreeSet<String> = r.iter().map(|row| row[0].clone()).collect();
    assert_eq!(levels.len(), 5);
}

#[test]
fn figure2_fates_and_determinism() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = sepvar(&["figure", "2", "--out", d.path().to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    for name in ["fig2_fates.csv", "fig2_orbits_sigma_0.5.csv", "fig2_orbits_sigma_0.84.csv"] {
        assert_eq!(read(a.path(), name), read(b.path(), name), "{name} differs between runs");
    }
    let fates = rows(&read(a.path(), "fig2_fates.csv"));
    let p2 = |sigma: f64| {
        fates
            .iter()
            .find(|r| r[0].parse::<f64>().unwrap() == sigma && r[1] == "P2_E3")
            .map(|r| r[3].clone())
            .unwrap()
    };
    assert_eq!(p2(0.5), "ENTERS_P3");
    assert_eq!(p2(0.84), "ENTERS_Q3");
}

#[test]
fn figure3_p0_and_p2_stay_out_of_the_p1_ball() {
    let dir = tempfile::tempdir().unwrap();
    let o = sepvar(&["figure", "3", "--out", dir.path().to_str().unwrap(), "--sequential"]);
    assert_eq!(code(&o), 0);
    let fates = rows(&read(dir.path(), "fig3_fates.csv"));
    let checked: Vec<&Vec<String>> = fates
        .iter()
        .filter(|r| r[1] == "P2_E3" || r[1] == "P0_UNSTABLE")
        .collect();
    assert_eq!(checked.len(), 4);
    for r in checked {
        assert_eq!(r[5], "false", "{r:?}");
        assert!(r[4].parse::<f64>().unwrap() > 1e-4);
        assert_ne!(r[3], "ENTERS_P1");
    }
    let mesh = read(dir.path(), "fig3_surface.csv");
    assert!(mesh.starts_with("# sepvar "));
    assert_eq!(rows(&mesh).len(), 41 * 41);
}
