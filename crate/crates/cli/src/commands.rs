//! The `report`, `integrate`, `classify`, `bisect`, `certify` and `profile`
//! commands.

use std::fmt::Write as _;

use clap::Args;
use serde::Deserialize;
use serde_json::json;

use sepvar::fmt::num;
use sepvar::geometry::{is_elliptic, proof_certificates, Verdict};
use sepvar::integrate::{integrate, Trajectory};
use sepvar::model::{k1, K1_ZERO_TOL};
use sepvar::profiles::{cross_check, reconstruct_profile};
use sepvar::shooting::{bisect_transition, classify_fate_with, main_orbit, sweep, Origin, Parameter, SeedSpec};
use sepvar::vectorfields::{all_critical_points, ChartId};
use sepvar::ModelParams;

use crate::config::{invalid, parse_range, Expr, OriginArgs, Overlay, RunConfig};
use crate::output::{deliver, Artifact};
use crate::VERSION;

/// Outcome of a command that ran to the end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Output was produced but most classifications were inconclusive.
    Unreliable,
}

/// `|σ − σ_c| ≤ REPORT_CRITICAL_TOL · max(1, σ_c)` is reported as critical.
/// Wider than the model's `K1` test so that a σ typed with nine digits
/// (e.g. 0.857142857 for 6/7) is recognised.
pub const REPORT_CRITICAL_TOL: f64 = 1e-8;

pub fn near_critical(p: &ModelParams) -> bool {
    let sc = p.constants().sigma_c;
    p.is_critical() || (p.sigma() - sc).abs() <= REPORT_CRITICAL_TOL * sc.max(1.0)
}

/// `[a, b, c+di]` with 17-digit parts.
fn spectrum_text(spec: &[[f64; 2]]) -> String {
    let parts: Vec<String> = spec
        .iter()
        .map(|&[re, im]| {
            if im == 0.0 {
                num(re)
            } else if im > 0.0 {
                format!("{}+{}i", num(re), num(im))
            } else {
                format!("{}-{}i", num(re), num(-im))
            }
        })
        .collect();
    format!("[{}]", parts.join(", "))
}

fn enum_text<T: serde::Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::new(),
    }
}

fn value_text(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::Null => "n/a".into(),
        serde_json::Value::Number(x) => num(x.as_f64().unwrap_or(f64::NAN)),
        serde_json::Value::Array(a) => {
            let parts: Vec<String> = a.iter().map(value_text).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}

// ---------------------------------------------------------------- report

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportArgs {}

impl Overlay for ReportArgs {
    fn overlay(self, _file: Self) -> Self {
        self
    }
}

pub fn report(cfg: &RunConfig, _args: ReportArgs) -> anyhow::Result<Status> {
    let p = cfg.params()?;
    let c = p.constants();
    let k1v = k1(&p);
    let critical = near_critical(&p);
    let regime = if critical {
        "critical (sigma = sigma_c)"
    } else if p.sigma() < c.sigma_c {
        "subcritical (sigma < sigma_c)"
    } else {
        "supercritical (sigma > sigma_c)"
    };
    let points = all_critical_points(&p);
    let pack = p.coefficients();
    let certs = proof_certificates(&p);
    let count = |v: Verdict| certs.claims.iter().filter(|c| c.pass == v).count();
    let (pass, fail, na) = (count(Verdict::Pass), count(Verdict::Fail), count(Verdict::NotApplicable));

    let json_points: Vec<serde_json::Value> = points.iter().map(|cp| serde_json::to_value(cp).unwrap()).collect();
    let value = json!({
        "tool": "sepvar",
        "version": VERSION,
        "params": p,
        "constants": c,
        "k1": k1v,
        "critical": critical,
        "regime": regime,
        "elliptic_paraboloid": is_elliptic(&p),
        "critical_points": json_points,
        "coefficients": pack,
        "certificates": {
            "pass": pass,
            "fail": fail,
            "n/a": na,
            "failures": certs.failures().map(|c| c.id).collect::<Vec<_>>(),
        },
    });

    let mut t = String::new();
    writeln!(t, "# sepvar {VERSION} report")?;
    writeln!(t, "m = {}", num(p.m()))?;
    writeln!(t, "N = {}", num(p.n()))?;
    writeln!(t, "sigma = {}", num(p.sigma()))?;
    writeln!(t, "sigma_c = {}", num(c.sigma_c))?;
    writeln!(t, "N* = {}", num(c.n_star))?;
    writeln!(t, "sigma_c(N*) = {}", num(c.sigma_c_at_nstar))?;
    writeln!(t, "h0 = {}", num(c.h0))?;
    writeln!(t, "K1 = {}", num(k1v))?;
    writeln!(
        t,
        "critical = {critical} (|sigma - sigma_c| = {}, tolerance {REPORT_CRITICAL_TOL:e} * max(1, sigma_c))",
        num((p.sigma() - c.sigma_c).abs()),
    )?;
    writeln!(t, "K1 zero within {K1_ZERO_TOL:e} = {}", p.is_critical())?;
    writeln!(t, "regime = {regime}")?;
    writeln!(t, "N above N* = {}", p.above_n_star())?;
    writeln!(t, "elliptic paraboloid = {}", is_elliptic(&p))?;
    writeln!(t, "\ncritical points (id, chart, location, tag, spectrum):")?;
    for cp in &points {
        let loc: Vec<String> = cp.location.iter().map(|x| num(*x)).collect();
        let spec: Vec<[f64; 2]> = cp.spectrum.iter().map(|z| [z.re, z.im]).collect();
        let role = cp.p3_role.map(|r| format!(" {}", enum_text(&r))).unwrap_or_default();
        let merged = if cp.merged_node { " merged" } else { "" };
        writeln!(
            t,
            "  {} {} ({}) {}{}{} {}",
            cp.id,
            enum_text(&cp.chart),
            loc.join(", "),
            enum_text(&cp.tag),
            role,
            merged,
            spectrum_text(&spec)
        )?;
    }
    writeln!(t, "\ncoefficients:")?;
    if let serde_json::Value::Object(map) = serde_json::to_value(&pack)? {
        // `critical` is the strict K1 test, already printed above.
        for (k, v) in map.iter().filter(|(k, _)| k.as_str() != "critical") {
            writeln!(t, "  {k} = {}", value_text(v))?;
        }
    }
    writeln!(t, "\ncertificates: {pass} pass, {fail} fail, {na} n/a")?;
    for c in certs.failures() {
        writeln!(t, "  FAIL {}: {} (value {}, expected {})", c.id, c.statement, num(c.value), c.expected_sign.symbol())?;
    }

    let artifacts = [Artifact::new("report.txt", t), Artifact::json("report.json", &value)];
    deliver(cfg.out.as_deref(), &artifacts, usize::from(cfg.json()))?;
    Ok(Status::Ok)
}

// ------------------------------------------------------------- integrate

// Unknown keys are rejected by the flattened `OriginArgs`.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct IntegrateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: OriginArgs,
    /// Explicit start state `a,b,c` (instead of --origin).
    #[arg(long)]
    pub start: Option<String>,
    /// Chart of --start (default MAIN).
    #[arg(long)]
    pub chart: Option<String>,
    /// Integrate backward in η (with --start).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub backward: Option<bool>,
    /// |η| span (default 100).
    #[arg(long)]
    pub span: Option<f64>,
}

impl Overlay for IntegrateArgs {
    fn overlay(self, file: Self) -> Self {
        IntegrateArgs {
            seed: self.seed.overlay(file.seed),
            start: self.start.or(file.start),
            chart: self.chart.or(file.chart),
            backward: self.backward.or(file.backward),
            span: self.span.or(file.span),
        }
    }
}

pub fn integrate_cmd(cfg: &RunConfig, args: IntegrateArgs) -> anyhow::Result<Status> {
    let p = cfg.params()?;
    let span = args.span.unwrap_or(100.0);
    let controls = cfg.controls()?.with_span(span);
    controls.validate()?;
    let traj: Trajectory = match (&args.start, &args.seed.origin) {
        (Some(_), Some(_)) => return Err(invalid("give either --start or --origin, not both")),
        (None, None) => return Err(invalid("missing --origin or --start")),
        (Some(start), None) => {
            let chart: ChartId = match &args.chart {
                Some(c) => c.parse().map_err(|e: sepvar::Error| invalid(e.to_string()))?,
                None => ChartId::Main,
            };
            let s: Vec<f64> = start
                .split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|_| invalid(format!("bad --start component '{v}'"))))
                .collect::<anyhow::Result<_>>()?;
            let c = if args.backward.unwrap_or(false) { controls.backward() } else { controls };
            integrate(chart, &s, &p, &c, &[])?
        }
        (None, Some(_)) => {
            if args.backward.is_some() || args.chart.is_some() {
                return Err(invalid("--backward/--chart apply to --start only"));
            }
            let spec = SeedSpec::new(args.seed.origin(Some(&p))?).with_epsilon(cfg.epsilon()?);
            main_orbit(&spec, &p, &controls)?
        }
    };
    eprintln!(
        "{} samples, eta_end = {}, termination: {}",
        traj.len(),
        num(traj.last_eta()),
        enum_text(&traj.termination)
    );
    let artifacts = [
        Artifact::new("integrate.csv", traj.to_csv()),
        Artifact::json("integrate.json", &traj.to_json(cfg.json())),
    ];
    deliver(cfg.out.as_deref(), &artifacts, usize::from(cfg.json()))?;
    Ok(Status::Ok)
}

// -------------------------------------------------------------- classify

// Unknown keys are rejected by the flattened `OriginArgs`.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct ClassifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: OriginArgs,
    /// σ grid `a:b:step` or `a:b` (with --points); `sigma_c` is accepted.
    #[arg(long)]
    pub sigma_range: Option<String>,
    /// Shooting-label grid `a:b:step` or `a:b` (with --points).
    #[arg(long)]
    pub label_range: Option<String>,
    /// Grid size for two-part ranges (default 21).
    #[arg(long)]
    pub points: Option<usize>,
    /// Bisect every fate change of the sweep down to this width; an orbit
    /// into P1 is a single parameter value between ENTERS_P3 and ENTERS_Q3.
    #[arg(long)]
    pub refine: Option<f64>,
}

impl Overlay for ClassifyArgs {
    fn overlay(self, file: Self) -> Self {
        ClassifyArgs {
            seed: self.seed.overlay(file.seed),
            sigma_range: self.sigma_range.or(file.sigma_range),
            label_range: self.label_range.or(file.label_range),
            points: self.points.or(file.points),
            refine: self.refine.or(file.refine),
        }
    }
}

pub fn classify(cfg: &RunConfig, args: ClassifyArgs) -> anyhow::Result<Status> {
    let base = cfg.base_params()?;
    let points = args.points.unwrap_or(21);
    let (parameter, grid, params) = match (&args.sigma_range, &args.label_range) {
        (Some(r), None) => {
            let g = parse_range(r, points, Some(&base))?;
            let p = base.with_sigma(g[0])?;
            for &s in &g {
                base.with_sigma(s)?;
            }
            (Parameter::Sigma, g, p)
        }
        (None, Some(r)) => (Parameter::D, parse_range(r, points, Some(&base))?, cfg.params()?),
        _ => return Err(invalid("give exactly one of --sigma-range and --label-range")),
    };
    let origin = args.seed.origin(Some(&params))?;
    if parameter == Parameter::D && origin.label().is_none() {
        return Err(invalid(format!("origin {} has no shooting label", origin.name())));
    }
    let setup = cfg.shooting(origin, params)?;
    let result = sweep(parameter, &grid, &setup)?;
    let frac = result.indeterminate_fraction();
    summarize_sweep(&result);
    let mut json = result.to_json();
    let mut csv = result.to_csv();
    if let Some(tol) = args.refine {
        let (refined, rows) = refine_transitions(&result, &setup, tol)?;
        json["refined"] = refined;
        csv.push_str(&rows);
    }
    let artifacts = [Artifact::new("classify.csv", csv), Artifact::json("classify.json", &json)];
    deliver(cfg.out.as_deref(), &artifacts, usize::from(cfg.json()))?;
    if frac > 0.5 {
        eprintln!(
            "warning: {:.0}% of the grid is INDETERMINATE; classification unreliable",
            100.0 * frac
        );
        return Ok(Status::Unreliable);
    }
    Ok(Status::Ok)
}

/// Bisects every transition of `s`. Returns the brackets as JSON and extra
/// CSV rows (one per probe that entered P1).
fn refine_transitions(
    s: &sepvar::shooting::Sweep,
    setup: &sepvar::shooting::Shooting,
    tol: f64,
) -> anyhow::Result<(serde_json::Value, String)> {
    if !(tol > 0.0) {
        return Err(invalid(format!("--refine must be positive (got {tol})")));
    }
    let changes = s.transitions();
    let runs = sepvar::par::map(&changes, setup.execution, |t| bisect_transition(s.parameter, t.lo, t.hi, tol, setup));
    let mut out = Vec::new();
    let mut rows = String::new();
    for (t, r) in changes.iter().zip(runs) {
        match r {
            Ok(b) => {
                let hits: Vec<f64> = b
                    .probes
                    .iter()
                    .filter(|p| p.fate == sepvar::shooting::Fate::EntersP1)
                    .map(|p| p.value)
                    .collect();
                eprintln!(
                    "refined {} -> {} to [{}, {}]; ENTERS_P1 probes: {}",
                    b.fate_lo,
                    b.fate_hi,
                    num(b.lo),
                    num(b.hi),
                    hits.len()
                );
                for &v in &hits {
                    let report = setup.probe(s.parameter, v)?;
                    let diag = report.diagnostics.join("; ").replace(['"', ','], " ");
                    let ts = report.terminal_state;
                    writeln!(
                        rows,
                        "{},{},{},{},{},{},{},,\"refined; {diag}\"",
                        num(v),
                        report.fate,
                        num(report.eta_span),
                        num(report.terminal_eta),
                        num(ts[0]),
                        num(ts[1]),
                        num(ts[2]),
                    )?;
                }
                out.push(json!({"bracket": b, "enters_p1": hits}));
            }
            Err(e) => {
                eprintln!("refining [{}, {}] failed: {e}", num(t.lo), num(t.hi));
                out.push(json!({"lo": t.lo, "hi": t.hi, "error": e.to_string(), "code": e.code()}));
            }
        }
    }
    Ok((serde_json::Value::Array(out), rows))
}

fn summarize_sweep(s: &sepvar::shooting::Sweep) {
    let fates = s.fates();
    let mut counts: Vec<(String, usize)> = Vec::new();
    for f in &fates {
        match counts.iter_mut().find(|(n, _)| n == f.name()) {
            Some(c) => c.1 += 1,
            None => counts.push((f.name().to_string(), 1)),
        }
    }
    let parts: Vec<String> = counts.iter().map(|(n, c)| format!("{n}: {c}")).collect();
    eprintln!("{} points; {}", fates.len(), parts.join(", "));
    for t in s.transitions() {
        eprintln!("transition {} -> {} in [{}, {}]", t.fate_lo, t.fate_hi, num(t.lo), num(t.hi));
    }
}

// ---------------------------------------------------------------- bisect

// Unknown keys are rejected by the flattened `OriginArgs`.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct BisectArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: OriginArgs,
    /// SIGMA (default) or D (the shooting label).
    #[arg(long)]
    pub parameter: Option<String>,
    #[arg(long)]
    pub lo: Option<Expr>,
    #[arg(long)]
    pub hi: Option<Expr>,
    /// Final bracket width (default 1e-6).
    #[arg(long)]
    pub tol: Option<f64>,
}

impl Overlay for BisectArgs {
    fn overlay(self, file: Self) -> Self {
        BisectArgs {
            seed: self.seed.overlay(file.seed),
            parameter: self.parameter.or(file.parameter),
            lo: self.lo.or(file.lo),
            hi: self.hi.or(file.hi),
            tol: self.tol.or(file.tol),
        }
    }
}

pub fn bisect(cfg: &RunConfig, args: BisectArgs) -> anyhow::Result<Status> {
    let base = cfg.base_params()?;
    let parameter: Parameter = args.parameter.as_deref().unwrap_or("SIGMA").parse()?;
    let lo = args.lo.as_ref().ok_or_else(|| invalid("missing --lo"))?.eval(Some(&base))?;
    let hi = args.hi.as_ref().ok_or_else(|| invalid("missing --hi"))?.eval(Some(&base))?;
    let params = match parameter {
        Parameter::Sigma => base.with_sigma(lo)?,
        Parameter::D => cfg.params()?,
    };
    let origin = args.seed.origin(Some(&params))?;
    let setup = cfg.shooting(origin, params)?;
    let tol = args.tol.unwrap_or(1e-6);
    let bracket = bisect_transition(parameter, lo, hi, tol, &setup)?;
    eprintln!(
        "{} -> {} in [{}, {}] (width {}, {} probes)",
        bracket.fate_lo,
        bracket.fate_hi,
        num(bracket.lo),
        num(bracket.hi),
        num(bracket.width),
        bracket.probes.len()
    );
    let artifacts = [Artifact::json("bisect.json", &bracket.to_json())];
    deliver(cfg.out.as_deref(), &artifacts, 0)?;
    Ok(Status::Ok)
}

// --------------------------------------------------------------- certify

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CertifyArgs {
    /// Audit a σ grid (`a:b:step` or `a:b` with --points) instead of --sigma.
    #[arg(long)]
    pub sigma_range: Option<String>,
    /// Comma-separated N values for the grid audit (default: --N).
    #[arg(long)]
    pub n_list: Option<String>,
    /// Grid size for two-part ranges (default 21).
    #[arg(long)]
    pub points: Option<usize>,
}

impl Overlay for CertifyArgs {
    fn overlay(self, file: Self) -> Self {
        CertifyArgs {
            sigma_range: self.sigma_range.or(file.sigma_range),
            n_list: self.n_list.or(file.n_list),
            points: self.points.or(file.points),
        }
    }
}

pub fn certify(cfg: &RunConfig, args: CertifyArgs) -> anyhow::Result<Status> {
    let Some(range) = &args.sigma_range else {
        if args.n_list.is_some() {
            return Err(invalid("--n-list needs --sigma-range"));
        }
        let p = cfg.params()?;
        let r = proof_certificates(&p);
        let fails = r.failures().count();
        eprintln!(
            "{} claims, {} in range, {} failing",
            r.claims.len(),
            r.in_range().count(),
            fails
        );
        let artifacts = [Artifact::json("certify.json", &serde_json::to_value(&r)?)];
        deliver(cfg.out.as_deref(), &artifacts, 0)?;
        return Ok(Status::Ok);
    };
    let m = cfg.m.ok_or_else(|| invalid("missing --m"))?;
    let ns: Vec<f64> = match &args.n_list {
        Some(list) => list
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| invalid(format!("bad N value '{v}'"))))
            .collect::<anyhow::Result<_>>()?,
        None => vec![cfg.n.ok_or_else(|| invalid("missing --N or --n-list"))?],
    };
    let mut grid: Vec<ModelParams> = Vec::new();
    for &n in &ns {
        let base = ModelParams::new(m, n, 0.0)?;
        for s in parse_range(range, args.points.unwrap_or(21), Some(&base))? {
            grid.push(base.with_sigma(s)?);
        }
    }
    let reports = sepvar::par::map(&grid, cfg.execution(), proof_certificates);
    let mut csv = format!(
        "# sepvar {VERSION} certify m={} sigma_range={range}\nm,N,sigma,claim,value,expected_sign,pass\n",
        num(m)
    );
    let mut rows = Vec::new();
    let (mut checked, mut failed) = (0usize, 0usize);
    for r in &reports {
        for c in &r.claims {
            checked += usize::from(c.in_range);
            failed += usize::from(c.pass == Verdict::Fail);
            writeln!(
                csv,
                "{},{},{},{},{},{},{}",
                num(r.params.m()),
                num(r.params.n()),
                num(r.params.sigma()),
                c.id,
                num(c.value),
                c.expected_sign.symbol(),
                c.pass.as_str()
            )?;
        }
        rows.push(json!({"params": r.params, "claims": r}));
    }
    eprintln!("{} parameter points, {checked} in-range claims, {failed} failing", reports.len());
    let artifacts = [
        Artifact::new("certify.csv", csv),
        Artifact::json("certify.json", &json!({"tool": "sepvar", "version": VERSION, "grid": rows})),
    ];
    deliver(cfg.out.as_deref(), &artifacts, usize::from(cfg.json()))?;
    Ok(Status::Ok)
}

// --------------------------------------------------------------- profile

// Unknown keys are rejected by the flattened `OriginArgs`.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct ProfileArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: OriginArgs,
    /// |η| span of the reconstructed orbit (default 200).
    #[arg(long)]
    pub span: Option<f64>,
    /// Re-solve the ξ-ODE from a datum on the profile and report the mismatch.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub oracle: Option<bool>,
}

impl Overlay for ProfileArgs {
    fn overlay(self, file: Self) -> Self {
        ProfileArgs {
            seed: self.seed.overlay(file.seed),
            span: self.span.or(file.span),
            oracle: self.oracle.or(file.oracle),
        }
    }
}

/// Seed offset and absolute tolerance for orbits integrated back from P1:
/// the state there is tiny, and the interface is only resolved with an
/// absolute tolerance far below it.
pub const P1_PROFILE_EPSILON: f64 = 1e-8;
pub const P1_PROFILE_ABS_TOL: f64 = 1e-26;

pub fn profile(cfg: &RunConfig, args: ProfileArgs) -> anyhow::Result<Status> {
    let p = cfg.params()?;
    let origin = args.seed.origin(Some(&p))?;
    let mut cfg = cfg.clone();
    if matches!(origin, Origin::P1Backward { .. }) {
        cfg.epsilon = cfg.epsilon.or(Some(P1_PROFILE_EPSILON));
        cfg.abs_tol = cfg.abs_tol.or(Some(P1_PROFILE_ABS_TOL));
    }
    let spec = SeedSpec::new(origin).with_epsilon(cfg.epsilon()?);
    let controls = cfg.controls()?;
    let report = classify_fate_with(&spec, &p, &controls, &cfg.classify_options()?)?;
    let traj = main_orbit(&spec, &p, &controls.with_span(args.span.unwrap_or(200.0)))?;
    let prof = reconstruct_profile(&traj, Some(&report))?;
    eprintln!(
        "fate {}; {} samples on xi in [{}, {}]; start {}, end {}",
        report.fate,
        prof.len(),
        num(prof.xi[0]),
        num(prof.xi[prof.len() - 1]),
        prof.annotations.start.map(|k| k.name()).unwrap_or("-"),
        prof.annotations.end.map(|k| k.name()).unwrap_or("-"),
    );
    let mut meta = prof.to_json(cfg.json());
    meta["tool"] = "sepvar".into();
    meta["fate"] = json!(report.fate);
    if args.oracle.unwrap_or(false) {
        let cc = cross_check(&prof, 1e-3)?;
        eprintln!(
            "oracle: max relative error {} on xi in [{}, {}] ({} points)",
            num(cc.comparison.max_rel_error),
            num(cc.comparison.xi_lo),
            num(cc.comparison.xi_hi),
            cc.comparison.points
        );
        meta["oracle"] = serde_json::to_value(cc)?;
    }
    let artifacts = [Artifact::new("profile.csv", prof.to_csv()), Artifact::json("profile.json", &meta)];
    deliver(cfg.out.as_deref(), &artifacts, usize::from(cfg.json()))?;
    Ok(Status::Ok)
}
