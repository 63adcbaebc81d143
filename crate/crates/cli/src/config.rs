//! Run configuration: a JSON file (`--config`) overlaid by command-line flags.
//!
//! The file holds the common keys at top level and command-specific keys in
//! a section named after the command, e.g.
//! `{"m": 2, "N": 4, "classify": {"origin": "P2", "sigma_range": "0.1:0.85:0.05"}}`.
//! Every flag that is given wins over the file.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer};
use thiserror::Error;

use sepvar::integrate::IntegrationControls;
use sepvar::model::sigma_c;
use sepvar::shooting::{ClassifyOptions, Origin, Shooting, DEFAULT_EPSILON};
use sepvar::ModelParams;

/// Configuration or usage problems detected by the CLI itself (exit code 2).
#[derive(Debug, Error)]
#[error("INVALID_INPUT: {0}")]
pub struct InputError(pub String);

pub fn invalid(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

/// Overlay: `self` (flags) wins, `file` fills the gaps.
pub trait Overlay {
    fn overlay(self, file: Self) -> Self;
}

macro_rules! overlay {
    ($ty:ty { $($field:ident),* $(,)? }) => {
        impl Overlay for $ty {
            fn overlay(self, file: Self) -> Self {
                Self { $($field: self.$field.or(file.$field)),* }
            }
        }
    };
}

/// A number given as a literal, a ratio `a/b`, or with the tokens `pi` and
/// `sigma_c` (also `σ_c`), e.g. `6/7`, `pi/4`, `sigma_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr(String);

impl Expr {
    pub fn eval(&self, ctx: Option<&ModelParams>) -> anyhow::Result<f64> {
        let term = |t: &str| -> anyhow::Result<f64> {
            let t = t.trim();
            match t {
                "pi" | "π" => Ok(PI),
                "sigma_c" | "σ_c" | "σc" => ctx
                    .map(|p| sigma_c(p.m(), p.n()))
                    .ok_or_else(|| invalid(format!("'{t}' needs --m and --N"))),
                _ => t
                    .parse::<f64>()
                    .map_err(|_| invalid(format!("cannot read '{t}' as a number"))),
            }
        };
        let v = match self.0.split_once('/') {
            Some((a, b)) => term(a)? / term(b)?,
            None => term(&self.0)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(invalid(format!("'{}' is not a finite number", self.0)))
        }
    }
}

impl FromStr for Expr {
    type Err = std::convert::Infallible;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Expr(s.to_string()))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::Num(v) => Expr(format!("{v:?}")),
            Raw::Text(s) => Expr(s),
        })
    }
}

/// `a:b:step` (inclusive of `b` up to rounding) or `a:b` with `points`
/// evenly spaced values.
pub fn parse_range(text: &str, points: usize, ctx: Option<&ModelParams>) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<Expr> = text.split(':').map(|s| Expr(s.to_string())).collect();
    let (a, b) = match parts.as_slice() {
        [a, b] | [a, b, _] => (a.eval(ctx)?, b.eval(ctx)?),
        _ => return Err(invalid(format!("range '{text}' must be a:b or a:b:step"))),
    };
    if b < a {
        return Err(invalid(format!("range '{text}' is decreasing")));
    }
    let grid = if let [_, _, step] = parts.as_slice() {
        let h = step.eval(ctx)?;
        if !(h > 0.0) {
            return Err(invalid(format!("range step must be positive (got {h})")));
        }
        let n = ((b - a) / h + 1e-9).floor() as usize;
        if n > 1_000_000 {
            return Err(invalid(format!("range '{text}' has too many points")));
        }
        (0..=n).map(|k| a + k as f64 * h).collect()
    } else {
        if points < 2 {
            return Err(invalid("--points must be at least 2"));
        }
        (0..points)
            .map(|k| a + (b - a) * k as f64 / (points - 1) as f64)
            .collect()
    };
    Ok(grid)
}

/// Options shared by every command.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Diffusion exponent m > 1.
    #[arg(long, global = true)]
    pub m: Option<f64>,
    /// Dimension N > 1 (real values allowed).
    #[arg(long = "N", global = true)]
    #[serde(rename = "N")]
    pub n: Option<f64>,
    /// Weight exponent sigma >= 0 (accepts `6/7`, `sigma_c`).
    #[arg(long, global = true)]
    pub sigma: Option<Expr>,
    /// Relative tolerance of the integrator.
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Absolute tolerance of the integrator.
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    /// Maximal |eta| span of an integration.
    #[arg(long, global = true)]
    pub max_span: Option<f64>,
    /// Distance of the seed from its critical point.
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Radius of the final P1/P3 entry ball (the most result-sensitive knob).
    #[arg(long, global = true)]
    pub ball_radius: Option<f64>,
    /// Radius of the node balls at infinity.
    #[arg(long, global = true)]
    pub node_radius: Option<f64>,
    /// Run sweeps on one thread.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub sequential: Option<bool>,
    /// Output directory; results go to stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Emit JSON instead of text/CSV on stdout.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub json: Option<bool>,
}

overlay!(RunConfig {
    m,
    n,
    sigma,
    rel_tol,
    abs_tol,
    max_span,
    epsilon,
    ball_radius,
    node_radius,
    sequential,
    out,
    json
});

impl RunConfig {
    pub fn json(&self) -> bool {
        self.json.unwrap_or(false)
    }

    /// `(m, N)` without σ, for range expressions.
    pub fn base_params(&self) -> anyhow::Result<ModelParams> {
        let m = self.m.ok_or_else(|| invalid("missing --m"))?;
        let n = self.n.ok_or_else(|| invalid("missing --N"))?;
        Ok(ModelParams::new(m, n, 0.0)?)
    }

    /// Validated `(m, N, σ)`.
    pub fn params(&self) -> anyhow::Result<ModelParams> {
        let base = self.base_params()?;
        let sigma = self
            .sigma
            .as_ref()
            .ok_or_else(|| invalid("missing --sigma"))?
            .eval(Some(&base))?;
        Ok(base.with_sigma(sigma)?)
    }

    pub fn controls(&self) -> anyhow::Result<IntegrationControls> {
        let d = IntegrationControls::default();
        let c = IntegrationControls {
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            max_span: self.max_span.unwrap_or(d.max_span),
            ..d
        };
        c.validate()?;
        Ok(c)
    }

    pub fn classify_options(&self) -> anyhow::Result<ClassifyOptions> {
        let d = ClassifyOptions::default();
        let o = ClassifyOptions {
            ball_radius: self.ball_radius.unwrap_or(d.ball_radius),
            node_radius: self.node_radius.unwrap_or(d.node_radius),
            ..d
        };
        o.validate()?;
        Ok(o)
    }

    pub fn epsilon(&self) -> anyhow::Result<f64> {
        let e = self.epsilon.unwrap_or(DEFAULT_EPSILON);
        if e > 0.0 && e < 1.0 {
            Ok(e)
        } else {
            Err(invalid(format!("--epsilon must lie in (0, 1) (got {e})")))
        }
    }

    pub fn execution(&self) -> sepvar::par::Execution {
        if self.sequential.unwrap_or(false) {
            sepvar::par::Execution::Sequential
        } else {
            sepvar::par::Execution::Parallel
        }
    }

    pub fn shooting(&self, origin: Origin, params: ModelParams) -> anyhow::Result<Shooting> {
        let mut s = Shooting::new(origin, params);
        s.epsilon = self.epsilon()?;
        s.controls = self.controls()?;
        s.options = self.classify_options()?;
        s.execution = self.execution();
        Ok(s)
    }
}

/// Seed selection shared by the orbit commands.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OriginArgs {
    /// P2 (P2_E3), P0, Q1, P1, Q5 or NEAR_P3.
    #[arg(long)]
    pub origin: Option<String>,
    /// Shooting label: theta (P0), phi (Q1, Q5) or D (P1). Defaults: pi/4, pi/4, 1.
    #[arg(long)]
    pub label: Option<Expr>,
    /// NEAR_P3 start: X coordinate.
    #[arg(long)]
    pub x0: Option<f64>,
    /// NEAR_P3 start: offset of Z from 1.
    #[arg(long)]
    pub r0: Option<f64>,
}

overlay!(OriginArgs { origin, label, x0, r0 });

pub fn parse_origin_name(name: &str) -> anyhow::Result<Origin> {
    let o = match name.to_ascii_uppercase().replace('-', "_").as_str() {
        "P2" | "P2_E3" => Origin::P2E3,
        "P0" | "P0_UNSTABLE" => Origin::P0Unstable { theta: PI / 4.0 },
        "Q1" | "Q1_OUT" => Origin::Q1Out { phi: PI / 4.0 },
        "P1" | "P1_BACKWARD" => Origin::P1Backward { d: 1.0 },
        "Q5" | "Q5_OUT" => Origin::Q5Out { phi: PI / 4.0 },
        "NEAR_P3" | "P3" => Origin::NearP3 { x0: 0.01, r0: 0.0 },
        _ => {
            return Err(invalid(format!(
                "unknown origin '{name}' (P2, P0, Q1, P1, Q5, NEAR_P3)"
            )))
        }
    };
    Ok(o)
}

impl OriginArgs {
    pub fn origin(&self, ctx: Option<&ModelParams>) -> anyhow::Result<Origin> {
        let name = self.origin.as_deref().ok_or_else(|| invalid("missing --origin"))?;
        let mut o = parse_origin_name(name)?;
        if let Origin::NearP3 { x0, r0 } = o {
            o = Origin::NearP3 {
                x0: self.x0.unwrap_or(x0),
                r0: self.r0.unwrap_or(r0),
            };
        } else if self.x0.is_some() || self.r0.is_some() {
            return Err(invalid("--x0/--r0 apply to NEAR_P3 only"));
        }
        if let Some(l) = &self.label {
            o = o.with_label(l.eval(ctx)?)?;
        }
        Ok(o)
    }
}

/// Reads `--config`: the common part and the raw section of `command`.
pub fn read_config_file(path: &Path, command: &str) -> anyhow::Result<(RunConfig, serde_json::Value)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
    let mut value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| invalid(format!("config {} is not valid JSON: {e}", path.display())))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| invalid("config file must hold a JSON object"))?;
    let mut section = serde_json::Value::Object(Default::default());
    for name in crate::COMMANDS {
        if let Some(v) = obj.remove(*name) {
            if *name == command {
                section = v;
            }
        }
    }
    let common: RunConfig = serde_json::from_value(value)
        .map_err(|e| invalid(format!("config {}: {e}", path.display())))?;
    Ok((common, section))
}

/// Deserializes the section of a command. Keys must be argument ids of the
/// command (`serde(flatten)` would otherwise drop misspelt keys silently).
pub fn section<T: DeserializeOwned + Default + Args>(raw: serde_json::Value, command: &str) -> anyhow::Result<T> {
    let Some(obj) = raw.as_object() else {
        return Err(invalid(format!("config section '{command}' must be a JSON object")));
    };
    if obj.is_empty() {
        return Ok(T::default());
    }
    let cmd = T::augment_args(clap::Command::new("section"));
    let known: Vec<&str> = cmd.get_arguments().map(|a| a.get_id().as_str()).collect();
    if let Some(k) = obj.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(invalid(format!(
            "config section '{command}': unknown key '{k}' (expected one of {})",
            known.join(", ")
        )));
    }
    serde_json::from_value(raw).map_err(|e| invalid(format!("config section '{command}': {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expressions() {
        let p = ModelParams::new(2.0, 4.0, 0.0).unwrap();
        assert_eq!(Expr("0.5".into()).eval(None).unwrap(), 0.5);
        assert_eq!(Expr("6/7".into()).eval(None).unwrap(), 6.0 / 7.0);
        assert_eq!(Expr("pi/4".into()).eval(None).unwrap(), PI / 4.0);
        assert_eq!(Expr("sigma_c".into()).eval(Some(&p)).unwrap(), 6.0 / 7.0);
        assert!(Expr("sigma_c".into()).eval(None).is_err());
        assert!(Expr("x".into()).eval(None).is_err());
        assert!(Expr("1/0".into()).eval(None).is_err());
    }

    #[test]
    fn ranges() {
        let g = parse_range("0.1:0.85:0.05", 0, None).unwrap();
        assert_eq!(g.len(), 16);
        assert!((g[15] - 0.85).abs() < 1e-12);
        let p = ModelParams::new(2.0, 2.0, 0.0).unwrap();
        let g = parse_range("0.1:σ_c", 5, Some(&p)).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g[4], 2.0 / 7.0);
        assert!(parse_range("1:0", 5, None).is_err());
        assert!(parse_range("0:1:-1", 5, None).is_err());
        assert!(parse_range("0", 5, None).is_err());
    }

    #[test]
    fn flags_win_over_file() {
        let flags = RunConfig {
            m: Some(3.0),
            ..Default::default()
        };
        let file = RunConfig {
            m: Some(2.0),
            n: Some(4.0),
            ..Default::default()
        };
        let c = flags.overlay(file);
        assert_eq!((c.m, c.n), (Some(3.0), Some(4.0)));
    }

    #[test]
    fn section_keys_are_checked() {
        let ok: OriginArgs = section(serde_json::json!({"origin": "P1", "label": 2.0}), "profile").unwrap();
        assert_eq!(ok.origin.as_deref(), Some("P1"));
        assert_eq!(ok.label, Some(Expr("2.0".into())));
        let bad = section::<OriginArgs>(serde_json::json!({"orign": "P1"}), "profile");
        assert!(bad.unwrap_err().to_string().contains("orign"));
    }

    #[test]
    fn origins() {
        assert_eq!(parse_origin_name("p2").unwrap(), Origin::P2E3);
        assert_eq!(parse_origin_name("P1").unwrap(), Origin::P1Backward { d: 1.0 });
        assert!(parse_origin_name("P7").is_err());
        let a = OriginArgs {
            origin: Some("Q1".into()),
            label: Some(Expr("pi/3".into())),
            ..Default::default()
        };
        assert_eq!(a.origin(None).unwrap(), Origin::Q1Out { phi: PI / 3.0 });
    }
}
