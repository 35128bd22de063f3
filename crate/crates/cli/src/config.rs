//! Experiment configuration: TOML sections `[model]`, `[run]`, `[sweep]`, `[output]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::CliError;

/// First line of the configuration block echoed into every emitted table.
pub const ECHO_BEGIN: &str = "# simulate configuration";
/// Last line of the echoed configuration block.
pub const ECHO_END: &str = "# end configuration";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelPreset {
    Example1,
    Example2,
}

impl FromStr for ModelPreset {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "example1" => Ok(Self::Example1),
            "example2" => Ok(Self::Example2),
            _ => Err(format!("unknown model preset `{s}` (expected example1 or example2)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Propagator {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "second-order")]
    SecondOrder,
    #[serde(rename = "analytic")]
    Analytic,
}

impl FromStr for Propagator {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(Self::Exact),
            "second-order" => Ok(Self::SecondOrder),
            "analytic" => Ok(Self::Analytic),
            _ => Err(format!("unknown propagator `{s}` (expected exact, second-order or analytic)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Trajectory,
    Thermo,
    SteadyState,
    /// Same table as `steady_state`.
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(format!("unknown format `{s}` (expected csv or json)")),
        }
    }
}

/// Model parameters that a sweep may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    Beta,
    BetaSys,
    Kappa12,
    Alpha,
    Alpha2,
    OmegaS,
    Omega1,
    Omega2,
    Dt,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::Beta => "beta",
            Param::BetaSys => "beta_sys",
            Param::Kappa12 => "kappa12",
            Param::Alpha => "alpha",
            Param::Alpha2 => "alpha2",
            Param::OmegaS => "omega_s",
            Param::Omega1 => "omega1",
            Param::Omega2 => "omega2",
            Param::Dt => "dt",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub preset: ModelPreset,
    pub omega_s: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub kappa12: f64,
    /// Coupling strength; the first ancilla qubit's coupling for `example1`.
    pub alpha: f64,
    /// Second ancilla qubit's coupling (`example1` only); defaults to `alpha`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha2: Option<f64>,
    /// Ancilla inverse temperature.
    pub beta: f64,
    /// Inverse temperature of the initial thermal system state.
    pub beta_sys: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            preset: ModelPreset::Example2,
            omega_s: 1.0,
            omega1: 0.5,
            omega2: 1.5,
            kappa12: 0.3,
            alpha: 0.1,
            alpha2: None,
            beta: 1.0,
            beta_sys: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub dt: f64,
    pub n_collisions: usize,
    pub propagator: Propagator,
    pub outputs: Vec<OutputKind>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { dt: 0.1, n_collisions: 2000, propagator: Propagator::Exact, outputs: vec![OutputKind::Trajectory] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Used in output file names; defaults to the parameter name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub param: Param,
    pub values: Vec<f64>,
    /// Optional outer axis, one curve per value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<Param>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub series_values: Vec<f64>,
}

impl SweepConfig {
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.param.name().to_string())
    }

    pub fn len(&self) -> usize {
        self.values.len() * self.series_values.len().max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub format: Format,
    /// Output directory; standard output when absent. Not echoed into tables.
    #[serde(skip_serializing)]
    pub dir: Option<String>,
}

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub model: ModelConfig,
    #[serde(default)]
    pub run: RunConfig,
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<SweepConfig>, D::Error> {
    // Either `[sweep]` or `[[sweep]]`.
    let value = toml::Value::deserialize(d)?;
    let res = match &value {
        toml::Value::Array(_) => Vec::<SweepConfig>::deserialize(value),
        _ => SweepConfig::deserialize(value).map(|s| vec![s]),
    };
    res.map_err(serde::de::Error::custom)
}

/// Parses a configuration document and validates it.
///
/// A table emitted by this tool is also accepted: its echoed configuration
/// block is extracted and parsed.
pub fn parse_config(source: &str) -> Result<ExperimentConfig, CliError> {
    let cfg = parse_unchecked(source)?;
    validate(&cfg, &config_text(source))?;
    Ok(cfg)
}

/// The configuration text itself: the echoed block of an emitted table, or `source`.
pub fn config_text(source: &str) -> String {
    extract_echo(source).unwrap_or_else(|| source.to_string())
}

pub(crate) fn parse_unchecked(source: &str) -> Result<ExperimentConfig, CliError> {
    let text = config_text(source);
    toml::from_str(&text).map_err(|e| {
        let msg = e.message().trim_end().to_string();
        match e.span() {
            Some(span) => {
                let line = text[..span.start.min(text.len())].matches('\n').count() + 1;
                CliError::Config(format!("line {line}: {msg}"))
            }
            None => CliError::Config(msg),
        }
    })
}

fn extract_echo(source: &str) -> Option<String> {
    let mut lines = source.lines();
    if lines.next()? != ECHO_BEGIN {
        return None;
    }
    let mut out = String::new();
    for line in lines {
        if line == ECHO_END {
            return Some(out);
        }
        let body = line.strip_prefix("# ").or_else(|| line.strip_prefix('#'))?;
        out.push_str(body);
        out.push('\n');
    }
    None
}

/// The resolved configuration as TOML text.
pub fn to_toml(cfg: &ExperimentConfig) -> String {
    toml::to_string(cfg).expect("configuration serialises")
}

fn key_error(source: &str, key: &str, msg: String) -> CliError {
    match line_of(source, key) {
        Some(line) => CliError::Config(format!("line {line}: `{key}`: {msg}")),
        None => CliError::Config(format!("`{key}`: {msg}")),
    }
}

fn line_of(source: &str, key: &str) -> Option<usize> {
    source.lines().position(|l| {
        let t = l.trim_start();
        t.strip_prefix(key).is_some_and(|rest| rest.trim_start().starts_with('='))
    })
    .map(|i| i + 1)
}

/// Checks the invariants; `source` is only used to locate offending keys.
pub fn validate(cfg: &ExperimentConfig, source: &str) -> Result<(), CliError> {
    let m = &cfg.model;
    let r = &cfg.run;
    let positive = |key: &str, x: f64| {
        if x > 0.0 && x.is_finite() {
            Ok(())
        } else {
            Err(key_error(source, key, format!("must be finite and > 0, got {x}")))
        }
    };
    let nonneg = |key: &str, x: f64| {
        if x >= 0.0 && x.is_finite() {
            Ok(())
        } else {
            Err(key_error(source, key, format!("must be finite and ≥ 0, got {x}")))
        }
    };
    let finite = |key: &str, x: f64| {
        if x.is_finite() {
            Ok(())
        } else {
            Err(key_error(source, key, format!("must be finite, got {x}")))
        }
    };
    positive("dt", r.dt)?;
    if r.n_collisions < 1 {
        return Err(key_error(source, "n_collisions", "must be ≥ 1".into()));
    }
    positive("omega_s", m.omega_s)?;
    positive("omega1", m.omega1)?;
    positive("omega2", m.omega2)?;
    finite("kappa12", m.kappa12)?;
    finite("alpha", m.alpha)?;
    if let Some(a2) = m.alpha2 {
        if m.preset != ModelPreset::Example1 {
            return Err(key_error(source, "alpha2", "only applies to example1".into()));
        }
        finite("alpha2", a2)?;
    }
    nonneg("beta", m.beta)?;
    nonneg("beta_sys", m.beta_sys)?;
    if r.propagator == Propagator::Analytic && m.preset != ModelPreset::Example2 {
        return Err(key_error(source, "propagator", "the analytic map exists only for example2".into()));
    }
    if r.outputs.is_empty() {
        return Err(key_error(source, "outputs", "at least one output is required".into()));
    }
    if r.outputs.contains(&OutputKind::Thermo) && r.propagator != Propagator::Exact {
        return Err(key_error(source, "outputs", "thermo output needs the exact propagator".into()));
    }

    let mut names = Vec::new();
    for s in &cfg.sweep {
        if s.values.is_empty() {
            return Err(key_error(source, "values", format!("sweep over {} has no values", s.param)));
        }
        if s.series.is_some() != !s.series_values.is_empty() {
            return Err(key_error(source, "series_values", "`series` and `series_values` go together".into()));
        }
        if s.series == Some(s.param) {
            return Err(key_error(source, "series", format!("series repeats the swept parameter {}", s.param)));
        }
        if (s.param == Param::Alpha2 || s.series == Some(Param::Alpha2)) && m.preset != ModelPreset::Example1 {
            return Err(key_error(source, "param", "alpha2 only applies to example1".into()));
        }
        let label = s.label();
        if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            return Err(key_error(source, "name", format!("sweep name `{label}` must be [A-Za-z0-9_-]+")));
        }
        if names.contains(&label) {
            return Err(key_error(source, "name", format!("duplicate sweep name `{label}`")));
        }
        names.push(label);
        let axes = std::iter::once((s.param, &s.values)).chain(s.series.map(|p| (p, &s.series_values)));
        for (p, values) in axes {
            for &v in values.iter() {
                let key = p.name();
                match p {
                    Param::Dt | Param::OmegaS | Param::Omega1 | Param::Omega2 => positive(key, v)?,
                    Param::Beta | Param::BetaSys => nonneg(key, v)?,
                    Param::Kappa12 | Param::Alpha | Param::Alpha2 => finite(key, v)?,
                }
            }
        }
    }
    Ok(())
}

/// Built-in figure presets, also shipped as files under `presets/`.
pub const FIGURE_PRESETS: [(&str, &str); 5] = [
    ("fig3", include_str!("../presets/fig3.toml")),
    ("fig4", include_str!("../presets/fig4.toml")),
    ("fig5", include_str!("../presets/fig5.toml")),
    ("fig6", include_str!("../presets/fig6.toml")),
    ("fig7", include_str!("../presets/fig7.toml")),
];

pub fn figure_preset(name: &str) -> Option<&'static str> {
    FIGURE_PRESETS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}
