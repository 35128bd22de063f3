//! Batch front end: configuration, sweeps and table emission.

pub mod config;
pub mod error;
pub mod run;
pub mod table;

pub use config::{parse_config, ExperimentConfig, Format, ModelPreset, Propagator};
pub use error::CliError;
pub use run::run_experiment;
pub use table::{emit, parse_csv, ResultTable};

/// Command-line values that replace configuration keys.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub preset: Option<ModelPreset>,
    pub steps: Option<usize>,
    pub beta: Option<f64>,
    pub kappa: Option<f64>,
    pub dt: Option<f64>,
    pub propagator: Option<Propagator>,
    pub format: Option<Format>,
    pub out: Option<String>,
}

/// Parses `source`, applies the overrides and validates the result.
pub fn resolve_config(source: &str, o: &Overrides) -> Result<ExperimentConfig, CliError> {
    let mut cfg = config::parse_unchecked(source)?;
    if let Some(p) = o.preset {
        cfg.model.preset = p;
    }
    if let Some(n) = o.steps {
        cfg.run.n_collisions = n;
    }
    if let Some(b) = o.beta {
        cfg.model.beta = b;
    }
    if let Some(k) = o.kappa {
        cfg.model.kappa12 = k;
    }
    if let Some(dt) = o.dt {
        cfg.run.dt = dt;
    }
    if let Some(p) = o.propagator {
        cfg.run.propagator = p;
    }
    if let Some(f) = o.format {
        cfg.output.format = f;
    }
    if let Some(d) = &o.out {
        cfg.output.dir = Some(d.clone());
    }
    config::validate(&cfg, &config::config_text(source))?;
    Ok(cfg)
}
