//! Runs the trajectories and steady-state solves a configuration asks for.

use rayon::prelude::*;

use collision_core::engine::{exact_collision, l1_coherence, run_trajectory, steady_state, CollisionModel, PropagatorKind};
use collision_core::models::{example1_model, example2_model, system_hamiltonian, TwoQubitAncillaParams};
use collision_core::qcore::{gibbs_state, pauli, DensityMatrix};
use collision_core::thermo::collision_thermo;
use collision_core::C64;

use crate::config::{ExperimentConfig, ModelConfig, ModelPreset, OutputKind, Param, Propagator};
use crate::error::CliError;
use crate::table::ResultTable;

pub const TRAJECTORY_COLUMNS: [&str; 5] = ["step", "sx", "sy", "sz", "c_l1"];
pub const TRAJECTORY_THERMO_COLUMNS: [&str; 6] = ["dU", "dQ", "w_sw", "dS", "sigma", "sigma_cumulative"];
pub const THERMO_COLUMNS: [&str; 9] =
    ["step", "dU", "dQ", "w_sw", "dS", "sigma", "sigma_alt", "sigma_cumulative", "first_law_residual"];
pub const STEADY_COLUMNS: [&str; 8] = ["sx", "sy", "sz", "c_l1", "dU_ss", "w_sw_ss", "dQ_ss", "sigma_ss"];

/// Model parameters and run controls of one run point.
#[derive(Debug, Clone, PartialEq)]
struct PointParams {
    model: ModelConfig,
    dt: f64,
}

impl PointParams {
    fn set(&mut self, p: Param, v: f64) {
        let m = &mut self.model;
        match p {
            Param::Beta => m.beta = v,
            Param::BetaSys => m.beta_sys = v,
            Param::Kappa12 => m.kappa12 = v,
            Param::Alpha => m.alpha = v,
            Param::Alpha2 => m.alpha2 = Some(v),
            Param::OmegaS => m.omega_s = v,
            Param::Omega1 => m.omega1 = v,
            Param::Omega2 => m.omega2 = v,
            Param::Dt => self.dt = v,
        }
    }
}

pub fn propagator_kind(p: Propagator) -> PropagatorKind {
    match p {
        Propagator::Exact => PropagatorKind::Exact,
        Propagator::SecondOrder => PropagatorKind::SecondOrder,
        Propagator::Analytic => PropagatorKind::AnalyticMap,
    }
}

/// Builds the collision model a configuration describes.
pub fn build_model(m: &ModelConfig, dt: f64) -> collision_core::Result<CollisionModel> {
    let p = TwoQubitAncillaParams::new(m.omega1, m.omega2, m.kappa12)?;
    let a = C64::new(m.alpha, 0.0);
    match m.preset {
        ModelPreset::Example1 => {
            let a2 = C64::new(m.alpha2.unwrap_or(m.alpha), 0.0);
            example1_model(p, m.omega_s, a, a2, m.beta, dt)
        }
        ModelPreset::Example2 => example2_model(p, m.omega_s, a, m.beta, dt),
    }
}

/// `exp(−β_S H_S)/Z_S`.
pub fn initial_state(m: &ModelConfig) -> collision_core::Result<DensityMatrix> {
    gibbs_state(&system_hamiltonian(m.omega_s)?, m.beta_sys)
}

#[derive(Debug, Default)]
struct PointResult {
    trajectory: Option<ResultTable>,
    thermo: Option<ResultTable>,
    steady: Option<Vec<f64>>,
}

fn wants(cfg: &ExperimentConfig, k: OutputKind) -> bool {
    cfg.run.outputs.contains(&k)
}

fn wants_steady(cfg: &ExperimentConfig) -> bool {
    wants(cfg, OutputKind::SteadyState) || wants(cfg, OutputKind::Sweep)
}

fn point_suffix(point: &[(Param, f64)]) -> String {
    point.iter().map(|(p, v)| format!("_{p}={v}")).collect()
}

fn run_point(cfg: &ExperimentConfig, stem: &str, point: &[(Param, f64)]) -> Result<PointResult, CliError> {
    let mut pp = PointParams { model: cfg.model.clone(), dt: cfg.run.dt };
    for &(p, v) in point {
        pp.set(p, v);
    }
    let context = if point.is_empty() {
        String::new()
    } else {
        format!("sweep point {}", point.iter().map(|(p, v)| format!("{p}={v}")).collect::<Vec<_>>().join(", "))
    };
    let core = |e| CliError::from_core(e, &context);
    let model = build_model(&pp.model, pp.dt).map_err(core)?;
    let kind = propagator_kind(cfg.run.propagator);
    let exact = kind == PropagatorKind::Exact;
    let mut out = PointResult::default();
    let suffix = point_suffix(point);

    if wants(cfg, OutputKind::Trajectory) || wants(cfg, OutputKind::Thermo) {
        let rho0 = initial_state(&pp.model).map_err(core)?;
        let traj = run_trajectory(&model, &rho0, cfg.run.n_collisions, kind).map_err(core)?;
        if wants(cfg, OutputKind::Trajectory) {
            let mut header: Vec<&str> = TRAJECTORY_COLUMNS.to_vec();
            if exact {
                header.extend(TRAJECTORY_THERMO_COLUMNS);
            }
            let mut t = ResultTable::new(format!("trajectory{stem}{suffix}"), "trajectory", &header, cfg, point.to_vec());
            t.int_cols = 1;
            let mut cumulative = 0.0;
            for (i, obs) in traj.observables.iter().enumerate() {
                let b = obs.bloch.unwrap_or([f64::NAN; 3]);
                let mut row = vec![i as f64, b[0], b[1], b[2], obs.c_l1];
                if exact {
                    match i.checked_sub(1).map(|k| &traj.thermo[k]) {
                        Some(r) => {
                            cumulative += r.sigma;
                            row.extend([r.du, r.dq, r.w_sw, r.ds_sys, r.sigma, cumulative]);
                        }
                        None => row.extend([0.0; 6]),
                    }
                }
                t.push(row);
            }
            out.trajectory = Some(t);
        }
        if wants(cfg, OutputKind::Thermo) {
            let mut t = ResultTable::new(format!("thermo{stem}{suffix}"), "thermo", &THERMO_COLUMNS, cfg, point.to_vec());
            t.int_cols = 1;
            let mut cumulative = 0.0;
            for (i, r) in traj.thermo.iter().enumerate() {
                cumulative += r.sigma;
                t.push(vec![
                    (i + 1) as f64,
                    r.du,
                    r.dq,
                    r.w_sw,
                    r.ds_sys,
                    r.sigma,
                    r.sigma_alt,
                    cumulative,
                    r.first_law_residual,
                ]);
            }
            out.thermo = Some(t);
        }
    }

    if wants_steady(cfg) {
        let state = steady_state(&model, kind).map_err(core)?;
        // Energetics of one further exact collision from the fixed point.
        let rec = collision_thermo(&exact_collision(&state, &model).map_err(core)?, &model).map_err(core)?;
        let b = pauli::bloch_vector(state.matrix());
        let mut row: Vec<f64> = point.iter().map(|&(_, v)| v).collect();
        row.extend([b[0], b[1], b[2], l1_coherence(&state), rec.du, rec.w_sw, rec.dq, rec.sigma]);
        out.steady = Some(row);
    }
    Ok(out)
}

/// Runs every point of the experiment. Sweep points run concurrently;
/// tables come back in sweep order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultTable>, CliError> {
    let mut tables = Vec::new();
    if cfg.sweep.is_empty() {
        let res = run_point(cfg, "", &[])?;
        tables.extend(res.trajectory);
        tables.extend(res.thermo);
        if let Some(row) = res.steady {
            let mut t = ResultTable::new("steady_state".into(), "steady_state", &STEADY_COLUMNS, cfg, vec![]);
            t.push(row);
            tables.push(t);
        }
        return Ok(tables);
    }

    for sweep in &cfg.sweep {
        let label = sweep.label();
        let stem = format!("_{label}");
        let series: Vec<Option<f64>> = if sweep.series_values.is_empty() {
            vec![None]
        } else {
            sweep.series_values.iter().copied().map(Some).collect()
        };
        let points: Vec<Vec<(Param, f64)>> = series
            .iter()
            .flat_map(|s| {
                sweep.values.iter().map(move |&v| {
                    let mut p = Vec::with_capacity(2);
                    if let (Some(sp), Some(sv)) = (sweep.series, s) {
                        p.push((sp, *sv));
                    }
                    p.push((sweep.param, v));
                    p
                })
            })
            .collect();
        let results: Vec<Result<PointResult, CliError>> =
            points.par_iter().map(|p| run_point(cfg, &stem, p)).collect();

        let mut header: Vec<&str> = sweep.series.iter().map(|p| p.name()).collect();
        header.push(sweep.param.name());
        header.extend(STEADY_COLUMNS);
        let mut steady = ResultTable::new(format!("steady_state{stem}"), "steady_state", &header, cfg, vec![]);
        for res in results {
            let res = res?;
            tables.extend(res.trajectory);
            tables.extend(res.thermo);
            if let Some(row) = res.steady {
                steady.push(row);
            }
        }
        if wants_steady(cfg) {
            tables.push(steady);
        }
    }
    Ok(tables)
}
