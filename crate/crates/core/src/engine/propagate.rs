use log::warn;

use super::coherence::l1_coherence_in_basis;
use super::model::{CollisionModel, PropagatorKind, SecondOrderGenerator};
use crate::ancilla::CorrelationSet;
use crate::error::{Error, Result};
use crate::qcore::{partial_trace_matrix, pauli, CMatrix, DensityMatrix, NumericalPolicy};
use crate::thermo::{collision_thermo, ThermoRecord};

/// Everything produced by one exact collision.
#[derive(Debug, Clone, PartialEq)]
pub struct CollisionOutcome {
    pub rho_before: DensityMatrix,
    pub eta_in: DensityMatrix,
    pub rho_after: DensityMatrix,
    pub eta_out: DensityMatrix,
    /// `R = ρ ⊗ η`
    pub joint_before: DensityMatrix,
    /// `U R U†`
    pub joint_after: DensityMatrix,
}

/// One collision with a fresh thermal ancilla through the full joint unitary.
pub fn exact_collision(rho: &DensityMatrix, model: &CollisionModel) -> Result<CollisionOutcome> {
    model.check_system_state(rho)?;
    let eta = model.ancilla_state();
    let joint_before = rho.tensor(eta);
    let u = model.unitary().matrix();
    let after = u * joint_before.matrix() * u.adjoint();
    let space = model.joint_space();
    let (sys_factors, env_factors) = model.factor_split();
    let (sys_space, rho_after) = partial_trace_matrix(space, &after, &sys_factors)?;
    let (env_space, eta_out) = partial_trace_matrix(space, &after, &env_factors)?;
    Ok(CollisionOutcome {
        rho_before: rho.clone(),
        eta_in: eta.clone(),
        rho_after: DensityMatrix::from_trusted(sys_space, rho_after),
        eta_out: DensityMatrix::from_trusted(env_space, eta_out),
        joint_before,
        joint_after: DensityMatrix::from_trusted(space.clone(), after),
    })
}

/// One step of the second-order collision map with the given correlations.
///
/// The result is Hermitian with unit trace but need not be positive.
pub fn truncated_step(
    rho: &DensityMatrix,
    model: &CollisionModel,
    corr: &CorrelationSet,
) -> Result<DensityMatrix> {
    model.check_system_state(rho)?;
    let next = if corr == model.correlations() {
        model.second_order_map(rho.matrix())
    } else {
        SecondOrderGenerator::new(model.h_sys(), model.terms(), corr, model.dt())?
            .apply(rho.matrix())
    };
    wrap_unchecked(rho, next)
}

fn wrap_unchecked(rho: &DensityMatrix, m: CMatrix) -> Result<DensityMatrix> {
    let op = crate::qcore::Operator::new(rho.space().clone(), m)?;
    DensityMatrix::hermitian_unit_trace(op, &NumericalPolicy::STANDARD)
}

/// Per-step observables of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    /// `(⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩)` when the system is a qubit.
    pub bloch: Option<[f64; 3]>,
    /// ℓ₁ coherence in the eigenbasis of `H_S`.
    pub c_l1: f64,
}

/// States after 0, 1, …, n collisions, with observables for each and one
/// thermodynamic record per collision when propagated exactly.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub kind: PropagatorKind,
    pub states: Vec<DensityMatrix>,
    /// Empty unless `kind` is [`PropagatorKind::Exact`].
    pub thermo: Vec<ThermoRecord>,
    pub observables: Vec<Observables>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> &DensityMatrix {
        self.states
            .last()
            .expect("a trajectory holds at least the initial state")
    }
}

fn observe(model: &CollisionModel, rho: &DensityMatrix) -> Observables {
    let bloch = (rho.dim() == 2).then(|| pauli::bloch_vector(rho.matrix()));
    Observables {
        bloch,
        c_l1: l1_coherence_in_basis(rho, model.h_sys_eigenbasis()),
    }
}

/// Applies `n` collisions from `rho0` with the chosen propagator.
pub fn run_trajectory(
    model: &CollisionModel,
    rho0: &DensityMatrix,
    n: usize,
    kind: PropagatorKind,
) -> Result<Trajectory> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "a trajectory needs at least one collision".into(),
        ));
    }
    model.check_system_state(rho0)?;
    if kind == PropagatorKind::AnalyticMap && !model.has_analytic_map() {
        return Err(Error::InvalidArgument(
            "this model registers no analytic map".into(),
        ));
    }
    let policy = NumericalPolicy::STANDARD;
    let mut states = Vec::with_capacity(n + 1);
    let mut observables = Vec::with_capacity(n + 1);
    let mut thermo = Vec::new();
    states.push(rho0.clone());
    observables.push(observe(model, rho0));
    let mut warned = false;
    for step in 1..=n {
        let rho = states.last().expect("nonempty");
        let next = match kind {
            PropagatorKind::Exact => {
                let outcome = exact_collision(rho, model)?;
                thermo.push(collision_thermo(&outcome, model)?);
                outcome.rho_after
            }
            _ => {
                let next = wrap_unchecked(rho, model.apply_kind(kind, rho.matrix())?)?;
                let min = next.min_eigenvalue();
                if min < -policy.abort_negativity {
                    return Err(Error::InvalidState(format!(
                        "{kind} propagation left the state space at step {step}: minimum eigenvalue {min:e}"
                    )));
                }
                if min < -policy.warn_negativity && !warned {
                    warn!("{kind} propagation: minimum eigenvalue {min:e} at step {step}");
                    warned = true;
                }
                next
            }
        };
        observables.push(observe(model, &next));
        states.push(next);
    }
    Ok(Trajectory {
        kind,
        states,
        thermo,
        observables,
    })
}
