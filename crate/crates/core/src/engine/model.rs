use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::ancilla::{
    correlation_set_in_state, CorrelationSet, InteractionTerm, StructuredAncilla,
};
use crate::error::{Error, Result};
use crate::qcore::{
    collision_unitary, hermitian_eig, partial_trace_matrix, tensor_product, CMatrix, DensityMatrix,
    HilbertSpace, NumericalPolicy, Operator, SpectralDecomposition,
};

/// A model-specific closed-form one-collision map acting on system matrices.
///
/// The map must be linear in the matrix it acts on; the steady-state solver
/// vectorises it.
pub trait AnalyticMap: fmt::Debug + Send + Sync {
    fn apply(&self, rho: &CMatrix) -> CMatrix;
}

/// Which one-collision map to iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PropagatorKind {
    /// Partial trace of the exact joint unitary.
    Exact,
    /// The master-equation map truncated at second order in δt.
    SecondOrder,
    /// A closed-form map registered by the model.
    AnalyticMap,
}

impl fmt::Display for PropagatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PropagatorKind::Exact => "exact",
            PropagatorKind::SecondOrder => "second-order",
            PropagatorKind::AnalyticMap => "analytic",
        })
    }
}

/// A system, a structured ancilla, their couplings, the ancilla temperature
/// and the collision time. Every derived quantity (joint Hamiltonians, the
/// collision unitary, the fresh ancilla state and its correlation set) is
/// computed once at construction.
#[derive(Debug, Clone)]
pub struct CollisionModel {
    h_sys: Operator,
    ancilla: StructuredAncilla,
    terms: Vec<InteractionTerm>,
    beta: f64,
    dt: f64,

    eta: DensityMatrix,
    corr: CorrelationSet,
    generator: SecondOrderGenerator,
    h_sys_eig: SpectralDecomposition,
    joint_space: HilbertSpace,
    h_s_joint: Operator,
    h_e_joint: Operator,
    h_se: Operator,
    unitary: Operator,
    analytic: Option<Arc<dyn AnalyticMap>>,
}

impl CollisionModel {
    pub fn new(
        h_sys: Operator,
        ancilla: StructuredAncilla,
        terms: Vec<InteractionTerm>,
        beta: f64,
        dt: f64,
    ) -> Result<Self> {
        let policy = NumericalPolicy::STANDARD;
        if !(dt >= 0.0) || !dt.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "collision time must be finite and ≥ 0, got {dt}"
            )));
        }
        if !h_sys.is_hermitian(policy.algebraic * h_sys.max_abs().max(1.0)) {
            return Err(Error::InvalidArgument(
                "system Hamiltonian is not Hermitian".into(),
            ));
        }
        let sys_dim = h_sys.dim();
        let env_dim = ancilla.space.total_dim();
        for t in &terms {
            if t.a_sys.dim() != sys_dim || t.b_env.dim() != env_dim {
                return Err(Error::InvalidArgument(format!(
                    "interaction term '{}' has shapes ({}, {}), expected ({sys_dim}, {env_dim})",
                    t.label,
                    t.a_sys.dim(),
                    t.b_env.dim()
                )));
            }
        }
        // Re-tag term operators with the model's spaces so joint products line up.
        let terms = terms
            .into_iter()
            .map(|t| {
                Ok(InteractionTerm {
                    a_sys: t.a_sys.with_space(h_sys.space().clone())?,
                    b_env: t.b_env.with_space(ancilla.space.clone())?,
                    label: t.label,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let joint_space = h_sys.space().join(&ancilla.space);
        let id_s = Operator::identity(h_sys.space());
        let id_e = Operator::identity(&ancilla.space);
        let h_s_joint = tensor_product(&h_sys, &id_e);
        let h_e_joint = tensor_product(&id_s, &ancilla.h_total);
        let mut h_se = Operator::zeros(&joint_space);
        for t in &terms {
            h_se = &h_se + &tensor_product(&t.a_sys, &t.b_env);
        }
        let defect = h_se.hermiticity_defect();
        if defect > policy.algebraic {
            return Err(Error::InvalidArgument(format!(
                "system–ancilla Hamiltonian is not Hermitian (‖H−H†‖_max = {defect:e})"
            )));
        }
        let h_total = &(&h_s_joint + &h_e_joint) + &h_se;
        let unitary = collision_unitary(&h_total, dt)?;

        let eta = ancilla.thermal_state(beta)?;
        let corr = correlation_set_in_state(&ancilla, &terms, &eta)?;
        let generator = SecondOrderGenerator::new(&h_sys, &terms, &corr, dt)?;
        let h_sys_eig = hermitian_eig(&h_sys)?;

        Ok(Self {
            h_sys,
            ancilla,
            terms,
            beta,
            dt,
            eta,
            corr,
            generator,
            h_sys_eig,
            joint_space,
            h_s_joint,
            h_e_joint,
            h_se,
            unitary,
            analytic: None,
        })
    }

    /// Registers a closed-form map for [`PropagatorKind::AnalyticMap`].
    pub fn with_analytic_map(mut self, map: Arc<dyn AnalyticMap>) -> Self {
        self.analytic = Some(map);
        self
    }

    pub fn h_sys(&self) -> &Operator {
        &self.h_sys
    }

    pub fn ancilla(&self) -> &StructuredAncilla {
        &self.ancilla
    }

    pub fn terms(&self) -> &[InteractionTerm] {
        &self.terms
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// The fresh ancilla state `e^{−βH_E}/Z`.
    pub fn ancilla_state(&self) -> &DensityMatrix {
        &self.eta
    }

    /// Correlations of the interaction terms in the fresh ancilla state.
    pub fn correlations(&self) -> &CorrelationSet {
        &self.corr
    }

    pub fn system_space(&self) -> &HilbertSpace {
        self.h_sys.space()
    }

    pub fn system_dim(&self) -> usize {
        self.h_sys.dim()
    }

    pub fn joint_space(&self) -> &HilbertSpace {
        &self.joint_space
    }

    /// `H_S ⊗ 1`
    pub fn h_s_joint(&self) -> &Operator {
        &self.h_s_joint
    }

    /// `1 ⊗ H_E`
    pub fn h_e_joint(&self) -> &Operator {
        &self.h_e_joint
    }

    /// `Σ A ⊗ B`
    pub fn h_se(&self) -> &Operator {
        &self.h_se
    }

    pub fn unitary(&self) -> &Operator {
        &self.unitary
    }

    pub fn has_analytic_map(&self) -> bool {
        self.analytic.is_some()
    }

    pub(crate) fn h_sys_eigenbasis(&self) -> &CMatrix {
        &self.h_sys_eig.eigenvectors
    }

    /// The exact channel `X ↦ Tr_E[U (X ⊗ η) U†]` on arbitrary system matrices.
    pub(crate) fn exact_map(&self, x: &CMatrix) -> CMatrix {
        let joint = x.kronecker(self.eta.matrix());
        let u = self.unitary.matrix();
        let evolved = u * joint * u.adjoint();
        let (sys_factors, _) = self.factor_split();
        let (_, reduced) = partial_trace_matrix(&self.joint_space, &evolved, &sys_factors)
            .expect("system factors lead the joint space");
        reduced
    }

    /// Indices of the system and ancilla factors within the joint space.
    pub(crate) fn factor_split(&self) -> (Vec<usize>, Vec<usize>) {
        let ns = self.h_sys.space().num_subsystems();
        let nj = self.joint_space.num_subsystems();
        ((0..ns).collect(), (ns..nj).collect())
    }

    pub(crate) fn second_order_map(&self, x: &CMatrix) -> CMatrix {
        self.generator.apply(x)
    }

    pub(crate) fn analytic_map(&self, x: &CMatrix) -> Result<CMatrix> {
        match &self.analytic {
            Some(m) => Ok(m.apply(x)),
            None => Err(Error::InvalidArgument(
                "this model registers no analytic map".into(),
            )),
        }
    }

    pub(crate) fn apply_kind(&self, kind: PropagatorKind, x: &CMatrix) -> Result<CMatrix> {
        match kind {
            PropagatorKind::Exact => Ok(self.exact_map(x)),
            PropagatorKind::SecondOrder => Ok(self.second_order_map(x)),
            PropagatorKind::AnalyticMap => self.analytic_map(x),
        }
    }

    pub(crate) fn check_system_state(&self, rho: &DensityMatrix) -> Result<()> {
        if rho.dim() != self.system_dim() {
            return Err(Error::InvalidArgument(format!(
                "state has dimension {} but the system has dimension {}",
                rho.dim(),
                self.system_dim()
            )));
        }
        Ok(())
    }
}

/// Precomputed pieces of the second-order collision map
///
/// ```text
/// ρ′ = ρ − i δt [H_S + Ã, ρ]
///      + δt²/2 ( Σ g₂(t,t′) (2 A_t ρ A_t′† − {A_t′† A_t, ρ})
///              + 2 H_S ρ Ã† − {Ã† H_S, ρ} + 2 Ã ρ H_S − {H_S Ã, ρ}
///              + [G, ρ]
///              + 2 H_S ρ H_S − {H_S², ρ} )
/// ```
///
/// with `Ã = Σ g₁(t) A_t` and `G = Σ (g_he(t) A_t − g_he(t)* A_t†)`.
#[derive(Debug, Clone)]
pub(crate) struct SecondOrderGenerator {
    dt: f64,
    h_s: CMatrix,
    h_s_sq: CMatrix,
    drive: CMatrix,
    a_tilde: CMatrix,
    a_tilde_dag: CMatrix,
    energy_block: CMatrix,
    /// `(g₂(t,t′) A_t, A_t′†)` pairs with a nonzero weight.
    jumps: Vec<(CMatrix, CMatrix)>,
    /// `Σ g₂(t,t′) A_t′† A_t`
    jump_norm: CMatrix,
}

impl SecondOrderGenerator {
    pub(crate) fn new(
        h_sys: &Operator,
        terms: &[InteractionTerm],
        corr: &CorrelationSet,
        dt: f64,
    ) -> Result<Self> {
        if corr.labels.len() != terms.len()
            || corr.labels.iter().zip(terms).any(|(l, t)| *l != t.label)
        {
            return Err(Error::InvalidArgument(
                "correlation set does not belong to these interaction terms".into(),
            ));
        }
        let d = h_sys.dim();
        let zero = CMatrix::zeros(d, d);
        let h_s = h_sys.matrix().clone();
        let mut a_tilde = zero.clone();
        let mut a_tilde_dag = zero.clone();
        let mut energy_block = zero.clone();
        for (t, term) in terms.iter().enumerate() {
            let a = term.a_sys.matrix();
            let a_dag = a.adjoint();
            a_tilde += a * corr.g1[t];
            a_tilde_dag += &a_dag * corr.g1[t].conj();
            energy_block += a * corr.g_he[t] - &a_dag * corr.g_he[t].conj();
        }
        let mut jumps = Vec::new();
        let mut jump_norm = zero.clone();
        for (t, tt) in terms.iter().enumerate() {
            for (s, ts) in terms.iter().enumerate() {
                let g = corr.g2[(t, s)];
                if g == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let a_t = tt.a_sys.matrix();
                let a_s_dag = ts.a_sys.matrix().adjoint();
                jump_norm += (&a_s_dag * a_t) * g;
                jumps.push((a_t * g, a_s_dag));
            }
        }
        Ok(Self {
            dt,
            h_s_sq: &h_s * &h_s,
            drive: &h_s + &a_tilde,
            h_s,
            a_tilde,
            a_tilde_dag,
            energy_block,
            jumps,
            jump_norm,
        })
    }

    pub(crate) fn apply(&self, rho: &CMatrix) -> CMatrix {
        let i = Complex64::new(0.0, 1.0);
        let first = (&self.drive * rho - rho * &self.drive) * (-i * self.dt);

        let mut second = -(&self.jump_norm * rho + rho * &self.jump_norm);
        for (a, b) in &self.jumps {
            second += (a * rho * b) * Complex64::new(2.0, 0.0);
        }
        let hs = &self.h_s;
        let at = &self.a_tilde;
        let atd = &self.a_tilde_dag;
        let two = Complex64::new(2.0, 0.0);
        let atd_hs = atd * hs;
        let hs_at = hs * at;
        second += (hs * rho * atd) * two - (&atd_hs * rho + rho * &atd_hs);
        second += (at * rho * hs) * two - (&hs_at * rho + rho * &hs_at);
        second += &self.energy_block * rho - rho * &self.energy_block;
        second += (hs * rho * hs) * two - (&self.h_s_sq * rho + rho * &self.h_s_sq);

        rho + first + second * Complex64::new(0.5 * self.dt * self.dt, 0.0)
    }
}
