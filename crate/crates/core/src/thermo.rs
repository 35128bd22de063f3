//! Per-collision energetics and entropy production.
//!
//! Signs: heat and work are positive when absorbed by the system. Entropies
//! are in nats.

use num_complex::Complex64;

use crate::ancilla::CorrelationSet;
use crate::engine::{
    exact_collision, steady_state, truncated_step, CollisionModel, CollisionOutcome, PropagatorKind,
};
use crate::error::{Error, Result};
use crate::models::{Example2Coefficients, TwoQubitSpectrum};
use crate::qcore::{
    commutator, operator_trace_product, relative_entropy_to_gibbs, vn_entropy, CMatrix,
    DensityMatrix, Operator,
};

/// Thermodynamic bookkeeping of one collision.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ThermoRecord {
    /// `ΔU = Tr[H_S(ρ′ − ρ)]`
    pub du: f64,
    /// `δQ = −Tr[H_E(η_out − η_in)]`
    pub dq: f64,
    /// `W_sw = Tr[H_SE(R − U R U†)]`
    pub w_sw: f64,
    /// External driving work; always zero since no Hamiltonian depends on time.
    pub dw_drive: f64,
    /// `S(ρ′) − S(ρ)`
    pub ds_sys: f64,
    /// `ΔS − βδQ`
    pub sigma: f64,
    /// `I(S′ : E′) + S(η_out ‖ η_in)`
    pub sigma_alt: f64,
    /// `ΔU − δQ − W_sw − δW`
    pub first_law_residual: f64,
}

impl ThermoRecord {
    pub fn balance(&self) -> EnergyBalance {
        EnergyBalance {
            du: self.du,
            dq: self.dq,
            w_sw: self.w_sw,
        }
    }
}

/// The three energy exchanges of one collision.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyBalance {
    pub du: f64,
    pub dq: f64,
    pub w_sw: f64,
}

impl EnergyBalance {
    /// Largest absolute difference over the three fields.
    pub fn max_difference(&self, other: &EnergyBalance) -> f64 {
        (self.du - other.du)
            .abs()
            .max((self.dq - other.dq).abs())
            .max((self.w_sw - other.w_sw).abs())
    }
}

/// `U = Tr[H_S ρ]`
pub fn internal_energy(h_sys: &Operator, rho: &DensityMatrix) -> Result<f64> {
    if h_sys.dim() != rho.dim() {
        return Err(Error::InvalidArgument(format!(
            "Hamiltonian has dimension {} but the state has dimension {}",
            h_sys.dim(),
            rho.dim()
        )));
    }
    Ok(rho.expectation(h_sys).re)
}

fn tr(a: &Operator, m: &CMatrix) -> f64 {
    operator_trace_product(a.matrix(), m).re
}

/// Energetics and entropy production of an exact collision.
pub fn collision_thermo(
    outcome: &CollisionOutcome,
    model: &CollisionModel,
) -> Result<ThermoRecord> {
    let d_rho = outcome.rho_after.matrix() - outcome.rho_before.matrix();
    let d_eta = outcome.eta_out.matrix() - outcome.eta_in.matrix();
    let d_joint = outcome.joint_before.matrix() - outcome.joint_after.matrix();

    let du = tr(model.h_sys(), &d_rho);
    let dq = -tr(&model.ancilla().h_total, &d_eta);
    let w_sw = tr(model.h_se(), &d_joint);
    let dw_drive = 0.0;

    let s_before = vn_entropy(&outcome.rho_before)?;
    let s_after = vn_entropy(&outcome.rho_after)?;
    let ds_sys = s_after - s_before;
    let sigma = ds_sys - model.beta() * dq;

    let mutual = s_after + vn_entropy(&outcome.eta_out)? - vn_entropy(&outcome.joint_after)?;
    let sigma_alt =
        mutual + relative_entropy_to_gibbs(&outcome.eta_out, &model.ancilla().eig, model.beta())?;

    Ok(ThermoRecord {
        du,
        dq,
        w_sw,
        dw_drive,
        ds_sys,
        sigma,
        sigma_alt,
        first_law_residual: du - dq - w_sw - dw_drive,
    })
}

/// Second-order estimates of `ΔU`, `δQ` and `W_sw` for one collision from `rho`.
///
/// `ΔU` comes from the truncated reduced map with the given correlations;
/// `δQ` and `W_sw` from the second-order expansion of `U R U†`:
///
/// ```text
/// ΔR ≈ −iδt [H, R] − δt²/2 [H, [H, R]]
/// δQ ≈ −Tr[H_E ΔR],   W_sw ≈ −Tr[H_SE ΔR]
/// ```
pub fn perturbative_thermo(
    rho: &DensityMatrix,
    model: &CollisionModel,
    corr: &CorrelationSet,
) -> Result<EnergyBalance> {
    let next = truncated_step(rho, model, corr)?;
    let du = tr(model.h_sys(), &(next.matrix() - rho.matrix()));

    let dt = model.dt();
    let h = (&(model.h_s_joint() + model.h_e_joint()) + model.h_se()).into_matrix();
    let r = rho.tensor(model.ancilla_state()).matrix().clone();
    let first = commutator(&h, &r);
    let second = commutator(&h, &first);
    let d_joint = first * Complex64::new(0.0, -dt) - second * Complex64::new(0.5 * dt * dt, 0.0);

    let dq = -tr(model.h_e_joint(), &d_joint);
    let w_sw = -tr(model.h_se(), &d_joint);
    Ok(EnergyBalance { du, dq, w_sw })
}

/// Closed forms of `ΔU`, `δQ` and `W_sw` for the eigenoperator-coupled model.
///
/// `eta` supplies the bare-basis coherences `η₂₃ = ⟨E₂|η|E₃⟩` and `η₃₂`.
pub fn example2_thermo_closed(
    rho: &DensityMatrix,
    c: &Example2Coefficients,
    spectrum: &TwoQubitSpectrum,
    eta: &DensityMatrix,
) -> Result<EnergyBalance> {
    if rho.dim() != 2 || eta.dim() != 4 {
        return Err(Error::InvalidArgument(
            "expected a qubit state and a two-qubit ancilla state".into(),
        ));
    }
    let m = rho.matrix();
    let (r11, r22, r12, r21) = (m[(0, 0)].re, m[(1, 1)].re, m[(0, 1)], m[(1, 0)]);
    let sz = r11 - r22;
    let (dt, w) = (c.dt, c.omega_s);
    let i = Complex64::new(0.0, 1.0);

    let relax = sz * (c.g_pm + c.g_mp) + (c.g_pm - c.g_mp);
    let mix_re = (c.g_p * r12 + c.g_m * r21).re;
    let mix_im = (i * (c.g_p * r12 - c.g_m * r21)).re;

    let du = -0.5 * dt * dt * w * relax + 0.5 * dt * dt * w * w * mix_re + dt * w * mix_im;

    let p = spectrum.params;
    let bare_gap = p.omega1 - p.omega2;
    let e = eta.matrix();
    let eta_sum = (e[(1, 2)] + e[(2, 1)]).re;
    let dq = -0.5 * dt * dt * bare_gap * relax
        + 0.5 * dt * dt * p.kappa12 * c.alpha.norm_sqr() * eta_sum;

    Ok(EnergyBalance {
        du,
        dq,
        w_sw: du - dq,
    })
}

/// Energetics of one exact collision at the exact steady state.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyBalance {
    pub state: DensityMatrix,
    pub record: ThermoRecord,
}

impl SteadyBalance {
    pub fn w_sw(&self) -> f64 {
        self.record.w_sw
    }

    pub fn dq(&self) -> f64 {
        self.record.dq
    }
}

/// Solves for the exact steady state and accounts one further collision from it.
pub fn steady_state_balance(model: &CollisionModel) -> Result<SteadyBalance> {
    let state = steady_state(model, PropagatorKind::Exact)?;
    let outcome = exact_collision(&state, model)?;
    let record = collision_thermo(&outcome, model)?;
    Ok(SteadyBalance { state, record })
}
