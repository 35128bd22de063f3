use std::sync::Arc;

use num_complex::Complex64;

use super::two_qubit::{
    system_hamiltonian, two_qubit_ancilla, two_qubit_spectrum, TwoQubitAncillaParams,
};
use crate::ancilla::InteractionTerm;
use crate::engine::{AnalyticMap, CollisionModel};
use crate::error::{Error, Result};
use crate::qcore::{pauli, CMatrix, DensityMatrix, NumericalPolicy, Operator};

/// Label of `σ_S⁺ ⊗ α σ_E⁻`.
pub const EXAMPLE2_PLUS: &str = "sigma_plus";
/// Label of `σ_S⁻ ⊗ α* σ_E⁺`.
pub const EXAMPLE2_MINUS: &str = "sigma_minus";

/// Coefficients of the reduced qubit map.
///
/// `g_p = Tr[α*σ_E⁺ η]`, `g_m = g_p*`, `g_pm = |α|²⟨E₂|η|E₂⟩` (lowering rate),
/// `g_mp = |α|²⟨E₃|η|E₃⟩` (raising rate).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example2Coefficients {
    pub g_p: Complex64,
    pub g_m: Complex64,
    pub g_pm: f64,
    pub g_mp: f64,
    pub alpha: Complex64,
    pub omega_s: f64,
    pub dt: f64,
}

/// System qubit exchanging an excitation with the ancilla transition
/// `|E₂⟩ ↔ |E₃⟩` of the bare basis: `α σ_S⁺ ⊗ |E₂⟩⟨E₃| + h.c.`
///
/// The returned model carries [`Example2Map`] as its analytic map.
pub fn example2_model(
    p: TwoQubitAncillaParams,
    omega_s: f64,
    alpha: Complex64,
    beta: f64,
    dt: f64,
) -> Result<CollisionModel> {
    let ancilla = two_qubit_ancilla(p)?;
    let space = ancilla.space.clone();
    let mut lower = CMatrix::zeros(4, 4);
    lower[(1, 2)] = Complex64::new(1.0, 0.0);
    let sigma_e_minus = Operator::new(space, lower)?;
    let sigma_e_plus = sigma_e_minus.adjoint();
    let terms = vec![
        InteractionTerm::new(
            EXAMPLE2_PLUS,
            pauli::sigma_plus(),
            sigma_e_minus.scale(alpha),
        ),
        InteractionTerm::new(
            EXAMPLE2_MINUS,
            pauli::sigma_minus(),
            sigma_e_plus.scale(alpha.conj()),
        ),
    ];
    let coeffs = example2_closed_coeffs(p, alpha, omega_s, beta, dt);
    let model = CollisionModel::new(system_hamiltonian(omega_s)?, ancilla, terms, beta, dt)?;
    match coeffs {
        Ok(c) => Ok(model.with_analytic_map(Arc::new(Example2Map(c)))),
        // No closed form at the degenerate point; the numerical propagators still work.
        Err(Error::Domain(_)) => Ok(model),
        Err(e) => Err(e),
    }
}

/// Closed-form coefficients from the two-qubit spectrum.
pub fn example2_closed_coeffs(
    p: TwoQubitAncillaParams,
    alpha: Complex64,
    omega_s: f64,
    beta: f64,
    dt: f64,
) -> Result<Example2Coefficients> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "inverse temperature must be finite and ≥ 0, got {beta}"
        )));
    }
    let s = two_qubit_spectrum(p)?;
    let w = s.weights(beta);
    let eta23 = w[1] * s.a_minus * s.b_minus + w[2] * s.a_plus * s.b_plus;
    let eta22 = w[1] * s.b_minus.powi(2) + w[2] * s.b_plus.powi(2);
    let eta33 = w[1] * s.a_minus.powi(2) + w[2] * s.a_plus.powi(2);
    let g_p = alpha.conj() * eta23;
    Ok(Example2Coefficients {
        g_p,
        g_m: g_p.conj(),
        g_pm: alpha.norm_sqr() * eta22,
        g_mp: alpha.norm_sqr() * eta33,
        alpha,
        omega_s,
        dt,
    })
}

fn map_entries(m: &CMatrix, c: &Example2Coefficients) -> CMatrix {
    let (r11, r22, r12, r21) = (m[(0, 0)], m[(1, 1)], m[(0, 1)], m[(1, 0)]);
    let (dt, w) = (c.dt, c.omega_s);
    let i = Complex64::new(0.0, 1.0);
    let h = 0.5 * dt * dt;
    let rates = (r22 * c.g_mp - r11 * c.g_pm) * (dt * dt);
    let mix = (c.g_p * r12 + c.g_m * r21) * (h * w);
    let drive = (c.g_p * r12 - c.g_m * r21) * i * dt;
    let damp = h * (c.g_pm + c.g_mp + w * w);
    let pop = r11 - r22;

    let mut out = CMatrix::zeros(2, 2);
    out[(0, 0)] = r11 + rates + mix + drive;
    out[(1, 1)] = r22 - rates - mix - drive;
    out[(0, 1)] =
        r12 + c.g_m * pop * (h * w) + i * dt * c.g_m * pop - i * dt * w * r12 - r12 * damp;
    out[(1, 0)] =
        r21 + c.g_p * pop * (h * w) - i * dt * c.g_p * pop + i * dt * w * r21 - r21 * damp;
    out
}

/// One step of the closed-form matrix-element map.
pub fn example2_map_step(rho: &DensityMatrix, c: &Example2Coefficients) -> Result<DensityMatrix> {
    if rho.dim() != 2 {
        return Err(Error::InvalidArgument(format!(
            "expected a qubit state, got dimension {}",
            rho.dim()
        )));
    }
    let next = map_entries(rho.matrix(), c);
    DensityMatrix::hermitian_unit_trace(
        Operator::new(rho.space().clone(), next)?,
        &NumericalPolicy::STANDARD,
    )
}

/// [`example2_map_step`] as a linear map on arbitrary 2×2 matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example2Map(pub Example2Coefficients);

impl AnalyticMap for Example2Map {
    fn apply(&self, rho: &CMatrix) -> CMatrix {
        map_entries(rho, &self.0)
    }
}

/// Shared pieces of the steady-state formulas: `(d, s, |g|², ω)`.
fn rates(c: &Example2Coefficients) -> (f64, f64, f64, f64) {
    (
        c.g_mp - c.g_pm,
        c.g_mp + c.g_pm,
        c.g_p.norm_sqr(),
        c.omega_s,
    )
}

fn bloch_from(c: &Example2Coefficients, z_num: f64, k: f64) -> Result<[f64; 3]> {
    let (d, s, _, w) = rates(c);
    let dt = c.dt;
    let scale = 4.0 * w * w * s + s.powi(2) + 1e-300;
    if !(k.abs() > 1e-14 * scale) || !k.is_finite() {
        return Err(Error::Domain(format!(
            "steady-state denominator K = {k:e} vanishes"
        )));
    }
    let bracket = Complex64::new(4.0 * w + dt * dt * w * (s + w * w), 2.0 * dt * s);
    let coh = c.g_m * bracket * d / k;
    Ok([2.0 * coh.re, -2.0 * coh.im, d * z_num / k])
}

/// Fixed point `(⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩)` of [`example2_map_step`].
///
/// With `s = g_mp + g_pm`, `d = g_mp − g_pm`:
///
/// ```text
/// ⟨σ_z⟩ = d [4ω² + δt²(s + ω²)²] / K
/// ρ₁₂   = g_m d [4ω + 2iδt s + δt²ω(s + ω²)] / K
/// K     = 8|g|²(s − ω²) + 4ω²s + δt² [s(s + ω²)² − 2|g|²ω²(s + ω²)]
/// ```
pub fn example2_analytic_steady(c: &Example2Coefficients) -> Result<[f64; 3]> {
    let (_, s, g2, w) = rates(c);
    let dt = c.dt;
    let w2 = w * w;
    let k = 8.0 * g2 * (s - w2)
        + 4.0 * w2 * s
        + dt * dt * (s * (s + w2).powi(2) - 2.0 * g2 * w2 * (s + w2));
    let z_num = 4.0 * w2 + dt * dt * (s + w2).powi(2);
    bloch_from(c, z_num, k)
}

/// The steady-state ratios with the `⟨σ_z⟩` numerator and `K` in their
/// alternative grouping below:
///
/// ```text
/// ⟨σ_z⟩ numerator  4ω² + δt²(g_mp + g_pm ω²)²
/// K = 8|g|²(g_mp + g_mp − ω²) + 4ω²s + δt² s [s² + 2ω²(s − |g|²) + ω⁴(1 − 2|g|²)]
/// ```
///
/// These are not a fixed point of the map; kept to document the difference.
pub fn example2_printed_steady(c: &Example2Coefficients) -> Result<[f64; 3]> {
    let (_, s, g2, w) = rates(c);
    let dt = c.dt;
    let w2 = w * w;
    let k = 8.0 * g2 * (2.0 * c.g_mp - w2)
        + 4.0 * w2 * s
        + dt * dt * s * (s * s + 2.0 * w2 * (s - g2) + w2 * w2 * (1.0 - 2.0 * g2));
    let z_num = 4.0 * w2 + dt * dt * (c.g_mp + c.g_pm * w2).powi(2);
    bloch_from(c, z_num, k)
}
