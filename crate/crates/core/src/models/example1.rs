use num_complex::Complex64;

use super::two_qubit::{
    system_hamiltonian, two_qubit_ancilla, two_qubit_spectrum, TwoQubitAncillaParams,
};
use crate::ancilla::{CorrelationSet, InteractionTerm};
use crate::engine::CollisionModel;
use crate::error::{Error, Result};
use crate::qcore::{pauli, CMatrix, DensityMatrix, HilbertSpace, Operator};

/// Term labels in model order: `σ_S⁺ ⊗ α₁σ₁⁻`, `σ_S⁻ ⊗ α₁*σ₁⁺`, `σ_S⁺ ⊗ α₂σ₂⁻`, `σ_S⁻ ⊗ α₂*σ₂⁺`.
pub const EXAMPLE1_LABELS: [&str; 4] = ["sp_q1m", "sm_q1p", "sp_q2m", "sm_q2p"];
/// Terms that raise the system.
pub const EXAMPLE1_UP_LABELS: [&str; 2] = ["sp_q1m", "sp_q2m"];
/// Terms that lower the system.
pub const EXAMPLE1_DOWN_LABELS: [&str; 2] = ["sm_q1p", "sm_q2p"];

/// System qubit coupled to each ancilla qubit by its own flip-flop term.
pub fn example1_model(
    p: TwoQubitAncillaParams,
    omega_s: f64,
    alpha1: Complex64,
    alpha2: Complex64,
    beta: f64,
    dt: f64,
) -> Result<CollisionModel> {
    let ancilla = two_qubit_ancilla(p)?;
    let space = ancilla.space.clone();
    let lower = |k| Operator::embed(&pauli::ladder_lower(), k, &space);
    let raise = |k| Operator::embed(&pauli::ladder_raise(), k, &space);
    let terms = vec![
        InteractionTerm::new(
            EXAMPLE1_LABELS[0],
            pauli::sigma_plus(),
            lower(0)?.scale(alpha1),
        ),
        InteractionTerm::new(
            EXAMPLE1_LABELS[1],
            pauli::sigma_minus(),
            raise(0)?.scale(alpha1.conj()),
        ),
        InteractionTerm::new(
            EXAMPLE1_LABELS[2],
            pauli::sigma_plus(),
            lower(1)?.scale(alpha2),
        ),
        InteractionTerm::new(
            EXAMPLE1_LABELS[3],
            pauli::sigma_minus(),
            raise(1)?.scale(alpha2.conj()),
        ),
    ];
    CollisionModel::new(system_hamiltonian(omega_s)?, ancilla, terms, beta, dt)
}

/// Correlations of the four terms from the closed-form spectrum.
pub fn example1_closed_g(
    p: TwoQubitAncillaParams,
    alpha1: Complex64,
    alpha2: Complex64,
    beta: f64,
) -> Result<CorrelationSet> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "inverse temperature must be finite and ≥ 0, got {beta}"
        )));
    }
    let s = two_qubit_spectrum(p)?;
    let w = s.weights(beta);
    let (am2, bm2, ap2, bp2) = (
        s.a_minus.powi(2),
        s.b_minus.powi(2),
        s.a_plus.powi(2),
        s.b_plus.powi(2),
    );
    let q1_up = am2 * w[1] + ap2 * w[2] + w[3];
    let q1_down = w[0] + bm2 * w[1] + bp2 * w[2];
    let q2_up = bm2 * w[1] + bp2 * w[2] + w[3];
    let q2_down = w[0] + am2 * w[1] + ap2 * w[2];
    // ⟨E₃|η|E₂⟩ = ⟨E₂|η|E₃⟩ since the amplitudes are real.
    let eta32 = Complex64::new(
        w[1] * s.a_minus * s.b_minus + w[2] * s.a_plus * s.b_plus,
        0.0,
    );
    let eta23 = eta32.conj();

    let n1 = alpha1.norm_sqr();
    let n2 = alpha2.norm_sqr();
    let re = |x: f64| Complex64::new(x, 0.0);
    let mut g2 = CMatrix::zeros(4, 4);
    g2[(0, 0)] = re(n1 * q1_up);
    g2[(1, 1)] = re(n1 * q1_down);
    g2[(2, 2)] = re(n2 * q2_up);
    g2[(3, 3)] = re(n2 * q2_down);
    g2[(0, 2)] = alpha1 * alpha2.conj() * eta32;
    g2[(2, 0)] = alpha2 * alpha1.conj() * eta23;
    g2[(1, 3)] = alpha1.conj() * alpha2 * eta23;
    g2[(3, 1)] = alpha2.conj() * alpha1 * eta32;

    let zero = vec![Complex64::new(0.0, 0.0); 4];
    Ok(CorrelationSet {
        labels: EXAMPLE1_LABELS.iter().map(|l| l.to_string()).collect(),
        g1: zero.clone(),
        g2,
        g_he: zero,
    })
}

fn block_sum(corr: &CorrelationSet, labels: &[&str]) -> Result<f64> {
    let mut total = 0.0;
    for a in labels {
        for b in labels {
            total += corr
                .second(a, b)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!("correlation set lacks the pair ({a}, {b})"))
                })?
                .re;
        }
    }
    Ok(total)
}

/// Diagonal steady state with `ρ₁₁ : ρ₂₂ = Σ g(raising) : Σ g(lowering)`.
pub fn example1_steady(corr: &CorrelationSet) -> Result<DensityMatrix> {
    let up = block_sum(corr, &EXAMPLE1_UP_LABELS)?;
    let down = block_sum(corr, &EXAMPLE1_DOWN_LABELS)?;
    let total = up + down;
    if !(total > 0.0) {
        return Err(Error::Domain(format!(
            "raising and lowering rates sum to {total}"
        )));
    }
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 0)] = Complex64::new(up / total, 0.0);
    m[(1, 1)] = Complex64::new(down / total, 0.0);
    DensityMatrix::new(Operator::new(HilbertSpace::qubits(1), m)?)
}
