use num_complex::Complex64;

use crate::ancilla::{build_ancilla, AncillaSpec, CouplingTerm, FreeTerm, StructuredAncilla};
use crate::error::{Error, Result};
use crate::qcore::{pauli, CMatrix, Operator};

/// `H_E = (ω₁/2)σ₁ᶻ + (ω₂/2)σ₂ᶻ + κ₁₂(σ₁⁺σ₂⁻ + σ₁⁻σ₂⁺)`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitAncillaParams {
    pub omega1: f64,
    pub omega2: f64,
    pub kappa12: f64,
}

impl TwoQubitAncillaParams {
    pub fn new(omega1: f64, omega2: f64, kappa12: f64) -> Result<Self> {
        let p = Self {
            omega1,
            omega2,
            kappa12,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if !(self.omega1 >= 0.0 && self.omega2 >= 0.0)
            || !self.omega1.is_finite()
            || !self.omega2.is_finite()
        {
            return Err(Error::InvalidArgument(format!(
                "qubit frequencies must be finite and ≥ 0, got ({}, {})",
                self.omega1, self.omega2
            )));
        }
        if !self.kappa12.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "coupling must be finite, got {}",
                self.kappa12
            )));
        }
        Ok(())
    }

    /// `x = (ω₁ + ω₂)/2`
    pub fn mean(&self) -> f64 {
        0.5 * (self.omega1 + self.omega2)
    }

    /// `y = (ω₁ − ω₂)/2`
    pub fn half_detuning(&self) -> f64 {
        0.5 * (self.omega1 - self.omega2)
    }
}

/// Dressed energies and the mixing amplitudes of the one-excitation sector,
/// `|E′₂⟩ = b₋|E₂⟩ + a₋|E₃⟩` and `|E′₃⟩ = b₊|E₂⟩ + a₊|E₃⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitSpectrum {
    pub params: TwoQubitAncillaParams,
    /// `E′₁ … E′₄ = −x, −r, r, x` with `x = (ω₁+ω₂)/2`, `r = √(y² + κ₁₂²)`.
    /// Ascending only when `κ₁₂² ≤ ω₁ω₂`; the labels follow the eigenvectors.
    pub energies: [f64; 4],
    pub a_minus: f64,
    pub b_minus: f64,
    pub a_plus: f64,
    pub b_plus: f64,
}

impl TwoQubitSpectrum {
    /// The unitary whose columns are `|E′₁⟩ … |E′₄⟩` in the bare basis.
    pub fn dressed_vectors(&self) -> CMatrix {
        let c = |x: f64| Complex64::new(x, 0.0);
        let mut v = CMatrix::zeros(4, 4);
        v[(0, 0)] = c(1.0);
        v[(1, 1)] = c(self.b_minus);
        v[(2, 1)] = c(self.a_minus);
        v[(1, 2)] = c(self.b_plus);
        v[(2, 2)] = c(self.a_plus);
        v[(3, 3)] = c(1.0);
        v
    }

    /// Boltzmann weights `e^{−βE′_k}/Z`.
    pub fn weights(&self, beta: f64) -> [f64; 4] {
        let e0 = self.energies.iter().copied().fold(f64::INFINITY, f64::min);
        let w = self.energies.map(|e| (-beta * (e - e0)).exp());
        let z: f64 = w.iter().sum();
        w.map(|x| x / z)
    }

    /// `⟨E_i|η|E_j⟩` of the thermal state at `beta`, bare indices 0…3.
    pub fn thermal_element(&self, beta: f64, i: usize, j: usize) -> f64 {
        let w = self.weights(beta);
        let v = self.dressed_vectors();
        (0..4).map(|k| w[k] * v[(i, k)].re * v[(j, k)].re).sum()
    }
}

/// Closed-form eigensystem of the two-qubit ancilla.
pub fn two_qubit_spectrum(p: TwoQubitAncillaParams) -> Result<TwoQubitSpectrum> {
    p.validate()?;
    let x = p.mean();
    let y = p.half_detuning();
    let k = p.kappa12;
    if k == 0.0 && y == 0.0 {
        return Err(Error::Domain(
            "degenerate one-excitation sector (κ₁₂ = 0, ω₁ = ω₂): mixing amplitudes are undefined, \
             use a numerical eigendecomposition"
                .into(),
        ));
    }
    let r = y.hypot(k);
    // E′ − y for E′ = ∓r, written without cancellation.
    let minus_shift = if y < 0.0 { -k * k / (r - y) } else { -r - y };
    let plus_shift = if y > 0.0 { k * k / (r + y) } else { r - y };
    let amps = |shift: f64| {
        let n = k.hypot(shift);
        if n == 0.0 {
            (1.0, 0.0)
        } else {
            (k / n, shift / n)
        }
    };
    let (a_minus, b_minus) = amps(minus_shift);
    let (a_plus, b_plus) = amps(plus_shift);
    Ok(TwoQubitSpectrum {
        params: p,
        energies: [-x, -r, r, x],
        a_minus,
        b_minus,
        a_plus,
        b_plus,
    })
}

/// The ancilla `H_E` assembled from ladders, for numerical use.
pub fn two_qubit_ancilla(p: TwoQubitAncillaParams) -> Result<StructuredAncilla> {
    p.validate()?;
    build_ancilla(AncillaSpec {
        subsystem_dims: vec![2, 2],
        free_terms: vec![
            FreeTerm {
                subsystem: 0,
                omega: p.omega1,
                lowering: pauli::ladder_lower(),
            },
            FreeTerm {
                subsystem: 1,
                omega: p.omega2,
                lowering: pauli::ladder_lower(),
            },
        ],
        couplings: vec![CouplingTerm {
            first: 0,
            second: 1,
            kappa: Complex64::new(p.kappa12, 0.0),
            op_first: pauli::ladder_raise(),
            op_second: pauli::ladder_raise(),
        }],
        energy_shift: -p.mean(),
    })
}

/// `H_S = (ω_S/2)σ_z`
pub fn system_hamiltonian(omega_s: f64) -> Result<Operator> {
    if !omega_s.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "system frequency must be finite, got {omega_s}"
        )));
    }
    Ok(pauli::sigma_z().scale_real(0.5 * omega_s))
}
