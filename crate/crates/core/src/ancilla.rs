//! Structured ancillae and the environment correlation functions that enter
//! the second-order collision map.

use std::collections::HashSet;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::{
    gibbs_state, hermitian_eig, CMatrix, DensityMatrix, HilbertSpace, NumericalPolicy, Operator,
    SpectralDecomposition,
};

/// `ω_k C_k†C_k` acting on subsystem `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeTerm {
    pub subsystem: usize,
    pub omega: f64,
    pub lowering: CMatrix,
}

/// `κ D_j D_k† + h.c.` coupling subsystems `j ≠ k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTerm {
    pub first: usize,
    pub second: usize,
    pub kappa: Complex64,
    pub op_first: CMatrix,
    pub op_second: CMatrix,
}

/// Description of one ancilla: subsystems, their free energies and internal couplings.
///
/// `energy_shift` adds a multiple of the identity to the free Hamiltonian. It
/// lets `ω C†C` ladders reproduce zero-centred spectra such as `(ω/2)σ_z`
/// without affecting any state or correlation that enters the dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct AncillaSpec {
    pub subsystem_dims: Vec<usize>,
    pub free_terms: Vec<FreeTerm>,
    pub couplings: Vec<CouplingTerm>,
    pub energy_shift: f64,
}

impl AncillaSpec {
    fn validate(&self) -> Result<HilbertSpace> {
        let space = HilbertSpace::new(self.subsystem_dims.clone())?;
        let k = self.subsystem_dims.len();
        let check = |s: usize, m: &CMatrix, what: &str| -> Result<()> {
            if s >= k {
                return Err(Error::InvalidArgument(format!(
                    "{what}: subsystem {s} does not exist"
                )));
            }
            let d = self.subsystem_dims[s];
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::InvalidArgument(format!(
                    "{what}: operator is {}x{} but subsystem {s} has dimension {d}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            Ok(())
        };
        for t in &self.free_terms {
            check(t.subsystem, &t.lowering, "free term")?;
            if !(t.omega >= 0.0) || !t.omega.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "free term on subsystem {}: frequency must be finite and ≥ 0, got {}",
                    t.subsystem, t.omega
                )));
            }
        }
        let mut pairs = HashSet::new();
        for c in &self.couplings {
            check(c.first, &c.op_first, "coupling")?;
            check(c.second, &c.op_second, "coupling")?;
            if c.first == c.second {
                return Err(Error::InvalidArgument(format!(
                    "coupling must join two different subsystems, got ({0}, {0})",
                    c.first
                )));
            }
            if !pairs.insert((c.first, c.second)) {
                return Err(Error::InvalidArgument(format!(
                    "coupling ({}, {}) listed twice",
                    c.first, c.second
                )));
            }
        }
        Ok(space)
    }
}

/// An assembled ancilla: Hamiltonians and dressed eigensystem.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredAncilla {
    pub spec: AncillaSpec,
    pub space: HilbertSpace,
    pub h_free: Operator,
    pub h_int: Operator,
    pub h_total: Operator,
    /// Dressed energies `E′_k` and the unitary `V` whose columns expand `|E′_k⟩`
    /// in the bare product basis.
    pub eig: SpectralDecomposition,
}

/// Builds `H_free = Σ ω_k C_k†C_k + shift` and `H_int = Σ κ_jk D_j D_k† + h.c.`.
pub fn build_ancilla(spec: AncillaSpec) -> Result<StructuredAncilla> {
    let space = spec.validate()?;
    let mut h_free = Operator::identity(&space).scale_real(spec.energy_shift);
    for t in &spec.free_terms {
        let number = t.lowering.adjoint() * &t.lowering;
        let local = Operator::embed(&number, t.subsystem, &space)?;
        h_free = &h_free + &local.scale_real(t.omega);
    }
    let mut h_int = Operator::zeros(&space);
    for c in &spec.couplings {
        let dj = Operator::embed(&c.op_first, c.first, &space)?;
        let dk = Operator::embed(&c.op_second, c.second, &space)?;
        let term = (&dj * &dk.adjoint()).scale(c.kappa);
        h_int = &(&h_int + &term) + &term.adjoint();
    }
    let h_total = &h_free + &h_int;
    if !h_total.is_hermitian(NumericalPolicy::STANDARD.algebraic * h_total.max_abs().max(1.0)) {
        return Err(Error::Internal(
            "assembled ancilla Hamiltonian is not Hermitian".into(),
        ));
    }
    let eig = hermitian_eig(&h_total)?;
    Ok(StructuredAncilla {
        spec,
        space,
        h_free,
        h_int,
        h_total,
        eig,
    })
}

impl StructuredAncilla {
    /// `e^{−βH_E}/Z` for the full (interacting) ancilla Hamiltonian.
    pub fn thermal_state(&self, beta: f64) -> Result<DensityMatrix> {
        thermal_state(self, beta)
    }

    pub fn dressed_energies(&self) -> &[f64] {
        &self.eig.eigenvalues
    }
}

pub fn thermal_state(anc: &StructuredAncilla, beta: f64) -> Result<DensityMatrix> {
    gibbs_state(&anc.h_total, beta)
}

/// One system–ancilla coupling `A_S ⊗ B_E`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionTerm {
    pub a_sys: Operator,
    pub b_env: Operator,
    pub label: String,
}

impl InteractionTerm {
    pub fn new(label: impl Into<String>, a_sys: Operator, b_env: Operator) -> Self {
        Self {
            a_sys,
            b_env,
            label: label.into(),
        }
    }
}

fn check_shapes(b: &Operator, eta: &DensityMatrix) -> Result<()> {
    if b.dim() != eta.dim() {
        return Err(Error::InvalidArgument(format!(
            "ancilla operator has dimension {} but the state has dimension {}",
            b.dim(),
            eta.dim()
        )));
    }
    Ok(())
}

/// `Tr[B η]`
pub fn corr_first(b: &Operator, eta: &DensityMatrix) -> Result<Complex64> {
    check_shapes(b, eta)?;
    Ok(eta.expectation(b))
}

/// `Tr[B₂† B₁ η]`
pub fn corr_second(b1: &Operator, b2: &Operator, eta: &DensityMatrix) -> Result<Complex64> {
    check_shapes(b1, eta)?;
    check_shapes(b2, eta)?;
    let prod = b2.matrix().adjoint() * b1.matrix();
    Ok(crate::qcore::operator_trace_product(&prod, eta.matrix()))
}

/// `Tr[H_E B η]`
pub fn corr_h_e(anc: &StructuredAncilla, b: &Operator, eta: &DensityMatrix) -> Result<Complex64> {
    check_shapes(b, eta)?;
    let prod = anc.h_total.matrix() * b.matrix();
    Ok(crate::qcore::operator_trace_product(&prod, eta.matrix()))
}

/// First- and second-order environment correlations for a list of interaction
/// terms, indexed by term position and accessible by label.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSet {
    pub labels: Vec<String>,
    /// `g1[t] = Tr[B_t η]`
    pub g1: Vec<Complex64>,
    /// `g2[(t, t′)] = Tr[B_t′† B_t η]`
    pub g2: CMatrix,
    /// `g_he[t] = Tr[H_E B_t η]`
    pub g_he: Vec<Complex64>,
}

impl CorrelationSet {
    fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn first(&self, label: &str) -> Option<Complex64> {
        self.index(label).map(|t| self.g1[t])
    }

    pub fn second(&self, label: &str, other: &str) -> Option<Complex64> {
        Some(self.g2[(self.index(label)?, self.index(other)?)])
    }

    pub fn energy_weighted(&self, label: &str) -> Option<Complex64> {
        self.index(label).map(|t| self.g_he[t])
    }

    /// Largest entry-wise difference to another set over the same labels.
    pub fn max_difference(&self, other: &CorrelationSet) -> Option<f64> {
        if self.labels != other.labels {
            return None;
        }
        let d1 = self.g1.iter().zip(&other.g1).map(|(a, b)| (a - b).norm());
        let d3 = self
            .g_he
            .iter()
            .zip(&other.g_he)
            .map(|(a, b)| (a - b).norm());
        let d2 = self
            .g2
            .iter()
            .zip(other.g2.iter())
            .map(|(a, b)| (a - b).norm());
        Some(d1.chain(d2).chain(d3).fold(0.0, f64::max))
    }
}

/// Correlations of `terms` in the thermal state of `anc` at `beta`.
pub fn correlation_set(
    anc: &StructuredAncilla,
    terms: &[InteractionTerm],
    beta: f64,
) -> Result<CorrelationSet> {
    let eta = anc.thermal_state(beta)?;
    correlation_set_in_state(anc, terms, &eta)
}

pub(crate) fn correlation_set_in_state(
    anc: &StructuredAncilla,
    terms: &[InteractionTerm],
    eta: &DensityMatrix,
) -> Result<CorrelationSet> {
    let mut seen = HashSet::new();
    for t in terms {
        if !seen.insert(t.label.as_str()) {
            return Err(Error::InvalidArgument(format!(
                "interaction term label '{}' is not unique",
                t.label
            )));
        }
    }
    let n = terms.len();
    let g1 = terms
        .iter()
        .map(|t| corr_first(&t.b_env, eta))
        .collect::<Result<Vec<_>>>()?;
    let g_he = terms
        .iter()
        .map(|t| corr_h_e(anc, &t.b_env, eta))
        .collect::<Result<Vec<_>>>()?;
    let mut g2 = CMatrix::zeros(n, n);
    for (i, ti) in terms.iter().enumerate() {
        for (j, tj) in terms.iter().enumerate() {
            g2[(i, j)] = corr_second(&ti.b_env, &tj.b_env, eta)?;
        }
    }
    Ok(CorrelationSet {
        labels: terms.iter().map(|t| t.label.clone()).collect(),
        g1,
        g2,
        g_he,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{max_abs, pauli};

    fn two_qubits(w1: f64, w2: f64, kappa: f64) -> StructuredAncilla {
        build_ancilla(AncillaSpec {
            subsystem_dims: vec![2, 2],
            free_terms: vec![
                FreeTerm {
                    subsystem: 0,
                    omega: w1,
                    lowering: pauli::ladder_lower(),
                },
                FreeTerm {
                    subsystem: 1,
                    omega: w2,
                    lowering: pauli::ladder_lower(),
                },
            ],
            couplings: vec![CouplingTerm {
                first: 0,
                second: 1,
                kappa: Complex64::new(kappa, 0.0),
                op_first: pauli::ladder_raise(),
                op_second: pauli::ladder_raise(),
            }],
            energy_shift: -(w1 + w2) / 2.0,
        })
        .unwrap()
    }

    #[test]
    fn non_interacting_levels_are_sums() {
        let anc = two_qubits(0.5, 1.5, 0.0);
        let e = anc.dressed_energies();
        for (got, want) in e.iter().zip([-1.0, -0.5, 0.5, 1.0]) {
            assert!((got - want).abs() < 1e-12, "{e:?}");
        }
        assert_eq!(anc.h_total, &anc.h_free + &anc.h_int);
    }

    #[test]
    fn interacting_levels_match_closed_form() {
        let anc = two_qubits(0.5, 1.5, 0.3);
        let r = 0.34_f64.sqrt();
        for (got, want) in anc.dressed_energies().iter().zip([-1.0, -r, r, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn resonant_qubits_give_singlet_and_triplet() {
        let anc = two_qubits(1.0, 1.0, 0.5);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = &anc.eig.eigenvectors;
        // |E′₂⟩ = (|↑↓⟩ − |↓↑⟩)/√2 up to the phase convention, |E′₃⟩ = (|↓↑⟩ + |↑↓⟩)/√2.
        assert!((v[(1, 1)].re.abs() - s).abs() < 1e-12 && (v[(2, 1)].re.abs() - s).abs() < 1e-12);
        assert!((v[(1, 1)].re * v[(2, 1)].re + 0.5).abs() < 1e-12);
        assert!((v[(1, 2)].re - s).abs() < 1e-12 && (v[(2, 2)].re - s).abs() < 1e-12);
    }

    #[test]
    fn thermal_state_coherence_needs_interaction() {
        let free = two_qubits(0.5, 1.5, 0.0).thermal_state(1.0).unwrap();
        let m = free.matrix();
        assert!((0..4).all(|i| (0..4).all(|j| i == j || m[(i, j)].norm() < 1e-15)));
        let coupled = two_qubits(0.5, 1.5, 0.3).thermal_state(1.0).unwrap();
        assert!(coupled.matrix()[(1, 2)].norm() > 1e-3);
    }

    #[test]
    fn cold_ancilla_is_in_its_ground_state() {
        let eta = two_qubits(0.5, 1.5, 0.3).thermal_state(50.0).unwrap();
        let ground = DensityMatrix::basis_state(&HilbertSpace::qubits(2), 0).unwrap();
        assert!(eta.distance_max(&ground) < 1e-8);
    }

    #[test]
    fn spec_validation() {
        let mut spec = two_qubits(0.5, 1.5, 0.3).spec;
        spec.couplings[0].second = 0;
        assert!(matches!(
            build_ancilla(spec.clone()),
            Err(Error::InvalidArgument(_))
        ));
        spec.couplings[0].second = 1;
        spec.free_terms[0].lowering = CMatrix::identity(3, 3);
        assert!(matches!(
            build_ancilla(spec.clone()),
            Err(Error::InvalidArgument(_))
        ));
        spec.free_terms[0].lowering = pauli::ladder_lower();
        spec.free_terms[0].omega = -1.0;
        assert!(build_ancilla(spec).is_err());
    }

    #[test]
    fn second_order_correlation_of_a_single_operator_is_nonnegative() {
        let anc = two_qubits(0.5, 1.5, 0.3);
        let eta = anc.thermal_state(0.7).unwrap();
        let b = Operator::embed(&pauli::ladder_lower(), 0, &anc.space).unwrap();
        let g = corr_second(&b, &b, &eta).unwrap();
        assert!(g.im.abs() < 1e-15 && g.re > 0.0);
        let id = Operator::identity(&anc.space);
        let mean = corr_h_e(&anc, &id, &eta).unwrap();
        assert!((mean - eta.expectation(&anc.h_total)).norm() < 1e-15);
        assert!(max_abs(eta.matrix()) <= 1.0);
    }

    #[test]
    fn labels_must_be_unique() {
        let anc = two_qubits(0.5, 1.5, 0.3);
        let b = Operator::identity(&anc.space);
        let t = InteractionTerm::new("x", pauli::sigma_x(), b);
        assert!(correlation_set(&anc, &[t.clone(), t], 1.0).is_err());
    }
}
