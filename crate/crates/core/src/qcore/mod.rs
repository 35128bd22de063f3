//! Dense complex linear algebra on small, finite-dimensional Hilbert spaces.
//!
//! Composite spaces use the Kronecker convention throughout: in
//! `a ⊗ b` the left factor's index varies slowest, so the basis state
//! `|n₁, n₂, …, n_K⟩` sits at row `((n₁·d₂ + n₂)·d₃ + …)`.

mod entropy;
mod linalg;
mod operator;
pub mod pauli;

pub use entropy::{
    relative_entropy, relative_entropy_to_gibbs, vn_entropy, vn_entropy_with_policy,
};
pub(crate) use linalg::partial_trace_matrix;
pub use linalg::{
    collision_unitary, gibbs_state, hermitian_eig, partial_trace, tensor_product,
    SpectralDecomposition,
};
pub(crate) use operator::trace_of_product as operator_trace_product;
pub use operator::{DensityMatrix, HilbertSpace, Operator};

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Dense complex matrix used as the storage type of every operator.
pub type CMatrix = DMatrix<Complex64>;

/// The numerical tolerances used across the crate, kept in one record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericalPolicy {
    /// Algebraic identities: Hermiticity, unit trace, unitarity, first law.
    pub algebraic: f64,
    /// Spectral reconstructions and Hermiticity of eigensolver input.
    pub spectral: f64,
    /// Eigenvalues in `[-psd, 0)` are treated as zero; below that a state is invalid.
    pub psd: f64,
    /// Eigenvalues of a reference state below this are outside its support.
    pub support: f64,
    /// Trajectories warn when a propagated state dips below `-warn_negativity`.
    pub warn_negativity: f64,
    /// Trajectories abort when a propagated state dips below `-abort_negativity`.
    pub abort_negativity: f64,
}

impl NumericalPolicy {
    pub const STANDARD: NumericalPolicy = NumericalPolicy {
        algebraic: 1e-12,
        spectral: 1e-10,
        psd: 1e-10,
        support: 1e-14,
        warn_negativity: 1e-8,
        abort_negativity: 1e-6,
    };
}

impl Default for NumericalPolicy {
    fn default() -> Self {
        Self::STANDARD
    }
}

/// Largest absolute entry of a matrix, `‖m‖_max`.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// `[a, b] = ab − ba`
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// `{a, b} = ab + ba`
pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

/// `(m + m†)/2`
pub(crate) fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}
