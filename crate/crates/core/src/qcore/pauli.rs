//! Qubit operators.
//!
//! Two basis orderings appear in the collision models:
//!
//! * system qubits use `(|↑⟩, |↓⟩)`, so `σ_z = diag(1, −1)` and `ρ₁₁` is the
//!   excited population;
//! * ancilla qubits use `(|↓⟩, |↑⟩)`, so the bare two-qubit states
//!   `|↓↓⟩, |↓↑⟩, |↑↓⟩, |↑↑⟩` are the basis indices 0…3 under the Kronecker
//!   convention.
//!
//! The `sigma_*` functions use the system ordering; the `ladder_*` functions
//! the ancilla ordering.

use num_complex::Complex64;

use super::{CMatrix, Operator};

fn op2(m: [[Complex64; 2]; 2]) -> Operator {
    Operator::from_matrix(CMatrix::from_fn(2, 2, |i, j| m[i][j])).expect("2x2 operator")
}

const O: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn sigma_x() -> Operator {
    op2([[O, ONE], [ONE, O]])
}

pub fn sigma_y() -> Operator {
    op2([[O, -I], [I, O]])
}

pub fn sigma_z() -> Operator {
    op2([[ONE, O], [O, -ONE]])
}

/// `σ⁺ = |↑⟩⟨↓|` in the `(↑, ↓)` ordering.
pub fn sigma_plus() -> Operator {
    op2([[O, ONE], [O, O]])
}

/// `σ⁻ = |↓⟩⟨↑|` in the `(↑, ↓)` ordering.
pub fn sigma_minus() -> Operator {
    op2([[O, O], [ONE, O]])
}

/// `|↑⟩⟨↓|` in the `(↓, ↑)` ordering.
pub fn ladder_raise() -> CMatrix {
    CMatrix::from_fn(2, 2, |i, j| if i == 1 && j == 0 { ONE } else { O })
}

/// `|↓⟩⟨↑|` in the `(↓, ↑)` ordering.
pub fn ladder_lower() -> CMatrix {
    CMatrix::from_fn(2, 2, |i, j| if i == 0 && j == 1 { ONE } else { O })
}

/// Bloch vector `(⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩)` of a qubit matrix in the `(↑, ↓)` ordering.
pub fn bloch_vector(rho: &CMatrix) -> [f64; 3] {
    let r01 = rho[(0, 1)];
    [2.0 * r01.re, -2.0 * r01.im, (rho[(0, 0)] - rho[(1, 1)]).re]
}

/// Inverse of [`bloch_vector`].
pub fn from_bloch(b: [f64; 3]) -> CMatrix {
    let [x, y, z] = b;
    CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new((1.0 + z) / 2.0, 0.0),
            Complex64::new(x / 2.0, -y / 2.0),
            Complex64::new(x / 2.0, y / 2.0),
            Complex64::new((1.0 - z) / 2.0, 0.0),
        ],
    )
}
