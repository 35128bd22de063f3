//! The two worked models with a two-qubit structured ancilla, and their
//! closed-form spectra, correlations, maps and steady states.
//!
//! Bare ancilla levels are `|E₁⟩ = |↓↓⟩`, `|E₂⟩ = |↓↑⟩`, `|E₃⟩ = |↑↓⟩`,
//! `|E₄⟩ = |↑↑⟩`, i.e. basis indices 0…3.

mod example1;
mod example2;
mod two_qubit;

pub use example1::{
    example1_closed_g, example1_model, example1_steady, EXAMPLE1_DOWN_LABELS, EXAMPLE1_LABELS,
    EXAMPLE1_UP_LABELS,
};
pub use example2::{
    example2_analytic_steady, example2_closed_coeffs, example2_map_step, example2_model,
    example2_printed_steady, Example2Coefficients, Example2Map, EXAMPLE2_MINUS, EXAMPLE2_PLUS,
};
pub use two_qubit::{
    system_hamiltonian, two_qubit_ancilla, two_qubit_spectrum, TwoQubitAncillaParams,
    TwoQubitSpectrum,
};
