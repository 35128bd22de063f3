use crate::qcore::{CMatrix, DensityMatrix};

/// `C_ℓ1 = Σ_{i≠j} |ρ_ij|` in the basis the matrix is written in.
///
/// For the qubit models the system Hamiltonian is diagonal, so this is the
/// energy-basis coherence and equals `|⟨σ_x⟩ + i⟨σ_y⟩|`.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    off_diagonal_sum(rho.matrix())
}

/// `C_ℓ1` after rotating into the orthonormal basis given by the columns of `basis`.
pub fn l1_coherence_in_basis(rho: &DensityMatrix, basis: &CMatrix) -> f64 {
    off_diagonal_sum(&(basis.adjoint() * rho.matrix() * basis))
}

fn off_diagonal_sum(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                total += m[(i, j)].norm();
            }
        }
    }
    total
}
