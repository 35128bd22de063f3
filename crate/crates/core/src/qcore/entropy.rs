use super::linalg::{hermitian_eig_matrix, SpectralDecomposition};
use super::{DensityMatrix, NumericalPolicy};
use crate::error::{Error, Result};

/// Von Neumann entropy `−Tr ρ ln ρ` in nats.
pub fn vn_entropy(rho: &DensityMatrix) -> Result<f64> {
    vn_entropy_with_policy(rho, &NumericalPolicy::STANDARD)
}

/// Eigenvalues in `[-policy.psd, 0)` count as zero; anything more negative
/// is reported as an invalid state.
pub fn vn_entropy_with_policy(rho: &DensityMatrix, policy: &NumericalPolicy) -> Result<f64> {
    let mut s = 0.0;
    for lam in rho.eigenvalues() {
        let p = clamp_eigenvalue(lam, policy)?;
        if p > 0.0 {
            s -= p * p.ln();
        }
    }
    Ok(s)
}

fn clamp_eigenvalue(lam: f64, policy: &NumericalPolicy) -> Result<f64> {
    if lam < -policy.psd {
        return Err(Error::InvalidState(format!(
            "negative eigenvalue {lam:e} in entropy"
        )));
    }
    Ok(lam.clamp(0.0, 1.0))
}

/// `S(ρ‖σ) = Tr ρ ln ρ − Tr ρ ln σ` in nats.
///
/// Fails with a domain error when ρ has weight outside the support of σ.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let policy = NumericalPolicy::STANDARD;
    if rho.space() != sigma.space() {
        return Err(Error::InvalidArgument(format!(
            "relative entropy between states on {} and {}",
            rho.space(),
            sigma.space()
        )));
    }
    let neg_entropy = -vn_entropy(rho)?;
    let eig = hermitian_eig_matrix(sigma.matrix())?;
    let v = &eig.eigenvectors;
    let r = rho.matrix();
    let mut cross = 0.0;
    for (k, &mu) in eig.eigenvalues.iter().enumerate() {
        let col = v.column(k);
        // ⟨w_k|ρ|w_k⟩
        let weight = col.dotc(&(r * col)).re;
        if mu <= policy.support {
            if weight > policy.support {
                return Err(Error::Domain(format!(
                    "state has weight {weight:e} on a direction where the reference has eigenvalue {mu:e}"
                )));
            }
            continue;
        }
        cross += weight * mu.ln();
    }
    Ok(neg_entropy - cross)
}

/// `S(ρ‖e^{−βH}/Z)` with `ln σ = −βH − ln Z` taken from the spectrum of `H`.
///
/// Avoids diagonalising a Gibbs state whose smallest populations carry
/// large relative rounding error.
pub fn relative_entropy_to_gibbs(
    rho: &DensityMatrix,
    h_eig: &SpectralDecomposition,
    beta: f64,
) -> Result<f64> {
    if rho.dim() != h_eig.dim() {
        return Err(Error::InvalidArgument(format!(
            "state has dimension {} but the Hamiltonian has dimension {}",
            rho.dim(),
            h_eig.dim()
        )));
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "inverse temperature must be finite and ≥ 0, got {beta}"
        )));
    }
    let e0 = h_eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let ln_z = h_eig
        .eigenvalues
        .iter()
        .map(|&e| (-beta * (e - e0)).exp())
        .sum::<f64>()
        .ln();
    let r = rho.matrix();
    let mut cross = 0.0;
    for (k, &e) in h_eig.eigenvalues.iter().enumerate() {
        let col = h_eig.eigenvectors.column(k);
        let weight = col.dotc(&(r * col)).re;
        cross += weight * (-beta * (e - e0) - ln_z);
    }
    Ok(-vn_entropy(rho)? - cross)
}
