use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;

use super::{
    hermitian_part, max_abs, CMatrix, DensityMatrix, HilbertSpace, NumericalPolicy, Operator,
};
use crate::error::{Error, Result};

/// Eigensystem of a Hermitian operator.
///
/// Eigenvalues are ascending. Each eigenvector (column) is normalised with its
/// largest-magnitude component real and positive; inside a degenerate
/// eigenspace the basis is rebuilt by Gram–Schmidt over the computational
/// basis vectors in index order, so the decomposition is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V f(Λ) V†` for a real function of the eigenvalues.
    pub fn apply_real(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        self.apply(|x| Complex64::new(f(x), 0.0))
    }

    /// `V f(Λ) V†` for a complex function of the eigenvalues.
    pub fn apply(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let fk = f(lam);
            scaled.column_mut(k).iter_mut().for_each(|z| *z *= fk);
        }
        scaled * v.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply_real(|x| x)
    }
}

/// `a ⊗ b` with the left factor varying slowest.
pub fn tensor_product(a: &Operator, b: &Operator) -> Operator {
    let space = a.space().join(b.space());
    Operator::new(space, a.matrix().kronecker(b.matrix()))
        .expect("kronecker product has matching dimension")
}

/// Traces out every subsystem not listed in `keep`.
///
/// The kept subsystems stay in their original order regardless of the order
/// in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let (space, mat) = partial_trace_matrix(rho.space(), rho.matrix(), keep)?;
    Ok(DensityMatrix::from_trusted(space, mat))
}

pub(crate) fn partial_trace_matrix(
    space: &HilbertSpace,
    mat: &CMatrix,
    keep: &[usize],
) -> Result<(HilbertSpace, CMatrix)> {
    let dims = space.dims();
    let k = dims.len();
    if keep.is_empty() {
        return Err(Error::InvalidArgument(
            "partial trace must keep at least one subsystem".into(),
        ));
    }
    let mut kept = vec![false; k];
    for &s in keep {
        if s >= k {
            return Err(Error::InvalidArgument(format!(
                "subsystem index {s} out of range for {space}"
            )));
        }
        if kept[s] {
            return Err(Error::InvalidArgument(format!(
                "subsystem index {s} listed twice"
            )));
        }
        kept[s] = true;
    }
    let kept_dims: Vec<usize> = (0..k).filter(|&s| kept[s]).map(|s| dims[s]).collect();
    let traced_dims: Vec<usize> = (0..k).filter(|&s| !kept[s]).map(|s| dims[s]).collect();
    let dk: usize = kept_dims.iter().product();
    let dt: usize = traced_dims.iter().product();

    // Full index of the basis state built from a kept multi-index and a traced multi-index.
    let strides: Vec<usize> = (0..k).map(|s| dims[s + 1..].iter().product()).collect();
    let compose = |ik: usize, it: usize| -> usize {
        let mut rk = ik;
        let mut rt = it;
        let mut idx = 0;
        for s in (0..k).rev() {
            let digit = if kept[s] {
                let d = rk % dims[s];
                rk /= dims[s];
                d
            } else {
                let d = rt % dims[s];
                rt /= dims[s];
                d
            };
            idx += digit * strides[s];
        }
        idx
    };

    let index: Vec<Vec<usize>> = (0..dk)
        .map(|i| (0..dt).map(|m| compose(i, m)).collect())
        .collect();
    let out = CMatrix::from_fn(dk, dk, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..dt {
            acc += mat[(index[i][m], index[j][m])];
        }
        acc
    });
    Ok((HilbertSpace::from_dims_unchecked(kept_dims), out))
}

/// Eigendecomposition of a Hermitian operator (see [`SpectralDecomposition`]).
pub fn hermitian_eig(h: &Operator) -> Result<SpectralDecomposition> {
    hermitian_eig_matrix(h.matrix())
}

pub(crate) fn hermitian_eig_matrix(h: &CMatrix) -> Result<SpectralDecomposition> {
    let policy = NumericalPolicy::STANDARD;
    let scale = max_abs(h).max(1.0);
    let defect = max_abs(&(h - h.adjoint()));
    if defect > policy.spectral * scale {
        return Err(Error::InvalidArgument(format!(
            "operator is not Hermitian: ‖H−H†‖_max = {defect:e}"
        )));
    }
    let n = h.nrows();
    let eig = SymmetricEigen::new(hermitian_part(h));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);

    // Rebuild degenerate eigenspaces deterministically.
    let gap = policy.spectral * scale;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end] - eigenvalues[end - 1] <= gap {
            end += 1;
        }
        if end - start > 1 {
            let block = canonical_subspace_basis(&vectors.columns(start, end - start).into_owned());
            vectors.columns_mut(start, end - start).copy_from(&block);
        }
        start = end;
    }

    for k in 0..n {
        fix_phase(&mut vectors, k);
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// Orthonormal basis of span(cols) obtained by projecting e₀, e₁, … in order.
fn canonical_subspace_basis(cols: &CMatrix) -> CMatrix {
    let n = cols.nrows();
    let m = cols.ncols();
    let projector = cols * cols.adjoint();
    let mut basis: Vec<DVector<Complex64>> = Vec::with_capacity(m);
    for i in 0..n {
        if basis.len() == m {
            break;
        }
        let mut u: DVector<Complex64> = projector.column(i).into_owned();
        for b in &basis {
            let overlap = b.dotc(&u);
            u -= b * overlap;
        }
        // Second pass for numerical orthogonality.
        for b in &basis {
            let overlap = b.dotc(&u);
            u -= b * overlap;
        }
        let norm = u.norm();
        if norm > 1e-6 {
            basis.push(u / Complex64::new(norm, 0.0));
        }
    }
    if basis.len() < m {
        // Cannot happen for an m-dimensional subspace of C^n; keep the solver's basis.
        return cols.clone();
    }
    CMatrix::from_columns(&basis)
}

/// Rotates column `k` so that its largest-magnitude entry is real and positive.
pub(crate) fn fix_phase(v: &mut CMatrix, k: usize) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for i in 0..v.nrows() {
        let mag = v[(i, k)].norm();
        if mag > best_mag + 1e-12 {
            best = i;
            best_mag = mag;
        }
    }
    if best_mag <= 0.0 {
        return;
    }
    let phase = v[(best, k)] / best_mag;
    let rot = phase.conj();
    v.column_mut(k).iter_mut().for_each(|z| *z *= rot);
    v[(best, k)] = Complex64::new(v[(best, k)].re, 0.0);
}

/// `exp(−i·dt·H)` through the spectral decomposition of `H` (ħ = 1).
pub fn collision_unitary(h_total: &Operator, dt: f64) -> Result<Operator> {
    if !(dt >= 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "collision time must be finite and ≥ 0, got {dt}"
        )));
    }
    let eig = hermitian_eig(h_total)?;
    let u = eig.apply(|lam| Complex64::from_polar(1.0, -lam * dt));
    Operator::new(h_total.space().clone(), u)
}

/// `e^{−βH}/Z`, assembled in the eigenbasis of `H`.
pub fn gibbs_state(h: &Operator, beta: f64) -> Result<DensityMatrix> {
    let eig = hermitian_eig(h)?;
    gibbs_from_spectrum(h.space(), &eig, beta)
}

pub(crate) fn gibbs_from_spectrum(
    space: &HilbertSpace,
    eig: &SpectralDecomposition,
    beta: f64,
) -> Result<DensityMatrix> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "inverse temperature must be finite and ≥ 0, got {beta}"
        )));
    }
    let e0 = eig.eigenvalues.first().copied().unwrap_or(0.0);
    let weights: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&e| (-beta * (e - e0)).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    let mut scaled = eig.eigenvectors.clone();
    for (k, w) in weights.iter().enumerate() {
        let p = Complex64::new(w / z, 0.0);
        scaled.column_mut(k).iter_mut().for_each(|x| *x *= p);
    }
    let mat = scaled * eig.eigenvectors.adjoint();
    Ok(DensityMatrix::from_trusted(space.clone(), mat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::pauli;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_tensor_identity() {
        let i2 = Operator::identity(&HilbertSpace::qubits(1));
        let i4 = tensor_product(&i2, &i2);
        assert_eq!(i4.matrix(), &CMatrix::identity(4, 4));
        assert_eq!(i4.space().dims(), &[2, 2]);
    }

    #[test]
    fn sigma_z_tensor_identity_is_diag_pattern() {
        let z = pauli::sigma_z();
        let i2 = Operator::identity(&HilbertSpace::qubits(1));
        let m = tensor_product(&z, &i2);
        let expected = [1.0, 1.0, -1.0, -1.0];
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { expected[i] } else { 0.0 };
                assert_eq!(m.matrix()[(i, j)], c(want));
            }
        }
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = [c(s), c(0.0), c(0.0), c(s)];
        let rho = DensityMatrix::pure(&HilbertSpace::qubits(2), &phi).unwrap();
        for keep in [0, 1] {
            let r = partial_trace(&rho, &[keep]).unwrap();
            assert!(max_abs(&(r.matrix() - CMatrix::identity(2, 2).scale(0.5))) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_rejects_bad_indices() {
        let rho = DensityMatrix::maximally_mixed(&HilbertSpace::qubits(2));
        assert!(matches!(
            partial_trace(&rho, &[2]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            partial_trace(&rho, &[]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            partial_trace(&rho, &[0, 0]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn eig_of_paulis() {
        let ez = hermitian_eig(&pauli::sigma_z()).unwrap();
        assert_eq!(ez.eigenvalues, vec![-1.0, 1.0]);

        let ex = hermitian_eig(&pauli::sigma_x()).unwrap();
        assert!((ex.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((ex.eigenvalues[1] - 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // Phase convention: largest component real positive, first index on ties.
        let v = &ex.eigenvectors;
        assert!((v[(0, 0)] - c(s)).norm() < 1e-14 && (v[(1, 0)] - c(-s)).norm() < 1e-14);
        assert!((v[(0, 1)] - c(s)).norm() < 1e-14 && (v[(1, 1)] - c(s)).norm() < 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = Operator::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            collision_unitary(&m, 0.1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn degenerate_eigenspace_is_canonical() {
        // diag(1, 1, 2): the degenerate block is spanned by e0, e1 exactly.
        let h = Operator::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 2.0]])
            .unwrap();
        let e = hermitian_eig(&h).unwrap();
        assert!(max_abs(&(&e.eigenvectors - CMatrix::identity(3, 3))) < 1e-14);
    }

    #[test]
    fn unitary_of_zero_time_is_identity() {
        let h = pauli::sigma_x();
        let u = collision_unitary(&h, 0.0).unwrap();
        assert!(max_abs(&(u.matrix() - CMatrix::identity(2, 2))) < 1e-15);
        assert!(collision_unitary(&h, -1.0).is_err());
    }

    #[test]
    fn unitary_of_diagonal_hamiltonian() {
        let (w, dt) = (1.3, 0.7);
        let h = pauli::sigma_z().scale_real(w / 2.0);
        let u = collision_unitary(&h, dt).unwrap();
        let m = u.matrix();
        assert!((m[(0, 0)] - Complex64::from_polar(1.0, -w * dt / 2.0)).norm() < 1e-15);
        assert!((m[(1, 1)] - Complex64::from_polar(1.0, w * dt / 2.0)).norm() < 1e-15);
        assert!(m[(0, 1)].norm() < 1e-15 && m[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn gibbs_infinite_temperature_and_qubit_population() {
        let h = pauli::sigma_z().scale_real(0.8);
        let eta = gibbs_state(&h, 0.0).unwrap();
        assert!(max_abs(&(eta.matrix() - CMatrix::identity(2, 2).scale(0.5))) < 1e-15);

        // (ω/2)σ_z with ω = 1.6; excited level is index 0 for the standard σ_z.
        let (w, beta) = (1.6, 0.9);
        let eta = gibbs_state(&pauli::sigma_z().scale_real(w / 2.0), beta).unwrap();
        let excited = 1.0 / (1.0 + (beta * w).exp());
        assert!((eta.matrix()[(0, 0)].re - excited).abs() < 1e-15);
        assert!(gibbs_state(&h, -0.1).is_err());
        assert!(gibbs_state(&h, f64::INFINITY).is_err());
    }
}
