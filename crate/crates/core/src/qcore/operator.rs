use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{hermitian_part, max_abs, CMatrix, NumericalPolicy};
use crate::error::{Error, Result};

/// Factorisation of a finite-dimensional Hilbert space into subsystems.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HilbertSpace {
    dims: Vec<usize>,
}

impl HilbertSpace {
    /// Every subsystem dimension must be at least 2.
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidArgument(
                "a Hilbert space needs at least one subsystem".into(),
            ));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidArgument(format!(
                "subsystem dimension {d} is below 2"
            )));
        }
        Ok(Self { dims })
    }

    /// A single-factor space of dimension `dim`.
    pub fn single(dim: usize) -> Result<Self> {
        Self::new(vec![dim])
    }

    pub fn qubits(n: usize) -> Self {
        Self {
            dims: vec![2; n.max(1)],
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// The space of `self ⊗ other`.
    pub fn join(&self, other: &HilbertSpace) -> HilbertSpace {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        HilbertSpace { dims }
    }

    pub(crate) fn from_dims_unchecked(dims: Vec<usize>) -> Self {
        Self { dims }
    }
}

impl fmt::Display for HilbertSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "C^({})", parts.join("⊗"))
    }
}

/// A dense square matrix tagged with the factorisation of its space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: HilbertSpace,
    mat: CMatrix,
}

impl Operator {
    pub fn new(space: HilbertSpace, mat: CMatrix) -> Result<Self> {
        let n = space.total_dim();
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::InvalidArgument(format!(
                "matrix is {}x{} but {space} has dimension {n}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(Self { space, mat })
    }

    /// Wraps a square matrix as an operator on a single subsystem.
    pub fn from_matrix(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::InvalidArgument(format!(
                "operator matrix must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Self::new(HilbertSpace::single(mat.nrows())?, mat)
    }

    /// Builds a single-subsystem operator from row-major real entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument(
                "rows must form a square matrix".into(),
            ));
        }
        let mat = CMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0));
        Self::from_matrix(mat)
    }

    pub fn identity(space: &HilbertSpace) -> Self {
        let n = space.total_dim();
        Self {
            space: space.clone(),
            mat: CMatrix::identity(n, n),
        }
    }

    pub fn zeros(space: &HilbertSpace) -> Self {
        let n = space.total_dim();
        Self {
            space: space.clone(),
            mat: CMatrix::zeros(n, n),
        }
    }

    /// Places `local` on subsystem `k` of `space`, with identities elsewhere.
    pub fn embed(local: &CMatrix, k: usize, space: &HilbertSpace) -> Result<Self> {
        let dims = space.dims();
        if k >= dims.len() {
            return Err(Error::InvalidArgument(format!(
                "subsystem index {k} out of range for {space}"
            )));
        }
        if local.nrows() != dims[k] || local.ncols() != dims[k] {
            return Err(Error::InvalidArgument(format!(
                "operator of size {}x{} does not match subsystem {k} of dimension {}",
                local.nrows(),
                local.ncols(),
                dims[k]
            )));
        }
        let left: usize = dims[..k].iter().product();
        let right: usize = dims[k + 1..].iter().product();
        let mat = CMatrix::identity(left, left)
            .kronecker(local)
            .kronecker(&CMatrix::identity(right, right));
        Ok(Self {
            space: space.clone(),
            mat,
        })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space.clone(),
            mat: self.mat.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.mat)
    }

    /// `‖A − A†‖_max`
    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(&self.mat - self.mat.adjoint()))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self {
            space: self.space.clone(),
            mat: self.mat.map(|x| x * z),
        }
    }

    pub fn scale_real(&self, x: f64) -> Self {
        Self {
            space: self.space.clone(),
            mat: self.mat.scale(x),
        }
    }

    /// `Tr[self · other]`
    pub fn trace_product(&self, other: &Operator) -> Complex64 {
        trace_of_product(&self.mat, &other.mat)
    }

    pub fn commutator(&self, other: &Operator) -> Self {
        self.assert_same_space(other);
        Self {
            space: self.space.clone(),
            mat: super::commutator(&self.mat, &other.mat),
        }
    }

    /// Re-tags the matrix with a different factorisation of the same total dimension.
    pub fn with_space(self, space: HilbertSpace) -> Result<Self> {
        Self::new(space, self.mat)
    }

    fn assert_same_space(&self, other: &Operator) {
        assert_eq!(
            self.space, other.space,
            "operator spaces differ: {} vs {}",
            self.space, other.space
        );
    }
}

/// `Tr[a b]` without forming the product.
pub(crate) fn trace_of_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.assert_same_space(rhs);
        Operator {
            space: self.space.clone(),
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.assert_same_space(rhs);
        Operator {
            space: self.space.clone(),
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.assert_same_space(rhs);
        Operator {
            space: self.space.clone(),
            mat: &self.mat * &rhs.mat,
        }
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator {
            space: self.space.clone(),
            mat: -&self.mat,
        }
    }
}

/// A positive semidefinite, unit-trace Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: Operator,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity with the standard policy.
    pub fn new(op: Operator) -> Result<Self> {
        Self::new_with_policy(op, &NumericalPolicy::STANDARD)
    }

    pub fn new_with_policy(op: Operator, policy: &NumericalPolicy) -> Result<Self> {
        let rho = Self::hermitian_unit_trace(op, policy)?;
        let min = rho.min_eigenvalue();
        if min < -policy.psd {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {min:e} is below -{:e}",
                policy.psd
            )));
        }
        Ok(rho)
    }

    /// Checks Hermiticity and trace only. Used for the outputs of truncated
    /// propagators, whose positivity is monitored separately.
    pub fn hermitian_unit_trace(op: Operator, policy: &NumericalPolicy) -> Result<Self> {
        let defect = op.hermiticity_defect();
        if defect > policy.algebraic {
            return Err(Error::InvalidState(format!(
                "not Hermitian: ‖ρ−ρ†‖_max = {defect:e}"
            )));
        }
        let tr = op.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > policy.algebraic {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let mat = hermitian_part(op.matrix());
        Ok(Self {
            op: Operator {
                space: op.space,
                mat,
            },
        })
    }

    /// Wraps a matrix produced by a trace-preserving, positivity-preserving
    /// map of a valid state; only Hermiticity is restored.
    pub(crate) fn from_trusted(space: HilbertSpace, mat: CMatrix) -> Self {
        Self {
            op: Operator {
                space,
                mat: hermitian_part(&mat),
            },
        }
    }

    pub fn maximally_mixed(space: &HilbertSpace) -> Self {
        let n = space.total_dim() as f64;
        Self {
            op: Operator::identity(space).scale_real(1.0 / n),
        }
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalised) vector.
    pub fn pure(space: &HilbertSpace, psi: &[Complex64]) -> Result<Self> {
        let n = space.total_dim();
        if psi.len() != n {
            return Err(Error::InvalidArgument(format!(
                "state vector has length {} but the space has dimension {n}",
                psi.len()
            )));
        }
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let mat = CMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj() / (norm * norm));
        Ok(Self {
            op: Operator {
                space: space.clone(),
                mat,
            },
        })
    }

    /// A basis projector `|k⟩⟨k|`.
    pub fn basis_state(space: &HilbertSpace, k: usize) -> Result<Self> {
        let n = space.total_dim();
        if k >= n {
            return Err(Error::InvalidArgument(format!(
                "basis index {k} out of range {n}"
            )));
        }
        let mut mat = CMatrix::zeros(n, n);
        mat[(k, k)] = Complex64::new(1.0, 0.0);
        Ok(Self {
            op: Operator {
                space: space.clone(),
                mat,
            },
        })
    }

    pub fn op(&self) -> &Operator {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.op.mat
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.op.space
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// `Tr[A ρ]`
    pub fn expectation(&self, a: &Operator) -> Complex64 {
        trace_of_product(&a.mat, &self.op.mat)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .op
            .mat
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// `ρ ⊗ σ`
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            op: super::tensor_product(&self.op, &other.op),
        }
    }

    /// Keeps only the diagonal in the computational basis.
    pub fn dephased(&self) -> DensityMatrix {
        let n = self.dim();
        let mat = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                self.op.mat[(i, i)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        DensityMatrix {
            op: Operator {
                space: self.op.space.clone(),
                mat,
            },
        }
    }

    /// Max-norm distance to another state on the same space.
    pub fn distance_max(&self, other: &DensityMatrix) -> f64 {
        max_abs(&(&self.op.mat - &other.op.mat))
    }
}
