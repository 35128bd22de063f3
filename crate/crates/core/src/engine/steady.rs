use log::debug;
use nalgebra::{DVector, SVD};
use num_complex::Complex64;

use super::model::{CollisionModel, PropagatorKind};
use crate::error::{Error, Result};
use crate::qcore::{max_abs, CMatrix, DensityMatrix, HilbertSpace, NumericalPolicy, Operator};

/// Controls for the fixed-point solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyStateOptions {
    /// Required `‖Φ(ρ) − ρ‖_max` of the returned state.
    pub residual: f64,
    /// Relative singular-value floor below which the constrained system is rank deficient.
    pub rank_tolerance: f64,
    /// Step budget of the power-iteration fallback.
    pub max_iterations: usize,
}

impl Default for SteadyStateOptions {
    fn default() -> Self {
        Self {
            residual: 1e-10,
            rank_tolerance: 1e-10,
            max_iterations: 2_000_000,
        }
    }
}

/// The fixed point `ρ = Φ(ρ)` of a model's one-collision map.
pub fn steady_state(model: &CollisionModel, kind: PropagatorKind) -> Result<DensityMatrix> {
    if kind == PropagatorKind::AnalyticMap && !model.has_analytic_map() {
        return Err(Error::InvalidArgument(
            "this model registers no analytic map".into(),
        ));
    }
    fixed_point(
        model.system_space(),
        |x| model.apply_kind(kind, x).expect("kind checked"),
        &SteadyStateOptions::default(),
    )
}

/// Unit-trace fixed point of a linear map on `space`.
///
/// The map is vectorised column by column into `M`, and `(M − 1) v = 0`
/// together with `Tr v = 1` is solved in the least-squares sense through an
/// SVD. If the solution misses the residual target the solver falls back to
/// iterating the map.
pub fn fixed_point<F>(
    space: &HilbertSpace,
    map: F,
    opts: &SteadyStateOptions,
) -> Result<DensityMatrix>
where
    F: Fn(&CMatrix) -> CMatrix,
{
    let d = space.total_dim();
    let n = d * d;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);

    let mut a = CMatrix::zeros(n + 1, n);
    for j in 0..d {
        for i in 0..d {
            let mut e = CMatrix::zeros(d, d);
            e[(i, j)] = one;
            let img = map(&e);
            let col = i + j * d;
            for (r, z) in img.iter().enumerate() {
                a[(r, col)] = *z;
            }
            a[(col, col)] -= one;
        }
        a[(n, j + j * d)] = one;
    }
    let mut b = DVector::from_element(n + 1, zero);
    b[n] = one;

    let svd = SVD::new(a.clone(), true, true);
    let sv = &svd.singular_values;
    let s_max = sv.max();
    let s_min = sv.min();
    if s_min < opts.rank_tolerance * s_max.max(1.0) {
        return Err(Error::NonUniqueSteadyState(format!(
            "the constrained fixed-point system is rank deficient (σ_min = {s_min:e}, σ_max = {s_max:e})"
        )));
    }
    let solve = |rhs: &DVector<Complex64>| {
        svd.solve(rhs, 0.0)
            .map_err(|e| Error::Internal(format!("least-squares solve failed: {e}")))
    };
    let mut v = solve(&b)?;
    // Iterative refinement against the conditioning of slow relaxation modes.
    for _ in 0..2 {
        let r = &b - &a * &v;
        v += solve(&r)?;
    }
    let candidate = CMatrix::from_column_slice(d, d, v.as_slice());
    let candidate = normalise(&candidate);
    let residual = max_abs(&(map(&candidate) - &candidate));
    if residual <= opts.residual {
        return into_state(space, candidate);
    }

    debug!("direct fixed-point residual {residual:e}; iterating the map");
    let mut rho = CMatrix::identity(d, d).scale(1.0 / d as f64);
    let mut last = f64::INFINITY;
    for _ in 0..opts.max_iterations {
        let next = map(&rho);
        last = max_abs(&(&next - &rho));
        rho = next;
        if last <= opts.residual * 1e-2 {
            return into_state(space, normalise(&rho));
        }
    }
    Err(Error::NotConverged {
        steps: opts.max_iterations,
        residual: last,
    })
}

fn normalise(m: &CMatrix) -> CMatrix {
    let h = (m + m.adjoint()).scale(0.5);
    let tr = h.trace();
    h.map(|z| z / tr)
}

fn into_state(space: &HilbertSpace, m: CMatrix) -> Result<DensityMatrix> {
    DensityMatrix::hermitian_unit_trace(
        Operator::new(space.clone(), m)?,
        &NumericalPolicy::STANDARD,
    )
}
