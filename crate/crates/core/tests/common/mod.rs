#![allow(dead_code)]

use collision_core::qcore::{CMatrix, DensityMatrix, HilbertSpace, Operator};
use collision_core::C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const FIG3: (f64, f64, f64) = (0.5, 1.5, 0.3);

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_matrix(r: &mut StdRng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| {
        C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
    })
}

pub fn random_hermitian(r: &mut StdRng, n: usize) -> CMatrix {
    let m = random_matrix(r, n);
    (&m + m.adjoint()).map(|z| z * 0.5)
}

/// `G G† / Tr` with a Gaussian-like `G`; full rank with probability one.
pub fn random_density(r: &mut StdRng, space: &HilbertSpace) -> DensityMatrix {
    let n = space.total_dim();
    let g = random_matrix(r, n);
    let m = &g * g.adjoint();
    let t = m.trace();
    DensityMatrix::new(Operator::new(space.clone(), m.map(|z| z / t)).unwrap()).unwrap()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Kronecker product by explicit index loops.
pub fn kron_oracle(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (p, q) = (a.nrows(), b.nrows());
    CMatrix::from_fn(p * q, p * q, |r, s| a[(r / q, s / q)] * b[(r % q, s % q)])
}

/// Trace over the second factor of a `da × db` bipartite matrix.
pub fn trace_second_oracle(m: &CMatrix, da: usize, db: usize) -> CMatrix {
    CMatrix::from_fn(da, da, |i, j| {
        (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
    })
}

/// Trace over the first factor of a `da × db` bipartite matrix.
pub fn trace_first_oracle(m: &CMatrix, da: usize, db: usize) -> CMatrix {
    CMatrix::from_fn(db, db, |i, j| {
        (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()
    })
}

/// `exp(A)` by scaling and squaring of a Taylor series.
pub fn expm_oracle(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm = max_abs(a) * n as f64;
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.25 {
        s += 1;
    }
    let b = a.map(|z| z / 2f64.powi(s));
    let mut term = CMatrix::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &b / c(k as f64);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// `H_E` written out in the bare basis `|↓↓⟩, |↓↑⟩, |↑↓⟩, |↑↑⟩`.
pub fn h_e_oracle(w1: f64, w2: f64, k: f64) -> CMatrix {
    let (x, y) = (0.5 * (w1 + w2), 0.5 * (w1 - w2));
    let mut h =
        CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(-x), c(-y), c(y), c(x)]));
    h[(1, 2)] = c(k);
    h[(2, 1)] = c(k);
    h
}

pub fn eta_oracle(w1: f64, w2: f64, k: f64, beta: f64) -> CMatrix {
    let e = expm_oracle(&h_e_oracle(w1, w2, k).map(|z| z * -beta));
    let t = e.trace();
    e.map(|z| z / t)
}

pub fn thermal_qubit(omega: f64, beta: f64) -> DensityMatrix {
    // (↑, ↓) ordering: excited population first.
    let pe = 1.0 / (1.0 + (beta * omega).exp());
    let m = CMatrix::from_row_slice(2, 2, &[c(pe), c(0.0), c(0.0), c(1.0 - pe)]);
    DensityMatrix::new(Operator::from_matrix(m).unwrap()).unwrap()
}

pub fn qubit_state(p_up: f64, coh: C64) -> DensityMatrix {
    let m = CMatrix::from_row_slice(2, 2, &[c(p_up), coh, coh.conj(), c(1.0 - p_up)]);
    DensityMatrix::new(Operator::from_matrix(m).unwrap()).unwrap()
}

/// A coherent, generic pure qubit state.
pub fn coherent_qubit() -> DensityMatrix {
    DensityMatrix::pure(&HilbertSpace::qubits(1), &[c(0.8), C64::new(0.36, 0.48)]).unwrap()
}

pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        for (rank, &i) in idx.iter().enumerate() {
            r[i] = rank as f64;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}
