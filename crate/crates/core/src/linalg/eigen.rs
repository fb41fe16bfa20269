//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the classical real symmetric Jacobi rotation, so
//! the combined two-by-two unitary is
//!
//! ```text
//! G = [[ c,       s      ],
//!      [ -s e^-i, c e^-i ]]      where a_pq = |a_pq| e^i.
//! ```

use super::{CMatrix, C64, HERMITIAN_TOL};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: CMatrix,
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn eig_hermitian(m: &CMatrix) -> Result<Vec<f64>> {
    Ok(jacobi(m, false)?.values)
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eigh(m: &CMatrix) -> Result<EigenDecomposition> {
    jacobi(m, true)
}

fn jacobi(m: &CMatrix, want_vectors: bool) -> Result<EigenDecomposition> {
    let dev = m.hermiticity_error();
    let scale = m.as_slice().iter().map(|z| z.norm()).fold(1.0, f64::max);
    if dev > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(dev));
    }

    let n = m.dim();
    let mut a = m.clone();
    // Symmetrize away sub-tolerance noise so the rotations see an exactly Hermitian input.
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = if want_vectors {
        CMatrix::identity(n)
    } else {
        CMatrix::zeros(0)
    };

    let frob2: f64 = a.as_slice().iter().map(|z| z.norm_sqr()).sum();
    let threshold = (f64::EPSILON * f64::EPSILON) * frob2.max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm2(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, want_vectors.then_some(&mut v), p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = if want_vectors {
        let mut sorted = CMatrix::zeros(n);
        for (dst, &src) in order.iter().enumerate() {
            for r in 0..n {
                sorted[(r, dst)] = v[(r, src)];
            }
        }
        sorted
    } else {
        v
    };
    Ok(EigenDecomposition { values, vectors })
}

fn off_diagonal_norm2(a: &CMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum
}

fn rotate(a: &mut CMatrix, v: Option<&mut CMatrix>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let phase_conj = phase.conj();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let n = a.dim();
    // A <- A G
    for k in 0..n {
        let x = a[(k, p)];
        let y = a[(k, q)];
        a[(k, p)] = x * c - y * phase_conj * s;
        a[(k, q)] = x * s + y * phase_conj * c;
    }
    // A <- G^H A
    for k in 0..n {
        let x = a[(p, k)];
        let y = a[(q, k)];
        a[(p, k)] = x * c - y * phase * s;
        a[(q, k)] = x * s + y * phase * c;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(app - t * r, 0.0);
    a[(q, q)] = C64::new(aqq + t * r, 0.0);

    if let Some(v) = v {
        for k in 0..n {
            let x = v[(k, p)];
            let y = v[(k, q)];
            v[(k, p)] = x * c - y * phase_conj * s;
            v[(k, q)] = x * s + y * phase_conj * c;
        }
    }
}
