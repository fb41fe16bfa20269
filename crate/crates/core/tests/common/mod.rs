#![allow(dead_code)]

use teleclone::linalg::{CMatrix, Label, PureState, C64};

/// Reduced operator by explicit index contraction: for every full basis index
/// `x` and every assignment of the kept bits, pair `x` with the index that
/// agrees with it outside `keep`.
pub fn brute_force_partial_trace(state: &PureState, keep: &[Label]) -> CMatrix {
    let positions: Vec<usize> = keep
        .iter()
        .map(|l| state.layout().iter().position(|x| x == l).expect("label in layout"))
        .collect();
    let amps = state.amplitudes();
    let kdim = 1usize << keep.len();
    let mut rho = CMatrix::zeros(kdim);
    let kept_value = |x: usize| -> usize {
        positions
            .iter()
            .enumerate()
            .map(|(t, &p)| ((x >> p) & 1) << t)
            .sum()
    };
    for x in 0..amps.len() {
        let i = kept_value(x);
        for j in 0..kdim {
            let mut y = x;
            for (t, &p) in positions.iter().enumerate() {
                y = (y & !(1 << p)) | (((j >> t) & 1) << p);
            }
            rho[(i, j)] += amps[x] * amps[y].conj();
        }
    }
    rho
}

/// Eigenvalues from nalgebra's Hermitian solver, ascending.
pub fn nalgebra_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let n = m.dim();
    let mat = nalgebra::DMatrix::<nalgebra::Complex<f64>>::from_fn(n, n, |i, j| {
        let z = m[(i, j)];
        nalgebra::Complex::new(z.re, z.im)
    });
    let mut vals: Vec<f64> = mat.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

pub fn qubit_fidelity(input: (C64, C64), out: (C64, C64)) -> f64 {
    (input.0.conj() * out.0 + input.1.conj() * out.1).norm_sqr()
}

pub fn amplitudes(s: &PureState) -> (C64, C64) {
    (s.amplitudes()[0], s.amplitudes()[1])
}
