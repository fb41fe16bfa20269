use super::{eig_hermitian, CMatrix, Label, PureState, C64, HERMITIAN_TOL, NEG_EIG_TOL, NORM_TOL};
use crate::error::{Error, Result};

/// Hermitian, unit-trace, positive semidefinite operator on a labeled register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    layout: Vec<Label>,
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(layout: Vec<Label>, matrix: CMatrix) -> Result<Self> {
        if matrix.dim() != 1usize << layout.len() {
            return Err(Error::Shape(format!(
                "{0}x{0} matrix for {1} qubits",
                matrix.dim(),
                layout.len()
            )));
        }
        let herm = matrix.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > NORM_TOL || trace.im.abs() > NORM_TOL {
            return Err(Error::InvalidDensity(format!("trace {trace}")));
        }
        let min = eig_hermitian(&matrix)?[0];
        if min < -NEG_EIG_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { layout, matrix })
    }

    pub(crate) fn new_unchecked(layout: Vec<Label>, matrix: CMatrix) -> Self {
        debug_assert_eq!(matrix.dim(), 1usize << layout.len());
        Self { layout, matrix }
    }

    pub fn from_pure(state: &PureState) -> Self {
        Self {
            layout: state.layout().to_vec(),
            matrix: CMatrix::outer(state.amplitudes()),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.layout.len()
    }

    pub fn layout(&self) -> &[Label] {
        &self.layout
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eig_hermitian(&self.matrix).expect("density operators are Hermitian by construction")
    }

    /// `<0|rho|0>` etc. in the computational basis.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.matrix.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.matrix.max_abs_diff(other)
    }
}

/// Anything a reduced density operator can be taken from.
pub trait Reducible {
    fn partial_trace(&self, keep: &[Label]) -> Result<DensityOperator>;
}

impl Reducible for PureState {
    fn partial_trace(&self, keep: &[Label]) -> Result<DensityOperator> {
        let plan = TracePlan::new(self.layout(), keep)?;
        let kdim = 1usize << keep.len();
        let edim = 1usize << (self.num_qubits() - keep.len());
        // psi[k * edim + e]
        let mut psi = vec![C64::new(0.0, 0.0); kdim * edim];
        for (idx, &amp) in self.amplitudes().iter().enumerate() {
            let (k, e) = plan.split(idx);
            psi[k * edim + e] = amp;
        }
        let mut rho = CMatrix::zeros(kdim);
        for i in 0..kdim {
            let ri = &psi[i * edim..(i + 1) * edim];
            for j in i..kdim {
                let rj = &psi[j * edim..(j + 1) * edim];
                let v: C64 = ri.iter().zip(rj).map(|(a, b)| a * b.conj()).sum();
                rho[(i, j)] = v;
                rho[(j, i)] = v.conj();
            }
        }
        Ok(DensityOperator::new_unchecked(keep.to_vec(), rho))
    }
}

impl Reducible for DensityOperator {
    fn partial_trace(&self, keep: &[Label]) -> Result<DensityOperator> {
        let plan = TracePlan::new(&self.layout, keep)?;
        let kdim = 1usize << keep.len();
        let dim = self.matrix.dim();
        let mut rho = CMatrix::zeros(kdim);
        for r in 0..dim {
            let (ki, er) = plan.split(r);
            for c in 0..dim {
                let (kj, ec) = plan.split(c);
                if er == ec {
                    rho[(ki, kj)] += self.matrix[(r, c)];
                }
            }
        }
        Ok(DensityOperator::new_unchecked(keep.to_vec(), rho))
    }
}

/// Reduced operator on `keep`, ordered as given (bit `t` addresses `keep[t]`).
pub fn partial_trace<R: Reducible + ?Sized>(state: &R, keep: &[Label]) -> Result<DensityOperator> {
    state.partial_trace(keep)
}

/// `<phi|rho|phi>`.
pub fn fidelity_pure(rho: &DensityOperator, phi: &PureState) -> Result<f64> {
    if rho.matrix.dim() != phi.amplitudes().len() {
        return Err(Error::Shape(format!(
            "density operator of dimension {} against state of dimension {}",
            rho.matrix.dim(),
            phi.amplitudes().len()
        )));
    }
    Ok(rho.matrix.expectation(phi.amplitudes()).re.clamp(0.0, 1.0))
}

/// Bit bookkeeping for splitting a register index into kept and environment parts.
struct TracePlan {
    keep_bits: Vec<usize>,
    env_bits: Vec<usize>,
}

impl TracePlan {
    fn new(layout: &[Label], keep: &[Label]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptyKeep);
        }
        let mut keep_bits = Vec::with_capacity(keep.len());
        for &label in keep {
            let bit = layout
                .iter()
                .position(|&l| l == label)
                .ok_or(Error::UnknownLabel(label))?;
            if keep_bits.contains(&bit) {
                return Err(Error::DuplicateLabel(label));
            }
            keep_bits.push(bit);
        }
        let env_bits = (0..layout.len()).filter(|b| !keep_bits.contains(b)).collect();
        Ok(Self { keep_bits, env_bits })
    }

    fn split(&self, index: usize) -> (usize, usize) {
        let gather = |bits: &[usize]| {
            bits.iter()
                .enumerate()
                .fold(0usize, |acc, (t, &b)| acc | (((index >> b) & 1) << t))
        };
        (gather(&self.keep_bits), gather(&self.env_bits))
    }
}
