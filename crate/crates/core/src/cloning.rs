//! Symmetric (Dicke) states and the optimal universal 1 -> M cloning isometry.
//!
//! The isometry maps `a|0> + b|1>` to `a|phi_0> + b|phi_1>` on `m - 1`
//! ancilla qubits followed by `m` copy qubits, with
//!
//! ```text
//! |phi_0> = sum_j alpha_j |A_j> (x) |D(m, j)>
//! |phi_1> = sum_j alpha_j |A_{m-1-j}> (x) |D(m, m-j)>
//! alpha_j = sqrt(2 (m - j) / (m (m + 1)))
//! ```
//!
//! where `|D(m, j)>` is the Dicke state of `m` qubits with `j` excitations
//! and the ancilla states are themselves Dicke states, `|A_j> = |D(m-1, j)>`.

use crate::error::{Error, Result};
use crate::linalg::{
    apply_one_qubit, tensor_product, CMatrix, GateKind, Label, PureState, QubitGate, C64, NORM_TOL,
};

/// `(m, j)`: `m` qubits with exactly `j` of them excited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DickeLabel {
    m: usize,
    j: usize,
}

impl DickeLabel {
    pub fn new(m: usize, j: usize) -> Result<Self> {
        if m == 0 || j > m {
            return Err(Error::ExcitationOutOfRange { m, j });
        }
        Ok(Self { m, j })
    }

    pub fn qubits(&self) -> usize {
        self.m
    }

    pub fn excitations(&self) -> usize {
        self.j
    }

    pub fn state(&self) -> PureState {
        dicke_amplitudes(self.m, self.j)
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn dicke_amplitudes(m: usize, j: usize) -> PureState {
    let amp = C64::new(1.0 / (binomial(m, j) as f64).sqrt(), 0.0);
    let amps = (0..1usize << m)
        .map(|idx| {
            if idx.count_ones() as usize == j {
                amp
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    PureState::new(Label::generic(m).collect(), amps).expect("Dicke state is normalized")
}

/// Equal superposition of all `m`-qubit basis states of Hamming weight `j`,
/// on generic labels `q0..q{m-1}`.
pub fn dicke_state(m: usize, j: usize) -> Result<PureState> {
    Ok(DickeLabel::new(m, j)?.state())
}

/// Weight of the `j`-th branch of `|phi_0>`.
pub fn alpha_coeff(m: usize, j: usize) -> Result<f64> {
    if m == 0 || j >= m {
        return Err(Error::ExcitationOutOfRange { m, j });
    }
    let (m, j) = (m as f64, j as f64);
    Ok((2.0 * (m - j) / (m * (m + 1.0))).sqrt())
}

/// Optimal single-copy fidelity for universal `n -> m` cloning of qubits.
pub fn optimal_fidelity(n: usize, m: usize) -> Result<f64> {
    if n == 0 || m < n {
        return Err(Error::InvalidCloneCounts { n, m });
    }
    let (n, m) = (n as f64, m as f64);
    Ok((m * (n + 1.0) + n) / (m * (n + 2.0)))
}

/// `gamma |phi><phi| + (1 - gamma) |phi_perp><phi_perp|` for `phi = a|0> + b|1>`.
pub fn shrinking_form(a: C64, b: C64, gamma: f64) -> CMatrix {
    let (pa, pb) = orthogonal_complement(a, b);
    CMatrix::outer(&[a, b])
        .scale(gamma)
        .add(&CMatrix::outer(&[pa, pb]).scale(1.0 - gamma))
}

/// Fixed representative `-conj(b)|0> + conj(a)|1>` of the state orthogonal to `a|0> + b|1>`.
pub fn orthogonal_complement(a: C64, b: C64) -> (C64, C64) {
    (-b.conj(), a.conj())
}

/// The two code states spanning the range of the cloning isometry.
#[derive(Debug, Clone)]
pub struct CloneBasisPair {
    m: usize,
    phi0: PureState,
    phi1: PureState,
}

impl CloneBasisPair {
    pub fn copies(&self) -> usize {
        self.m
    }

    pub fn phi0(&self) -> &PureState {
        &self.phi0
    }

    pub fn phi1(&self) -> &PureState {
        &self.phi1
    }

    /// `A1..A{m-1}, C1..Cm`.
    pub fn layout(&self) -> &[Label] {
        self.phi0.layout()
    }

    pub fn ancilla_labels(&self) -> Vec<Label> {
        Label::ancillas(self.m - 1).collect()
    }

    pub fn copy_labels(&self) -> Vec<Label> {
        Label::copies(self.m).collect()
    }

    /// `a |phi_0> + b |phi_1>`; requires `|a|^2 + |b|^2 = 1`.
    pub fn encode(&self, a: C64, b: C64) -> Result<PureState> {
        check_qubit_norm(a, b)?;
        let amps = self
            .phi0
            .amplitudes()
            .iter()
            .zip(self.phi1.amplitudes())
            .map(|(x, y)| a * x + b * y)
            .collect();
        PureState::new(self.layout().to_vec(), amps)
    }
}

pub(crate) fn check_qubit_norm(a: C64, b: C64) -> Result<()> {
    let norm2 = a.norm_sqr() + b.norm_sqr();
    if (norm2 - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm2));
    }
    Ok(())
}

pub fn clone_basis(m: usize) -> Result<CloneBasisPair> {
    if m == 0 {
        return Err(Error::CopiesOutOfRange {
            m,
            min: 1,
            max: usize::MAX,
        });
    }
    let layout: Vec<Label> = Label::ancillas(m - 1).chain(Label::copies(m)).collect();
    let dim = 1usize << (2 * m - 1);
    let mut phi0 = vec![C64::new(0.0, 0.0); dim];
    let mut phi1 = vec![C64::new(0.0, 0.0); dim];
    let ancilla_labels: Vec<Label> = Label::ancillas(m - 1).collect();
    let copy_labels: Vec<Label> = Label::copies(m).collect();

    let ancilla = |j: usize| -> Result<PureState> {
        if m == 1 {
            PureState::new(Vec::new(), vec![C64::new(1.0, 0.0)])
        } else {
            dicke_state(m - 1, j)?.relabel(ancilla_labels.clone())
        }
    };
    let copies = |j: usize| -> Result<PureState> { dicke_state(m, j)?.relabel(copy_labels.clone()) };

    for j in 0..m {
        let alpha = alpha_coeff(m, j)?;
        let branch0 = tensor_product(&ancilla(j)?, &copies(j)?)?;
        let branch1 = tensor_product(&ancilla(m - 1 - j)?, &copies(m - j)?)?;
        for (dst, src) in phi0.iter_mut().zip(branch0.amplitudes()) {
            *dst += src * alpha;
        }
        for (dst, src) in phi1.iter_mut().zip(branch1.amplitudes()) {
            *dst += src * alpha;
        }
    }
    Ok(CloneBasisPair {
        m,
        phi0: PureState::new(layout.clone(), phi0)?,
        phi1: PureState::new(layout, phi1)?,
    })
}

/// Optimal 1 -> m clone of `a|0> + b|1>` on `A1..A{m-1}, C1..Cm`.
pub fn apply_clone_isometry(a: C64, b: C64, m: usize) -> Result<PureState> {
    check_qubit_norm(a, b)?;
    clone_basis(m)?.encode(a, b)
}

/// Applies the same Pauli operator (or identity) to every qubit of `state`.
pub fn simultaneous_pauli(state: &PureState, gate: &QubitGate) -> Result<PureState> {
    if gate.kind() == GateKind::Custom {
        return Err(Error::NotPauli(gate.to_string()));
    }
    let mut out = state.clone();
    for &label in state.layout() {
        out = apply_one_qubit(gate, label, &out)?;
    }
    Ok(out)
}
