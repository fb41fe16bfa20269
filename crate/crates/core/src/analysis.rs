//! Entanglement diagnostics of the telecloning resource state.
//!
//! Two-qubit matrices use the register convention of the rest of the crate
//! (index = first qubit + 2 * second qubit). The reference matrices below are
//! invariant under exchanging the two middle basis states, so they read the
//! same in either qubit ordering.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, partial_trace, CMatrix, Label, PureState, NEG_EIG_TOL};
use crate::protocol::{build_telecloning_state, TelecloningState};

/// Logarithm base for entropies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Bits,
    Nats,
}

impl LogBase {
    fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Bits => x.log2(),
            LogBase::Nats => x.ln(),
        }
    }
}

/// `-sum p log p` over a spectrum. Slightly negative eigenvalues are rounding
/// noise and count as zero.
pub fn entropy_of_spectrum(eigenvalues: &[f64], base: LogBase) -> f64 {
    eigenvalues
        .iter()
        .map(|&p| {
            debug_assert!(p >= -NEG_EIG_TOL * 10.0, "eigenvalue {p} is not a probability");
            if p <= 0.0 {
                0.0
            } else {
                -p * base.log(p)
            }
        })
        .sum()
}

/// Von Neumann entropy of the reduced state on `labels`.
pub fn entropy(state: &PureState, labels: &[Label], base: LogBase) -> Result<f64> {
    let rho = partial_trace(state, labels)?;
    Ok(entropy_of_spectrum(&rho.eigenvalues(), base))
}

fn complement(state: &PureState, side: &[Label]) -> Result<Vec<Label>> {
    for &l in side {
        state.position(l)?;
    }
    let rest: Vec<Label> = state
        .layout()
        .iter()
        .copied()
        .filter(|l| !side.contains(l))
        .collect();
    if side.is_empty() || rest.is_empty() {
        return Err(Error::TrivialPartition);
    }
    Ok(rest)
}

/// Entanglement entropy (bits) across `side | rest`.
pub fn bipartite_entanglement(state: &PureState, side: &[Label]) -> Result<f64> {
    let rest = complement(state, side)?;
    // Both sides share the nonzero spectrum; diagonalize the smaller one.
    let smaller = if rest.len() < side.len() { &rest[..] } else { side };
    entropy(state, smaller, LogBase::Bits)
}

/// Nonzero Schmidt coefficients across `side | rest`, descending.
pub fn schmidt_coefficients(state: &PureState, side: &[Label]) -> Result<Vec<f64>> {
    let rest = complement(state, side)?;
    let smaller = if rest.len() < side.len() { &rest[..] } else { side };
    let mut coeffs: Vec<f64> = partial_trace(state, smaller)?
        .eigenvalues()
        .into_iter()
        .filter(|&p| p > 1e-12)
        .map(f64::sqrt)
        .collect();
    coeffs.reverse();
    Ok(coeffs)
}

/// Reduced operator of one sender-side and one receiver-side qubit.
pub fn theoretical_rho_pc(m: usize) -> Result<CMatrix> {
    if m < 2 {
        return Err(Error::CopiesOutOfRange {
            m,
            min: 2,
            max: usize::MAX,
        });
    }
    let mf = m as f64;
    let d = 2.0 * mf + 1.0;
    let mid = mf - 1.0;
    let off = mf + 2.0;
    Ok(CMatrix::from_real_rows(&[
        &[d, 0.0, 0.0, off],
        &[0.0, mid, 0.0, 0.0],
        &[0.0, 0.0, mid, 0.0],
        &[off, 0.0, 0.0, d],
    ])
    .scale(1.0 / (6.0 * mf)))
}

/// Reduced operator of two qubits on the same side; independent of `m`.
pub fn theoretical_rho_pa() -> CMatrix {
    CMatrix::from_real_rows(&[
        &[2.0, 0.0, 0.0, 0.0],
        &[0.0, 1.0, 1.0, 0.0],
        &[0.0, 1.0, 1.0, 0.0],
        &[0.0, 0.0, 0.0, 2.0],
    ])
    .scale(1.0 / 6.0)
}

fn check_two_qubit(rho: &CMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::Shape(format!(
            "expected a 4x4 two-qubit operator, got {0}x{0}",
            rho.dim()
        )));
    }
    Ok(())
}

/// Transposes the indices of the second qubit (bit 1).
pub fn partial_transpose_2q(rho: &CMatrix) -> Result<CMatrix> {
    check_two_qubit(rho)?;
    let bit = 0b10;
    let mut out = CMatrix::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            let src_i = (i & !bit) | (j & bit);
            let src_j = (j & !bit) | (i & bit);
            out[(i, j)] = rho[(src_i, src_j)];
        }
    }
    Ok(out)
}

/// Smallest eigenvalue of the partial transpose. Negative exactly when the
/// two-qubit state is entangled.
pub fn ppt_min_eigenvalue(rho: &CMatrix) -> Result<f64> {
    Ok(eig_hermitian(&partial_transpose_2q(rho)?)?[0])
}

/// `S(i) + S(j) - S(ij)`.
pub fn mutual_information(state: &PureState, i: Label, j: Label, base: LogBase) -> Result<f64> {
    if i == j {
        return Err(Error::DuplicateLabel(i));
    }
    let si = entropy(state, &[i], base)?;
    let sj = entropy(state, &[j], base)?;
    let sij = entropy(state, &[i, j], base)?;
    Ok((si + sj - sij).max(0.0))
}

fn mutual_information_of_pair(rho: &CMatrix, base: LogBase) -> Result<f64> {
    check_two_qubit(rho)?;
    let marginal = |bit: usize| -> CMatrix {
        let mut out = CMatrix::zeros(2);
        for r in 0..4 {
            for c in 0..4 {
                if (r & !bit) == (c & !bit) {
                    out[((r & bit != 0) as usize, (c & bit != 0) as usize)] += rho[(r, c)];
                }
            }
        }
        out
    };
    let s = |m: &CMatrix| -> Result<f64> { Ok(entropy_of_spectrum(&eig_hermitian(m)?, base)) };
    Ok((s(&marginal(0b01))? + s(&marginal(0b10))? - s(rho)?).max(0.0))
}

/// Entanglement, in e-bits, consumed by three ways of distributing `m` clones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EbitAccounting {
    /// Shared telecloning resource, `log2(m + 1)`.
    pub telecloning: f64,
    /// Local cloning followed by `m` teleportations.
    pub clone_then_teleport: f64,
    /// Clone-then-teleport with every party able to act as sender, `m^2`.
    pub port_flexible: f64,
}

pub fn ebit_accounting(m: usize) -> Result<EbitAccounting> {
    if m == 0 {
        return Err(Error::CopiesOutOfRange {
            m,
            min: 1,
            max: usize::MAX,
        });
    }
    let mf = m as f64;
    Ok(EbitAccounting {
        telecloning: (mf + 1.0).log2(),
        clone_then_teleport: mf,
        port_flexible: mf * mf,
    })
}

/// Diagnostics for one class of qubit pairs.
#[derive(Debug, Clone, Serialize)]
pub struct PairClass {
    /// Representative pair whose matrix is reported.
    pub representative: [Label; 2],
    pub pairs_checked: usize,
    pub matrix: CMatrix,
    pub theoretical: CMatrix,
    /// Largest entrywise deviation from `theoretical` over every pair of the class.
    pub max_deviation: f64,
    pub min_pt_eigenvalue: f64,
    pub entangled: bool,
    pub mutual_information_bits: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntanglementReport {
    pub m: usize,
    pub total_entanglement_bits: f64,
    pub schmidt_coefficients: Vec<f64>,
    pub pair_class_opposite: PairClass,
    pub pair_class_same: PairClass,
    pub ebits: EbitAccounting,
    pub max_deviation: f64,
}

/// Every unordered pair of distinct qubits, split into (opposite, same side).
fn pair_classes(resource: &TelecloningState) -> (Vec<[Label; 2]>, Vec<[Label; 2]>) {
    let sender = resource.sender_side();
    let receivers = resource.receiver_side();
    let opposite = sender
        .iter()
        .flat_map(|&s| receivers.iter().map(move |&r| [s, r]))
        .collect();
    let mut same = Vec::new();
    for side in [&sender, &receivers] {
        for (k, &x) in side.iter().enumerate() {
            for &y in &side[k + 1..] {
                same.push([x, y]);
            }
        }
    }
    (opposite, same)
}

fn pair_class(state: &PureState, pairs: &[[Label; 2]], theoretical: CMatrix) -> Result<PairClass> {
    let representative = pairs[0];
    let matrix = partial_trace(state, &representative)?.matrix().clone();
    let mut max_deviation = 0.0f64;
    for pair in pairs {
        let rho = partial_trace(state, pair)?;
        max_deviation = max_deviation.max(rho.max_abs_diff(&theoretical));
    }
    let min_pt_eigenvalue = ppt_min_eigenvalue(&matrix)?;
    Ok(PairClass {
        representative,
        pairs_checked: pairs.len(),
        mutual_information_bits: mutual_information_of_pair(&matrix, LogBase::Bits)?,
        entangled: min_pt_eigenvalue < 0.0,
        min_pt_eigenvalue,
        matrix,
        theoretical,
        max_deviation,
    })
}

/// Full entanglement report for the `m`-copy resource, `m >= 2`.
pub fn entanglement_report(m: usize) -> Result<EntanglementReport> {
    if m < 2 {
        return Err(Error::CopiesOutOfRange {
            m,
            min: 2,
            max: crate::m_cap(),
        });
    }
    let resource = build_telecloning_state(m)?;
    report_for(&resource)
}

pub fn report_for(resource: &TelecloningState) -> Result<EntanglementReport> {
    let m = resource.copies();
    let state = resource.state();
    let sender = resource.sender_side();
    let (opposite, same) = pair_classes(resource);
    let pair_class_opposite = pair_class(state, &opposite, theoretical_rho_pc(m)?)?;
    let pair_class_same = pair_class(state, &same, theoretical_rho_pa())?;
    let max_deviation = pair_class_opposite
        .max_deviation
        .max(pair_class_same.max_deviation);
    Ok(EntanglementReport {
        m,
        total_entanglement_bits: bipartite_entanglement(state, &sender)?,
        schmidt_coefficients: schmidt_coefficients(state, &sender)?,
        pair_class_opposite,
        pair_class_same,
        ebits: ebit_accounting(m)?,
        max_deviation,
    })
}
