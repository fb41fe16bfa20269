use thiserror::Error;

use crate::linalg::Label;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit label {0} appears on both operands")]
    LabelCollision(Label),
    #[error("qubit label {0} is not in the register layout")]
    UnknownLabel(Label),
    #[error("duplicate qubit label {0}")]
    DuplicateLabel(Label),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("partial trace needs at least one qubit to keep")]
    EmptyKeep,
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("not a density operator: {0}")]
    InvalidDensity(String),
    #[error("gate is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("gate {0} is not a Pauli operator")]
    NotPauli(String),
    #[error("excitation count {j} out of range for {m} qubits")]
    ExcitationOutOfRange { m: usize, j: usize },
    #[error("copy count {m} out of range [{min}, {max}]")]
    CopiesOutOfRange { m: usize, min: usize, max: usize },
    #[error("cloning {n} -> {m} copies is undefined (need 1 <= n <= m)")]
    InvalidCloneCounts { n: usize, m: usize },
    #[error("Bell outcome has zero probability")]
    ZeroProbability,
    #[error("partition must be a proper nonempty subset of the register")]
    TrivialPartition,
    #[error("state lies outside the clone code subspace (residual {0:e})")]
    SubspaceViolation(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
