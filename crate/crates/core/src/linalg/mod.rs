//! Dense state-vector and density-operator kernel.
//!
//! Basis ordering is little-endian over the register layout: bit `k` of a
//! basis index addresses the `k`-th label.

mod density;
mod eigen;
mod gate;
mod label;
mod matrix;
mod random;
mod state;

pub use density::{fidelity_pure, partial_trace, DensityOperator, Reducible};
pub use eigen::{eig_hermitian, eigh, EigenDecomposition};
pub use gate::{GateKind, QubitGate};
pub use label::Label;
pub use matrix::CMatrix;
pub use random::{haar_random_qubit, random_qubit_from};
pub(crate) use state::apply_in_place;
pub use state::{apply_one_qubit, inner, tensor_product, PureState};

pub use num_complex::Complex64 as C64;

/// Tolerance for the unit-norm invariant on states and traces.
pub const NORM_TOL: f64 = 1e-10;
/// Tolerance for Hermiticity and unitarity checks.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues in `[-NEG_EIG_TOL, 0)` are treated as numerical zero.
pub const NEG_EIG_TOL: f64 = 1e-10;
