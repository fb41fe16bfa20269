use std::fmt;

use serde::Serialize;

use super::{C64, HERMITIAN_TOL};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    Identity,
    SigmaX,
    SigmaY,
    SigmaZ,
    /// `sigma_x * sigma_z`, which equals `i sigma_y` up to a global sign.
    ISigmaY,
    Custom,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::Identity => "identity",
            GateKind::SigmaX => "sigma_x",
            GateKind::SigmaY => "sigma_y",
            GateKind::SigmaZ => "sigma_z",
            GateKind::ISigmaY => "i_sigma_y",
            GateKind::Custom => "custom",
        }
    }
}

/// Single-qubit unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitGate {
    kind: GateKind,
    /// Row-major `[[m00, m01], [m10, m11]]`.
    matrix: [[C64; 2]; 2],
}

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

impl QubitGate {
    pub const fn identity() -> Self {
        Self {
            kind: GateKind::Identity,
            matrix: [[ONE, ZERO], [ZERO, ONE]],
        }
    }

    pub const fn sigma_x() -> Self {
        Self {
            kind: GateKind::SigmaX,
            matrix: [[ZERO, ONE], [ONE, ZERO]],
        }
    }

    pub fn sigma_y() -> Self {
        Self {
            kind: GateKind::SigmaY,
            matrix: [[ZERO, -I], [I, ZERO]],
        }
    }

    pub fn sigma_z() -> Self {
        Self {
            kind: GateKind::SigmaZ,
            matrix: [[ONE, ZERO], [ZERO, -ONE]],
        }
    }

    /// `sigma_x sigma_z = [[0, -1], [1, 0]]`.
    pub fn i_sigma_y() -> Self {
        Self {
            kind: GateKind::ISigmaY,
            matrix: [[ZERO, -ONE], [ONE, ZERO]],
        }
    }

    pub fn custom(matrix: [[C64; 2]; 2]) -> Result<Self> {
        let gate = Self {
            kind: GateKind::Custom,
            matrix,
        };
        let dev = gate.unitarity_error();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(gate)
    }

    /// Named gate for `kind`; `None` for [`GateKind::Custom`].
    pub fn from_kind(kind: GateKind) -> Option<Self> {
        match kind {
            GateKind::Identity => Some(Self::identity()),
            GateKind::SigmaX => Some(Self::sigma_x()),
            GateKind::SigmaY => Some(Self::sigma_y()),
            GateKind::SigmaZ => Some(Self::sigma_z()),
            GateKind::ISigmaY => Some(Self::i_sigma_y()),
            GateKind::Custom => None,
        }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn matrix(&self) -> &[[C64; 2]; 2] {
        &self.matrix
    }

    pub fn is_pauli(&self) -> bool {
        !matches!(self.kind, GateKind::Custom)
    }

    /// `self * other`, i.e. `other` acts first.
    pub fn then_after(&self, other: &QubitGate) -> QubitGate {
        let a = &self.matrix;
        let b = &other.matrix;
        let mut m = [[ZERO; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        QubitGate {
            kind: GateKind::Custom,
            matrix: m,
        }
    }

    pub fn unitarity_error(&self) -> f64 {
        let m = &self.matrix;
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let dot: C64 = (0..2).map(|k| m[k][i].conj() * m[k][j]).sum();
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }
}

impl fmt::Display for QubitGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())
    }
}
