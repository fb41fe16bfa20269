use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

/// Name of a qubit within a register.
///
/// Ancilla and copy labels are 1-based (`A1`, `C1`) to match the usual
/// protocol notation; generic register qubits are 0-based (`q0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// Unknown input qubit held by the sender.
    X,
    /// Port qubit measured together with the input.
    P,
    /// Reference qubit for entangled-input constructions.
    D,
    A(usize),
    C(usize),
    Q(usize),
}

impl Label {
    pub fn ancillas(count: usize) -> impl Iterator<Item = Label> {
        (1..=count).map(Label::A)
    }

    pub fn copies(count: usize) -> impl Iterator<Item = Label> {
        (1..=count).map(Label::C)
    }

    pub fn generic(count: usize) -> impl Iterator<Item = Label> {
        (0..count).map(Label::Q)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::X => write!(f, "X"),
            Label::P => write!(f, "P"),
            Label::D => write!(f, "D"),
            Label::A(i) => write!(f, "A{i}"),
            Label::C(i) => write!(f, "C{i}"),
            Label::Q(i) => write!(f, "q{i}"),
        }
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "X" | "x" => return Ok(Label::X),
            "P" | "p" => return Ok(Label::P),
            "D" | "d" => return Ok(Label::D),
            _ => {}
        }
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(|| "empty qubit label".to_string())?;
        let index: usize = chars
            .as_str()
            .parse()
            .map_err(|_| format!("invalid qubit label `{s}`"))?;
        match head {
            'A' | 'a' if index >= 1 => Ok(Label::A(index)),
            'C' | 'c' if index >= 1 => Ok(Label::C(index)),
            'q' | 'Q' => Ok(Label::Q(index)),
            _ => Err(format!("invalid qubit label `{s}`")),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
