use std::collections::HashSet;

use super::{Label, QubitGate, C64, NORM_TOL};
use crate::error::{Error, Result};

/// Normalized state vector over a labeled qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    layout: Vec<Label>,
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Checks length, label uniqueness and unit norm.
    pub fn new(layout: Vec<Label>, amplitudes: Vec<C64>) -> Result<Self> {
        let state = Self::from_parts(layout, amplitudes)?;
        let norm2 = state.norm_sqr();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm2));
        }
        Ok(state)
    }

    /// Rescales `amplitudes` to unit norm. Fails on the zero vector.
    pub fn normalized(layout: Vec<Label>, amplitudes: Vec<C64>) -> Result<Self> {
        let mut state = Self::from_parts(layout, amplitudes)?;
        let norm = state.norm_sqr().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        state.amplitudes.iter_mut().for_each(|z| *z /= norm);
        Ok(state)
    }

    fn from_parts(layout: Vec<Label>, amplitudes: Vec<C64>) -> Result<Self> {
        check_unique(&layout)?;
        if layout.len() >= usize::BITS as usize || amplitudes.len() != 1usize << layout.len() {
            return Err(Error::Shape(format!(
                "{} amplitudes for {} qubits",
                amplitudes.len(),
                layout.len()
            )));
        }
        Ok(Self { layout, amplitudes })
    }

    /// Computational basis state; bit `k` of `index` is the value of `layout[k]`.
    pub fn basis(layout: Vec<Label>, index: usize) -> Result<Self> {
        let n = layout.len();
        if index >= 1usize << n {
            return Err(Error::Shape(format!("basis index {index} for {n} qubits")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[index] = C64::new(1.0, 0.0);
        Self::new(layout, amps)
    }

    /// `a|0> + b|1>` on a single qubit.
    pub fn qubit(label: Label, a: C64, b: C64) -> Result<Self> {
        Self::new(vec![label], vec![a, b])
    }

    pub fn num_qubits(&self) -> usize {
        self.layout.len()
    }

    pub fn layout(&self) -> &[Label] {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn position(&self, label: Label) -> Result<usize> {
        self.layout
            .iter()
            .position(|&l| l == label)
            .ok_or(Error::UnknownLabel(label))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Same vector under new names. Lengths must agree.
    pub fn relabel(self, layout: Vec<Label>) -> Result<Self> {
        if layout.len() != self.layout.len() {
            return Err(Error::Shape(format!(
                "relabel {} qubits with {} labels",
                self.layout.len(),
                layout.len()
            )));
        }
        check_unique(&layout)?;
        Ok(Self {
            layout,
            amplitudes: self.amplitudes,
        })
    }

    /// Reorders the register so that it matches `order`, moving amplitudes
    /// rather than renaming qubits. `order` must be a permutation of the layout.
    pub fn permuted(&self, order: &[Label]) -> Result<Self> {
        if order.len() != self.layout.len() {
            return Err(Error::Shape(format!(
                "permutation of length {} for {} qubits",
                order.len(),
                self.layout.len()
            )));
        }
        check_unique(order)?;
        let source_bit: Vec<usize> = order
            .iter()
            .map(|&l| self.position(l))
            .collect::<Result<_>>()?;
        let mut out = vec![C64::new(0.0, 0.0); self.amplitudes.len()];
        for (new_index, slot) in out.iter_mut().enumerate() {
            let mut old_index = 0usize;
            for (new_bit, &old_bit) in source_bit.iter().enumerate() {
                old_index |= ((new_index >> new_bit) & 1) << old_bit;
            }
            *slot = self.amplitudes[old_index];
        }
        Ok(Self {
            layout: order.to_vec(),
            amplitudes: out,
        })
    }

    /// Exchanges the roles of two qubits: the returned state has the same
    /// layout, with the amplitudes of `x` and `y` swapped.
    pub fn transpose_qubits(&self, x: Label, y: Label) -> Result<Self> {
        let px = self.position(x)?;
        let py = self.position(y)?;
        let mut order = self.layout.clone();
        order.swap(px, py);
        Ok(self.permuted(&order)?.relabel(self.layout.clone())?)
    }

    /// `|<self|other>|^2`, the global-phase-insensitive overlap.
    pub fn overlap_sqr(&self, other: &PureState) -> Result<f64> {
        Ok(inner(self, other)?.norm_sqr())
    }

    /// `self + other` with matching layouts, renormalized.
    pub fn superpose(a: C64, x: &PureState, b: C64, y: &PureState) -> Result<PureState> {
        check_same_layout(x, y)?;
        let amps = x
            .amplitudes
            .iter()
            .zip(&y.amplitudes)
            .map(|(u, v)| a * u + b * v)
            .collect();
        PureState::normalized(x.layout.clone(), amps)
    }
}

fn check_unique(layout: &[Label]) -> Result<()> {
    let mut seen = HashSet::with_capacity(layout.len());
    for &l in layout {
        if !seen.insert(l) {
            return Err(Error::DuplicateLabel(l));
        }
    }
    Ok(())
}

fn check_same_layout(a: &PureState, b: &PureState) -> Result<()> {
    if a.layout != b.layout {
        return Err(Error::Shape(format!(
            "layouts differ: {:?} vs {:?}",
            a.layout, b.layout
        )));
    }
    Ok(())
}

/// `a ⊗ b`, with `a`'s qubits occupying the low bits.
pub fn tensor_product(a: &PureState, b: &PureState) -> Result<PureState> {
    if let Some(&dup) = a.layout.iter().find(|l| b.layout.contains(l)) {
        return Err(Error::LabelCollision(dup));
    }
    let shift = a.num_qubits();
    let mut amps = vec![C64::new(0.0, 0.0); a.amplitudes.len() * b.amplitudes.len()];
    for (ib, &vb) in b.amplitudes.iter().enumerate() {
        let base = ib << shift;
        for (ia, &va) in a.amplitudes.iter().enumerate() {
            amps[base | ia] = va * vb;
        }
    }
    let layout = a.layout.iter().chain(&b.layout).copied().collect();
    Ok(PureState {
        layout,
        amplitudes: amps,
    })
}

/// Applies `gate` to qubit `target`, identity elsewhere.
pub fn apply_one_qubit(gate: &QubitGate, target: Label, state: &PureState) -> Result<PureState> {
    let mut out = state.clone();
    apply_in_place(gate, target, &mut out)?;
    Ok(out)
}

pub(crate) fn apply_in_place(gate: &QubitGate, target: Label, state: &mut PureState) -> Result<()> {
    let bit = 1usize << state.position(target)?;
    let m = gate.matrix();
    for i in 0..state.amplitudes.len() {
        if i & bit != 0 {
            continue;
        }
        let j = i | bit;
        let a0 = state.amplitudes[i];
        let a1 = state.amplitudes[j];
        state.amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
        state.amplitudes[j] = m[1][0] * a0 + m[1][1] * a1;
    }
    Ok(())
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner(a: &PureState, b: &PureState) -> Result<C64> {
    check_same_layout(a, b)?;
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn ket0(l: Label) -> PureState {
        PureState::qubit(l, c(1.0), c(0.0)).unwrap()
    }

    fn ket1(l: Label) -> PureState {
        PureState::qubit(l, c(0.0), c(1.0)).unwrap()
    }

    fn plus(l: Label) -> PureState {
        PureState::qubit(l, c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)).unwrap()
    }

    #[test]
    fn tensor_of_zeros() {
        let s = tensor_product(&ket0(Label::Q(0)), &ket0(Label::Q(1))).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0), c(0.0), c(0.0), c(0.0)]);
    }

    #[test]
    fn tensor_first_operand_is_low_bit() {
        let s = tensor_product(&ket1(Label::Q(0)), &ket0(Label::Q(1))).unwrap();
        assert_eq!(s.amplitudes()[0b01], c(1.0));
        assert_eq!(s.layout(), &[Label::Q(0), Label::Q(1)]);
    }

    #[test]
    fn tensor_is_linear() {
        let s = tensor_product(&plus(Label::Q(0)), &ket1(Label::Q(1))).unwrap();
        let amps = s.amplitudes();
        assert!((amps[0b10] - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((amps[0b11] - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert_eq!(amps[0b00], c(0.0));
        assert_eq!(amps[0b01], c(0.0));
    }

    #[test]
    fn tensor_rejects_shared_label() {
        let err = tensor_product(&ket0(Label::P), &ket1(Label::P)).unwrap_err();
        assert_eq!(err, Error::LabelCollision(Label::P));
    }

    #[test]
    fn sigma_x_flips() {
        let out = apply_one_qubit(&QubitGate::sigma_x(), Label::X, &ket0(Label::X)).unwrap();
        assert_eq!(out, ket1(Label::X));
    }

    #[test]
    fn sigma_z_on_plus_gives_minus() {
        let out = apply_one_qubit(&QubitGate::sigma_z(), Label::X, &plus(Label::X)).unwrap();
        assert!((out.amplitudes()[0] - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((out.amplitudes()[1] + c(FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn sigma_y_is_involution() {
        let s = PureState::normalized(
            vec![Label::Q(0), Label::Q(1)],
            vec![C64::new(0.3, 0.1), C64::new(-0.2, 0.7), c(0.5), C64::new(0.0, -0.4)],
        )
        .unwrap();
        let y = QubitGate::sigma_y();
        let out = apply_one_qubit(&y, Label::Q(1), &apply_one_qubit(&y, Label::Q(1), &s).unwrap())
            .unwrap();
        assert!(out.overlap_sqr(&s).unwrap() > 1.0 - 1e-15);
        assert!(inner(&s, &out).unwrap().re > 1.0 - 1e-15);
    }

    #[test]
    fn gate_on_unknown_label_fails() {
        let err = apply_one_qubit(&QubitGate::sigma_x(), Label::C(1), &ket0(Label::X)).unwrap_err();
        assert_eq!(err, Error::UnknownLabel(Label::C(1)));
    }

    #[test]
    fn inner_products() {
        let z = ket0(Label::X);
        assert_eq!(inner(&z, &z).unwrap(), c(1.0));
        assert_eq!(inner(&z, &ket1(Label::X)).unwrap(), c(0.0));
        assert!((inner(&plus(Label::X), &z).unwrap() - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!(matches!(inner(&z, &ket0(Label::P)), Err(Error::Shape(_))));
    }

    #[test]
    fn new_rejects_bad_shapes() {
        assert!(matches!(
            PureState::new(vec![Label::X], vec![c(1.0)]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            PureState::new(vec![Label::X], vec![c(1.0), c(1.0)]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            PureState::new(vec![Label::X, Label::X], vec![c(1.0), c(0.0), c(0.0), c(0.0)]),
            Err(Error::DuplicateLabel(Label::X))
        ));
    }

    #[test]
    fn permuted_moves_amplitudes() {
        let s = tensor_product(&ket1(Label::Q(0)), &ket0(Label::Q(1))).unwrap();
        let p = s.permuted(&[Label::Q(1), Label::Q(0)]).unwrap();
        assert_eq!(p.layout(), &[Label::Q(1), Label::Q(0)]);
        assert_eq!(p.amplitudes()[0b10], c(1.0));
        let t = s.transpose_qubits(Label::Q(0), Label::Q(1)).unwrap();
        assert_eq!(t.layout(), s.layout());
        assert_eq!(t.amplitudes()[0b10], c(1.0));
    }
}
