//! Telecloning resource state, Bell measurement, Pauli corrections and
//! secret-sharing reconstruction.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::cloning::{check_qubit_norm, clone_basis, optimal_fidelity, shrinking_form, CloneBasisPair};
use crate::error::{Error, Result};
use crate::linalg::{
    apply_in_place, fidelity_pure, inner, partial_trace, tensor_product, DensityOperator,
    GateKind, Label, PureState, QubitGate, C64,
};
use crate::m_cap;

/// Branches with less weight than this are treated as impossible.
const ZERO_BRANCH: f64 = 1e-20;
/// Largest admissible distance of a shared state from the clone code space.
pub const SUBSPACE_TOL: f64 = 1e-8;

/// Result of a Bell measurement on (input, port).
///
/// Two classical bits: the first distinguishes `Phi` (0) from `Psi` (1), the
/// second `+` (0) from `-` (1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellOutcome {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [
        BellOutcome::PhiPlus,
        BellOutcome::PhiMinus,
        BellOutcome::PsiPlus,
        BellOutcome::PsiMinus,
    ];

    pub fn bits(self) -> (bool, bool) {
        match self {
            BellOutcome::PhiPlus => (false, false),
            BellOutcome::PhiMinus => (false, true),
            BellOutcome::PsiPlus => (true, false),
            BellOutcome::PsiMinus => (true, true),
        }
    }

    pub fn from_bits(psi: bool, minus: bool) -> Self {
        match (psi, minus) {
            (false, false) => BellOutcome::PhiPlus,
            (false, true) => BellOutcome::PhiMinus,
            (true, false) => BellOutcome::PsiPlus,
            (true, true) => BellOutcome::PsiMinus,
        }
    }

    /// Position in [`BellOutcome::ALL`], equal to the two bits read as `psi * 2 + minus`.
    pub fn index(self) -> usize {
        let (psi, minus) = self.bits();
        (psi as usize) << 1 | minus as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            BellOutcome::PhiPlus => "phi+",
            BellOutcome::PhiMinus => "phi-",
            BellOutcome::PsiPlus => "psi+",
            BellOutcome::PsiMinus => "psi-",
        }
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BellOutcome {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "phi+" | "phiplus" | "phi_plus" => Ok(BellOutcome::PhiPlus),
            "phi-" | "phiminus" | "phi_minus" => Ok(BellOutcome::PhiMinus),
            "psi+" | "psiplus" | "psi_plus" => Ok(BellOutcome::PsiPlus),
            "psi-" | "psiminus" | "psi_minus" => Ok(BellOutcome::PsiMinus),
            other => Err(format!("unknown Bell outcome `{other}`")),
        }
    }
}

impl Serialize for BellOutcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

/// Bell state on the generic pair `q0, q1`.
pub fn bell_state(outcome: BellOutcome) -> PureState {
    bell_state_on(outcome, Label::Q(0), Label::Q(1))
}

/// Bell state on `(first, second)`; `|01>` means `first = 0, second = 1`.
pub fn bell_state_on(outcome: BellOutcome, first: Label, second: Label) -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    let p = C64::new(h, 0.0);
    // index = first | second << 1
    let amps = match outcome {
        BellOutcome::PhiPlus => vec![p, z, z, p],
        BellOutcome::PhiMinus => vec![p, z, z, -p],
        BellOutcome::PsiPlus => vec![z, p, p, z],
        BellOutcome::PsiMinus => vec![z, -p, p, z],
    };
    PureState::new(vec![first, second], amps).expect("Bell states are normalized")
}

/// Local correction every receiver applies for a given broadcast outcome.
pub fn correction_for(outcome: BellOutcome) -> QubitGate {
    match outcome {
        BellOutcome::PhiPlus => QubitGate::identity(),
        BellOutcome::PhiMinus => QubitGate::sigma_z(),
        BellOutcome::PsiPlus => QubitGate::sigma_x(),
        BellOutcome::PsiMinus => QubitGate::i_sigma_y(),
    }
}

fn check_copies(m: usize) -> Result<()> {
    let max = m_cap();
    if m == 0 || m > max {
        return Err(Error::CopiesOutOfRange { m, min: 1, max });
    }
    Ok(())
}

/// The `2m`-qubit resource shared between the sender (`P, A1..A{m-1}`) and
/// the receivers (`C1..Cm`).
#[derive(Debug, Clone)]
pub struct TelecloningState {
    m: usize,
    state: PureState,
}

impl TelecloningState {
    pub fn copies(&self) -> usize {
        self.m
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    pub fn sender_side(&self) -> Vec<Label> {
        std::iter::once(Label::P).chain(Label::ancillas(self.m - 1)).collect()
    }

    pub fn receiver_side(&self) -> Vec<Label> {
        Label::copies(self.m).collect()
    }

    pub fn layout(&self) -> &[Label] {
        self.state.layout()
    }

    /// Which side `label` sits on, or an error if it is not part of the resource.
    pub fn is_sender_side(&self, label: Label) -> Result<bool> {
        match label {
            Label::P => Ok(true),
            Label::A(i) if (1..self.m).contains(&i) => Ok(true),
            Label::C(i) if (1..=self.m).contains(&i) => Ok(false),
            other => Err(Error::UnknownLabel(other)),
        }
    }

    /// The state with the sender block `(P, A1..)` and receiver block `(C1..)`
    /// exchanged qubit by qubit.
    pub fn block_swapped(&self) -> PureState {
        let mut order = self.receiver_side();
        order.extend(self.sender_side());
        self.state
            .permuted(&order)
            .and_then(|s| s.relabel(self.layout().to_vec()))
            .expect("block swap is a permutation of the layout")
    }
}

/// `(|0>_P |phi_0> + |1>_P |phi_1>) / sqrt(2)`.
pub fn build_telecloning_state(m: usize) -> Result<TelecloningState> {
    check_copies(m)?;
    let pair = clone_basis(m)?;
    Ok(TelecloningState {
        m,
        state: telecloning_from_pair(&pair)?,
    })
}

fn telecloning_from_pair(pair: &CloneBasisPair) -> Result<PureState> {
    let zero = PureState::basis(vec![Label::P], 0)?;
    let one = PureState::basis(vec![Label::P], 1)?;
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    PureState::superpose(
        h,
        &tensor_product(&zero, pair.phi0())?,
        h,
        &tensor_product(&one, pair.phi1())?,
    )
}

/// `(m + 1)^(-1/2) sum_j |D(m, j)>_{PA} |D(m, j)>_C`.
pub fn build_telecloning_state_dicke(m: usize) -> Result<TelecloningState> {
    check_copies(m)?;
    let sender: Vec<Label> = std::iter::once(Label::P).chain(Label::ancillas(m - 1)).collect();
    let receivers: Vec<Label> = Label::copies(m).collect();
    let weight = 1.0 / ((m + 1) as f64).sqrt();
    let mut amps = vec![C64::new(0.0, 0.0); 1usize << (2 * m)];
    for j in 0..=m {
        let left = crate::cloning::dicke_state(m, j)?.relabel(sender.clone())?;
        let right = crate::cloning::dicke_state(m, j)?.relabel(receivers.clone())?;
        let term = tensor_product(&left, &right)?;
        for (dst, src) in amps.iter_mut().zip(term.amplitudes()) {
            *dst += src * weight;
        }
    }
    let layout = sender.into_iter().chain(receivers).collect();
    Ok(TelecloningState {
        m,
        state: PureState::new(layout, amps)?,
    })
}

/// Applies the cloning isometry to the `X` half of `(|0>_D|0>_X + |1>_D|1>_X)/sqrt(2)`
/// and renames `D` to `P`.
pub fn telecloning_state_from_entangled_input(m: usize) -> Result<TelecloningState> {
    check_copies(m)?;
    let pair = clone_basis(m)?;
    let bell = bell_state_on(BellOutcome::PhiPlus, Label::D, Label::X);
    let cloned = apply_isometry_to_qubit(&bell, Label::X, &pair)?;
    let layout = cloned
        .layout()
        .iter()
        .map(|&l| if l == Label::D { Label::P } else { l })
        .collect();
    Ok(TelecloningState {
        m,
        state: cloned.relabel(layout)?,
    })
}

/// Replaces qubit `target` of `state` by the clone register, mapping
/// `|0> -> |phi_0>` and `|1> -> |phi_1>` by linearity. The remaining qubits
/// keep their order and come first.
pub fn apply_isometry_to_qubit(
    state: &PureState,
    target: Label,
    pair: &CloneBasisPair,
) -> Result<PureState> {
    let bit = state.position(target)?;
    let rest: Vec<Label> = state.layout().iter().copied().filter(|&l| l != target).collect();
    let rest_dim = 1usize << rest.len();
    let code_dim = pair.phi0().amplitudes().len();
    let mut amps = vec![C64::new(0.0, 0.0); rest_dim * code_dim];
    for (idx, &amp) in state.amplitudes().iter().enumerate() {
        if amp == C64::new(0.0, 0.0) {
            continue;
        }
        let low = idx & ((1 << bit) - 1);
        let high = idx >> (bit + 1);
        let r = low | (high << bit);
        let code = if (idx >> bit) & 1 == 0 { pair.phi0() } else { pair.phi1() };
        for (c, &v) in code.amplitudes().iter().enumerate() {
            amps[r | (c << rest.len())] += amp * v;
        }
    }
    let layout = rest.into_iter().chain(pair.layout().iter().copied()).collect();
    PureState::new(layout, amps)
}

/// Outcome of projecting two qubits onto one Bell state.
#[derive(Debug, Clone)]
pub struct BellProjection {
    pub probability: f64,
    /// Renormalized state of the remaining qubits, in their original order.
    pub post_state: PureState,
}

/// Projects qubits `(x, p)` of `joint` onto the Bell state `outcome`.
pub fn bell_project(joint: &PureState, x: Label, p: Label, outcome: BellOutcome) -> Result<BellProjection> {
    let (probability, amps, rest) = project_branch(joint, x, p, outcome)?;
    if probability < ZERO_BRANCH {
        return Err(Error::ZeroProbability);
    }
    Ok(BellProjection {
        probability,
        post_state: PureState::normalized(rest, amps)?,
    })
}

/// Probabilities of the four Bell outcomes, in [`BellOutcome::ALL`] order.
pub fn bell_probabilities(joint: &PureState, x: Label, p: Label) -> Result<[f64; 4]> {
    let mut out = [0.0; 4];
    for o in BellOutcome::ALL {
        out[o.index()] = project_branch(joint, x, p, o)?.0;
    }
    Ok(out)
}

fn project_branch(
    joint: &PureState,
    x: Label,
    p: Label,
    outcome: BellOutcome,
) -> Result<(f64, Vec<C64>, Vec<Label>)> {
    let bx = joint.position(x)?;
    let bp = joint.position(p)?;
    if bx == bp {
        return Err(Error::DuplicateLabel(x));
    }
    let bell = bell_state_on(outcome, x, p);
    let coeffs: Vec<C64> = bell.amplitudes().iter().map(|z| z.conj()).collect();
    let rest: Vec<Label> = joint
        .layout()
        .iter()
        .copied()
        .filter(|&l| l != x && l != p)
        .collect();
    let rest_bits: Vec<usize> = (0..joint.num_qubits()).filter(|&b| b != bx && b != bp).collect();

    let mut amps = vec![C64::new(0.0, 0.0); 1usize << rest.len()];
    for (r, slot) in amps.iter_mut().enumerate() {
        let base = rest_bits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (t, &b)| acc | (((r >> t) & 1) << b));
        let mut acc = C64::new(0.0, 0.0);
        for (pair_idx, coeff) in coeffs.iter().enumerate() {
            if coeff.norm_sqr() == 0.0 {
                continue;
            }
            let idx = base | ((pair_idx & 1) << bx) | ((pair_idx >> 1) << bp);
            acc += coeff * joint.amplitudes()[idx];
        }
        *slot = acc;
    }
    let probability = amps.iter().map(|z| z.norm_sqr()).sum();
    Ok((probability, amps, rest))
}

/// How the Bell outcome is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomePolicy {
    Forced(BellOutcome),
    /// Drawn from the Born distribution with a ChaCha8 generator seeded by the value.
    Sampled(u64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Correction {
    pub gate: GateKind,
    pub targets: Vec<Label>,
}

/// Full record of one protocol run.
#[derive(Debug, Clone)]
pub struct Transcript {
    pub input: (C64, C64),
    pub m: usize,
    pub port: Label,
    pub outcome: BellOutcome,
    pub outcome_probability: f64,
    pub branch_probabilities: [f64; 4],
    pub corrections: Correction,
    /// Qubits of the port's side that did not apply the correction.
    pub deferred_corrections: Correction,
    /// Physical qubits holding the clones, in role order `C1..Cm`.
    pub clone_labels: Vec<Label>,
    pub clone_density_ops: Vec<DensityOperator>,
    pub clone_fidelities: Vec<f64>,
    pub seed: Option<u64>,
    /// Post-correction state of every qubit except input and port, renamed
    /// to the canonical roles `A1..A{m-1}, C1..Cm`.
    pub ac_state: PureState,
}

impl Transcript {
    pub fn theory_fidelity(&self) -> f64 {
        optimal_fidelity(1, self.m).expect("m >= 1")
    }

    pub fn max_fidelity_error(&self) -> f64 {
        let gamma = self.theory_fidelity();
        self.clone_fidelities
            .iter()
            .map(|f| (f - gamma).abs())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise distance of a clone from the ideal shrunk input.
    pub fn max_shrinking_error(&self) -> f64 {
        let target = shrinking_form(self.input.0, self.input.1, self.theory_fidelity());
        self.clone_density_ops
            .iter()
            .map(|rho| rho.max_abs_diff(&target))
            .fold(0.0, f64::max)
    }

    /// Gathers ancillas and clones for reconstruction. Ancilla holders that
    /// skipped their correction apply it now, since the outcome was broadcast.
    pub fn shared_secret(&self) -> Result<SharedSecretState> {
        let mut state = self.ac_state.clone();
        let gate = QubitGate::from_kind(self.deferred_corrections.gate)
            .expect("corrections are always Pauli");
        for &label in &self.deferred_corrections.targets {
            apply_in_place(&gate, label, &mut state)?;
        }
        SharedSecretState::new(self.m, state)
    }
}

/// Runs the protocol with `P` as the port on a freshly built resource state.
pub fn run_telecloning(
    a: C64,
    b: C64,
    m: usize,
    policy: OutcomePolicy,
    correct_ancilla: bool,
) -> Result<Transcript> {
    let resource = build_telecloning_state(m)?;
    run_with_port(&resource, Label::P, a, b, policy, correct_ancilla)
}

/// Runs the protocol using any qubit of the resource as the port.
///
/// The resource is symmetric under permutations within a side and under
/// exchanging the two sides, so the port's side plays the sender role (the
/// port's partners act as ancillas) and the opposite side receives the clones.
pub fn run_with_port(
    resource: &TelecloningState,
    port: Label,
    a: C64,
    b: C64,
    policy: OutcomePolicy,
    correct_ancilla: bool,
) -> Result<Transcript> {
    check_qubit_norm(a, b)?;
    let m = resource.copies();
    let (own, other) = if resource.is_sender_side(port)? {
        (resource.sender_side(), resource.receiver_side())
    } else {
        (resource.receiver_side(), resource.sender_side())
    };
    let ancilla_roles: Vec<Label> = own.into_iter().filter(|&l| l != port).collect();
    let clone_labels = other;

    let input = PureState::qubit(Label::X, a, b)?;
    let joint = tensor_product(&input, resource.state())?;
    let branch_probabilities = bell_probabilities(&joint, Label::X, port)?;

    let (outcome, seed) = match policy {
        OutcomePolicy::Forced(o) => (o, None),
        OutcomePolicy::Sampled(seed) => (sample_outcome(&branch_probabilities, seed), Some(seed)),
    };
    let projection = bell_project(&joint, Label::X, port, outcome)?;

    let physical_order: Vec<Label> = ancilla_roles.iter().chain(&clone_labels).copied().collect();
    let mut post = projection.post_state.permuted(&physical_order)?;

    let gate = correction_for(outcome);
    let mut targets = clone_labels.clone();
    if correct_ancilla {
        targets.extend(&ancilla_roles);
    }
    for &label in &targets {
        apply_in_place(&gate, label, &mut post)?;
    }

    let clone_density_ops = clone_labels
        .iter()
        .map(|&l| partial_trace(&post, &[l]))
        .collect::<Result<Vec<_>>>()?;
    let input_on_clone = |label: Label| PureState::qubit(label, a, b);
    let clone_fidelities = clone_density_ops
        .iter()
        .zip(&clone_labels)
        .map(|(rho, &l)| fidelity_pure(rho, &input_on_clone(l)?))
        .collect::<Result<Vec<_>>>()?;

    let canonical: Vec<Label> = Label::ancillas(m - 1).chain(Label::copies(m)).collect();
    let role_of = |l: Label| canonical[physical_order.iter().position(|&p| p == l).expect("in order")];
    let deferred = if correct_ancilla {
        Vec::new()
    } else {
        ancilla_roles.iter().map(|&l| role_of(l)).collect()
    };

    Ok(Transcript {
        input: (a, b),
        m,
        port,
        outcome,
        outcome_probability: projection.probability,
        branch_probabilities,
        corrections: Correction {
            gate: gate.kind(),
            targets,
        },
        deferred_corrections: Correction {
            gate: gate.kind(),
            targets: deferred,
        },
        clone_labels,
        clone_density_ops,
        clone_fidelities,
        seed,
        ac_state: post.relabel(canonical)?,
    })
}

fn sample_outcome(probabilities: &[f64; 4], seed: u64) -> BellOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: f64 = probabilities.iter().sum();
    let draw: f64 = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    for o in BellOutcome::ALL {
        acc += probabilities[o.index()];
        if draw < acc {
            return o;
        }
    }
    *BellOutcome::ALL
        .iter()
        .rev()
        .find(|o| probabilities[o.index()] > 0.0)
        .unwrap_or(&BellOutcome::PsiMinus)
}

/// Ancilla and clone qubits brought back together, in canonical order
/// `A1..A{m-1}, C1..Cm`.
#[derive(Debug, Clone)]
pub struct SharedSecretState {
    m: usize,
    ac_state: PureState,
}

impl SharedSecretState {
    pub fn new(m: usize, ac_state: PureState) -> Result<Self> {
        let expected: Vec<Label> = Label::ancillas(m.saturating_sub(1))
            .chain(Label::copies(m))
            .collect();
        if m == 0 || ac_state.layout() != expected.as_slice() {
            return Err(Error::Shape(format!(
                "shared state layout {:?} does not match {m} copies",
                ac_state.layout()
            )));
        }
        Ok(Self { m, ac_state })
    }

    pub fn copies(&self) -> usize {
        self.m
    }

    pub fn state(&self) -> &PureState {
        &self.ac_state
    }
}

/// Inverts the cloning isometry: returns the input amplitudes `(a, b)` up to
/// a global phase.
pub fn reconstruct_secret(shared: &SharedSecretState) -> Result<(C64, C64)> {
    let pair = clone_basis(shared.m)?;
    reconstruct_with(&pair, shared)
}

pub fn reconstruct_with(pair: &CloneBasisPair, shared: &SharedSecretState) -> Result<(C64, C64)> {
    let psi = shared.state();
    let c0 = inner(pair.phi0(), psi)?;
    let c1 = inner(pair.phi1(), psi)?;
    let residual: f64 = psi
        .amplitudes()
        .iter()
        .zip(pair.phi0().amplitudes())
        .zip(pair.phi1().amplitudes())
        .map(|((s, u), v)| (s - c0 * u - c1 * v).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > SUBSPACE_TOL {
        return Err(Error::SubspaceViolation(residual));
    }
    let norm = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
    Ok((c0 / norm, c1 / norm))
}
