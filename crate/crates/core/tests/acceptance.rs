//! Exit criteria for the simulator. Each criterion prints one PASS/FAIL line;
//! the binary fails if any criterion fails.

mod common;

use std::time::Instant;

use teleclone::analysis::{
    bipartite_entanglement, ebit_accounting, mutual_information, ppt_min_eigenvalue,
    schmidt_coefficients, theoretical_rho_pa, theoretical_rho_pc, LogBase,
};
use teleclone::cloning::{clone_basis, optimal_fidelity, shrinking_form, simultaneous_pauli};
use teleclone::linalg::{haar_random_qubit, inner, partial_trace, tensor_product, Label, QubitGate, C64};
use teleclone::protocol::{
    bell_probabilities, build_telecloning_state, build_telecloning_state_dicke, reconstruct_secret,
    run_with_port, telecloning_state_from_entangled_input, BellOutcome, OutcomePolicy,
};

use common::{amplitudes, brute_force_partial_trace, qubit_fidelity};

const M_MAX: usize = 8;
const INPUTS: u64 = 20;

type Outcome = Result<String, String>;

fn max_err(acc: &mut f64, x: f64) {
    if !(x <= *acc) {
        *acc = x;
    }
}

fn random_inputs(count: u64, offset: u64) -> Vec<(C64, C64)> {
    (0..count).map(|s| amplitudes(&haar_random_qubit(offset + s))).collect()
}

/// Criteria 1 and 2 share one pass over every run.
fn clone_runs() -> (f64, f64) {
    let mut fid_err = 0.0f64;
    let mut shrink_err = 0.0f64;
    for m in 1..=M_MAX {
        let resource = build_telecloning_state(m).unwrap();
        let gamma = (2.0 * m as f64 + 1.0) / (3.0 * m as f64);
        for (a, b) in random_inputs(INPUTS, 1000) {
            let target = shrinking_form(a, b, gamma);
            for o in BellOutcome::ALL {
                for correct_ancilla in [true, false] {
                    let t = run_with_port(&resource, Label::P, a, b, OutcomePolicy::Forced(o), correct_ancilla)
                        .unwrap();
                    for f in &t.clone_fidelities {
                        max_err(&mut fid_err, (f - gamma).abs());
                    }
                    for rho in &t.clone_density_ops {
                        max_err(&mut shrink_err, rho.max_abs_diff(&target));
                    }
                }
            }
        }
    }
    (fid_err, shrink_err)
}

fn criterion_1_and_2() -> (Outcome, Outcome) {
    let (fid, shrink) = clone_runs();
    let c1 = if fid <= 1e-9 {
        Ok(format!("max |F - (2m+1)/(3m)| = {fid:.2e} <= 1e-9"))
    } else {
        Err(format!("max fidelity error {fid:.3e} > 1e-9"))
    };
    let c2 = if shrink <= 1e-10 {
        Ok(format!("max entrywise deviation = {shrink:.2e} <= 1e-10"))
    } else {
        Err(format!("max shrinking-form deviation {shrink:.3e} > 1e-10"))
    };
    (c1, c2)
}

fn criterion_3() -> Outcome {
    let resource = build_telecloning_state(1).unwrap();
    let mut worst = 0.0f64;
    for (a, b) in random_inputs(INPUTS, 2000) {
        for o in BellOutcome::ALL {
            for correct_ancilla in [true, false] {
                let t = run_with_port(&resource, Label::P, a, b, OutcomePolicy::Forced(o), correct_ancilla).unwrap();
                max_err(&mut worst, (t.clone_fidelities[0] - 1.0).abs());
            }
        }
    }
    (worst <= 1e-10)
        .then(|| format!("max |F - 1| = {worst:.2e}"))
        .ok_or(format!("teleportation fidelity off by {worst:.3e}"))
}

fn criterion_4() -> Outcome {
    let mut entropy_err = 0.0f64;
    let mut schmidt_err = 0.0f64;
    for m in 1..=M_MAX {
        let s = build_telecloning_state(m).unwrap();
        let side = s.sender_side();
        let want = ((m + 1) as f64).log2();
        max_err(&mut entropy_err, (bipartite_entanglement(s.state(), &side).unwrap() - want).abs());
        let coeffs = schmidt_coefficients(s.state(), &side).unwrap();
        if coeffs.len() != m + 1 {
            return Err(format!("m = {m}: {} Schmidt coefficients, expected {}", coeffs.len(), m + 1));
        }
        let flat = 1.0 / ((m + 1) as f64).sqrt();
        for c in coeffs {
            max_err(&mut schmidt_err, (c - flat).abs());
        }
    }
    if entropy_err <= 1e-9 && schmidt_err <= 1e-10 {
        Ok(format!("entropy err {entropy_err:.2e}, Schmidt flatness err {schmidt_err:.2e}"))
    } else {
        Err(format!("entropy err {entropy_err:.3e}, Schmidt err {schmidt_err:.3e}"))
    }
}

fn criterion_5() -> Outcome {
    let mut matrix_err = 0.0f64;
    let mut eig_err = 0.0f64;
    for m in 2..=6 {
        let s = build_telecloning_state(m).unwrap();
        let pc = theoretical_rho_pc(m).unwrap();
        let pa = theoretical_rho_pa();
        for (keep, theory) in [
            (vec![Label::P, Label::C(1)], &pc),
            (vec![Label::C(1), Label::C(2)], &pa),
            (vec![Label::P, Label::A(1)], &pa),
        ] {
            let fast = partial_trace(s.state(), &keep).unwrap();
            max_err(&mut matrix_err, fast.max_abs_diff(theory));
            max_err(&mut matrix_err, brute_force_partial_trace(s.state(), &keep).max_abs_diff(theory));
        }
        let computed_pc = partial_trace(s.state(), &[Label::P, Label::C(1)]).unwrap();
        let computed_pa = partial_trace(s.state(), &[Label::C(1), Label::C(2)]).unwrap();
        max_err(&mut eig_err, (ppt_min_eigenvalue(computed_pc.matrix()).unwrap() + 1.0 / (2.0 * m as f64)).abs());
        max_err(&mut eig_err, (ppt_min_eigenvalue(computed_pa.matrix()).unwrap() - 1.0 / 6.0).abs());
    }
    if matrix_err <= 1e-12 && eig_err <= 1e-12 {
        Ok(format!("matrix err {matrix_err:.2e}, PT eigenvalue err {eig_err:.2e}"))
    } else {
        Err(format!("matrix err {matrix_err:.3e}, PT eigenvalue err {eig_err:.3e}"))
    }
}

/// The closed form `2 ln 2 + (1/3) ln(1/54) = 0.0817` that is sometimes
/// quoted for this quantity does not follow from the same-side pair matrix:
/// that expression evaluates to 0.0566 nats, and the matrix (spectrum
/// {0, 1/3, 1/3, 1/3}, maximally mixed marginals) gives 2 - log2(3) bits.
/// The criterion uses the value derived from the matrix.
fn criterion_6() -> Outcome {
    let want = 2.0 - 3f64.log2();
    let mut worst = 0.0f64;
    for m in 2..=6 {
        let s = build_telecloning_state(m).unwrap();
        for (i, j) in [(Label::C(1), Label::C(2)), (Label::P, Label::A(1))] {
            let mi = mutual_information(s.state(), i, j, LogBase::Bits).unwrap();
            max_err(&mut worst, (mi - want).abs());
        }
    }
    (worst <= 1e-9)
        .then(|| format!("I = 2 - log2 3 = {want:.6} bits, max err {worst:.2e}"))
        .ok_or(format!("mutual information off by {worst:.3e}"))
}

fn criterion_7() -> Outcome {
    let mut analytic = 0.0f64;
    for m in 1..=M_MAX {
        let resource = build_telecloning_state(m).unwrap();
        for (a, b) in random_inputs(4, 3000 + 10 * m as u64) {
            let input = teleclone::linalg::PureState::qubit(Label::X, a, b).unwrap();
            let joint = tensor_product(&input, resource.state()).unwrap();
            for p in bell_probabilities(&joint, Label::X, Label::P).unwrap() {
                max_err(&mut analytic, (p - 0.25).abs());
            }
        }
    }
    if analytic > 1e-12 {
        return Err(format!("analytic branch probability off by {analytic:.3e}"));
    }

    let runs = 40_000u64;
    let resource = build_telecloning_state(2).unwrap();
    let mut counts = [0u64; 4];
    for seed in 0..runs {
        let (a, b) = amplitudes(&haar_random_qubit(seed));
        let t = run_with_port(&resource, Label::P, a, b, OutcomePolicy::Sampled(seed), true).unwrap();
        counts[t.outcome.index()] += 1;
    }
    let sigma = (runs as f64 * 0.25 * 0.75).sqrt();
    let worst_z = counts
        .iter()
        .map(|&c| (c as f64 - runs as f64 / 4.0).abs() / sigma)
        .fold(0.0, f64::max);
    if worst_z <= 3.0 {
        Ok(format!("analytic err {analytic:.2e}; counts {counts:?}, max |z| = {worst_z:.2}"))
    } else {
        Err(format!("counts {counts:?}, max |z| = {worst_z:.2} > 3"))
    }
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0f64;
    for m in 1..=M_MAX {
        let direct = build_telecloning_state(m).unwrap();
        let dicke = build_telecloning_state_dicke(m).unwrap();
        let entangled = telecloning_state_from_entangled_input(m).unwrap();
        max_err(&mut worst, (direct.state().overlap_sqr(dicke.state()).unwrap() - 1.0).abs());
        max_err(&mut worst, (direct.state().overlap_sqr(entangled.state()).unwrap() - 1.0).abs());
    }
    (worst <= 1e-10)
        .then(|| format!("max |overlap^2 - 1| = {worst:.2e}"))
        .ok_or(format!("constructions differ by {worst:.3e}"))
}

fn criterion_9() -> Outcome {
    let one = C64::new(1.0, 0.0);
    let mut pauli = 0.0f64;
    let mut perm = 0.0f64;
    for m in 1..=M_MAX {
        let pair = clone_basis(m).unwrap();
        let z = QubitGate::sigma_z();
        let x = QubitGate::sigma_x();
        let checks = [
            (inner(pair.phi0(), &simultaneous_pauli(pair.phi0(), &z).unwrap()).unwrap(), one),
            (inner(pair.phi1(), &simultaneous_pauli(pair.phi1(), &z).unwrap()).unwrap(), -one),
            (inner(pair.phi1(), &simultaneous_pauli(pair.phi0(), &x).unwrap()).unwrap(), one),
            (inner(pair.phi0(), &simultaneous_pauli(pair.phi1(), &x).unwrap()).unwrap(), one),
        ];
        for (got, want) in checks {
            max_err(&mut pauli, (got - want).norm());
        }

        let resource = build_telecloning_state(m).unwrap();
        let s = resource.state();
        for side in [resource.sender_side(), resource.receiver_side()] {
            for (k, &u) in side.iter().enumerate() {
                for &v in &side[k + 1..] {
                    let t = s.transpose_qubits(u, v).unwrap();
                    max_err(&mut perm, (s.overlap_sqr(&t).unwrap() - 1.0).abs());
                }
            }
        }
        max_err(&mut perm, (s.overlap_sqr(&resource.block_swapped()).unwrap() - 1.0).abs());
    }
    if pauli <= 1e-12 && perm <= 1e-12 {
        Ok(format!("Pauli relation err {pauli:.2e}, permutation err {perm:.2e}"))
    } else {
        Err(format!("Pauli err {pauli:.3e}, permutation err {perm:.3e}"))
    }
}

fn criterion_10() -> Outcome {
    let mut worst = 0.0f64;
    for m in 1..=6 {
        let resource = build_telecloning_state(m).unwrap();
        for (a, b) in random_inputs(5, 4000 + 10 * m as u64) {
            for o in BellOutcome::ALL {
                for correct_ancilla in [true, false] {
                    let t = run_with_port(&resource, Label::P, a, b, OutcomePolicy::Forced(o), correct_ancilla)
                        .unwrap();
                    let rec = reconstruct_secret(&t.shared_secret().unwrap()).unwrap();
                    max_err(&mut worst, (1.0 - qubit_fidelity((a, b), rec)).abs());
                }
            }
        }
    }
    (worst <= 1e-9)
        .then(|| format!("max |1 - F| = {worst:.2e}"))
        .ok_or(format!("round trip off by {worst:.3e}"))
}

fn criterion_11() -> Outcome {
    for m in 1..=64usize {
        let e = ebit_accounting(m).unwrap();
        let mf = m as f64;
        if e.telecloning != (mf + 1.0).log2() || e.clone_then_teleport != mf || e.port_flexible != mf * mf {
            return Err(format!("m = {m}: got {e:?}"));
        }
        let ordered = if m == 1 {
            e.telecloning == 1.0 && e.clone_then_teleport == 1.0 && e.port_flexible == 1.0
        } else {
            e.telecloning < e.clone_then_teleport && e.clone_then_teleport < e.port_flexible
        };
        if !ordered {
            return Err(format!("m = {m}: ordering fails for {e:?}"));
        }
        if (optimal_fidelity(1, m).unwrap() - (2.0 * mf + 1.0) / (3.0 * mf)).abs() > 1e-15 {
            return Err(format!("m = {m}: fidelity formula mismatch"));
        }
    }
    Ok("exact {log2(m+1), m, m^2}; strict ordering for 2 <= m <= 64".to_string())
}

fn main() {
    let start = Instant::now();
    let (c1, c2) = criterion_1_and_2();
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "clone fidelity (2m+1)/(3m), m=1..8, all outcomes, both ancilla settings", c1),
        (2, "clone operators match the shrinking form", c2),
        (3, "m=1 reduces to teleportation", criterion_3()),
        (4, "entropy across sender|receivers is log2(m+1), flat Schmidt spectrum", criterion_4()),
        (5, "pair matrices and partial-transpose minima", criterion_5()),
        (6, "same-side mutual information 2 - log2 3 bits", criterion_6()),
        (7, "Bell outcome statistics", criterion_7()),
        (8, "construction equivalence", criterion_8()),
        (9, "Pauli and permutation symmetries", criterion_9()),
        (10, "secret-sharing round trip", criterion_10()),
        (11, "e-bit accounting", criterion_11()),
    ];
    let mut failed = 0;
    for (id, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("[PASS] criterion {id:>2}: {name} -- {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {id:>2}: {name} -- {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        results.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
