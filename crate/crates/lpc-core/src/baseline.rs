//! SWAP-inserting baseline compilers for the same linear-chain targets.
//!
//! These are the conventional routed forms the parity-flow compilers are
//! measured against. The QAOA baseline walks an odd-even transposition
//! network, rotating every pair at its meeting bond and physically swapping
//! the wires as it goes; the QFT baseline bubbles each logical rightward,
//! applying its controlled phases on the way, which realizes the textbook
//! final bit reversal one SWAP at a time and lands on the plain DFT.

use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::flow::FlowState;
use crate::qaoa::{CompilationResult, Coverage, QaoaError, QaoaInstance};

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("qft needs at least one qubit")]
    Empty,
    #[error(transparent)]
    Qaoa(#[from] QaoaError),
}

/// One step of the odd-even transposition network on `n` wires, starting
/// from the identity layout: the logical `pair` meets at `bond`, and
/// `swap` records whether the step still swaps the wires afterwards (the
/// final round's swaps only reorder the output, so they are dropped).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeetStep {
    pub bond: (usize, usize),
    pub pair: (usize, usize),
    pub swap: bool,
}

/// The odd-even transposition ZZ network: `n` alternating rounds in which
/// every pair of logicals becomes adjacent exactly once, `n(n-1)/2` meets
/// in total. Swaps in the last round that still has meets are marked
/// droppable.
pub fn swap_network_zz(n: usize) -> Vec<MeetStep> {
    assert!(n >= 2);
    let mut layout: Vec<usize> = (0..n).collect();
    let mut steps = Vec::new();
    // Odd bonds first; round 1 is then empty for n = 2, where the single
    // meet happens in round 2. Every other size meets in all n rounds.
    let last_round = n;
    for round in 1..=n {
        let start = if round % 2 == 1 { 1 } else { 0 };
        for low in (start..n - 1).step_by(2) {
            let pair = (layout[low], layout[low + 1]);
            let swap = round < last_round;
            steps.push(MeetStep {
                bond: (low, low + 1),
                pair,
                swap,
            });
            if swap {
                layout.swap(low, low + 1);
            }
        }
    }
    steps
}

/// Compiles a QAOA instance with conventional SWAP routing.
///
/// Per round: field rotations at the current layout, the transposition
/// network with one `Rzz` per coupled pair at its meeting bond, then the
/// layout-independent mixer. The final wire order is whatever the kept
/// swaps produce; `final_flow` records it for decoding.
pub fn compile_qaoa_baseline(instance: &QaoaInstance) -> Result<CompilationResult, BaselineError> {
    instance.validate()?;
    let n = instance.n;
    let mut coupling = vec![None; n * n];
    for &(i, j, v) in &instance.j {
        coupling[i * n + j] = Some(v);
        coupling[j * n + i] = Some(v);
    }

    let mut circuit = Circuit::new(n);
    let mut flow = FlowState::identity(n);
    let mut layout: Vec<usize> = (0..n).collect();
    let mut coverage = Coverage::new(n);

    for round in 0..instance.p {
        let gamma = instance.gammas[round];
        for wire in 0..n {
            coverage.mark_single(layout[wire]);
            circuit.push(Gate::Rz(wire, 2.0 * gamma * instance.h[layout[wire]]));
        }
        for step in swap_network_zz(n) {
            let (a, b) = step.bond;
            let (i, j) = (layout[a], layout[b]);
            coverage.mark_pair(i, j);
            if let Some(v) = coupling[i * n + j] {
                circuit.push(Gate::Rzz(a, b, 2.0 * gamma * v));
            }
            if step.swap {
                circuit.push(Gate::Swap(a, b));
                flow.apply_swap(a, b).expect("network bonds are in range");
                layout.swap(a, b);
            }
        }
        for wire in 0..n {
            circuit.push(Gate::Rx(wire, 2.0 * instance.betas[round]));
        }
    }

    let report = circuit.report();
    Ok(CompilationResult {
        circuit,
        final_flow: flow,
        coverage,
        report,
    })
}

/// Compiles an `n`-qubit QFT with conventional SWAP routing.
///
/// Each logical takes its Hadamard at wire 0, then bubbles rightward,
/// applying `CPhase(pi / 2^d)` with every logical it passes and swapping
/// through it. The bubbling performs the textbook closing bit reversal
/// incrementally, so the circuit implements the plain DFT with no residual
/// permutation: `n(n-1)/2` controlled phases and `n(n-1)/2` SWAPs.
pub fn route_qft(n: usize) -> Result<CompilationResult, BaselineError> {
    if n == 0 {
        return Err(BaselineError::Empty);
    }
    let mut circuit = Circuit::new(n);
    let mut coverage = Coverage::new(n);
    // Wire holding each pending logical: logical m starts its phase at
    // wire 0 after the earlier logicals have bubbled past it.
    for m in 0..n {
        coverage.mark_single(m);
        circuit.push(Gate::H(0));
        for k in m + 1..n {
            let wire = k - m - 1;
            coverage.mark_pair(m, k);
            circuit.push(Gate::CPhase(
                wire,
                wire + 1,
                std::f64::consts::PI / (1u64 << (k - m)) as f64,
            ));
            circuit.push(Gate::Swap(wire, wire + 1));
        }
    }
    let report = circuit.report();
    Ok(CompilationResult {
        circuit,
        final_flow: FlowState::identity(n),
        coverage,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qaoa::reference_circuit;
    use crate::sim::{
        circuit_unitary, compiled_unitary, phase_invariant_fidelity, qft_matrix,
    };

    #[test]
    fn network_meets_every_pair_exactly_once() {
        for n in 2..=16 {
            let steps = swap_network_zz(n);
            assert_eq!(steps.len(), n * (n - 1) / 2, "n={n}");
            let mut seen = vec![false; n * n];
            for step in &steps {
                let (i, j) = step.pair;
                let key = i.min(j) * n + i.max(j);
                assert!(!std::mem::replace(&mut seen[key], true), "n={n} {step:?}");
            }
        }
    }

    #[test]
    fn baseline_qaoa_counts() {
        for n in 4..=12 {
            let instance = QaoaInstance::random(n, 1, 5);
            let result = compile_qaoa_baseline(&instance).unwrap();
            assert_eq!(result.report.n_rzz, n * (n - 1) / 2, "n={n}");
            let swap_target = (n * (n - 1) / 2) as isize - 2;
            let gap = (result.report.n_swap as isize - swap_target).abs();
            assert!(gap <= 3 * n as isize, "n={n}: {} swaps", result.report.n_swap);
            assert_eq!(result.report.n_cnot, 0);
            result.circuit.validate_lnn().unwrap();
        }
        // The four-qubit network drops both final-round swaps.
        let result = compile_qaoa_baseline(&QaoaInstance::random(4, 1, 5)).unwrap();
        assert_eq!(result.report.n_swap, 4);
    }

    #[test]
    fn baseline_qaoa_matches_reference() {
        for (n, p, seed) in [(2, 1, 9), (3, 1, 10), (4, 2, 11)] {
            let instance = QaoaInstance::random(n, p, seed);
            let result = compile_qaoa_baseline(&instance).unwrap();
            let plan = result.final_flow.decode_plan().unwrap();
            assert!(plan.cnots.is_empty());
            let compiled =
                compiled_unitary(&result.circuit, &plan.to_circuit(n), &plan.layout).unwrap();
            let reference = circuit_unitary(&reference_circuit(&instance)).unwrap();
            let fidelity = phase_invariant_fidelity(&compiled, &reference);
            assert!(fidelity >= 1.0 - 1e-9, "n={n} p={p}: fidelity {fidelity}");
        }
    }

    #[test]
    fn routed_qft_is_the_plain_dft() {
        for n in 1..=6 {
            let result = route_qft(n).unwrap();
            assert_eq!(result.report.n_cphase, n * (n - 1) / 2);
            assert_eq!(result.report.n_swap, n * (n - 1) / 2);
            result.circuit.validate_lnn().unwrap();
            let compiled = circuit_unitary(&result.circuit).unwrap();
            let fidelity = phase_invariant_fidelity(&compiled, &qft_matrix(n));
            assert!(fidelity >= 1.0 - 1e-9, "n={n}: fidelity {fidelity}");
        }
    }
}
