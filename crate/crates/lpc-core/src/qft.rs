//! LPC compiler for the quantum Fourier transform on a linear chain.
//!
//! The textbook QFT is a Hadamard on each qubit, interleaved with
//! controlled phases `CPhase(i, j, pi / 2^(j-i))` that must sit after the
//! Hadamard on `i` and before the one on `j`. Each controlled phase splits
//! into two single-qubit Z pieces and one ZZ piece (see
//! [`crate::lower::decompose_cphase`]), and every piece is diagonal, so the
//! pieces of all pending phases commute freely inside their window. The
//! compiler therefore walks a CNOT schedule whose parity labels expose
//! every pair `{i, j}` inside its window, drops the ZZ piece on the wire
//! where the pair first appears, and bundles the single-qubit pieces into
//! one RZ just before and one just after each Hadamard.
//!
//! No SWAPs are inserted; the output ends in a wire permutation recorded in
//! the final flow, and the implemented unitary is the bit-reversed QFT
//! (the swap-free textbook convention).

use std::f64::consts::PI;

use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::flow::{FlowError, FlowState};
use crate::lower::decompose_h;
use crate::qaoa::{CompilationResult, Coverage};
use crate::schedule::{qft_schedule, QftEvent};

#[derive(Debug, Error)]
pub enum QftError {
    #[error("qft needs at least one qubit")]
    Empty,
    #[error("hadamard on logical {0} fired while the label was not localized to one wire")]
    NotLocalized(usize),
    #[error("pair ({0}, {1}) was never exposed inside its window")]
    MissingWindow(usize, usize),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// The controlled-phase angle between qubits at distance `d`.
fn cp_angle(d: usize) -> f64 {
    PI / (1u64 << d) as f64
}

/// Compiles an `n`-qubit QFT to a SWAP-free nearest-neighbour circuit.
///
/// The Hadamards on the first and last logical qubit are applied directly;
/// the interior ones are decomposed into `Rz Rx Rz`, which the flow makes
/// legal at exactly the same moments (row and column of the logical index
/// both confined to the Hadamard wire). The result implements the
/// bit-reversed QFT, composed with the wire permutation stored in
/// `final_flow`.
pub fn compile_qft(n: usize) -> Result<CompilationResult, QftError> {
    if n == 0 {
        return Err(QftError::Empty);
    }
    let mut circuit = Circuit::new(n);
    let mut flow = FlowState::identity(n);
    let mut coverage = Coverage::new(n);
    for i in 0..n {
        coverage.mark_single(i);
    }
    if n == 1 {
        circuit.push(Gate::H(0));
        let report = circuit.report();
        return Ok(CompilationResult {
            circuit,
            final_flow: flow,
            coverage,
            report,
        });
    }

    let mut h_done = 0usize;
    let mut zz_done = vec![false; n * n];
    for event in qft_schedule(n) {
        match event {
            QftEvent::Cnot(c, t) => {
                circuit.push(Gate::Cnot(c, t));
                flow.apply_cnot(c, t)?;
                coverage.observe(&flow, t);
                if let Some((i, j)) = flow.row(t).as_pair() {
                    if i < h_done && h_done <= j && !zz_done[i * n + j] {
                        zz_done[i * n + j] = true;
                        circuit.push(Gate::Rz(t, -cp_angle(j - i) / 2.0));
                    }
                }
            }
            QftEvent::Hadamard(m) => {
                let wire = flow.find_singleton(m).ok_or(QftError::NotLocalized(m))?;
                if flow.column(m) != vec![wire] {
                    return Err(QftError::NotLocalized(m));
                }
                if m > 0 {
                    let alpha: f64 = (1..=m).map(|d| cp_angle(d) / 2.0).sum();
                    circuit.push(Gate::Rz(wire, alpha));
                }
                if m == 0 || m == n - 1 {
                    circuit.push(Gate::H(wire));
                } else {
                    for gate in decompose_h(wire) {
                        circuit.push(gate);
                    }
                }
                if m < n - 1 {
                    let beta: f64 = (1..n - m).map(|d| cp_angle(d) / 2.0).sum();
                    circuit.push(Gate::Rz(wire, beta));
                }
                h_done = m + 1;
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if !zz_done[i * n + j] {
                return Err(QftError::MissingWindow(i, j));
            }
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{bit_reversed_qft_matrix, compiled_unitary, phase_invariant_fidelity};

    #[test]
    fn counts_follow_the_schedule() {
        for n in 2..=16 {
            let result = compile_qft(n).unwrap();
            let expected = match n {
                2 => 2,
                3 | 4 | 5 => n * n - 1,
                _ => n * n + n - 4,
            };
            assert_eq!(result.report.n_cnot, expected, "n={n}");
            assert_eq!(result.report.n_swap, 0);
            assert!(result.coverage.is_complete());
            assert!(result.final_flow.as_permutation().is_some());
            result.circuit.validate_lnn().unwrap();
        }
    }

    #[test]
    fn two_qubit_depth_is_exact_through_five() {
        for n in [3, 4, 5] {
            let result = compile_qft(n).unwrap();
            assert_eq!(result.report.two_qubit_depth, 4 * n - 4, "n={n}");
        }
    }

    #[test]
    fn matches_the_bit_reversed_qft() {
        for n in 1..=6 {
            let result = compile_qft(n).unwrap();
            let plan = result.final_flow.decode_plan().unwrap();
            assert!(plan.cnots.is_empty(), "decode of a permutation is free");
            let compiled =
                compiled_unitary(&result.circuit, &plan.to_circuit(n), &plan.layout).unwrap();
            let reference = bit_reversed_qft_matrix(n);
            let fidelity = phase_invariant_fidelity(&compiled, &reference);
            assert!(fidelity >= 1.0 - 1e-9, "n={n}: fidelity {fidelity}");
        }
    }

    #[test]
    fn single_qubit_case_is_one_hadamard() {
        let result = compile_qft(1).unwrap();
        assert_eq!(result.circuit.gates, vec![Gate::H(0)]);
    }
}
