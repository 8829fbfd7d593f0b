//! Dense statevector simulator used as the correctness oracle.
//!
//! Conventions, fixed once and used everywhere:
//! - wire 0 is the most significant bit of a basis index, so a basis state
//!   `|s_0 s_1 .. s_{n-1}>` has index `sum s_p * 2^(n-1-p)`;
//! - `Rz(theta) = diag(e^{-i theta/2}, e^{i theta/2})`;
//! - `Rx(theta) = cos(theta/2) I - i sin(theta/2) X`;
//! - `Rzz(theta)` phases even parities by `e^{-i theta/2}` and odd parities
//!   by `e^{i theta/2}`;
//! - `CPhase(phi)` phases `|11>` by `e^{i phi}`.

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};

pub const DEFAULT_MAX_QUBITS: usize = 12;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("simulating {n} qubits exceeds the limit of {max} (set LPC_SIM_MAX_QUBITS to raise it)")]
    TooManyQubits { n: usize, max: usize },
}

/// Simulation size guard, overridable through `LPC_SIM_MAX_QUBITS`.
pub fn max_sim_qubits() -> usize {
    std::env::var("LPC_SIM_MAX_QUBITS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_QUBITS)
}

fn check_size(n: usize) -> Result<(), SimError> {
    let max = max_sim_qubits();
    if n > max {
        Err(SimError::TooManyQubits { n, max })
    } else {
        Ok(())
    }
}

pub fn basis_state(n: usize, index: usize) -> Vec<Complex64> {
    let mut state = vec![Complex64::new(0.0, 0.0); 1 << n];
    state[index] = Complex64::new(1.0, 0.0);
    state
}

fn bit(index: usize, n: usize, wire: usize) -> usize {
    (index >> (n - 1 - wire)) & 1
}

fn mask(n: usize, wire: usize) -> usize {
    1 << (n - 1 - wire)
}

/// Applies one gate in place. Two-qubit gates here may be long range; the
/// nearest-neighbour constraint is a compiler concern, not a simulator one.
pub fn apply_gate(state: &mut [Complex64], n: usize, gate: Gate) {
    match gate {
        Gate::Rz(q, theta) => {
            let phase = [
                Complex64::from_polar(1.0, -theta / 2.0),
                Complex64::from_polar(1.0, theta / 2.0),
            ];
            for (idx, amp) in state.iter_mut().enumerate() {
                *amp *= phase[bit(idx, n, q)];
            }
        }
        Gate::Rx(q, theta) => {
            let c = Complex64::new((theta / 2.0).cos(), 0.0);
            let s = Complex64::new(0.0, -(theta / 2.0).sin());
            let m = mask(n, q);
            for idx in 0..state.len() {
                if idx & m == 0 {
                    let (a, b) = (state[idx], state[idx | m]);
                    state[idx] = c * a + s * b;
                    state[idx | m] = s * a + c * b;
                }
            }
        }
        Gate::H(q) => {
            let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            let m = mask(n, q);
            for idx in 0..state.len() {
                if idx & m == 0 {
                    let (a, b) = (state[idx], state[idx | m]);
                    state[idx] = r * (a + b);
                    state[idx | m] = r * (a - b);
                }
            }
        }
        Gate::Rzz(a, b, theta) => {
            let phase = [
                Complex64::from_polar(1.0, -theta / 2.0),
                Complex64::from_polar(1.0, theta / 2.0),
            ];
            for (idx, amp) in state.iter_mut().enumerate() {
                *amp *= phase[bit(idx, n, a) ^ bit(idx, n, b)];
            }
        }
        Gate::CPhase(a, b, phi) => {
            let phase = Complex64::from_polar(1.0, phi);
            for (idx, amp) in state.iter_mut().enumerate() {
                if bit(idx, n, a) == 1 && bit(idx, n, b) == 1 {
                    *amp *= phase;
                }
            }
        }
        Gate::Cnot(c, t) => {
            let mc = mask(n, c);
            let mt = mask(n, t);
            for idx in 0..state.len() {
                if idx & mc != 0 && idx & mt == 0 {
                    state.swap(idx, idx | mt);
                }
            }
        }
        Gate::Swap(a, b) => {
            let ma = mask(n, a);
            let mb = mask(n, b);
            for idx in 0..state.len() {
                if idx & ma != 0 && idx & mb == 0 {
                    state.swap(idx, (idx & !ma) | mb);
                }
            }
        }
    }
}

pub fn apply_circuit(state: &mut [Complex64], circuit: &Circuit) {
    for &gate in &circuit.gates {
        apply_gate(state, circuit.num_qubits, gate);
    }
}

/// Relabels wires: the bit at position `p` moves to position `layout[p]`.
///
/// Used to fold a residual output permutation back to the identity layout,
/// the classical counterpart of wire relabelling at readout.
pub fn apply_wire_permutation(state: &[Complex64], n: usize, layout: &[usize]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); state.len()];
    for (idx, amp) in state.iter().enumerate() {
        let mut target = 0usize;
        for p in 0..n {
            if bit(idx, n, p) == 1 {
                target |= mask(n, layout[p]);
            }
        }
        out[target] = *amp;
    }
    out
}

/// Dense unitary, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl Unitary {
    pub fn zeros(dim: usize) -> Self {
        Unitary {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    fn set_column(&mut self, col: usize, state: &[Complex64]) {
        for (row, amp) in state.iter().enumerate() {
            self.set(row, col, *amp);
        }
    }
}

/// Builds the full unitary of a circuit column by column.
pub fn circuit_unitary(circuit: &Circuit) -> Result<Unitary, SimError> {
    check_size(circuit.num_qubits)?;
    let dim = 1 << circuit.num_qubits;
    let mut u = Unitary::zeros(dim);
    for col in 0..dim {
        let mut state = basis_state(circuit.num_qubits, col);
        apply_circuit(&mut state, circuit);
        u.set_column(col, &state);
    }
    Ok(u)
}

/// Unitary of circuit, then decode circuit, then wire relabelling.
pub fn compiled_unitary(
    circuit: &Circuit,
    decode: &Circuit,
    layout: &[usize],
) -> Result<Unitary, SimError> {
    check_size(circuit.num_qubits)?;
    let n = circuit.num_qubits;
    let dim = 1 << n;
    let mut u = Unitary::zeros(dim);
    for col in 0..dim {
        let mut state = basis_state(n, col);
        apply_circuit(&mut state, circuit);
        apply_circuit(&mut state, decode);
        let state = apply_wire_permutation(&state, n, layout);
        u.set_column(col, &state);
    }
    Ok(u)
}

/// `|tr(A^dagger B)| / dim`, which is 1 exactly when `A = e^{i phi} B`.
pub fn phase_invariant_fidelity(a: &Unitary, b: &Unitary) -> f64 {
    assert_eq!(a.dim, b.dim);
    let trace: Complex64 = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| x.conj() * y)
        .sum();
    trace.norm() / a.dim as f64
}

pub fn equiv_up_to_phase(a: &Unitary, b: &Unitary, tol: f64) -> bool {
    phase_invariant_fidelity(a, b) >= 1.0 - tol
}

pub fn state_norm(state: &[Complex64]) -> f64 {
    state.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Discrete Fourier transform matrix: `F[y][x] = exp(2 pi i x y / N) / sqrt(N)`.
pub fn qft_matrix(n: usize) -> Unitary {
    let dim = 1usize << n;
    let mut u = Unitary::zeros(dim);
    let norm = 1.0 / (dim as f64).sqrt();
    for y in 0..dim {
        for x in 0..dim {
            let angle = 2.0 * std::f64::consts::PI * ((x * y) % dim) as f64 / dim as f64;
            u.set(y, x, Complex64::from_polar(norm, angle));
        }
    }
    u
}

fn reverse_bits(index: usize, n: usize) -> usize {
    let mut out = 0;
    for p in 0..n {
        if index >> p & 1 == 1 {
            out |= 1 << (n - 1 - p);
        }
    }
    out
}

/// The Fourier transform with bit-reversed output order: `REV . F`, which is
/// what the swap-free cascade implements before wire relabelling.
pub fn bit_reversed_qft_matrix(n: usize) -> Unitary {
    let f = qft_matrix(n);
    let mut u = Unitary::zeros(f.dim);
    for y in 0..f.dim {
        let src = reverse_bits(y, n);
        for x in 0..f.dim {
            u.set(y, x, f.at(src, x));
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_state(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state: Vec<Complex64> = (0..1 << n)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm = state_norm(&state);
        for amp in &mut state {
            *amp /= norm;
        }
        state
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        // Wire 0 is the most significant bit: |10> has index 2.
        let mut state = basis_state(2, 2);
        apply_gate(&mut state, 2, Gate::Cnot(0, 1));
        assert_abs_diff_eq!(state[3].re, 1.0, epsilon = 1e-15);
        let mut state = basis_state(2, 1);
        apply_gate(&mut state, 2, Gate::Cnot(0, 1));
        assert_abs_diff_eq!(state[1].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn rz_convention_matches_diagonal() {
        let mut state = basis_state(1, 0);
        apply_gate(&mut state, 1, Gate::Rz(0, 1.0));
        assert_abs_diff_eq!(state[0].arg(), -0.5, epsilon = 1e-15);
        let mut state = basis_state(1, 1);
        apply_gate(&mut state, 1, Gate::Rz(0, 1.0));
        assert_abs_diff_eq!(state[1].arg(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn rzz_phases_by_parity() {
        for (idx, sign) in [(0, -1.0), (1, 1.0), (2, 1.0), (3, -1.0)] {
            let mut state = basis_state(2, idx);
            apply_gate(&mut state, 2, Gate::Rzz(0, 1, 0.8));
            assert_abs_diff_eq!(state[idx].arg(), sign * 0.4, epsilon = 1e-15);
        }
    }

    #[test]
    fn conjugating_rz_with_cnot_gives_rzz() {
        let mut c = Circuit::new(2);
        c.push(Gate::Cnot(0, 1));
        c.push(Gate::Rz(1, 0.7));
        c.push(Gate::Cnot(0, 1));
        let lhs = circuit_unitary(&c).unwrap();
        let mut r = Circuit::new(2);
        r.push(Gate::Rzz(0, 1, 0.7));
        let rhs = circuit_unitary(&r).unwrap();
        assert!(equiv_up_to_phase(&lhs, &rhs, 1e-14));
    }

    #[test]
    fn qft_matrix_matches_circuit_for_two_qubits() {
        // H on 0, controlled phase pi/2, H on 1, then the order-reversing swap.
        let mut c = Circuit::new(2);
        c.push(Gate::H(0));
        c.push(Gate::CPhase(0, 1, std::f64::consts::FRAC_PI_2));
        c.push(Gate::H(1));
        c.push(Gate::Swap(0, 1));
        let lhs = circuit_unitary(&c).unwrap();
        let rhs = qft_matrix(2);
        assert!(equiv_up_to_phase(&lhs, &rhs, 1e-14));
    }

    #[test]
    fn bit_reversed_qft_drops_the_swap() {
        let mut c = Circuit::new(2);
        c.push(Gate::H(0));
        c.push(Gate::CPhase(0, 1, std::f64::consts::FRAC_PI_2));
        c.push(Gate::H(1));
        let lhs = circuit_unitary(&c).unwrap();
        let rhs = bit_reversed_qft_matrix(2);
        assert!(equiv_up_to_phase(&lhs, &rhs, 1e-14));
    }

    #[test]
    fn wire_permutation_undoes_a_three_cycle() {
        // Two swaps produce the cycle layout [1, 2, 0]: position p holds
        // logical layout[p]. This cycle is not an involution, so it would
        // catch a direction mix-up that symmetric layouts cannot.
        let state = random_state(3, 7);
        let mut moved = state.clone();
        apply_gate(&mut moved, 3, Gate::Swap(0, 1));
        apply_gate(&mut moved, 3, Gate::Swap(1, 2));
        let restored = apply_wire_permutation(&moved, 3, &[1, 2, 0]);
        for (a, b) in restored.iter().zip(&state) {
            assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-15);
            assert_abs_diff_eq!(a.im, b.im, epsilon = 1e-15);
        }
    }

    #[test]
    fn unitary_guard_rejects_large_circuits() {
        let c = Circuit::new(13);
        assert!(matches!(
            circuit_unitary(&c),
            Err(SimError::TooManyQubits { n: 13, .. })
        ));
    }

    #[test]
    fn gates_conserve_norm() {
        let mut state = random_state(3, 21);
        for gate in [
            Gate::H(0),
            Gate::Rz(1, 0.3),
            Gate::Rx(2, -1.2),
            Gate::Rzz(0, 1, 2.2),
            Gate::CPhase(1, 2, 0.4),
            Gate::Cnot(1, 0),
            Gate::Swap(0, 2),
        ] {
            apply_gate(&mut state, 3, gate);
        }
        assert_abs_diff_eq!(state_norm(&state), 1.0, epsilon = 1e-12);
    }
}
