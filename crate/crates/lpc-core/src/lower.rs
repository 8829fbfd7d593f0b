//! Gate lowering passes.
//!
//! Target native set: arbitrary Rz/Rx rotations plus the fixed-angle
//! `Rzz(pi/2)` entangler. Two passes get there from the compiler output:
//! [`lower_cnot_to_rzz`] rewrites CNOTs, [`fixed_angle_lowering`] rewrites
//! generic-angle two-qubit rotations. The passes compose and are idempotent
//! on two-qubit gate counts.

use std::f64::consts::FRAC_PI_2;

use crate::circuit::{Circuit, Gate};

const ANGLE_EPS: f64 = 1e-12;

/// `CPhase(a, b, phi)` as two Z rotations and one ZZ rotation, up to the
/// global phase `exp(-i phi / 4)`.
pub fn decompose_cphase(a: usize, b: usize, phi: f64) -> Vec<Gate> {
    vec![
        Gate::Rz(a, phi / 2.0),
        Gate::Rz(b, phi / 2.0),
        Gate::Rzz(a, b, -phi / 2.0),
    ]
}

/// `H` as `Rz(pi/2) Rx(pi/2) Rz(pi/2)`, up to the global phase `-i`.
pub fn decompose_h(q: usize) -> Vec<Gate> {
    vec![
        Gate::Rz(q, FRAC_PI_2),
        Gate::Rx(q, FRAC_PI_2),
        Gate::Rz(q, FRAC_PI_2),
    ]
}

/// `CNOT(c, t)` around a single `Rzz(pi/2)`, up to global phase.
fn cnot_as_rzz(c: usize, t: usize) -> [Gate; 5] {
    [
        Gate::H(t),
        Gate::Rzz(c, t, FRAC_PI_2),
        Gate::Rz(c, -FRAC_PI_2),
        Gate::Rz(t, -FRAC_PI_2),
        Gate::H(t),
    ]
}

/// Rewrites every CNOT into the `Rzz(pi/2)` form; other gates pass through.
pub fn lower_cnot_to_rzz(circuit: &Circuit) -> Circuit {
    let mut out = Circuit::new(circuit.num_qubits);
    for &gate in &circuit.gates {
        match gate {
            Gate::Cnot(c, t) => out.gates.extend(cnot_as_rzz(c, t)),
            other => out.push(other),
        }
    }
    out
}

fn is_quarter_entangler(theta: f64) -> bool {
    (theta.abs() - FRAC_PI_2).abs() < ANGLE_EPS
}

/// `Rzz(theta)` for generic theta as two fixed `Rzz(pi/2)` plus single-qubit
/// rotations: conjugate `Rz(t, theta)` by lowered CNOTs and fuse the inner
/// Hadamard pair into an Rx.
fn rzz_as_fixed(a: usize, b: usize, theta: f64) -> [Gate; 9] {
    [
        Gate::H(b),
        Gate::Rzz(a, b, FRAC_PI_2),
        Gate::Rz(a, -FRAC_PI_2),
        Gate::Rz(b, -FRAC_PI_2),
        Gate::Rx(b, theta),
        Gate::Rzz(a, b, FRAC_PI_2),
        Gate::Rz(a, -FRAC_PI_2),
        Gate::Rz(b, -FRAC_PI_2),
        Gate::H(b),
    ]
}

/// Rewrites generic-angle two-qubit rotations onto the fixed `Rzz(pi/2)`
/// entangler. `Rzz(+-pi/2)` passes through untouched, so the pass is
/// idempotent; CNOT and SWAP are structural and left alone.
pub fn fixed_angle_lowering(circuit: &Circuit) -> Circuit {
    let mut out = Circuit::new(circuit.num_qubits);
    for &gate in &circuit.gates {
        match gate {
            Gate::Rzz(a, b, theta) if !is_quarter_entangler(theta) => {
                out.gates.extend(rzz_as_fixed(a, b, theta));
            }
            Gate::CPhase(a, b, phi) => {
                for piece in decompose_cphase(a, b, phi) {
                    match piece {
                        Gate::Rzz(a, b, theta) if !is_quarter_entangler(theta) => {
                            out.gates.extend(rzz_as_fixed(a, b, theta));
                        }
                        other => out.push(other),
                    }
                }
            }
            other => out.push(other),
        }
    }
    out
}
