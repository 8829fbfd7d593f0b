use proptest::prelude::*;

use lpc_core::circuit::{self, Circuit, Gate};
use lpc_core::flow::{self, FlowState};
use lpc_core::sim;

#[derive(Debug, Clone, Copy)]
enum WireOp {
    CnotDown,
    CnotUp,
    Swap,
}

fn wire_op() -> impl Strategy<Value = WireOp> {
    prop_oneof![
        Just(WireOp::CnotDown),
        Just(WireOp::CnotUp),
        Just(WireOp::Swap),
    ]
}

/// A random LNN circuit of CNOTs and SWAPs: each entry picks a bond and a
/// direction. Bond indices are generated over the widest range and reduced
/// modulo n - 1 so shrinking stays well formed.
fn cnot_circuit(max_n: usize) -> impl Strategy<Value = Circuit> {
    (2..=max_n, prop::collection::vec((wire_op(), 0usize..64), 0..60)).prop_map(|(n, ops)| {
        let mut c = Circuit::new(n);
        for (op, raw) in ops {
            let bond = raw % (n - 1);
            match op {
                WireOp::CnotDown => c.push(Gate::Cnot(bond, bond + 1)),
                WireOp::CnotUp => c.push(Gate::Cnot(bond + 1, bond)),
                WireOp::Swap => c.push(Gate::Swap(bond, bond + 1)),
            }
        }
        c
    })
}

fn any_gate(n: usize) -> impl Strategy<Value = Gate> {
    let angle = -10.0f64..10.0;
    prop_oneof![
        (0..n, angle.clone()).prop_map(|(q, a)| Gate::Rz(q, a)),
        (0..n, angle.clone()).prop_map(|(q, a)| Gate::Rx(q, a)),
        (0..n).prop_map(Gate::H),
        (0..n - 1, angle.clone()).prop_map(|(b, a)| Gate::Rzz(b, b + 1, a)),
        (0..n - 1, angle).prop_map(|(b, a)| Gate::CPhase(b, b + 1, a)),
        (0..n - 1).prop_map(|b| Gate::Cnot(b, b + 1)),
        (0..n - 1).prop_map(|b| Gate::Cnot(b + 1, b)),
        (0..n - 1).prop_map(|b| Gate::Swap(b, b + 1)),
    ]
}

fn mixed_circuit(max_n: usize) -> impl Strategy<Value = Circuit> {
    (2..=max_n)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(any_gate(n), 0..40)))
        .prop_map(|(n, gates)| {
            let mut c = Circuit::new(n);
            for g in gates {
                c.push(g);
            }
            c
        })
}

proptest! {
    #[test]
    fn cnot_application_is_an_involution(
        n in 2usize..8,
        raw in 0usize..64,
        up in proptest::bool::ANY,
        seed in cnot_circuit(6),
    ) {
        prop_assume!(seed.num_qubits <= n);
        let mut state = FlowState::identity(n);
        for gate in &seed.gates {
            match *gate {
                Gate::Cnot(c, t) if c < n && t < n => state.apply_cnot(c, t).unwrap(),
                Gate::Swap(a, b) if a < n && b < n => state.apply_swap(a, b).unwrap(),
                _ => {}
            }
        }
        let before = state.clone();
        let bond = raw % (n - 1);
        let (c, t) = if up { (bond + 1, bond) } else { (bond, bond + 1) };
        state.apply_cnot(c, t).unwrap();
        state.apply_cnot(c, t).unwrap();
        prop_assert_eq!(state, before);
    }

    #[test]
    fn flow_rank_never_drops(circuit in cnot_circuit(6)) {
        let state = flow::replay(&circuit).unwrap();
        prop_assert_eq!(state.rank(), circuit.num_qubits);
    }

    #[test]
    fn norm_is_conserved(circuit in mixed_circuit(5), index in 0usize..32) {
        let n = circuit.num_qubits;
        let mut state = sim::basis_state(n, index % (1 << n));
        // Rotate into a less symmetric state first so phases matter.
        sim::apply_gate(&mut state, n, Gate::Rx(0, 0.7));
        sim::apply_gate(&mut state, n, Gate::H(n - 1));
        sim::apply_circuit(&mut state, &circuit);
        prop_assert!((sim::state_norm(&state) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn text_format_round_trips(circuit in mixed_circuit(6)) {
        let text = circuit::to_text(&circuit);
        let parsed = circuit::from_text(&text).unwrap();
        prop_assert_eq!(parsed.num_qubits, circuit.num_qubits);
        prop_assert_eq!(parsed.gates, circuit.gates);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// Decode soundness: whatever flow a CNOT/SWAP circuit produces, the
    /// planned decode restores the identity flow up to the reported layout.
    #[test]
    fn decode_plan_is_sound(circuit in cnot_circuit(6)) {
        let n = circuit.num_qubits;
        let state = flow::replay(&circuit).unwrap();
        let plan = state.decode_plan().unwrap();

        let mut undone = state.clone();
        for &(c, t) in &plan.cnots {
            undone.apply_cnot(c, t).unwrap();
        }
        let perm = undone.as_permutation();
        prop_assert_eq!(perm.as_deref(), Some(&plan.layout[..]));

        // Reading position p as logical layout[p] must invert the whole
        // mapping, i.e. relabeling turns the decoded flow into the identity.
        let layout = &plan.layout;
        for p in 0..n {
            prop_assert_eq!(undone.row(p).as_singleton(), Some(layout[p]));
        }
    }
}
