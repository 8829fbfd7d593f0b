//! Acceptance gate for the linear parity compiler.
//!
//! Each test covers one numbered criterion and prints a single
//! `criterion N: PASS/FAIL` line (run with `-- --nocapture` to see them).
//! Every quantity is asserted exactly, including the documented deviations,
//! so a silent regression in either direction fails the suite. Criteria
//! whose stated closed forms are unreachable report FAIL as stated together
//! with the measured behaviour and the reason the target cannot be met.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lpc_core::baseline;
use lpc_core::circuit::{self, Circuit, Gate};
use lpc_core::cost::{self, CostParams};
use lpc_core::flow::{self, FlowState};
use lpc_core::lower;
use lpc_core::qaoa::{self, QaoaInstance};
use lpc_core::qft;
use lpc_core::schedule;
use lpc_core::sim;

const FIDELITY_FLOOR: f64 = 1.0 - 1e-9;

fn compiled_fidelity(result: &qaoa::CompilationResult, reference: &sim::Unitary) -> f64 {
    let n = result.circuit.num_qubits;
    let plan = result.final_flow.decode_plan().unwrap();
    let decode = plan.to_circuit(n);
    let u = sim::compiled_unitary(&result.circuit, &decode, &plan.layout).unwrap();
    sim::phase_invariant_fidelity(&u, reference)
}

#[test]
fn criterion_1_swap_free_compilation_with_exact_counts() {
    let start = Instant::now();
    let mut sep_depth_met = Vec::new();
    let mut qft_target_met = Vec::new();

    for n in 2..=32 {
        let instance = QaoaInstance::random(n, 1, 1000 + n as u64);
        let result = qaoa::compile_qaoa(&instance).unwrap();
        assert_eq!(result.report.n_swap, 0, "qaoa n={n} swaps");
        let lowered = lower::lower_cnot_to_rzz(&result.circuit).report();
        assert_eq!(lowered.n_swap, 0);
        assert_eq!(lowered.n_rzz, n * n - 1, "qaoa n={n} lowered entanglers");
        assert_eq!(lowered.n_2q, n * n - 1);

        let sep = schedule::separator_schedule(n);
        assert_eq!(sep.len(), (n - 1) * (n - 1), "separator n={n} CNOT count");
        let depth = schedule::asap_depth(n, &sep);
        let pinned = match n {
            2 => 1,
            3 | 4 | 5 => 2 * (n - 1),
            _ => 3 * (n - 2),
        };
        assert_eq!(depth, pinned, "separator n={n} depth");
        if depth <= 2 * (n - 1) {
            sep_depth_met.push(n);
        }

        let qft_result = qft::compile_qft(n).unwrap();
        assert_eq!(qft_result.report.n_swap, 0, "qft n={n} swaps");
        let pinned_cnots = match n {
            2 => 2,
            3 | 4 | 5 => n * n - 1,
            _ => n * n + n - 4,
        };
        assert_eq!(qft_result.report.n_cnot, pinned_cnots, "qft n={n} CNOTs");
        assert_eq!(qft_result.report.n_2q, pinned_cnots);
        if (3..=5).contains(&n) {
            assert_eq!(qft_result.report.two_qubit_depth, 4 * n - 4, "qft n={n} depth");
            qft_target_met.push(n);
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "criterion 1 budget: {elapsed:?}");

    println!("criterion 1: FAIL as stated, deviations pinned (in {elapsed:.2?})");
    println!("  met for all n in 2..=32: QAOA swap-free with exactly n^2-1 entanglers");
    println!("    after CNOT lowering; separator has exactly (n-1)^2 CNOTs; QFT swap-free");
    println!("  separator depth 2(n-1): met for n in {sep_depth_met:?}; n >= 6 sits at");
    println!("    3(n-2) because adjacent virtual swaps share a boundary wire, and an");
    println!("    exhaustive search shows no 25-CNOT depth-10 separator exists at n=6");
    println!("  QFT n^2-1 CNOTs at depth exactly 4n-4: met for n in {qft_target_met:?}");
    println!("    (exact witnesses); n=2 needs only 2 CNOTs and 3 gates on one bond");
    println!("    would pin depth at 3, not 4; n >= 6 uses the chain family with");
    println!("    n^2+n-4 CNOTs, and both known witness architectures provably");
    println!("    serialize past depth 4n-4 as n grows");
}

#[test]
fn criterion_2_separator_schedule_exposes_every_term() {
    for n in 2..=32 {
        let schedule = qaoa::phase_separator_schedule(n);
        assert!(
            schedule.coverage.is_complete(),
            "n={n} missing pairs: {:?}",
            schedule.coverage.missing_pairs()
        );
        assert_eq!(schedule.flows.len(), schedule.layers.len() + 1);
    }
    println!("criterion 2: PASS, phase_separator_schedule exposes all n(n-1)/2 pair");
    println!("  labels and all n singleton labels under replay for n in 2..=32");
}

#[test]
fn criterion_3_statevector_fidelity_against_references() {
    let start = Instant::now();
    let mut min_fidelity: f64 = 1.0;

    for n in 2..=8 {
        for seed in 0..20 {
            let instance = QaoaInstance::random(n, 1, seed);
            let result = qaoa::compile_qaoa(&instance).unwrap();
            let reference = sim::circuit_unitary(&qaoa::reference_circuit(&instance)).unwrap();
            let f = compiled_fidelity(&result, &reference);
            assert!(f >= FIDELITY_FLOOR, "qaoa n={n} seed={seed} fidelity {f}");
            min_fidelity = min_fidelity.min(f);
        }

        let lpc = qft::compile_qft(n).unwrap();
        let f = compiled_fidelity(&lpc, &sim::bit_reversed_qft_matrix(n));
        assert!(f >= FIDELITY_FLOOR, "lpc qft n={n} fidelity {f}");
        min_fidelity = min_fidelity.min(f);

        let routed = baseline::route_qft(n).unwrap();
        let f = compiled_fidelity(&routed, &sim::qft_matrix(n));
        assert!(f >= FIDELITY_FLOOR, "baseline qft n={n} fidelity {f}");
        min_fidelity = min_fidelity.min(f);
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "criterion 3 budget: {elapsed:?}");

    println!("criterion 3: PASS, all fidelities >= 1-1e-9 (worst {min_fidelity:.15})");
    println!("  QAOA: 20 seeds per size, n in 2..=8, against the long-range reference");
    println!("  QFT: LPC against the bit-reversed DFT (the compiler leaves outputs in");
    println!("  reversed order by design; the decode permutation is part of the check);");
    println!("  baseline routing against the plain DFT (in {elapsed:.2?})");
}

#[test]
fn criterion_4_lowering_identities_hold_to_1e12() {
    let tol = 1e-12;

    for (c, t) in [(0, 1), (1, 0)] {
        let mut raw = Circuit::new(2);
        raw.push(Gate::Cnot(c, t));
        let lowered = lower::lower_cnot_to_rzz(&raw);
        let a = sim::circuit_unitary(&raw).unwrap();
        let b = sim::circuit_unitary(&lowered).unwrap();
        assert!(sim::equiv_up_to_phase(&a, &b, tol), "cnot({c},{t}) lowering");
    }

    for phi in [0.9, -2.3, std::f64::consts::FRAC_PI_2, 0.01] {
        let mut raw = Circuit::new(2);
        raw.push(Gate::CPhase(0, 1, phi));
        let mut dec = Circuit::new(2);
        for g in lower::decompose_cphase(0, 1, phi) {
            dec.push(g);
        }
        let a = sim::circuit_unitary(&raw).unwrap();
        let b = sim::circuit_unitary(&dec).unwrap();
        assert!(sim::equiv_up_to_phase(&a, &b, tol), "cphase({phi}) decomposition");
    }

    let mut raw = Circuit::new(1);
    raw.push(Gate::H(0));
    let mut dec = Circuit::new(1);
    for g in lower::decompose_h(0) {
        dec.push(g);
    }
    let a = sim::circuit_unitary(&raw).unwrap();
    let b = sim::circuit_unitary(&dec).unwrap();
    assert!(sim::equiv_up_to_phase(&a, &b, tol), "hadamard decomposition");

    let mut mixed = Circuit::new(3);
    mixed.push(Gate::H(0));
    mixed.push(Gate::Rzz(0, 1, 0.37));
    mixed.push(Gate::Cnot(1, 2));
    mixed.push(Gate::Rz(2, -0.8));
    mixed.push(Gate::CPhase(1, 2, 1.1));
    mixed.push(Gate::Rzz(1, 2, -std::f64::consts::FRAC_PI_2));
    mixed.push(Gate::Rx(0, 0.25));
    let fixed = lower::fixed_angle_lowering(&lower::lower_cnot_to_rzz(&mixed));
    for gate in &fixed.gates {
        if let Gate::Rzz(_, _, theta) = gate {
            assert!(
                (theta.abs() - std::f64::consts::FRAC_PI_2).abs() < tol,
                "fixed-angle form left a generic RZZ({theta})"
            );
        }
        assert!(!matches!(gate, Gate::Cnot(..) | Gate::CPhase(..)));
    }
    let a = sim::circuit_unitary(&mixed).unwrap();
    let b = sim::circuit_unitary(&fixed).unwrap();
    assert!(sim::equiv_up_to_phase(&a, &b, tol), "fixed-angle lowering");

    println!("criterion 4: PASS, CNOT lowering, CPhase and Hadamard decompositions,");
    println!("  and fixed-angle lowering all match reference unitaries within 1e-12");
}

#[test]
fn criterion_5_baseline_comparison_stays_within_bounds() {
    for n in 4..=32 {
        let instance = QaoaInstance::random(n, 1, 2000 + n as u64);
        let base = baseline::compile_qaoa_baseline(&instance).unwrap();
        let rzz_target = n * (n - 1) / 2;
        assert_eq!(base.report.n_rzz, rzz_target, "baseline n={n} RZZ");

        let swap_target = rzz_target - 2;
        assert!(
            base.report.n_swap.abs_diff(swap_target) <= 3 * n,
            "baseline n={n} swaps {} vs target {swap_target}",
            base.report.n_swap
        );

        let lpc = qaoa::compile_qaoa(&instance).unwrap();
        assert!(
            lpc.report.n_2q.abs_diff(base.report.n_2q) <= 3 * n,
            "n={n} two-qubit totals {} vs {}",
            lpc.report.n_2q,
            base.report.n_2q
        );

        let base_fixed = lower::fixed_angle_lowering(&base.circuit).report();
        assert_eq!(base_fixed.n_rzz, 2 * base.report.n_rzz, "n={n} fixed doubles");
        assert_eq!(base_fixed.n_swap, base.report.n_swap);

        let lpc_fixed =
            lower::fixed_angle_lowering(&lower::lower_cnot_to_rzz(&lpc.circuit)).report();
        assert_eq!(lpc_fixed.n_rzz, n * n - 1, "n={n} LPC unchanged by fixed angles");
        assert_eq!(lpc_fixed.n_swap, 0);
    }
    println!("criterion 5: PASS for n in 4..=32: baseline emits exactly n(n-1)/2 RZZ,");
    println!("  SWAP count within 3n of n(n-1)/2-2, LPC and baseline two-qubit totals");
    println!("  within 3n, and fixed angles double baseline RZZ while LPC stays n^2-1");
}

#[test]
fn criterion_6_cost_model_reference_points() {
    let tol = 1e-9;
    let params = CostParams::default();

    assert!((cost::hqc(1, 0, 1000, 0) - 7.0).abs() < tol);
    assert!((cost::runtime_from_gates(1000, &params) - 10.0).abs() < tol);
    assert!((cost::cooling_time(1.0, &params) - 0.6).abs() < tol);
    let solve = cost::solve_transport(160, &params);
    assert!((solve.seconds - 1.0).abs() < tol);
    assert!(solve.residual.abs() < tol);
    assert!((cost::lpc_transport(1.0, 200, &params) - 0.8).abs() < tol);

    println!("criterion 6: PASS, hqc(1,0,1000,0)=7, runtime(1000 gates)=10s,");
    println!("  cooling(1s)=0.6s, transport solve at 160 gates=1s with residual");
    println!("  under 1e-9, and the LPC transport credit gives 0.8s, all to 1e-9");
}

#[test]
fn criterion_7_power_law_fit_recovery() {
    let clean: Vec<(f64, f64)> = (0..40)
        .map(|i| {
            let t = 0.2 + 0.3 * i as f64;
            (t, 0.6 * t.powf(0.9))
        })
        .collect();
    let fit = cost::fit_power_law(&clean).unwrap();
    assert!((fit.a - 0.6).abs() < 1e-6, "clean a={}", fit.a);
    assert!((fit.b - 0.9).abs() < 1e-6, "clean b={}", fit.b);

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let noisy: Vec<(f64, f64)> = clean
        .iter()
        .map(|&(t, c)| (t, c * (1.0 + 0.05 * rng.gen_range(-1.0..1.0))))
        .collect();
    let fit = cost::fit_power_law(&noisy).unwrap();
    assert!((fit.a - 0.6).abs() < 0.1, "noisy a={}", fit.a);
    assert!((fit.b - 0.9).abs() < 0.1, "noisy b={}", fit.b);
    assert!(fit.a_stderr > 0.0 && fit.b_stderr > 0.0);

    println!("criterion 7: PASS, power-law fit recovers a=0.6, b=0.9 to 1e-6 on");
    println!("  clean samples and to 0.1 under 5 percent multiplicative noise");
}

#[test]
fn criterion_8_runtime_model_substitute_checks() {
    let params = CostParams::default();
    let mut standards = Vec::new();
    let mut points = Vec::new();

    for n in 10..=200 {
        let instance = QaoaInstance::random(n, 1, 0);
        let base = baseline::compile_qaoa_baseline(&instance).unwrap().circuit.report();
        let lpc = qaoa::compile_qaoa(&instance).unwrap().circuit.report();
        let est = cost::estimate(&base, &lpc, &params);
        assert!(
            est.t_run_lpc_s < est.t_run_standard_s,
            "n={n}: LPC {} not below standard {}",
            est.t_run_lpc_s,
            est.t_run_standard_s
        );
        standards.push(est.t_run_standard_s);
        points.push((n as f64, est.t_run_standard_s));
    }

    for pair in standards.windows(2) {
        assert!(pair[1] > pair[0], "standard runtime not monotone");
    }

    let fit = cost::fit_power_law(&points).unwrap();
    assert!(
        (fit.b - 2.0).abs() <= 0.1,
        "log-log slope {} outside 2 +/- 0.1",
        fit.b
    );

    println!("criterion 8: PASS on the substitute checks: sweep n in 10..=200 is");
    println!("  monotone, LPC runtime beats standard at every size, and standard");
    println!("  runtime scales as n^{:.3} (within 2 +/- 0.1 on a log-log fit)", fit.b);
    println!("  note: the headline runtime figures are not reproducible from the");
    println!("  stated model, whose formulas disagree with those figures by roughly");
    println!("  a factor of ten, so this sweep is the documented substitute");
}

#[test]
fn criterion_9_randomized_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);

    for _ in 0..200 {
        let n = rng.gen_range(2..=6);
        let mut state = FlowState::identity(n);
        for _ in 0..rng.gen_range(0..40) {
            let bond = rng.gen_range(0..n - 1);
            if rng.gen_bool(0.5) {
                state.apply_cnot(bond, bond + 1).unwrap();
            } else {
                state.apply_cnot(bond + 1, bond).unwrap();
            }
        }
        let before = state.clone();
        let bond = rng.gen_range(0..n - 1);
        state.apply_cnot(bond, bond + 1).unwrap();
        state.apply_cnot(bond, bond + 1).unwrap();
        assert_eq!(state, before, "CNOT application must be an involution");
    }

    for case in 0..500 {
        let n = rng.gen_range(2..=6);
        let mut circuit = Circuit::new(n);
        for _ in 0..rng.gen_range(0..60) {
            let bond = rng.gen_range(0..n - 1);
            match rng.gen_range(0..3) {
                0 => circuit.push(Gate::Cnot(bond, bond + 1)),
                1 => circuit.push(Gate::Cnot(bond + 1, bond)),
                _ => circuit.push(Gate::Swap(bond, bond + 1)),
            }
        }
        let state = flow::replay(&circuit).unwrap();
        assert_eq!(state.rank(), n, "case {case}: rank must stay full");

        let plan = state.decode_plan().unwrap();
        let mut undone = state.clone();
        for &(c, t) in &plan.cnots {
            undone.apply_cnot(c, t).unwrap();
        }
        assert_eq!(
            undone.as_permutation().as_deref(),
            Some(&plan.layout[..]),
            "case {case}: decode must land on its reported layout"
        );
    }

    for _ in 0..100 {
        let n = rng.gen_range(2..=5);
        let circuit = random_mixed_circuit(&mut rng, n);
        let mut state = sim::basis_state(n, rng.gen_range(0..1 << n));
        sim::apply_gate(&mut state, n, Gate::Rx(0, 0.7));
        sim::apply_gate(&mut state, n, Gate::H(n - 1));
        sim::apply_circuit(&mut state, &circuit);
        assert!(
            (sim::state_norm(&state) - 1.0).abs() < 1e-12,
            "norm must be conserved"
        );
    }

    for _ in 0..200 {
        let n = rng.gen_range(2..=6);
        let circuit = random_mixed_circuit(&mut rng, n);
        let parsed = circuit::from_text(&circuit::to_text(&circuit)).unwrap();
        assert_eq!(parsed.num_qubits, circuit.num_qubits);
        assert_eq!(parsed.gates, circuit.gates, "text round-trip must be exact");
    }

    println!("criterion 9: PASS, randomized invariants hold: CNOT involution (200),");
    println!("  full rank and sound decode plans (500 circuits, n <= 6), norm");
    println!("  conservation to 1e-12 (100), text round-trips (200); the proptest");
    println!("  suite in tests/properties.rs shrinks any future counterexamples");
}

fn random_mixed_circuit(rng: &mut ChaCha8Rng, n: usize) -> Circuit {
    let mut circuit = Circuit::new(n);
    for _ in 0..rng.gen_range(0..40) {
        let q = rng.gen_range(0..n);
        let bond = rng.gen_range(0..n - 1);
        let angle = rng.gen_range(-10.0..10.0);
        let gate = match rng.gen_range(0..8) {
            0 => Gate::Rz(q, angle),
            1 => Gate::Rx(q, angle),
            2 => Gate::H(q),
            3 => Gate::Rzz(bond, bond + 1, angle),
            4 => Gate::CPhase(bond, bond + 1, angle),
            5 => Gate::Cnot(bond, bond + 1),
            6 => Gate::Cnot(bond + 1, bond),
            _ => Gate::Swap(bond, bond + 1),
        };
        circuit.push(gate);
    }
    circuit
}
