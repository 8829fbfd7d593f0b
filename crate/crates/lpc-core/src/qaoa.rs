//! LPC compiler for QAOA on a linear chain.
//!
//! One QAOA round is a phase separator `exp(-i gamma C)` for the Ising cost
//! `C = sum J_ij Z_i Z_j + sum h_i Z_i`, followed by the mixer
//! `exp(-i beta sum X_i)`. The separator needs every coupled pair's parity
//! and every field's single label exposed at some wire, which is exactly
//! what the separator schedule guarantees; each first exposure carries the
//! matching RZ. The mixer then rotates every logical about X without
//! tearing the flow down: a logical whose column is confined to one wire
//! takes a bare RX there, and a logical spread over two adjacent wires is
//! collected with one CNOT, rotated, and released.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, Gate, ResourceReport};
use crate::flow::{FlowError, FlowState};
use crate::schedule::{asap_layers, peel_to_local, separator_schedule, Bond, ScheduleError};

#[derive(Debug, Error)]
pub enum QaoaError {
    #[error("instance needs at least two qubits, got n = {0}")]
    TooSmall(usize),
    #[error("instance needs at least one round, got p = 0")]
    NoRounds,
    #[error("coupling ({i}, {j}) is out of range for n = {n}")]
    CouplingOutOfRange { i: usize, j: usize, n: usize },
    #[error("coupling ({0}, {0}) couples a qubit to itself")]
    SelfCoupling(usize),
    #[error("coupling ({0}, {1}) appears more than once")]
    DuplicateCoupling(usize, usize),
    #[error("field list has {got} entries, expected {want}")]
    FieldLength { got: usize, want: usize },
    #[error("angle list {name} has {got} entries, expected {want}")]
    AngleLength {
        name: &'static str,
        got: usize,
        want: usize,
    },
    #[error("mixer cannot localize logical {0}: its column support is not one wire or two adjacent wires")]
    MixerUnsupported(usize),
    #[error("separator replay left coupling ({0}, {1}) unexposed")]
    IncompleteCoverage(usize, usize),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

/// A QAOA problem instance plus its angle schedule.
///
/// `j` holds one `(i, j, value)` triple per coupled pair; pairs absent from
/// the list simply have no ZZ term. `betas` and `gammas` must each hold one
/// angle per round.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QaoaInstance {
    pub n: usize,
    pub p: usize,
    #[serde(rename = "J")]
    pub j: Vec<(usize, usize, f64)>,
    pub h: Vec<f64>,
    pub betas: Vec<f64>,
    pub gammas: Vec<f64>,
}

impl QaoaInstance {
    pub fn validate(&self) -> Result<(), QaoaError> {
        if self.n < 2 {
            return Err(QaoaError::TooSmall(self.n));
        }
        if self.p == 0 {
            return Err(QaoaError::NoRounds);
        }
        let mut seen = vec![false; self.n * self.n];
        for &(i, j, _) in &self.j {
            if i >= self.n || j >= self.n {
                return Err(QaoaError::CouplingOutOfRange { i, j, n: self.n });
            }
            if i == j {
                return Err(QaoaError::SelfCoupling(i));
            }
            let key = i.min(j) * self.n + i.max(j);
            if std::mem::replace(&mut seen[key], true) {
                return Err(QaoaError::DuplicateCoupling(i.min(j), i.max(j)));
            }
        }
        if self.h.len() != self.n {
            return Err(QaoaError::FieldLength {
                got: self.h.len(),
                want: self.n,
            });
        }
        for (name, list) in [("betas", &self.betas), ("gammas", &self.gammas)] {
            if list.len() != self.p {
                return Err(QaoaError::AngleLength {
                    name,
                    got: list.len(),
                    want: self.p,
                });
            }
        }
        Ok(())
    }

    /// Fully coupled random instance: every pair gets a coupling, and all
    /// couplings, fields and angles are drawn uniformly from [-1, 1].
    pub fn random(n: usize, p: usize, seed: u64) -> QaoaInstance {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut j = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                j.push((a, b, rng.gen_range(-1.0..=1.0)));
            }
        }
        let h = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let betas = (0..p).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let gammas = (0..p).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        QaoaInstance {
            n,
            p,
            j,
            h,
            betas,
            gammas,
        }
    }

    /// Dense symmetric coupling lookup; `None` where no term exists.
    fn coupling_matrix(&self) -> Vec<Option<f64>> {
        let mut m = vec![None; self.n * self.n];
        for &(i, j, v) in &self.j {
            m[i * self.n + j] = Some(v);
            m[j * self.n + i] = Some(v);
        }
        m
    }
}

/// Which parity labels a schedule has exposed so far: all pairs `{i, j}`
/// and all singletons `{i}` over `n` logical indices.
#[derive(Debug, Clone)]
pub struct Coverage {
    n: usize,
    pairs: Vec<bool>,
    singles: Vec<bool>,
}

impl Coverage {
    pub fn new(n: usize) -> Self {
        Coverage {
            n,
            pairs: vec![false; n * n],
            singles: vec![false; n],
        }
    }

    pub fn mark_pair(&mut self, i: usize, j: usize) {
        self.pairs[i * self.n + j] = true;
        self.pairs[j * self.n + i] = true;
    }

    pub fn mark_single(&mut self, i: usize) {
        self.singles[i] = true;
    }

    /// Records whatever label a row currently shows, if it is a single or
    /// a pair.
    pub fn observe(&mut self, flow: &FlowState, position: usize) {
        let row = flow.row(position);
        if let Some(i) = row.as_singleton() {
            self.mark_single(i);
        } else if let Some((i, j)) = row.as_pair() {
            self.mark_pair(i, j);
        }
    }

    pub fn pair_done(&self, i: usize, j: usize) -> bool {
        self.pairs[i * self.n + j]
    }

    pub fn single_done(&self, i: usize) -> bool {
        self.singles[i]
    }

    pub fn is_complete(&self) -> bool {
        self.missing_pairs().is_empty() && self.singles.iter().all(|&s| s)
    }

    pub fn missing_pairs(&self) -> Vec<(usize, usize)> {
        let mut missing = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if !self.pair_done(i, j) {
                    missing.push((i, j));
                }
            }
        }
        missing
    }
}

/// The separator schedule in layered form, with the flow state after every
/// layer and the labels the replay exposed.
#[derive(Debug, Clone)]
pub struct SeparatorSchedule {
    pub layers: Vec<Vec<Bond>>,
    pub flows: Vec<FlowState>,
    pub coverage: Coverage,
}

/// Lays out the phase separator for `n` qubits: `(n-1)^2` CNOTs grouped
/// into dependency layers, the flow after each layer (index 0 is the
/// identity start), and the pair and singleton coverage collected by label
/// replay.
pub fn phase_separator_schedule(n: usize) -> SeparatorSchedule {
    let seq = separator_schedule(n);
    let layers = asap_layers(n, &seq);
    let mut flow = FlowState::identity(n);
    let mut coverage = Coverage::new(n);
    for i in 0..n {
        coverage.mark_single(i);
    }
    let mut flows = vec![flow.clone()];
    for layer in &layers {
        for &(c, t) in layer {
            flow.apply_cnot(c, t).expect("schedule bonds are in range");
            coverage.observe(&flow, t);
        }
        flows.push(flow.clone());
    }
    SeparatorSchedule {
        layers,
        flows,
        coverage,
    }
}

/// A compiled circuit plus everything needed to interpret its output:
/// the final parity flow (whose decode plan maps physical wires back to
/// logical indices), the label coverage, and the resource report.
#[derive(Debug, Clone)]
pub struct CompilationResult {
    pub circuit: Circuit,
    pub final_flow: FlowState,
    pub coverage: Coverage,
    pub report: ResourceReport,
}

/// Emits one mixer layer `exp(-i beta sum X_i)` against the current flow.
///
/// Logicals whose column lives on one wire take a bare RX. A logical
/// spread over two adjacent wires is collected by one CNOT along the bond,
/// rotated at the remaining wire, and released by undoing the CNOT. The
/// collect gadgets run in two bond-parity phases, so the mixer costs two
/// CNOTs per spread logical at a two-qubit depth of four, and the flow is
/// identical before and after.
pub fn mixer_layer(circuit: &mut Circuit, flow: &FlowState, beta: f64) -> Result<(), QaoaError> {
    let n = flow.len();
    let theta = 2.0 * beta;
    let mut gadgets: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        let support = flow.column(i);
        match support[..] {
            [w] => circuit.push(Gate::Rx(w, theta)),
            [a, b] if b == a + 1 => gadgets.push((a, i)),
            _ => return Err(QaoaError::MixerUnsupported(i)),
        }
    }
    let mut work = flow.clone();
    for parity in 0..2 {
        for &(a, i) in gadgets.iter().filter(|(a, _)| a % 2 == parity) {
            circuit.push(Gate::Cnot(a, a + 1));
            work.apply_cnot(a, a + 1)?;
            debug_assert_eq!(work.column(i), vec![a]);
            circuit.push(Gate::Rx(a, theta));
            circuit.push(Gate::Cnot(a, a + 1));
            work.apply_cnot(a, a + 1)?;
        }
    }
    debug_assert_eq!(&work, flow);
    Ok(())
}

/// Compiles a QAOA instance to a SWAP-free nearest-neighbour circuit.
///
/// Round one applies every field RZ on the identity flow, then walks the
/// separator schedule, attaching each coupling's RZ to the wire where its
/// pair first appears, and closes with the mixer. The separator leaves the
/// flow on a chain line, which the mixer preserves, so later rounds first
/// peel the chain back to a wire permutation (applying the next round's
/// field RZs on the singletons this exposes) and then rerun the separator
/// on the permuted labels; replay decides which coupling each exposure
/// serves, so the permutation costs nothing. Rotations with angle zero are
/// kept; strip them with [`Circuit::without_zero_rotations`] if unwanted.
pub fn compile_qaoa(instance: &QaoaInstance) -> Result<CompilationResult, QaoaError> {
    instance.validate()?;
    let n = instance.n;
    let couplings = instance.coupling_matrix();
    let separator = separator_schedule(n);

    let mut circuit = Circuit::new(n);
    let mut flow = FlowState::identity(n);
    let mut coverage = Coverage::new(n);

    for round in 0..instance.p {
        let gamma = instance.gammas[round];
        let beta = instance.betas[round];

        // Field rotations, one per logical, on whatever wire exposes the
        // singleton. Round one starts from the identity; later rounds peel
        // the chain left by the previous mixer, which uncovers each
        // singleton exactly once.
        if round == 0 {
            for i in 0..n {
                coverage.mark_single(i);
                circuit.push(Gate::Rz(i, 2.0 * gamma * instance.h[i]));
            }
        } else {
            for position in 0..n {
                if let Some(i) = flow.row(position).as_singleton() {
                    coverage.mark_single(i);
                    circuit.push(Gate::Rz(position, 2.0 * gamma * instance.h[i]));
                }
            }
            for (c, t) in peel_to_local(&flow)? {
                circuit.push(Gate::Cnot(c, t));
                flow.apply_cnot(c, t)?;
                coverage.observe(&flow, t);
                if let Some(i) = flow.row(t).as_singleton() {
                    circuit.push(Gate::Rz(t, 2.0 * gamma * instance.h[i]));
                }
            }
            debug_assert!(flow.as_permutation().is_some());
        }

        // Separator: each coupling's RZ rides on the first exposure of its
        // pair this round.
        let mut applied = vec![false; n * n];
        for &(c, t) in &separator {
            circuit.push(Gate::Cnot(c, t));
            flow.apply_cnot(c, t)?;
            coverage.observe(&flow, t);
            if let Some((a, b)) = flow.row(t).as_pair() {
                if let Some(v) = couplings[a * n + b] {
                    if !std::mem::replace(&mut applied[a * n + b], true) {
                        circuit.push(Gate::Rz(t, 2.0 * gamma * v));
                    }
                }
            }
        }
        for &(a, b, _) in &instance.j {
            if !applied[a.min(b) * n + a.max(b)] && !applied[a.max(b) * n + a.min(b)] {
                return Err(QaoaError::IncompleteCoverage(a.min(b), a.max(b)));
            }
        }

        mixer_layer(&mut circuit, &flow, beta)?;
    }

    let report = circuit.report();
    Ok(CompilationResult {
        circuit,
        final_flow: flow,
        coverage,
        report,
    })
}

/// The uncompiled reference unitary of the same instance, as a gate list:
/// per round, all ZZ couplings, all field rotations, then the transverse
/// mixer. Two-qubit gates here are long range; this circuit exists for the
/// simulator, not for hardware.
pub fn reference_circuit(instance: &QaoaInstance) -> Circuit {
    let mut circuit = Circuit::new(instance.n);
    for round in 0..instance.p {
        let gamma = instance.gammas[round];
        for &(i, j, v) in &instance.j {
            circuit.push(Gate::Rzz(i, j, 2.0 * gamma * v));
        }
        for i in 0..instance.n {
            circuit.push(Gate::Rz(i, 2.0 * gamma * instance.h[i]));
        }
        for i in 0..instance.n {
            circuit.push(Gate::Rx(i, 2.0 * instance.betas[round]));
        }
    }
    circuit
}
