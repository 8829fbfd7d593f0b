//! Gate set, circuits, resource accounting and the on-disk text format.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A gate acting on one or two wires of a linear chain.
///
/// Wire indices are physical positions, 0 at the left end of the chain.
/// Angles follow the half-angle convention: `Rz(q, theta)` applies
/// `exp(-i theta Z / 2)` and `Rzz(a, b, theta)` applies
/// `exp(-i theta Z(a)Z(b) / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Rz(usize, f64),
    Rx(usize, f64),
    H(usize),
    Rzz(usize, usize, f64),
    CPhase(usize, usize, f64),
    Cnot(usize, usize),
    Swap(usize, usize),
}

impl Gate {
    /// Wires touched by the gate, `(q, None)` for one-qubit gates.
    pub fn wires(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::Rz(q, _) | Gate::Rx(q, _) | Gate::H(q) => (q, None),
            Gate::Rzz(a, b, _) | Gate::CPhase(a, b, _) | Gate::Cnot(a, b) | Gate::Swap(a, b) => {
                (a, Some(b))
            }
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(
            self,
            Gate::Rzz(..) | Gate::CPhase(..) | Gate::Cnot(..) | Gate::Swap(..)
        )
    }
}

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("gate {index} touches wire {wire} but the circuit has {num_qubits} qubits")]
    WireOutOfRange {
        index: usize,
        wire: usize,
        num_qubits: usize,
    },
    #[error("gate {index} acts on wires {a} and {b}, which are not nearest neighbours")]
    NotNearestNeighbour { index: usize, a: usize, b: usize },
    #[error("gate {index} uses the same wire {wire} twice")]
    DuplicateWire { index: usize, wire: usize },
}

/// A gate list over a fixed number of wires.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub num_qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    /// Checks wire bounds and, for two-qubit gates, the nearest-neighbour
    /// constraint of the chain.
    pub fn validate_lnn(&self) -> Result<(), CircuitError> {
        for (index, gate) in self.gates.iter().enumerate() {
            let (a, b) = gate.wires();
            for wire in std::iter::once(a).chain(b) {
                if wire >= self.num_qubits {
                    return Err(CircuitError::WireOutOfRange {
                        index,
                        wire,
                        num_qubits: self.num_qubits,
                    });
                }
            }
            if let Some(b) = b {
                if a == b {
                    return Err(CircuitError::DuplicateWire { index, wire: a });
                }
                if a.abs_diff(b) != 1 {
                    return Err(CircuitError::NotNearestNeighbour { index, a, b });
                }
            }
        }
        Ok(())
    }

    /// Drops Rz and Rx gates whose angle is exactly zero.
    pub fn without_zero_rotations(&self) -> Circuit {
        let gates = self
            .gates
            .iter()
            .filter(|g| !matches!(g, Gate::Rz(_, t) | Gate::Rx(_, t) if *t == 0.0))
            .copied()
            .collect();
        Circuit {
            num_qubits: self.num_qubits,
            gates,
        }
    }

    /// ASAP depth over all gates.
    pub fn total_depth(&self) -> usize {
        self.depth_filtered(|_| true)
    }

    /// ASAP depth of the two-qubit subcircuit; one-qubit gates are
    /// transparent.
    pub fn two_qubit_depth(&self) -> usize {
        self.depth_filtered(Gate::is_two_qubit)
    }

    fn depth_filtered(&self, keep: impl Fn(&Gate) -> bool) -> usize {
        let mut wire_depth = vec![0usize; self.num_qubits];
        let mut depth = 0;
        for gate in self.gates.iter().filter(|g| keep(g)) {
            let (a, b) = gate.wires();
            let level = match b {
                Some(b) => wire_depth[a].max(wire_depth[b]) + 1,
                None => wire_depth[a] + 1,
            };
            wire_depth[a] = level;
            if let Some(b) = b {
                wire_depth[b] = level;
            }
            depth = depth.max(level);
        }
        depth
    }

    pub fn report(&self) -> ResourceReport {
        let mut r = ResourceReport {
            num_qubits: self.num_qubits,
            ..ResourceReport::default()
        };
        for gate in &self.gates {
            match gate {
                Gate::Rz(..) | Gate::Rx(..) | Gate::H(..) => r.n_1q += 1,
                Gate::Rzz(..) => r.n_rzz += 1,
                Gate::CPhase(..) => r.n_cphase += 1,
                Gate::Cnot(..) => r.n_cnot += 1,
                Gate::Swap(..) => r.n_swap += 1,
            }
        }
        r.n_2q = r.n_rzz + r.n_cphase + r.n_cnot + r.n_swap;
        r.two_qubit_depth = self.two_qubit_depth();
        r.total_depth = self.total_depth();
        r
    }
}

/// Gate counts and depths of a circuit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResourceReport {
    pub num_qubits: usize,
    pub n_1q: usize,
    pub n_2q: usize,
    pub n_swap: usize,
    pub n_cnot: usize,
    pub n_rzz: usize,
    pub n_cphase: usize,
    pub two_qubit_depth: usize,
    pub total_depth: usize,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: expected `qubits N` header, found `{found}`")]
    MissingHeader { line: usize, found: String },
    #[error("line {line}: unknown gate `{kind}`")]
    UnknownGate { line: usize, kind: String },
    #[error("line {line}: `{kind}` takes {expected} arguments, found {found}")]
    ArgumentCount {
        line: usize,
        kind: String,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: could not parse `{token}` as {what}")]
    BadToken {
        line: usize,
        token: String,
        what: &'static str,
    },
}

/// Serializes to the line-oriented text format.
///
/// The first line is `qubits N`; every following line is a gate: the
/// uppercase kind, the wires, and for rotations the angle in scientific
/// notation with full precision.
pub fn to_text(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str(&format!("qubits {}\n", circuit.num_qubits));
    for gate in &circuit.gates {
        let line = match *gate {
            Gate::Rz(q, t) => format!("RZ {} {:.16e}", q, t),
            Gate::Rx(q, t) => format!("RX {} {:.16e}", q, t),
            Gate::H(q) => format!("H {}", q),
            Gate::Rzz(a, b, t) => format!("RZZ {} {} {:.16e}", a, b, t),
            Gate::CPhase(a, b, t) => format!("CPHASE {} {} {:.16e}", a, b, t),
            Gate::Cnot(c, t) => format!("CNOT {} {}", c, t),
            Gate::Swap(a, b) => format!("SWAP {} {}", a, b),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Parses the text format produced by [`to_text`].
pub fn from_text(text: &str) -> Result<Circuit, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, header) = lines.next().unwrap_or((1, ""));
    let num_qubits = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["qubits", n] => parse_token::<usize>(line, n, "a qubit count")?,
        _ => {
            return Err(ParseError::MissingHeader {
                line,
                found: header.to_string(),
            })
        }
    };

    let mut circuit = Circuit::new(num_qubits);
    for (line, text) in lines {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let kind = tokens[0];
        let args = &tokens[1..];
        let expect = |n: usize| -> Result<(), ParseError> {
            if args.len() == n {
                Ok(())
            } else {
                Err(ParseError::ArgumentCount {
                    line,
                    kind: kind.to_string(),
                    expected: n,
                    found: args.len(),
                })
            }
        };
        let gate = match kind {
            "RZ" | "RX" => {
                expect(2)?;
                let q = parse_token(line, args[0], "a wire index")?;
                let t = parse_token(line, args[1], "an angle")?;
                if kind == "RZ" {
                    Gate::Rz(q, t)
                } else {
                    Gate::Rx(q, t)
                }
            }
            "H" => {
                expect(1)?;
                Gate::H(parse_token(line, args[0], "a wire index")?)
            }
            "RZZ" | "CPHASE" => {
                expect(3)?;
                let a = parse_token(line, args[0], "a wire index")?;
                let b = parse_token(line, args[1], "a wire index")?;
                let t = parse_token(line, args[2], "an angle")?;
                if kind == "RZZ" {
                    Gate::Rzz(a, b, t)
                } else {
                    Gate::CPhase(a, b, t)
                }
            }
            "CNOT" | "SWAP" => {
                expect(2)?;
                let a = parse_token(line, args[0], "a wire index")?;
                let b = parse_token(line, args[1], "a wire index")?;
                if kind == "CNOT" {
                    Gate::Cnot(a, b)
                } else {
                    Gate::Swap(a, b)
                }
            }
            _ => {
                return Err(ParseError::UnknownGate {
                    line,
                    kind: kind.to_string(),
                })
            }
        };
        circuit.push(gate);
    }
    Ok(circuit)
}

fn parse_token<T: std::str::FromStr>(
    line: usize,
    token: &str,
    what: &'static str,
) -> Result<T, ParseError> {
    token.parse().map_err(|_| ParseError::BadToken {
        line,
        token: token.to_string(),
        what,
    })
}
