//! Linear parity compilation for nearest-neighbour qubit chains.
//!
//! The core idea: instead of routing logical qubits with SWAP gates, track a
//! GF(2) parity label for every physical wire. A CNOT folds one wire's label
//! into another, so a single physical RZ implements a logical Z or ZZ rotation
//! depending on the label under it. Schedules are chosen so that every needed
//! parity becomes exposed on some wire exactly when its rotation is due, and
//! no SWAP is ever inserted.
//!
//! Crate layout:
//! - [`circuit`]: gate set, resource accounting, text serialization
//! - [`flow`]: parity label algebra, flow replay, decode planning
//! - [`schedule`]: CNOT schedules for the QAOA separator and the QFT cascade
//! - [`qaoa`] / [`qft`]: the two compilers
//! - [`baseline`]: SWAP-inserting reference compilers
//! - [`lower`]: gate lowering (CNOT to RZZ, fixed-angle, controlled phase)
//! - [`sim`]: dense statevector oracle used by the verification paths
//! - [`cost`]: trapped-ion runtime and cost model

pub mod baseline;
pub mod circuit;
pub mod cost;
pub mod flow;
pub mod lower;
pub mod qaoa;
pub mod qft;
pub mod schedule;
pub mod sim;
