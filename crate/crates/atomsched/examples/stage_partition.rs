//! Partition a CZ block into parallel stages and order them.
//!
//! The block below is a 6-cycle plus one chord; gates sharing a qubit land
//! in different stages, and the stage order starts from the smallest qubit
//! set to keep early zone traffic low.
//!
//! Run with: `cargo run --example stage_partition`

use atomsched::circuit::{CZGate, Circuit, QubitId};
use atomsched::stage::{order_stages, partition_block};

fn main() {
    let gate = |a, b| CZGate::new(QubitId(a), QubitId(b)).unwrap();
    let circuit = Circuit::new(
        6,
        vec![vec![
            gate(0, 1),
            gate(1, 2),
            gate(2, 3),
            gate(3, 4),
            gate(4, 5),
            gate(0, 5),
            gate(1, 4),
        ]],
        None,
    )
    .unwrap();

    let stages = partition_block(&circuit.blocks()[0]);
    println!("partitioned into {} stages:", stages.len());
    for (i, s) in stages.iter().enumerate() {
        let gates: Vec<String> = s.gates().iter().map(|g| g.to_string()).collect();
        println!("  stage {i}: {} ({} qubits)", gates.join(" "), s.qubits().len());
    }

    let ordered = order_stages(&stages, 0.5).expect("non-empty");
    println!("\nexecution order (alpha = 0.5):");
    for (i, s) in ordered.iter().enumerate() {
        let gates: Vec<String> = s.gates().iter().map(|g| g.to_string()).collect();
        println!("  step {i}: {}", gates.join(" "));
    }
}
