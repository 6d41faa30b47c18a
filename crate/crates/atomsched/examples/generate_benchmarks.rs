//! Generate one circuit per benchmark family and print its shape.
//!
//! Run with: `cargo run --example generate_benchmarks`

use atomsched::bench::{generate, BenchFamily, BenchSpec};

fn main() {
    let specs = [
        (BenchFamily::QaoaRegular { degree: 3 }, 12),
        (BenchFamily::QaoaRandom { pair_probability: 0.5 }, 12),
        (BenchFamily::Bv, 14),
        (BenchFamily::Vqe, 8),
        (
            BenchFamily::QSim {
                pauli_probability: 0.3,
                num_strings: 10,
            },
            10,
        ),
        (BenchFamily::Qft, 8),
    ];

    println!("{:<16} {:>7} {:>7} {:>7} {:>10}", "family", "qubits", "blocks", "gates", "max/block");
    for (family, n) in specs {
        let spec = BenchSpec {
            family,
            num_qubits: n,
            seed: 7,
        };
        let circuit = generate(&spec).expect("feasible spec");
        let largest = circuit.blocks().iter().map(|b| b.len()).max().unwrap_or(0);
        println!(
            "{:<16} {:>7} {:>7} {:>7} {:>10}",
            family.to_string(),
            n,
            circuit.blocks().len(),
            circuit.gate_count(),
            largest
        );
    }
}
