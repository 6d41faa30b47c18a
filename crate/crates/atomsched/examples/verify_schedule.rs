//! Serialize a schedule, load it back, and replay it through the verifier.
//!
//! The verifier re-derives everything from the file alone: placement
//! integrity after every collective move, pairwise non-conflict, the chunk
//! duration formula, stage layouts, and the counters. It also demonstrates
//! that corruption is caught: flipping one move's destination trips it.
//!
//! Run with: `cargo run --example verify_schedule`

use atomsched::bench::{generate, BenchFamily, BenchSpec};
use atomsched::cli::verify_schedule;
use atomsched::hardware::{default_geometry, initial_layout, HardwareParams, Mode, Site, Zone};
use atomsched::schedule::{build_schedule, Schedule};
use atomsched::stage::StagePlan;

fn main() {
    let spec = BenchSpec {
        family: BenchFamily::Qft,
        num_qubits: 8,
        seed: 1,
    };
    let circuit = generate(&spec).expect("feasible spec");
    let params = HardwareParams::default();
    let layout = default_geometry(circuit.num_qubits());
    let plan = StagePlan::build(&circuit, 0.5);
    let initial = initial_layout(&circuit, &layout, Mode::WithStorage).expect("grid fits");
    let schedule = build_schedule(&plan, &initial, Mode::WithStorage, 2, &params, &layout)
        .expect("compilable");

    let text = schedule.to_json();
    println!("schedule file: {} bytes", text.len());

    let loaded = Schedule::from_json(&text).expect("well-formed");
    let violations = verify_schedule(&loaded);
    println!("verification of the pristine file: {} violations", violations.len());
    assert!(violations.is_empty());

    // Corrupt one move and watch the replay object.
    let mut tampered = loaded;
    'outer: for stage in &mut tampered.stages {
        for chunk in &mut stage.chunks {
            for cm in &mut chunk.collmoves {
                if let Some(m) = cm.moves.first_mut() {
                    m.to = if m.to == Site::new(Zone::Compute, 0, 0) {
                        Site::new(Zone::Compute, 1, 1)
                    } else {
                        Site::new(Zone::Compute, 0, 0)
                    };
                    break 'outer;
                }
            }
        }
    }
    let violations = verify_schedule(&tampered);
    println!("\nafter corrupting one destination, the verifier reports:");
    for v in violations.iter().take(4) {
        println!("  - {v}");
    }
    assert!(!violations.is_empty());
}
