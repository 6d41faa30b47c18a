//! Movement-time scaling with multiple AOD arrays.
//!
//! Independent AODs execute collective moves in parallel, so the ordered
//! Coll-Move list is cut into chunks of `n_aods`; each chunk costs one
//! transfer plus its longest member sweep.
//!
//! Run with: `cargo run --example multi_aod_speedup`

use atomsched::bench::{generate, BenchFamily, BenchSpec};
use atomsched::fidelity::evaluate;
use atomsched::hardware::{default_geometry, initial_layout, HardwareParams, Mode};
use atomsched::schedule::build_schedule;
use atomsched::stage::StagePlan;

fn main() {
    let spec = BenchSpec {
        family: BenchFamily::QaoaRegular { degree: 3 },
        num_qubits: 30,
        seed: 7,
    };
    let circuit = generate(&spec).expect("feasible spec");
    let params = HardwareParams::default();
    let layout = default_geometry(circuit.num_qubits());
    let plan = StagePlan::build(&circuit, 0.5);
    let mode = Mode::WithStorage;
    let initial = initial_layout(&circuit, &layout, mode).expect("grid fits");

    println!("{:<6} {:>12} {:>10} {:>10}", "AODs", "T_exe (us)", "speedup", "fidelity");
    let mut baseline = None;
    for n_aods in [1u32, 2, 4, 8] {
        let schedule =
            build_schedule(&plan, &initial, mode, n_aods, &params, &layout).expect("compilable");
        let r = evaluate(&schedule, &circuit, &params, false).expect("consistent");
        let t_us = r.t_exe * 1e6;
        let base = *baseline.get_or_insert(t_us);
        println!(
            "{:<6} {:>12.2} {:>9.2}x {:>10.6}",
            n_aods,
            t_us,
            base / t_us,
            r.total
        );
    }
}
