//! Compare the with-storage and non-storage modes on one circuit.
//!
//! Parking bystanders in the storage zone eliminates the excitation error
//! entirely and shields parked qubits from decoherence, at the price of
//! extra inter-zone moves and transfers.
//!
//! Run with: `cargo run --example storage_tradeoff`

use atomsched::bench::{generate, BenchFamily, BenchSpec};
use atomsched::fidelity::evaluate;
use atomsched::hardware::{default_geometry, initial_layout, HardwareParams, Mode};
use atomsched::schedule::build_schedule;
use atomsched::stage::StagePlan;

fn main() {
    let spec = BenchSpec {
        family: BenchFamily::Bv,
        num_qubits: 14,
        seed: 3,
    };
    let circuit = generate(&spec).expect("feasible spec");
    let params = HardwareParams::default();
    let layout = default_geometry(circuit.num_qubits());
    let plan = StagePlan::build(&circuit, 0.5);

    println!(
        "{:<14} {:>10} {:>10} {:>10} {:>10} {:>10} {:>12}",
        "mode", "f_cz", "f_exc", "f_trans", "f_dec", "total", "T_exe (us)"
    );
    for mode in [Mode::WithStorage, Mode::NonStorage] {
        let initial = initial_layout(&circuit, &layout, mode).expect("grid fits");
        let schedule =
            build_schedule(&plan, &initial, mode, 1, &params, &layout).expect("compilable");
        let r = evaluate(&schedule, &circuit, &params, false).expect("consistent");
        println!(
            "{:<14} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>12.2}",
            mode.to_string(),
            r.f_cz,
            r.f_exc,
            r.f_trans,
            r.f_dec,
            r.total,
            r.t_exe * 1e6
        );
    }
}
