//! The full pipeline on one benchmark: stages, routing, scheduling, and the
//! fidelity breakdown.
//!
//! Run with: `cargo run --example compile_and_score`

use atomsched::bench::{generate, BenchFamily, BenchSpec};
use atomsched::fidelity::evaluate;
use atomsched::hardware::{default_geometry, initial_layout, HardwareParams, Mode};
use atomsched::schedule::build_schedule;
use atomsched::stage::StagePlan;

fn main() {
    let spec = BenchSpec {
        family: BenchFamily::QaoaRegular { degree: 3 },
        num_qubits: 12,
        seed: 42,
    };
    let circuit = generate(&spec).expect("feasible spec");
    let params = HardwareParams::default();
    let layout = default_geometry(circuit.num_qubits());

    let plan = StagePlan::build(&circuit, 0.5);
    println!(
        "{} gates over {} blocks -> {} stages",
        circuit.gate_count(),
        circuit.blocks().len(),
        plan.num_stages()
    );

    let mode = Mode::WithStorage;
    let initial = initial_layout(&circuit, &layout, mode).expect("grid fits");
    let schedule =
        build_schedule(&plan, &initial, mode, 1, &params, &layout).expect("compilable");
    let report = evaluate(&schedule, &circuit, &params, false).expect("consistent schedule");

    println!("\nschedule: {} moves, {} transfers", schedule.counters.total_moves, report.n_trans);
    for (i, stage) in schedule.stages.iter().enumerate() {
        let moves: usize = stage
            .chunks
            .iter()
            .map(|c| c.collmoves.iter().map(|g| g.moves.len()).sum::<usize>())
            .sum();
        println!(
            "  stage {i}: {} gates, {} chunks, {} moves, excitation at {:.1} us",
            stage.gates.len(),
            stage.chunks.len(),
            moves,
            stage.excitation_at * 1e6
        );
    }

    println!("\nfidelity breakdown:");
    println!("  CZ gates     {:.6}", report.f_cz);
    println!("  excitation   {:.6}", report.f_exc);
    println!("  transfers    {:.6}", report.f_trans);
    println!("  decoherence  {:.6}", report.f_dec);
    println!("  total        {:.6}", report.total);
    println!("\nT_exe = {:.2} us", report.t_exe * 1e6);
}
