//! Watch the continuous router plan one stage transition.
//!
//! Six qubits sit paired up after a first round of gates; the next stage
//! wants the overlapping pairs (q1,q2) and (q3,q4). A naive move would pile
//! three qubits onto one site; the router instead picks fresh meeting sites
//! where needed and the grouped moves stay conflict-free.
//!
//! Run with: `cargo run --example route_one_stage`

use atomsched::circuit::{CZGate, QubitId};
use atomsched::hardware::{default_geometry, HardwareParams, Mode, Site, Zone};
use atomsched::placement::Placement;
use atomsched::router::{group_moves, plan_stage_moves, validate_layout};
use atomsched::stage::Stage;

fn main() {
    let layout = default_geometry(9);
    let params = HardwareParams::default();

    // Layout after a previous stage: three co-located pairs.
    let site = |c, r| Site::new(Zone::Compute, c, r);
    let current = Placement::from_sites(vec![
        site(0, 0), // q0
        site(0, 0), // q1 (paired with q0)
        site(1, 0), // q2
        site(1, 0), // q3 (paired with q2)
        site(2, 0), // q4
        site(2, 0), // q5 (paired with q4)
    ]);

    let gate = |a, b| CZGate::new(QubitId(a), QubitId(b)).unwrap();
    let stage = Stage::new(vec![gate(1, 2), gate(3, 4)]);

    let (moves, next) =
        plan_stage_moves(&current, &stage, Mode::NonStorage, &layout, &params).expect("routable");

    println!("planned movements:");
    for m in &moves {
        println!(
            "  {} {} -> {}  ({:.1} um, {:?})",
            m.qubit, m.from, m.to, m.distance, m.kind
        );
    }

    let groups = group_moves(&moves, &layout, &params);
    println!("\ngrouped into {} collective moves:", groups.len());
    for (i, g) in groups.iter().enumerate() {
        let members: Vec<String> = g.moves.iter().map(|m| m.qubit.to_string()).collect();
        println!(
            "  coll-move {i}: [{}] sweep {:.1} um, {:.1} us",
            members.join(", "),
            g.max_distance,
            g.duration * 1e6
        );
    }

    println!("\nfinal layout:");
    for q in 0..6 {
        println!("  q{q} at {}", next.site_of(QubitId(q)));
    }
    assert!(validate_layout(&next, &stage).is_empty());
    println!("\nlayout validates: every pair co-located, no clustering");
}
