//! Acceptance suite: one test per criterion, each ending in a printed
//! PASS line. Oracles here are deliberately independent re-implementations:
//! the conflict check, the minimum stage count, and the schedule replayer
//! share no code with the library paths they check.

use atomsched::bench::{generate, BenchFamily, BenchSpec};
use atomsched::circuit::{parse_circuit, serialize_circuit, CZGate, Circuit, QubitId};
use atomsched::fidelity::{evaluate, FidelityReport};
use atomsched::hardware::{
    default_geometry, initial_layout, move_duration, physical_position, HardwareParams, Mode,
    Site, Zone, ZoneLayout,
};
use atomsched::placement::Placement;
use atomsched::router::{group_moves, validate_layout, CollMove, Move1Q};
use atomsched::schedule::{build_schedule, order_collmoves, Schedule};
use atomsched::stage::{partition_block, Stage, StagePlan};

// ---------------------------------------------------------------------------
// Shared fixtures
// ---------------------------------------------------------------------------

/// The benchmark matrix used by criteria 2, 3 and 6.
fn matrix() -> Vec<(String, Circuit)> {
    let specs = [
        (BenchFamily::QaoaRegular { degree: 3 }, 12, 101),
        (BenchFamily::QaoaRegular { degree: 3 }, 30, 7),
        (BenchFamily::Vqe, 8, 1),
        (BenchFamily::Vqe, 30, 1),
        (BenchFamily::Bv, 14, 3),
        (
            BenchFamily::QSim {
                pauli_probability: 0.3,
                num_strings: 10,
            },
            10,
            11,
        ),
        (BenchFamily::Qft, 8, 1),
    ];
    specs
        .into_iter()
        .map(|(family, num_qubits, seed)| {
            let spec = BenchSpec {
                family,
                num_qubits,
                seed,
            };
            let name = format!("{family}-{num_qubits}");
            (name, generate(&spec).expect("matrix specs are feasible"))
        })
        .collect()
}

fn compile(circuit: &Circuit, mode: Mode, n_aods: u32) -> Schedule {
    let params = HardwareParams::default();
    let layout = default_geometry(circuit.num_qubits());
    let plan = StagePlan::build(circuit, 0.5);
    let initial = initial_layout(circuit, &layout, mode).expect("default geometry fits");
    build_schedule(&plan, &initial, mode, n_aods, &params, &layout).expect("compilation succeeds")
}

/// Simple deterministic generator for oracle inputs; independent of the
/// library's PRNG on purpose (nothing here needs cross-run portability).
struct TestRng(u64);

impl TestRng {
    fn next(&mut self) -> u64 {
        // xorshift64*
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

// ---------------------------------------------------------------------------
// Criterion 1
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_movement_time_anchors() {
    let params = HardwareParams::default();
    let rel = |got: f64, want: f64| ((got - want) / want).abs();
    assert!(
        rel(move_duration(27.5, &params), 100e-6) < 1e-9,
        "27.5 um must take 100 us"
    );
    assert!(
        rel(move_duration(110.0, &params), 200e-6) < 1e-9,
        "110 um must take 200 us"
    );
    println!("criterion 1 (movement-time anchors): PASS");
}

// ---------------------------------------------------------------------------
// Criterion 2
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_excitation_elimination() {
    let params = HardwareParams::default();
    let mut some_nonstorage_exposure = false;
    for (name, circuit) in matrix() {
        let ws = compile(&circuit, Mode::WithStorage, 1);
        let ws_report = evaluate(&ws, &circuit, &params, false).unwrap();
        assert_eq!(ws_report.sum_n_i, 0, "{name}: with-storage must expose no bystanders");
        assert_eq!(ws_report.f_exc, 1.0, "{name}: with-storage f_exc");

        let ns = compile(&circuit, Mode::NonStorage, 1);
        let ns_report = evaluate(&ns, &circuit, &params, false).unwrap();
        let any_bystander = ns.stages.iter().any(|s| s.n_i > 0);
        if any_bystander {
            assert!(
                ns_report.f_exc < 1.0,
                "{name}: bystanders must cost excitation fidelity"
            );
            some_nonstorage_exposure = true;
        } else {
            assert_eq!(ns_report.f_exc, 1.0, "{name}");
        }
    }
    assert!(
        some_nonstorage_exposure,
        "the matrix must contain at least one non-storage run with bystanders"
    );
    println!("criterion 2 (excitation elimination): PASS");
}

// ---------------------------------------------------------------------------
// Criterion 3
// ---------------------------------------------------------------------------

/// Replays a schedule placement-by-placement and validates the layout
/// against the stage's gates at every excitation.
fn assert_every_stage_valid(name: &str, schedule: &Schedule) {
    let mut placement = Placement::from_sites(schedule.initial.clone());
    for (si, stage) in schedule.stages.iter().enumerate() {
        for chunk in &stage.chunks {
            for cm in &chunk.collmoves {
                placement = atomsched::router::apply_collmove(&placement, cm)
                    .unwrap_or_else(|e| panic!("{name} stage {si}: {e}"));
            }
        }
        let violations = validate_layout(&placement, &Stage::new(stage.gates.clone()));
        assert!(
            violations.is_empty(),
            "{name} stage {si}: {violations:?}"
        );
    }
}

#[test]
fn criterion_03_no_clustering_soundness() {
    for (name, circuit) in matrix() {
        for mode in [Mode::WithStorage, Mode::NonStorage] {
            let schedule = compile(&circuit, mode, 1);
            assert_every_stage_valid(&name, &schedule);
        }
    }

    // The canonical 6-qubit instance: pairs (0,1),(2,3),(4,5) in block one,
    // then the overlapping follow-up (1,2),(3,4). A direct transition must
    // not cluster three qubits on one site and must not revert anything.
    let gate = |a, b| CZGate::new(QubitId(a), QubitId(b)).unwrap();
    let circuit = Circuit::new(
        6,
        vec![
            vec![gate(0, 1), gate(2, 3), gate(4, 5)],
            vec![gate(1, 2), gate(3, 4)],
        ],
        None,
    )
    .unwrap();
    for mode in [Mode::WithStorage, Mode::NonStorage] {
        let schedule = compile(&circuit, mode, 1);
        assert_eq!(schedule.counters.stages, 2);
        assert_every_stage_valid("follow-up-instance", &schedule);
    }
    println!("criterion 3 (no-clustering soundness): PASS");
}

// ---------------------------------------------------------------------------
// Criterion 4
// ---------------------------------------------------------------------------

/// Independent conflict oracle, written from the movement-constraint
/// definition: two moves clash when their x- or y-order changes, where
/// "changes" covers strict crossings and both tie cases (equal starts with
/// different ends, different starts with equal ends).
fn oracle_conflicts(
    m1: &Move1Q,
    m2: &Move1Q,
    layout: &ZoneLayout,
    params: &HardwareParams,
) -> bool {
    let p = |s: Site| physical_position(s, layout, params).unwrap();
    let (a0, a1) = (p(m1.from), p(m1.to));
    let (b0, b1) = (p(m2.from), p(m2.to));
    let axis = |s1: f64, s2: f64, e1: f64, e2: f64| {
        (s1 < s2 && e1 > e2)
            || (s1 > s2 && e1 < e2)
            || (s1 == s2 && e1 != e2)
            || (s1 != s2 && e1 == e2)
    };
    axis(a0.x, b0.x, a1.x, b1.x) || axis(a0.y, b0.y, a1.y, b1.y)
}

#[test]
fn criterion_04_grouping_oracle() {
    let params = HardwareParams::default();
    let layout = default_geometry(36);
    let all_sites: Vec<Site> = layout
        .compute_sites()
        .chain(layout.storage_sites())
        .collect();
    let mut rng = TestRng(0xfeed_5eed);

    for case in 0..500 {
        let n_moves = 1 + rng.below(12) as usize;
        let mut moves = Vec::with_capacity(n_moves);
        for q in 0..n_moves {
            let from = all_sites[rng.below(all_sites.len() as u64) as usize];
            let to = loop {
                let t = all_sites[rng.below(all_sites.len() as u64) as usize];
                if t != from {
                    break t;
                }
            };
            moves.push(Move1Q::new(QubitId(q as u32), from, to, &layout, &params));
        }

        let groups = group_moves(&moves, &layout, &params);
        for g in &groups {
            for (i, m1) in g.moves.iter().enumerate() {
                for m2 in &g.moves[i + 1..] {
                    assert!(
                        !oracle_conflicts(m1, m2, &layout, &params),
                        "case {case}: conflicting moves grouped together"
                    );
                }
            }
        }

        let any_conflict = (0..moves.len()).any(|i| {
            (i + 1..moves.len())
                .any(|j| oracle_conflicts(&moves[i], &moves[j], &layout, &params))
        });
        if !any_conflict {
            assert_eq!(groups.len(), 1, "case {case}: conflict-free set must fit one sweep");
        }
        assert!(groups.len() <= moves.len());
        let grouped: usize = groups.iter().map(|g| g.moves.len()).sum();
        assert_eq!(grouped, moves.len(), "case {case}: grouping must conserve moves");
    }
    println!("criterion 4 (grouping oracle, 500 cases): PASS");
}

// ---------------------------------------------------------------------------
// Criterion 5
// ---------------------------------------------------------------------------

/// Exact minimum number of stages for a gate set, by backtracking over the
/// conflict graph (vertices are gates, edges join gates sharing a qubit).
fn min_stages(gates: &[CZGate]) -> usize {
    let m = gates.len();
    if m == 0 {
        return 0;
    }
    let conflict: Vec<Vec<bool>> = (0..m)
        .map(|i| (0..m).map(|j| i != j && gates[i].shares_qubit(&gates[j])).collect())
        .collect();

    fn feasible(
        v: usize,
        k: usize,
        used: usize,
        colors: &mut Vec<usize>,
        conflict: &[Vec<bool>],
    ) -> bool {
        if v == colors.len() {
            return true;
        }
        // Color classes are interchangeable: only allow one unused color.
        let limit = k.min(used + 1);
        for c in 0..limit {
            if (0..v).all(|u| !conflict[v][u] || colors[u] != c) {
                colors[v] = c;
                if feasible(v + 1, k, used.max(c + 1), colors, conflict) {
                    return true;
                }
            }
        }
        false
    }

    for k in 1..=m {
        let mut colors = vec![usize::MAX; m];
        if feasible(0, k, 0, &mut colors, &conflict) {
            return k;
        }
    }
    m
}

#[test]
fn criterion_05_stage_partition_oracle() {
    let mut rng = TestRng(0xc01a_b0ba);
    for case in 0..200 {
        let num_qubits = 4 + rng.below(5) as u32; // 4..8 qubits
        let max_distinct = (num_qubits * (num_qubits - 1) / 2) as usize;
        let n_gates = (1 + rng.below(8) as usize).min(max_distinct);
        let mut gates: Vec<CZGate> = Vec::new();
        while gates.len() < n_gates {
            let a = rng.below(num_qubits as u64) as u32;
            let b = rng.below(num_qubits as u64) as u32;
            if a == b {
                continue;
            }
            let g = CZGate::new(QubitId(a), QubitId(b)).unwrap();
            if !gates.contains(&g) {
                gates.push(g);
            }
        }
        let circuit = Circuit::new(num_qubits, vec![gates.clone()], None).unwrap();
        let stages = partition_block(&circuit.blocks()[0]);

        // Validity: disjoint qubits inside each stage, exact cover overall.
        let mut covered: Vec<CZGate> = Vec::new();
        for s in &stages {
            let qubits = s.qubits();
            assert_eq!(qubits.len(), 2 * s.gates().len(), "case {case}: qubit reuse");
            covered.extend_from_slice(s.gates());
        }
        covered.sort();
        let mut input = gates.clone();
        input.sort();
        assert_eq!(covered, input, "case {case}: stages must cover the block");

        // Bounds: optimum <= greedy <= max conflict degree + 1, and greedy
        // >= the per-qubit load lower bound.
        let optimum = min_stages(&gates);
        let max_degree = (0..gates.len())
            .map(|i| {
                gates
                    .iter()
                    .enumerate()
                    .filter(|(j, g)| *j != i && g.shares_qubit(&gates[i]))
                    .count()
            })
            .max()
            .unwrap_or(0);
        let mut load = std::collections::BTreeMap::new();
        for g in &gates {
            *load.entry(g.a()).or_insert(0usize) += 1;
            *load.entry(g.b()).or_insert(0usize) += 1;
        }
        let load_bound = load.values().copied().max().unwrap_or(0);

        assert!(stages.len() >= optimum, "case {case}: below optimum?");
        assert!(
            stages.len() >= load_bound,
            "case {case}: below the qubit-load bound"
        );
        assert!(
            stages.len() <= max_degree + 1,
            "case {case}: greedy bound violated ({} > {})",
            stages.len(),
            max_degree + 1
        );
    }
    println!("criterion 5 (stage-partition oracle, 200 cases): PASS");
}

// ---------------------------------------------------------------------------
// Criterion 6
// ---------------------------------------------------------------------------

struct ReplayResult {
    g2: u64,
    stages: u32,
    sum_n_i: u64,
    n_trans: u64,
    t_q: Vec<f64>,
    t_exe: f64,
    total: f64,
}

/// Independent event-log replayer: walks the schedule chunk by chunk with
/// its own placement map, accumulating storage residence per qubit (the
/// complementary quantity to the library's out-of-storage accounting) and
/// every counter from scratch.
fn replay(schedule: &Schedule) -> ReplayResult {
    let n = schedule.num_qubits as usize;
    let params = &schedule.params;
    let mut site: Vec<Site> = schedule.initial.clone();
    let mut storage_since: Vec<Option<f64>> = site
        .iter()
        .map(|s| (s.zone == Zone::Storage).then_some(0.0))
        .collect();
    let mut storage_total = vec![0.0_f64; n];
    let mut interactions = vec![0u64; n];
    let mut g2 = 0u64;
    let mut moves = 0u64;
    let mut sum_n_i = 0u64;
    let mut now = 0.0_f64;

    for stage in &schedule.stages {
        for chunk in &stage.chunks {
            let pickup = now;
            let dropoff = now + chunk.duration;
            for cm in &chunk.collmoves {
                for m in &cm.moves {
                    let q = m.qubit.index();
                    assert_eq!(site[q], m.from, "replay: stale move");
                    if let Some(since) = storage_since[q].take() {
                        storage_total[q] += pickup - since;
                    }
                    site[q] = m.to;
                    if m.to.zone == Zone::Storage {
                        storage_since[q] = Some(dropoff);
                    }
                    moves += 1;
                }
            }
            now = dropoff;
        }
        now += params.t_rydberg;
        g2 += stage.gates.len() as u64;
        let mut in_stage = vec![false; n];
        for g in &stage.gates {
            interactions[g.a().index()] += 1;
            interactions[g.b().index()] += 1;
            in_stage[g.a().index()] = true;
            in_stage[g.b().index()] = true;
        }
        sum_n_i += (0..n)
            .filter(|&q| !in_stage[q] && site[q].zone == Zone::Compute)
            .count() as u64;
    }

    let end = now;
    let t_q: Vec<f64> = (0..n)
        .map(|q| {
            let parked = storage_total[q]
                + storage_since[q].map_or(0.0, |since| end - since);
            (end - parked) - interactions[q] as f64 * params.t_rydberg
        })
        .collect();
    let n_trans = 2 * moves;
    let f_dec: f64 = t_q.iter().map(|&t| 1.0 - t / params.t2).product();
    let total = params.f2.powf(g2 as f64)
        * params.f_exc.powf(sum_n_i as f64)
        * params.f_trans.powf(n_trans as f64)
        * f_dec;
    ReplayResult {
        g2,
        stages: schedule.stages.len() as u32,
        sum_n_i,
        n_trans,
        t_q,
        t_exe: end,
        total,
    }
}

fn assert_close(name: &str, what: &str, got: f64, want: f64) {
    let scale = got.abs().max(want.abs()).max(1e-300);
    assert!(
        (got - want).abs() / scale < 1e-12,
        "{name}: {what} differs: {got} vs {want}"
    );
}

fn assert_replay_matches(name: &str, schedule: &Schedule, report: &FidelityReport) {
    let r = replay(schedule);
    assert_eq!(r.g2, report.g2, "{name}: g2");
    assert_eq!(r.stages, report.stages, "{name}: stage count");
    assert_eq!(r.sum_n_i, report.sum_n_i, "{name}: sum n_i");
    assert_eq!(r.n_trans, report.n_trans, "{name}: transfer count");
    for (q, (got, want)) in r.t_q.iter().zip(&report.t_q).enumerate() {
        if *want == 0.0 {
            assert_eq!(*got, 0.0, "{name}: T_q of q{q}");
        } else {
            assert_close(name, &format!("T_q of q{q}"), *got, *want);
        }
    }
    assert_close(name, "T_exe", r.t_exe, report.t_exe);
    assert_close(name, "total fidelity", r.total, report.total);
}

#[test]
fn criterion_06_fidelity_oracle_equivalence() {
    let params = HardwareParams::default();
    for (name, circuit) in matrix() {
        for mode in [Mode::WithStorage, Mode::NonStorage] {
            for n_aods in [1, 2] {
                let schedule = compile(&circuit, mode, n_aods);
                let report = evaluate(&schedule, &circuit, &params, false).unwrap();
                assert_replay_matches(&name, &schedule, &report);
            }
        }
    }
    println!("criterion 6 (fidelity oracle equivalence): PASS");
}

// ---------------------------------------------------------------------------
// Criterion 7
// ---------------------------------------------------------------------------

#[test]
fn criterion_07_multi_aod_monotone_speedup() {
    let params = HardwareParams::default();
    let spec = BenchSpec {
        family: BenchFamily::QaoaRegular { degree: 3 },
        num_qubits: 30,
        seed: 7,
    };
    let circuit = generate(&spec).unwrap();
    for mode in [Mode::WithStorage, Mode::NonStorage] {
        let t_exe: Vec<f64> = [1u32, 2, 4]
            .iter()
            .map(|&a| {
                let s = compile(&circuit, mode, a);
                for stage in &s.stages {
                    for chunk in &stage.chunks {
                        let longest = chunk
                            .collmoves
                            .iter()
                            .map(|g| g.duration)
                            .fold(0.0, f64::max);
                        assert_eq!(
                            chunk.duration,
                            params.t_trans + longest,
                            "chunk duration formula must hold exactly"
                        );
                    }
                }
                evaluate(&s, &circuit, &params, false).unwrap().t_exe
            })
            .collect();
        assert!(
            t_exe[0] >= t_exe[1] && t_exe[1] >= t_exe[2],
            "{mode:?}: T_exe not monotone over 1/2/4 AODs: {t_exe:?}"
        );
    }
    println!("criterion 7 (multi-AOD monotone speedup): PASS");
}

// ---------------------------------------------------------------------------
// Criterion 8
// ---------------------------------------------------------------------------

/// Brute-force timeline: total out-of-storage qubit-time when the two
/// given single-move Coll-Moves run in the given order on one AOD.
fn out_of_storage_time(order: &[&CollMove], params: &HardwareParams) -> f64 {
    let mut now = 0.0_f64;
    let mut total = 0.0_f64;
    // Track each qubit's storage state across the two-move timeline.
    let mut state: std::collections::BTreeMap<u32, (bool, f64)> = Default::default();
    for cm in order {
        let pickup = now;
        let dropoff = now + params.t_trans + cm.duration;
        for m in &cm.moves {
            let starts_in_storage = m.from.zone == Zone::Storage;
            let (in_storage, out_since) = state
                .entry(m.qubit.0)
                .or_insert((starts_in_storage, 0.0));
            if *in_storage {
                *in_storage = false;
                *out_since = pickup;
            }
            if m.to.zone == Zone::Storage {
                total += dropoff - *out_since;
                *in_storage = true;
            }
        }
        now = dropoff;
    }
    for (_, (in_storage, out_since)) in state {
        if !in_storage {
            total += now - out_since;
        }
    }
    total
}

#[test]
fn criterion_08_intra_stage_ordering_benefit() {
    let params = HardwareParams::default();
    let layout = default_geometry(9);
    let inbound = CollMove::from_moves(
        vec![Move1Q::new(
            QubitId(0),
            Site::new(Zone::Compute, 0, 0),
            Site::new(Zone::Storage, 0, 0),
            &layout,
            &params,
        )],
        &params,
    );
    let outbound = CollMove::from_moves(
        vec![Move1Q::new(
            QubitId(1),
            Site::new(Zone::Storage, 1, 0),
            Site::new(Zone::Compute, 1, 1),
            &layout,
            &params,
        )],
        &params,
    );

    let scheduled = order_collmoves(vec![outbound.clone(), inbound.clone()]);
    assert_eq!(scheduled[0].n_in, 1, "storage-bound group must run first");

    let scheduled_cost = out_of_storage_time(&[&scheduled[0], &scheduled[1]], &params);
    let reversed_cost = out_of_storage_time(&[&scheduled[1], &scheduled[0]], &params);
    assert!(
        scheduled_cost <= reversed_cost,
        "dwell-time order must not lose: {scheduled_cost} vs {reversed_cost}"
    );
    println!("criterion 8 (intra-stage ordering benefit): PASS");
}

// ---------------------------------------------------------------------------
// Criterion 9
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_determinism_and_round_trip() {
    // Library-level determinism: compiling twice yields identical bytes.
    let spec = BenchSpec {
        family: BenchFamily::QaoaRegular { degree: 3 },
        num_qubits: 12,
        seed: 101,
    };
    let c1 = generate(&spec).unwrap();
    let c2 = generate(&spec).unwrap();
    assert_eq!(serialize_circuit(&c1), serialize_circuit(&c2));

    for mode in [Mode::WithStorage, Mode::NonStorage] {
        let a = compile(&c1, mode, 2).to_json();
        let b = compile(&c2, mode, 2).to_json();
        assert_eq!(a, b, "schedules must be byte-identical across runs");
    }

    // Round trip through parse/serialize for every matrix circuit.
    for (name, circuit) in matrix() {
        let text = serialize_circuit(&circuit);
        let back = parse_circuit(&text).unwrap();
        assert_eq!(back, circuit, "{name}");
        assert_eq!(serialize_circuit(&back), text, "{name}");
    }
    println!("criterion 9 (determinism and round-trip): PASS");
}

// ---------------------------------------------------------------------------
// Criterion 10
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_desk_scale_end_to_end() {
    let bin = env!("CARGO_BIN_EXE_atomsched");
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name);
    let started = std::time::Instant::now();

    let run = |args: &[&str]| {
        let out = std::process::Command::new(bin)
            .args(args)
            .output()
            .expect("binary runs");
        assert!(
            out.status.success(),
            "{args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        out
    };

    let circuit = path("qaoa30.json");
    run(&[
        "generate",
        "--bench",
        "qaoa-regular3",
        "--qubits",
        "30",
        "--seed",
        "7",
        "-o",
        circuit.to_str().unwrap(),
    ]);
    for (mode, tag) in [("with-storage", "ws"), ("non-storage", "ns")] {
        let schedule = path(&format!("qaoa30.{tag}.json"));
        run(&[
            "compile",
            circuit.to_str().unwrap(),
            "--mode",
            mode,
            "-o",
            schedule.to_str().unwrap(),
        ]);
        run(&["verify", schedule.to_str().unwrap()]);
    }
    let table = run(&[
        "report",
        path("qaoa30.ws.report.json").to_str().unwrap(),
        path("qaoa30.ns.report.json").to_str().unwrap(),
        "--format",
        "csv",
    ]);
    let stdout = String::from_utf8_lossy(&table.stdout);
    assert_eq!(stdout.lines().count(), 3, "header plus two data rows");

    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "end-to-end pipeline took {elapsed:?}, budget is 10 s"
    );
    println!("criterion 10 (desk-scale end-to-end, {elapsed:?}): PASS");
}
