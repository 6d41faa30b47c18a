//! Command implementations behind the `atomsched` binary.
//!
//! Four commands: `generate` writes benchmark circuits, `compile` turns a
//! circuit into a schedule plus a fidelity report, `verify` replays a
//! schedule file and re-checks every invariant, and `report` tabulates
//! report files. Exit codes: 0 ok, 1 I/O, 2 bad input or compile failure,
//! 3 verification failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bench::{generate, BenchFamily, BenchSpec};
use crate::circuit::{parse_circuit, serialize_circuit, Circuit, QubitId};
use crate::fidelity::{evaluate, FidelityReport};
use crate::hardware::{initial_layout, HardwareConfig, Mode, Zone};
use crate::placement::Placement;
use crate::router::{conflicts, validate_layout, CollMove, RouteError};
use crate::schedule::{build_schedule, Schedule};
use crate::stage::{Stage, StagePlan};

/// Failure classes mapped to process exit codes by the binary.
#[derive(Debug)]
pub enum CliError {
    /// Exit 1: filesystem trouble.
    Io(String),
    /// Exit 2: bad input or a failed compilation.
    Input(String),
    /// Exit 3: a schedule failed verification.
    Verification(Vec<String>),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(m) | CliError::Input(m) => write!(f, "{m}"),
            CliError::Verification(violations) => {
                writeln!(f, "schedule verification failed:")?;
                for v in violations {
                    writeln!(f, "  - {v}")?;
                }
                Ok(())
            }
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Input(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Parses a `--bench` family string: `vqe`, `qft`, `bv`, `qsim`,
/// `qaoa-random`, or `qaoa-regular<d>`.
pub fn parse_family(name: &str, prob: Option<f64>, strings: u32) -> Result<BenchFamily, CliError> {
    let family = match name {
        "vqe" => BenchFamily::Vqe,
        "qft" => BenchFamily::Qft,
        "bv" => BenchFamily::Bv,
        "qsim" => BenchFamily::QSim {
            pauli_probability: prob.unwrap_or(0.3),
            num_strings: strings,
        },
        "qaoa-random" => BenchFamily::QaoaRandom {
            pair_probability: prob.unwrap_or(0.5),
        },
        other => {
            let degree = other
                .strip_prefix("qaoa-regular")
                .and_then(|d| d.parse::<u32>().ok())
                .ok_or_else(|| {
                    CliError::Input(format!(
                        "unknown benchmark family '{other}' (expected vqe, qft, bv, qsim, \
                         qaoa-random, or qaoa-regular<d>)"
                    ))
                })?;
            BenchFamily::QaoaRegular { degree }
        }
    };
    Ok(family)
}

/// `generate`: write a benchmark circuit and print its shape.
pub fn cmd_generate(
    family: BenchFamily,
    num_qubits: u32,
    seed: u64,
    out: &Path,
) -> Result<(), CliError> {
    let spec = BenchSpec {
        family,
        num_qubits,
        seed,
    };
    let circuit = generate(&spec).map_err(|e| CliError::Input(e.to_string()))?;
    write_file(out, &serialize_circuit(&circuit))?;
    println!(
        "{family} n={num_qubits} seed={seed}: {} blocks, {} gates -> {}",
        circuit.blocks().len(),
        circuit.gate_count(),
        out.display()
    );
    Ok(())
}

/// Everything `compile` needs beyond the circuit itself.
#[derive(Debug, Clone)]
pub struct CompileConfig {
    pub mode: Mode,
    pub n_aods: u32,
    pub alpha: f64,
    pub hw_path: Option<PathBuf>,
    pub include_1q: bool,
    /// Include the measured wall-clock compile time in the report file.
    /// Off by default so recompiling produces byte-identical artifacts.
    pub emit_timing: bool,
    /// Report file format: pretty JSON or a one-row CSV.
    pub report_format: ReportFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// One compiled circuit's report, as written to disk.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDoc {
    pub circuit: String,
    pub num_qubits: u32,
    pub mode: Mode,
    pub n_aods: u32,
    pub alpha: f64,
    pub include_1q: bool,
    pub f_cz: f64,
    pub f_exc: f64,
    pub f_trans: f64,
    pub f_dec: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub f_1q: Option<f64>,
    pub total_fidelity: f64,
    pub t_exe_us: f64,
    pub g2: u64,
    pub stages: u32,
    pub sum_n_i: u64,
    pub n_trans: u64,
    pub t_q_us: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t_comp_ms: Option<f64>,
}

fn report_doc(
    name: &str,
    circuit: &Circuit,
    config: &CompileConfig,
    report: &FidelityReport,
    t_comp_ms: Option<f64>,
) -> ReportDoc {
    ReportDoc {
        circuit: name.to_string(),
        num_qubits: circuit.num_qubits(),
        mode: config.mode,
        n_aods: config.n_aods,
        alpha: config.alpha,
        include_1q: config.include_1q,
        f_cz: report.f_cz,
        f_exc: report.f_exc,
        f_trans: report.f_trans,
        f_dec: report.f_dec,
        f_1q: report.f_1q,
        total_fidelity: report.total,
        t_exe_us: report.t_exe * 1e6,
        g2: report.g2,
        stages: report.stages,
        sum_n_i: report.sum_n_i,
        n_trans: report.n_trans,
        t_q_us: report.t_q.iter().map(|t| t * 1e6).collect(),
        t_comp_ms,
    }
}

fn sorted_pretty<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report serialization cannot fail");
    serde_json::to_string_pretty(&v).expect("report serialization cannot fail")
}

/// `compile`: run the full pipeline on one circuit file.
pub fn cmd_compile(
    circuit_path: &Path,
    config: &CompileConfig,
    out_schedule: &Path,
    out_report: &Path,
) -> Result<(), CliError> {
    let text = read(circuit_path)?;
    let hw = match &config.hw_path {
        Some(p) => HardwareConfig::parse(&read(p)?).map_err(CliError::Input)?,
        None => HardwareConfig::default(),
    };

    let started = Instant::now();
    let circuit = parse_circuit(&text).map_err(|e| CliError::Input(e.to_string()))?;
    let (params, layout) = hw.resolve(circuit.num_qubits());
    let plan = StagePlan::build(&circuit, config.alpha);
    let initial = initial_layout(&circuit, &layout, config.mode)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let schedule = build_schedule(&plan, &initial, config.mode, config.n_aods, &params, &layout)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let report = evaluate(&schedule, &circuit, &params, config.include_1q)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let t_comp_ms = started.elapsed().as_secs_f64() * 1e3;

    let name = circuit_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| circuit_path.display().to_string());
    let doc = report_doc(
        &name,
        &circuit,
        config,
        &report,
        config.emit_timing.then_some(t_comp_ms),
    );

    write_file(out_schedule, &schedule.to_json())?;
    let rendered = match config.report_format {
        ReportFormat::Json => sorted_pretty(&doc),
        ReportFormat::Csv => render_table(std::slice::from_ref(&doc), TableFormat::Csv),
    };
    write_file(out_report, &rendered)?;

    println!(
        "{name} [{}] aods={}: fidelity {:.6}, T_exe {:.2} us, {} stages, {} moves, T_comp {:.2} ms",
        config.mode,
        config.n_aods,
        report.total,
        report.t_exe * 1e6,
        report.stages,
        schedule.counters.total_moves,
        t_comp_ms
    );
    Ok(())
}

/// `verify`: replay a schedule file and re-check every invariant.
pub fn cmd_verify(schedule_path: &Path) -> Result<(), CliError> {
    let text = read(schedule_path)?;
    let schedule = Schedule::from_json(&text).map_err(CliError::Input)?;
    let violations = verify_schedule(&schedule);
    if violations.is_empty() {
        println!(
            "{}: ok ({} stages, {} moves)",
            schedule_path.display(),
            schedule.counters.stages,
            schedule.counters.total_moves
        );
        Ok(())
    } else {
        Err(CliError::Verification(violations))
    }
}

/// Replays a schedule from its initial placement, checking placement
/// integrity after every collective move, pairwise non-conflict inside each
/// collective move, the chunk duration formula, stage-layout validity at
/// every excitation, and the global counters. Returns all violations found.
pub fn verify_schedule(schedule: &Schedule) -> Vec<String> {
    let mut violations = Vec::new();
    let params = &schedule.params;
    let layout = &schedule.layout;
    const TOL: f64 = 1e-12;

    if schedule.initial.len() != schedule.num_qubits as usize {
        violations.push(format!(
            "initial placement covers {} of {} qubits",
            schedule.initial.len(),
            schedule.num_qubits
        ));
        return violations;
    }
    for (q, site) in schedule.initial.iter().enumerate() {
        if !layout.contains(*site) {
            violations.push(format!("initial site {site} of q{q} is out of bounds"));
            return violations;
        }
    }

    let mut placement = Placement::from_sites(schedule.initial.clone());
    let mut moves_seen = 0u64;
    let mut sum_n_i = 0u64;

    for (si, stage) in schedule.stages.iter().enumerate() {
        let stage_gates = match stage_from_gates(stage, schedule.num_qubits) {
            Ok(s) => s,
            Err(msg) => {
                violations.push(format!("stage {si}: {msg}"));
                continue;
            }
        };
        for (ci, chunk) in stage.chunks.iter().enumerate() {
            if chunk.collmoves.is_empty() || chunk.collmoves.len() > schedule.n_aods as usize {
                violations.push(format!(
                    "stage {si} chunk {ci}: holds {} collmoves with {} AODs",
                    chunk.collmoves.len(),
                    schedule.n_aods
                ));
            }
            let mut longest = 0.0_f64;
            for (gi, cm) in chunk.collmoves.iter().enumerate() {
                verify_collmove(schedule, si, ci, gi, cm, &mut violations);
                longest = longest.max(cm.duration);
                moves_seen += cm.moves.len() as u64;
                match crate::router::apply_collmove(&placement, cm) {
                    Ok(next) => placement = next,
                    Err(e) => {
                        violations.push(format!("stage {si} chunk {ci} collmove {gi}: {e}"));
                        if matches!(e, RouteError::StaleMove { .. } | RouteError::UnplacedQubit { .. }) {
                            return violations;
                        }
                        // Occupancy breaches: force-apply so the replay can
                        // keep going and report later problems too.
                        let mut forced = placement.clone();
                        for m in &cm.moves {
                            forced.relocate(m.qubit, m.to);
                        }
                        placement = forced;
                    }
                }
            }
            let expected = params.t_trans + longest;
            if (chunk.duration - expected).abs() > TOL {
                violations.push(format!(
                    "stage {si} chunk {ci}: duration {} s, expected t_trans + max sweep = {} s",
                    chunk.duration, expected
                ));
            }
        }
        for v in validate_layout(&placement, &stage_gates) {
            violations.push(format!("stage {si} layout: {v}"));
        }
        let n_i = (0..schedule.num_qubits)
            .map(QubitId)
            .filter(|&q| {
                !stage_gates.involves(q) && placement.site_of(q).zone == Zone::Compute
            })
            .count() as u32;
        if n_i != stage.n_i {
            violations.push(format!(
                "stage {si}: records n_i = {}, replay finds {n_i}",
                stage.n_i
            ));
        }
        sum_n_i += n_i as u64;
    }

    if schedule.counters.stages as usize != schedule.stages.len() {
        violations.push(format!(
            "counters: {} stages recorded, {} present",
            schedule.counters.stages,
            schedule.stages.len()
        ));
    }
    if schedule.counters.total_moves != moves_seen {
        violations.push(format!(
            "counters: {} moves recorded, replay saw {moves_seen}",
            schedule.counters.total_moves
        ));
    }
    if schedule.counters.n_trans != 2 * moves_seen {
        violations.push(format!(
            "counters: {} transfers recorded, expected {}",
            schedule.counters.n_trans,
            2 * moves_seen
        ));
    }
    if schedule.counters.sum_n_i != sum_n_i {
        violations.push(format!(
            "counters: sum n_i = {} recorded, replay finds {sum_n_i}",
            schedule.counters.sum_n_i
        ));
    }
    violations
}

fn stage_from_gates(
    stage: &crate::schedule::StageSchedule,
    num_qubits: u32,
) -> Result<Stage, String> {
    let mut seen = std::collections::BTreeSet::new();
    for g in &stage.gates {
        if g.b().0 >= num_qubits {
            return Err(format!("gate {g} references a qubit beyond {num_qubits}"));
        }
        if !seen.insert(g.a()) || !seen.insert(g.b()) {
            return Err(format!("gates are not qubit-disjoint at {g}"));
        }
    }
    Ok(Stage::new(stage.gates.clone()))
}

fn verify_collmove(
    schedule: &Schedule,
    si: usize,
    ci: usize,
    gi: usize,
    cm: &CollMove,
    violations: &mut Vec<String>,
) {
    let params = &schedule.params;
    let layout = &schedule.layout;
    const TOL: f64 = 1e-12;

    let mut max_distance = 0.0_f64;
    for m in &cm.moves {
        if !layout.contains(m.from) || !layout.contains(m.to) {
            violations.push(format!(
                "stage {si} chunk {ci} collmove {gi}: move of {} leaves the layout",
                m.qubit
            ));
            return;
        }
        let d = crate::hardware::euclidean_distance(m.from, m.to, layout, params)
            .expect("bounds checked");
        if (m.distance - d).abs() > 1e-9 {
            violations.push(format!(
                "stage {si} chunk {ci} collmove {gi}: {} records distance {} um, sites are {} um apart",
                m.qubit, m.distance, d
            ));
        }
        max_distance = max_distance.max(d);
    }
    for (i, m1) in cm.moves.iter().enumerate() {
        for m2 in &cm.moves[i + 1..] {
            if conflicts(m1, m2, layout, params) {
                violations.push(format!(
                    "stage {si} chunk {ci} collmove {gi}: moves of {} and {} conflict",
                    m1.qubit, m2.qubit
                ));
            }
        }
    }
    if (cm.max_distance - max_distance).abs() > 1e-9 {
        violations.push(format!(
            "stage {si} chunk {ci} collmove {gi}: max distance {} um, members reach {} um",
            cm.max_distance, max_distance
        ));
    }
    let expected = crate::hardware::move_duration(max_distance, params);
    if (cm.duration - expected).abs() > TOL {
        violations.push(format!(
            "stage {si} chunk {ci} collmove {gi}: duration {} s, expected {} s",
            cm.duration, expected
        ));
    }
}

/// `report`: tabulate report files as CSV or a markdown table.
pub fn cmd_report(paths: &[PathBuf], format: TableFormat, out: Option<&Path>) -> Result<(), CliError> {
    let mut docs = Vec::new();
    for p in paths {
        let doc: ReportDoc = serde_json::from_str(&read(p)?)
            .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
        docs.push(doc);
    }
    let table = render_table(&docs, format);
    match out {
        Some(path) => write_file(path, &table)?,
        None => print!("{table}"),
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Md,
}

const COLUMNS: [&str; 12] = [
    "circuit", "mode", "n_aods", "f_cz", "f_exc", "f_trans", "f_dec", "total", "T_exe_us", "S",
    "N_trans", "T_comp_ms",
];

fn render_table(docs: &[ReportDoc], format: TableFormat) -> String {
    let rows: Vec<[String; 12]> = docs
        .iter()
        .map(|d| {
            [
                d.circuit.clone(),
                d.mode.to_string(),
                d.n_aods.to_string(),
                format!("{:.6e}", d.f_cz),
                format!("{:.6e}", d.f_exc),
                format!("{:.6e}", d.f_trans),
                format!("{:.6e}", d.f_dec),
                format!("{:.6e}", d.total_fidelity),
                format!("{:.3}", d.t_exe_us),
                d.stages.to_string(),
                d.n_trans.to_string(),
                d.t_comp_ms
                    .map_or_else(|| "-".to_string(), |t| format!("{t:.2}")),
            ]
        })
        .collect();

    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            let _ = writeln!(out, "{}", COLUMNS.join(","));
            for row in rows {
                let _ = writeln!(out, "{}", row.join(","));
            }
        }
        TableFormat::Md => {
            let _ = writeln!(out, "| {} |", COLUMNS.join(" | "));
            let _ = writeln!(out, "|{}|", COLUMNS.map(|_| " --- ").join("|"));
            for row in rows {
                let _ = writeln!(out, "| {} |", row.join(" | "));
            }
        }
    }
    out
}
