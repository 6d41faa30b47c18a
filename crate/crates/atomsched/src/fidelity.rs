//! Fidelity and execution-time models.
//!
//! The output fidelity of a compiled schedule is a product of independent
//! factors: f2 per CZ gate; the excitation-survival fidelity per
//! non-interacting qubit left in the computation zone during an excitation;
//! the transfer fidelity per trap transfer (two per move: pickup and
//! dropoff); and a decoherence factor (1 - T_q / T2) per qubit, where T_q
//! is the qubit's idle time. Qubits parked in the storage zone neither see
//! the excitation pulse nor accrue idle time, so T_q counts the wall time a
//! qubit spends outside storage, minus the excitation windows in which it
//! participates in a gate. The optional single-qubit factor f1^g1 is off by
//! default.

use thiserror::Error;

use crate::circuit::{Circuit, QubitId};
use crate::hardware::{HardwareParams, Zone};
use crate::schedule::Schedule;

/// The factor breakdown for one compiled schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityReport {
    pub f_cz: f64,
    pub f_exc: f64,
    pub f_trans: f64,
    pub f_dec: f64,
    pub f_1q: Option<f64>,
    /// Product of all present factors.
    pub total: f64,
    /// Execution time, seconds.
    pub t_exe: f64,
    pub g2: u64,
    pub stages: u32,
    pub sum_n_i: u64,
    pub n_trans: u64,
    /// Per-qubit idle time, seconds.
    pub t_q: Vec<f64>,
}

#[derive(Debug, Error)]
pub enum FidelityError {
    #[error("{qubit} idles for {t_q} s, at or beyond T2 = {t2} s")]
    DecoherenceOverflow { qubit: QubitId, t_q: f64, t2: f64 },
    #[error("schedule counters inconsistent: {0}")]
    InconsistentCounters(String),
    #[error("schedule timeline incomplete: {0}")]
    IncompleteTimeline(String),
}

/// Per-qubit idle time: wall time spent outside the storage zone (movement
/// and transfer windows included), minus one excitation duration for every
/// stage the qubit interacts in.
pub fn compute_idle_times(s: &Schedule) -> Result<Vec<f64>, FidelityError> {
    let n = s.num_qubits as usize;
    if s.initial.len() != n {
        return Err(FidelityError::IncompleteTimeline(format!(
            "initial placement covers {} of {} qubits",
            s.initial.len(),
            n
        )));
    }

    let mut parked: Vec<bool> = s.initial.iter().map(|site| site.zone == Zone::Storage).collect();
    let mut out_since = vec![0.0_f64; n];
    let mut out_total = vec![0.0_f64; n];
    let mut interactions = vec![0u64; n];

    let mut now = 0.0_f64;
    for stage in &s.stages {
        for chunk in &stage.chunks {
            let start = now;
            let end = now + chunk.duration;
            for cm in &chunk.collmoves {
                for m in &cm.moves {
                    let q = m.qubit.index();
                    if q >= n {
                        return Err(FidelityError::IncompleteTimeline(format!(
                            "move references {} outside the {}-qubit schedule",
                            m.qubit, n
                        )));
                    }
                    if parked[q] {
                        parked[q] = false;
                        out_since[q] = start;
                    }
                    if m.to.zone == Zone::Storage {
                        out_total[q] += end - out_since[q];
                        parked[q] = true;
                    }
                }
            }
            now = end;
        }
        now += s.params.t_rydberg;
        for gate in &stage.gates {
            if gate.b().index() >= n {
                return Err(FidelityError::IncompleteTimeline(format!(
                    "gate {gate} references a qubit outside the {n}-qubit schedule"
                )));
            }
            interactions[gate.a().index()] += 1;
            interactions[gate.b().index()] += 1;
        }
    }

    let end = now;
    let mut t_q = Vec::with_capacity(n);
    for q in 0..n {
        let out = if parked[q] {
            out_total[q]
        } else {
            out_total[q] + (end - out_since[q])
        };
        t_q.push(out - interactions[q] as f64 * s.params.t_rydberg);
    }
    Ok(t_q)
}

/// Total execution time: all movement chunks plus one excitation per stage,
/// plus (when the single-qubit overlay is requested) one single-qubit layer
/// per block boundary.
pub fn execution_time(
    s: &Schedule,
    c: &Circuit,
    params: &HardwareParams,
    include_1q: bool,
) -> f64 {
    let mut total = 0.0_f64;
    for stage in &s.stages {
        let movement: f64 = stage.chunks.iter().map(|ch| ch.duration).sum();
        total = total + movement + params.t_rydberg;
    }
    if include_1q {
        total += (c.blocks().len() as f64 + 1.0) * params.t_1q;
    }
    total
}

/// Evaluates the fidelity model over a schedule, cross-checking the stored
/// counters against a recount first.
pub fn evaluate(
    s: &Schedule,
    c: &Circuit,
    params: &HardwareParams,
    include_1q: bool,
) -> Result<FidelityReport, FidelityError> {
    if s.num_qubits != c.num_qubits() {
        return Err(FidelityError::InconsistentCounters(format!(
            "schedule is for {} qubits, circuit has {}",
            s.num_qubits,
            c.num_qubits()
        )));
    }
    let scheduled_gates: u64 = s.stages.iter().map(|st| st.gates.len() as u64).sum();
    let g2 = c.gate_count();
    if scheduled_gates != g2 {
        return Err(FidelityError::InconsistentCounters(format!(
            "schedule executes {scheduled_gates} gates, circuit has {g2}"
        )));
    }
    if s.counters.stages as usize != s.stages.len() {
        return Err(FidelityError::InconsistentCounters(format!(
            "counter says {} stages, schedule lists {}",
            s.counters.stages,
            s.stages.len()
        )));
    }
    let moves: u64 = s
        .stages
        .iter()
        .flat_map(|st| st.chunks.iter())
        .flat_map(|ch| ch.collmoves.iter())
        .map(|g| g.moves.len() as u64)
        .sum();
    if s.counters.total_moves != moves || s.counters.n_trans != 2 * moves {
        return Err(FidelityError::InconsistentCounters(format!(
            "counter says {} moves / {} transfers, schedule holds {} moves",
            s.counters.total_moves, s.counters.n_trans, moves
        )));
    }
    let sum_n_i: u64 = s.stages.iter().map(|st| st.n_i as u64).sum();
    if s.counters.sum_n_i != sum_n_i {
        return Err(FidelityError::InconsistentCounters(format!(
            "counter says sum n_i = {}, stages add to {sum_n_i}",
            s.counters.sum_n_i
        )));
    }

    let t_q = compute_idle_times(s)?;
    for (q, &idle) in t_q.iter().enumerate() {
        if idle >= params.t2 {
            return Err(FidelityError::DecoherenceOverflow {
                qubit: QubitId(q as u32),
                t_q: idle,
                t2: params.t2,
            });
        }
    }

    let f_cz = params.f2.powf(g2 as f64);
    let f_exc = params.f_exc.powf(sum_n_i as f64);
    let f_trans = params.f_trans.powf(s.counters.n_trans as f64);
    let f_dec = t_q.iter().map(|&idle| 1.0 - idle / params.t2).product();
    let f_1q = match (include_1q, c.num_1q_gates()) {
        (true, Some(g1)) => Some(params.f1.powf(g1 as f64)),
        _ => None,
    };
    let total = f_cz * f_exc * f_trans * f_dec * f_1q.unwrap_or(1.0);

    Ok(FidelityReport {
        f_cz,
        f_exc,
        f_trans,
        f_dec,
        f_1q,
        total,
        t_exe: execution_time(s, c, params, include_1q),
        g2,
        stages: s.counters.stages,
        sum_n_i,
        n_trans: s.counters.n_trans,
        t_q,
    })
}
