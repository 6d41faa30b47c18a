//! Seeded generators for the benchmark circuit families.
//!
//! Each generator emits only the CZ-block skeleton a compiler run needs --
//! no phase angles, no 1Q layers. The block decompositions are fixed,
//! simple canonical forms so that a `(family, qubits, seed)` triple is fully
//! reproducible:
//!
//! - `qaoa-regular d`: one block, the edges of a random d-regular graph
//!   (configuration model with rejection).
//! - `qaoa-random p`: one block, each unordered pair drawn independently
//!   with probability p.
//! - `bv`: one block of gates (i, n-1), one per secret-string 1-bit;
//!   exactly floor(n/2) ones at shuffled positions among qubits 0..n-2.
//! - `vqe`: one block with all pairs i < j (full entanglement).
//! - `qsim p strings`: one block per Pauli string, a nearest-index chain
//!   over the string's support; supports with fewer than two qubits are
//!   redrawn.
//! - `qft`: n-1 blocks, block i = {(i, j) : j > i}.

use thiserror::Error;

use crate::circuit::{CZGate, Circuit, QubitId};
use crate::rng::SplitMix64;

/// Benchmark family with its family-specific knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BenchFamily {
    QaoaRegular { degree: u32 },
    QaoaRandom { pair_probability: f64 },
    Bv,
    Vqe,
    QSim { pauli_probability: f64, num_strings: u32 },
    Qft,
}

impl std::fmt::Display for BenchFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BenchFamily::QaoaRegular { degree } => write!(f, "qaoa-regular{degree}"),
            BenchFamily::QaoaRandom { .. } => write!(f, "qaoa-random"),
            BenchFamily::Bv => write!(f, "bv"),
            BenchFamily::Vqe => write!(f, "vqe"),
            BenchFamily::QSim { .. } => write!(f, "qsim"),
            BenchFamily::Qft => write!(f, "qft"),
        }
    }
}

/// A fully specified benchmark instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchSpec {
    pub family: BenchFamily,
    pub num_qubits: u32,
    pub seed: u64,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("infeasible benchmark: {0}")]
    InfeasibleSpec(String),
    #[error("degenerate benchmark: {0}")]
    DegenerateSpec(String),
}

const REGULAR_GRAPH_RETRIES: u32 = 1000;

/// Generates the circuit for a benchmark spec. Deterministic: the same spec
/// always yields a byte-identical serialized circuit.
pub fn generate(spec: &BenchSpec) -> Result<Circuit, BenchError> {
    let n = spec.num_qubits;
    if n < 2 {
        return Err(BenchError::DegenerateSpec(format!(
            "{} needs at least 2 qubits, got {n}",
            spec.family
        )));
    }
    let mut rng = SplitMix64::new(spec.seed);
    let blocks = match spec.family {
        BenchFamily::QaoaRegular { degree } => vec![regular_graph_block(n, degree, &mut rng)?],
        BenchFamily::QaoaRandom { pair_probability } => {
            check_probability(pair_probability)?;
            vec![random_pair_block(n, pair_probability, &mut rng)]
        }
        BenchFamily::Bv => vec![bv_block(n, &mut rng)],
        BenchFamily::Vqe => vec![complete_graph_block(n)],
        BenchFamily::QSim {
            pauli_probability,
            num_strings,
        } => {
            check_probability(pauli_probability)?;
            if num_strings == 0 {
                return Err(BenchError::DegenerateSpec(
                    "qsim needs at least one Pauli string".into(),
                ));
            }
            (0..num_strings)
                .map(|_| pauli_chain_block(n, pauli_probability, &mut rng))
                .collect::<Result<_, _>>()?
        }
        BenchFamily::Qft => (0..n - 1)
            .map(|i| (i + 1..n).map(|j| pair(i, j)).collect())
            .collect(),
    };
    Ok(Circuit::new(n, blocks, None).expect("generators emit valid circuits"))
}

fn check_probability(p: f64) -> Result<(), BenchError> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(BenchError::InfeasibleSpec(format!(
            "probability must lie in (0, 1], got {p}"
        )))
    }
}

fn pair(a: u32, b: u32) -> CZGate {
    CZGate::new(QubitId(a), QubitId(b)).expect("distinct endpoints")
}

/// Configuration-model d-regular graph: d stubs per vertex, shuffled and
/// paired; retried while the pairing contains a self-loop or multi-edge.
fn regular_graph_block(n: u32, degree: u32, rng: &mut SplitMix64) -> Result<Vec<CZGate>, BenchError> {
    if degree == 0 || degree >= n {
        return Err(BenchError::InfeasibleSpec(format!(
            "no {degree}-regular graph on {n} vertices"
        )));
    }
    if !(n as u64 * degree as u64).is_multiple_of(2) {
        return Err(BenchError::InfeasibleSpec(format!(
            "no {degree}-regular graph on {n} vertices: odd degree sum"
        )));
    }

    'attempt: for _ in 0..REGULAR_GRAPH_RETRIES {
        let mut stubs: Vec<u32> = (0..n)
            .flat_map(|v| std::iter::repeat_n(v, degree as usize))
            .collect();
        rng.shuffle(&mut stubs);
        let mut edges = std::collections::BTreeSet::new();
        for chunk in stubs.chunks_exact(2) {
            let (a, b) = (chunk[0], chunk[1]);
            if a == b {
                continue 'attempt;
            }
            if !edges.insert((a.min(b), a.max(b))) {
                continue 'attempt;
            }
        }
        return Ok(edges.into_iter().map(|(a, b)| pair(a, b)).collect());
    }
    Err(BenchError::InfeasibleSpec(format!(
        "could not realize a {degree}-regular graph on {n} vertices in {REGULAR_GRAPH_RETRIES} attempts"
    )))
}

fn random_pair_block(n: u32, p: f64, rng: &mut SplitMix64) -> Vec<CZGate> {
    let mut gates = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.next_f64() < p {
                gates.push(pair(i, j));
            }
        }
    }
    gates
}

/// Secret string with exactly floor(n/2) ones among qubits 0..n-2, each
/// 1-bit contributing a gate against the target qubit n-1.
fn bv_block(n: u32, rng: &mut SplitMix64) -> Vec<CZGate> {
    let ones = (n / 2) as usize;
    let mut positions: Vec<u32> = (0..n - 1).collect();
    rng.shuffle(&mut positions);
    let mut chosen: Vec<u32> = positions.into_iter().take(ones).collect();
    chosen.sort_unstable();
    chosen.into_iter().map(|i| pair(i, n - 1)).collect()
}

fn complete_graph_block(n: u32) -> Vec<CZGate> {
    let mut gates = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            gates.push(pair(i, j));
        }
    }
    gates
}

/// One Pauli string's block: draw the support (each qubit independently with
/// probability p, redrawn until it spans at least two qubits), then chain
/// consecutive support qubits in index order.
fn pauli_chain_block(n: u32, p: f64, rng: &mut SplitMix64) -> Result<Vec<CZGate>, BenchError> {
    for _ in 0..REGULAR_GRAPH_RETRIES {
        let support: Vec<u32> = (0..n).filter(|_| rng.next_f64() < p).collect();
        if support.len() >= 2 {
            return Ok(support.windows(2).map(|w| pair(w[0], w[1])).collect());
        }
    }
    Err(BenchError::InfeasibleSpec(format!(
        "could not draw a Pauli string support of size >= 2 on {n} qubits with p = {p}"
    )))
}
