//! Stage partitioning and ordering.
//!
//! Gates inside a CZ block commute, so the block can be cut into *stages* --
//! sets of gates on pairwise-disjoint qubits, each executable under a single
//! Rydberg excitation -- and the stages can then be run in any order. The
//! partition is a greedy coloring of the gate conflict graph; the order is
//! chosen to keep the set of qubits entering and leaving the computation
//! zone small from one stage to the next.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::circuit::{CZBlock, CZGate, Circuit, QubitId};

/// One excitation's worth of gates: pairwise qubit-disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    gates: Vec<CZGate>,
}

impl Stage {
    /// Builds a stage from qubit-disjoint gates.
    pub fn new(gates: Vec<CZGate>) -> Self {
        let mut seen = BTreeSet::new();
        for g in &gates {
            assert!(
                seen.insert(g.a()) && seen.insert(g.b()),
                "stage gates must be qubit-disjoint"
            );
        }
        Self { gates }
    }

    pub fn gates(&self) -> &[CZGate] {
        &self.gates
    }

    /// The set of qubits interacting in this stage.
    pub fn qubits(&self) -> BTreeSet<QubitId> {
        self.gates
            .iter()
            .flat_map(|g| [g.a(), g.b()])
            .collect()
    }

    pub fn involves(&self, q: QubitId) -> bool {
        self.gates.iter().any(|g| g.touches(q))
    }

    /// The gate acting on `q` in this stage, if any.
    pub fn gate_of(&self, q: QubitId) -> Option<&CZGate> {
        self.gates.iter().find(|g| g.touches(q))
    }
}

#[derive(Debug, Error)]
pub enum StageError {
    #[error("cannot order an empty stage list")]
    EmptyInput,
}

/// Greedy coloring of the gate conflict graph.
///
/// Vertices are gates; two gates conflict when they share a qubit. Vertices
/// are processed in descending degree order (ties by ascending position in
/// the block) and each takes the smallest color not used by an already
/// colored neighbor. Color classes come back as stages in ascending color
/// order, gates inside a stage in block order.
pub fn partition_block(block: &CZBlock) -> Vec<Stage> {
    let gates = block.gates();
    let m = gates.len();
    if m == 0 {
        return Vec::new();
    }

    let mut adjacent = vec![Vec::new(); m];
    for i in 0..m {
        for j in (i + 1)..m {
            if gates[i].shares_qubit(&gates[j]) {
                adjacent[i].push(j);
                adjacent[j].push(i);
            }
        }
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(adjacent[i].len()), i));

    let mut color = vec![usize::MAX; m];
    let mut num_colors = 0;
    for &v in &order {
        let mut available = vec![true; m];
        for &u in &adjacent[v] {
            if color[u] != usize::MAX {
                available[color[u]] = false;
            }
        }
        let c = (0..m).find(|&c| available[c]).expect("m colors always suffice");
        color[v] = c;
        num_colors = num_colors.max(c + 1);
    }

    let mut stages = vec![Vec::new(); num_colors];
    for (i, &g) in gates.iter().enumerate() {
        stages[color[i]].push(g);
    }
    stages.into_iter().map(|gates| Stage { gates }).collect()
}

/// Difference metric between consecutive stages: leaving qubits count full,
/// entering qubits are discounted by `alpha` since moving *into* storage is
/// cheap on decoherence while moving out of it is not.
fn transition_cost(current: &BTreeSet<QubitId>, next: &BTreeSet<QubitId>, alpha: f64) -> f64 {
    let leaving = current.difference(next).count() as f64;
    let entering = next.difference(current).count() as f64;
    leaving + alpha * entering
}

/// Orders stages of one block to minimize zone interchange.
///
/// Starts from the stage with the fewest interacting qubits, then greedily
/// appends the unused stage with the smallest transition cost. All ties
/// break toward the lowest partition index, so the order is deterministic.
pub fn order_stages(stages: &[Stage], alpha: f64) -> Result<Vec<Stage>, StageError> {
    if stages.is_empty() {
        return Err(StageError::EmptyInput);
    }
    let qubit_sets: Vec<BTreeSet<QubitId>> = stages.iter().map(Stage::qubits).collect();

    let first = (0..stages.len())
        .min_by_key(|&i| (qubit_sets[i].len(), i))
        .expect("non-empty");

    let mut used = vec![false; stages.len()];
    used[first] = true;
    let mut order = vec![first];
    let mut current = first;

    while order.len() < stages.len() {
        let mut best: Option<(f64, usize)> = None;
        for i in 0..stages.len() {
            if used[i] {
                continue;
            }
            let cost = transition_cost(&qubit_sets[current], &qubit_sets[i], alpha);
            match best {
                Some((c, _)) if cost >= c => {}
                _ => best = Some((cost, i)),
            }
        }
        let (_, next) = best.expect("an unused stage remains");
        used[next] = true;
        order.push(next);
        current = next;
    }

    Ok(order.into_iter().map(|i| stages[i].clone()).collect())
}

/// Partitioned and ordered stages for every block of a circuit.
#[derive(Debug, Clone)]
pub struct StagePlan {
    blocks: Vec<Vec<Stage>>,
    alpha: f64,
}

impl StagePlan {
    /// Partitions and orders each block independently; blocks keep their
    /// input order. Blocks without gates contribute no stages.
    pub fn build(circuit: &Circuit, alpha: f64) -> Self {
        let blocks = circuit
            .blocks()
            .iter()
            .map(|b| {
                let stages = partition_block(b);
                if stages.is_empty() {
                    Vec::new()
                } else {
                    order_stages(&stages, alpha).expect("non-empty stage list")
                }
            })
            .collect();
        Self { blocks, alpha }
    }

    pub fn blocks(&self) -> &[Vec<Stage>] {
        &self.blocks
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn num_stages(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }
}
