//! Input circuits: ordered blocks of commuting CZ gates.
//!
//! A circuit here is the post-synthesis skeleton the compiler consumes: a
//! qubit count and an ordered list of CZ blocks. Gates inside a block commute
//! and may be reordered freely; blocks are dependent and execute in order.
//! Single-qubit layers are tracked only as an optional gate count.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a qubit within a circuit.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct QubitId(pub u32);

impl QubitId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

/// A CZ gate on two distinct qubits, stored with the smaller index first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CZGate {
    a: QubitId,
    b: QubitId,
}

impl CZGate {
    /// Normalizes the pair so `a < b`; rejects self-pairs.
    pub fn new(x: QubitId, y: QubitId) -> Result<Self, CircuitError> {
        if x == y {
            return Err(CircuitError::SelfPair { qubit: x });
        }
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        Ok(Self { a, b })
    }

    pub fn a(&self) -> QubitId {
        self.a
    }

    pub fn b(&self) -> QubitId {
        self.b
    }

    pub fn touches(&self, q: QubitId) -> bool {
        self.a == q || self.b == q
    }

    pub fn shares_qubit(&self, other: &CZGate) -> bool {
        self.touches(other.a) || self.touches(other.b)
    }

    /// The other endpoint of the gate, given one of its qubits.
    pub fn partner_of(&self, q: QubitId) -> Option<QubitId> {
        if q == self.a {
            Some(self.b)
        } else if q == self.b {
            Some(self.a)
        } else {
            None
        }
    }
}

impl fmt::Display for CZGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a.0, self.b.0)
    }
}

/// One block of commuting CZ gates. No normalized pair repeats within a block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CZBlock {
    gates: Vec<CZGate>,
}

impl CZBlock {
    pub fn gates(&self) -> &[CZGate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}

/// A validated circuit: every gate references a qubit below `num_qubits`,
/// and no block contains a duplicate gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    num_qubits: u32,
    blocks: Vec<CZBlock>,
    num_1q_gates: Option<u64>,
}

impl Circuit {
    /// Single validation path used by both the parser and the generators:
    /// either the whole circuit is valid or an error is returned.
    pub fn new(
        num_qubits: u32,
        blocks: Vec<Vec<CZGate>>,
        num_1q_gates: Option<u64>,
    ) -> Result<Self, CircuitError> {
        let mut validated = Vec::with_capacity(blocks.len());
        for (block_idx, gates) in blocks.into_iter().enumerate() {
            let mut seen = std::collections::BTreeSet::new();
            for gate in &gates {
                if gate.b().0 >= num_qubits {
                    return Err(CircuitError::QubitOutOfRange {
                        qubit: gate.b(),
                        num_qubits,
                    });
                }
                if !seen.insert(*gate) {
                    return Err(CircuitError::DuplicateGateInBlock {
                        block: block_idx,
                        gate: *gate,
                    });
                }
            }
            validated.push(CZBlock { gates });
        }
        Ok(Self {
            num_qubits,
            blocks: validated,
            num_1q_gates,
        })
    }

    pub fn num_qubits(&self) -> u32 {
        self.num_qubits
    }

    pub fn blocks(&self) -> &[CZBlock] {
        &self.blocks
    }

    pub fn num_1q_gates(&self) -> Option<u64> {
        self.num_1q_gates
    }

    /// Total CZ gate count across all blocks.
    pub fn gate_count(&self) -> u64 {
        self.blocks.iter().map(|b| b.len() as u64).sum()
    }
}

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("malformed circuit document: {0}")]
    MalformedInput(String),
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: QubitId, num_qubits: u32 },
    #[error("gate pairs qubit {qubit} with itself")]
    SelfPair { qubit: QubitId },
    #[error("duplicate gate {gate} in block {block}")]
    DuplicateGateInBlock { block: usize, gate: CZGate },
}

/// Wire format. Gate pairs may arrive unnormalized; they are stored as `a < b`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitDoc {
    num_qubits: u32,
    blocks: Vec<Vec<[u32; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    num_1q_gates: Option<u64>,
}

/// Parses a circuit JSON document, normalizing gates and validating the whole
/// structure. Returns either a fully valid [`Circuit`] or an error.
pub fn parse_circuit(text: &str) -> Result<Circuit, CircuitError> {
    let doc: CircuitDoc =
        serde_json::from_str(text).map_err(|e| CircuitError::MalformedInput(e.to_string()))?;
    let mut blocks = Vec::with_capacity(doc.blocks.len());
    for raw_block in doc.blocks {
        let mut gates = Vec::with_capacity(raw_block.len());
        for [x, y] in raw_block {
            gates.push(CZGate::new(QubitId(x), QubitId(y))?);
        }
        blocks.push(gates);
    }
    Circuit::new(doc.num_qubits, blocks, doc.num_1q_gates)
}

/// Serializes a circuit to the wire format; `parse_circuit` inverts this.
pub fn serialize_circuit(c: &Circuit) -> String {
    let doc = CircuitDoc {
        num_qubits: c.num_qubits,
        blocks: c
            .blocks
            .iter()
            .map(|b| b.gates.iter().map(|g| [g.a().0, g.b().0]).collect())
            .collect(),
        num_1q_gates: c.num_1q_gates,
    };
    serde_json::to_string(&doc).expect("circuit serialization cannot fail")
}
