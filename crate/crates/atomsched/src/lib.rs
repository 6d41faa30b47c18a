//! Compiler for zoned neutral-atom quantum hardware.
//!
//! Takes a circuit expressed as commuting CZ-gate blocks and produces a
//! timed movement/excitation schedule for a machine with a computation zone
//! and a storage zone, then scores it under a multiplicative fidelity model.
//!
//! The pipeline, stage by stage:
//!
//! 1. [`stage`] -- partition each block into parallel stages (greedy
//!    conflict-graph coloring) and order them to minimize zone interchange.
//! 2. [`router`] -- plan per-qubit movements that carry the current layout
//!    directly into the next stage's layout, then group them into
//!    constraint-respecting collective moves.
//! 3. [`schedule`] -- order collective moves to maximize storage dwell time,
//!    spread them over multiple AODs, and assemble the timed schedule.
//! 4. [`fidelity`] -- evaluate the error model and execution time.
//!
//! [`bench`] generates the standard benchmark families, and [`cli`] exposes
//! the whole pipeline as `generate` / `compile` / `verify` / `report`
//! commands. See the crate examples for end-to-end usage.

pub mod bench;
pub mod circuit;
pub mod cli;
pub mod fidelity;
pub mod hardware;
pub mod placement;
pub mod rng;
pub mod router;
pub mod schedule;
pub mod stage;

pub use bench::{generate, BenchFamily, BenchSpec};
pub use circuit::{parse_circuit, serialize_circuit, CZBlock, CZGate, Circuit, QubitId};
pub use fidelity::{compute_idle_times, evaluate, execution_time, FidelityReport};
pub use hardware::{
    default_geometry, euclidean_distance, initial_layout, move_duration, physical_position,
    HardwareConfig, HardwareParams, Mode, Position, Site, Zone, ZoneLayout,
};
pub use placement::Placement;
pub use router::{
    apply_collmove, conflicts, group_moves, plan_stage_moves, validate_layout, CollMove,
    LayoutViolation, Move1Q, MoveKind,
};
pub use schedule::{
    build_schedule, order_collmoves, schedule_aods, Counters, ParallelChunk, Schedule,
    StageSchedule,
};
pub use stage::{order_stages, partition_block, Stage, StagePlan};
