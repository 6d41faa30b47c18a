//! Continuous routing: direct transitions between stage layouts.
//!
//! Given the current placement and the next stage, the router decides one
//! movement per affected qubit so that every gate pair of the stage ends up
//! co-located on a computation site, non-interacting qubits get out of the
//! way (into storage when the mode allows it), and no site ever collects
//! qubits that are not an interacting pair. The decided movements are then
//! packed into collective moves (Coll-Moves) that a single AOD sweep can
//! execute: within one Coll-Move no two movements may swap or merge their
//! row/column order.
//!
//! The movement decision follows three steps:
//!
//! 1. Non-interacting qubits leave the computation zone (with storage:
//!    straight down their column to the nearest free storage site; without
//!    storage: co-located leftovers of the previous stage are parked on the
//!    nearest free computation site).
//! 2. Interacting qubits are labeled static / mobile / undecided per gate,
//!    based on which zone each endpoint currently occupies and whether its
//!    site already hosts a static qubit.
//! 3. Each undecided qubit is assigned the nearest free computation site;
//!    its partner follows it there.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::QubitId;
use crate::hardware::{
    euclidean_distance, move_duration, physical_position, HardwareParams, Mode, Position, Site,
    ZoneLayout, Zone,
};
use crate::placement::Placement;
use crate::stage::Stage;

/// Role of a qubit in one stage transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Static,
    Mobile,
    Undecided,
}

/// Direction class of a single-qubit movement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    ToStorage,
    FromStorage,
    IntraCompute,
    IntraStorage,
}

/// One qubit's site-to-site movement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Move1Q {
    pub qubit: QubitId,
    pub from: Site,
    pub to: Site,
    /// Euclidean length of the move, micrometers.
    pub distance: f64,
    pub kind: MoveKind,
}

impl Move1Q {
    pub fn new(
        qubit: QubitId,
        from: Site,
        to: Site,
        layout: &ZoneLayout,
        params: &HardwareParams,
    ) -> Self {
        debug_assert_ne!(from, to, "a move must change sites");
        let distance = euclidean_distance(from, to, layout, params)
            .expect("move endpoints lie within the layout");
        let kind = match (from.zone, to.zone) {
            (Zone::Compute, Zone::Storage) => MoveKind::ToStorage,
            (Zone::Storage, Zone::Compute) => MoveKind::FromStorage,
            (Zone::Compute, Zone::Compute) => MoveKind::IntraCompute,
            (Zone::Storage, Zone::Storage) => MoveKind::IntraStorage,
        };
        Self {
            qubit,
            from,
            to,
            distance,
            kind,
        }
    }
}

/// A set of pairwise non-conflicting movements executed in one AOD sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct CollMove {
    pub moves: Vec<Move1Q>,
    /// Longest member distance, micrometers; sets the sweep time.
    pub max_distance: f64,
    /// Sweep movement time, seconds (transfer time excluded).
    pub duration: f64,
    /// Number of member moves entering storage.
    pub n_in: u32,
    /// Number of member moves leaving storage.
    pub n_out: u32,
}

impl CollMove {
    pub fn from_moves(moves: Vec<Move1Q>, params: &HardwareParams) -> Self {
        let max_distance = moves.iter().map(|m| m.distance).fold(0.0, f64::max);
        let duration = move_duration(max_distance, params);
        let n_in = moves.iter().filter(|m| m.kind == MoveKind::ToStorage).count() as u32;
        let n_out = moves.iter().filter(|m| m.kind == MoveKind::FromStorage).count() as u32;
        Self {
            moves,
            max_distance,
            duration,
            n_in,
            n_out,
        }
    }

    /// Sort key for the intra-stage schedule.
    pub fn dwell_key(&self) -> i64 {
        self.n_in as i64 - self.n_out as i64
    }
}

#[derive(Debug, Error)]
pub enum RouteError {
    #[error("no empty storage site available for {qubit}")]
    InsufficientStorage { qubit: QubitId },
    #[error("no empty computation site available for {qubit}")]
    InsufficientCompute { qubit: QubitId },
    #[error("{qubit} is not covered by the placement")]
    UnplacedQubit { qubit: QubitId },
    #[error("{qubit} expected at {expected} but found at {found}")]
    StaleMove {
        qubit: QubitId,
        expected: Site,
        found: Site,
    },
    #[error("{qubit} moves more than once in a single collective move")]
    DuplicateMover { qubit: QubitId },
    #[error("site {site} would hold {count} qubits")]
    OccupancyViolation { site: Site, count: usize },
}

/// True when the two movements cannot ride the same AOD sweep: their x- or
/// y-order (ties included) differs between start and end. Rows or columns
/// that start together must land together, and must never cross.
pub fn conflicts(
    m1: &Move1Q,
    m2: &Move1Q,
    layout: &ZoneLayout,
    params: &HardwareParams,
) -> bool {
    let pos = |s: Site| -> Position {
        physical_position(s, layout, params).expect("move endpoints lie within the layout")
    };
    let (s1, e1) = (pos(m1.from), pos(m1.to));
    let (s2, e2) = (pos(m2.from), pos(m2.to));
    let sign = |v: f64| v.partial_cmp(&0.0).expect("coordinates are finite");
    sign(s1.x - s2.x) != sign(e1.x - e2.x) || sign(s1.y - s2.y) != sign(e1.y - e2.y)
}

/// Distance-aware first-fit grouping of movements into Coll-Moves.
///
/// Movements are taken in ascending distance order (ties by qubit id); each
/// joins the first group it conflicts with no member of, or opens a new
/// group. Grouping by similar distance keeps each group's sweep time close
/// to its members' own travel times.
pub fn group_moves(
    moves: &[Move1Q],
    layout: &ZoneLayout,
    params: &HardwareParams,
) -> Vec<CollMove> {
    let mut sorted = moves.to_vec();
    sorted.sort_by(|a, b| {
        a.distance
            .total_cmp(&b.distance)
            .then(a.qubit.cmp(&b.qubit))
    });

    let mut groups: Vec<Vec<Move1Q>> = Vec::new();
    'next_move: for m in sorted {
        for g in &mut groups {
            if g.iter().all(|x| !conflicts(x, &m, layout, params)) {
                g.push(m);
                continue 'next_move;
            }
        }
        groups.push(vec![m]);
    }
    groups
        .into_iter()
        .map(|g| CollMove::from_moves(g, params))
        .collect()
}

/// Applies one Coll-Move to a placement: all member qubits relocate together.
/// Fails if a mover is not where the move says, a qubit moves twice, or a
/// destination ends up over capacity.
pub fn apply_collmove(p: &Placement, cm: &CollMove) -> Result<Placement, RouteError> {
    let mut seen = BTreeSet::new();
    for m in &cm.moves {
        if m.qubit.index() >= p.num_qubits() as usize {
            return Err(RouteError::UnplacedQubit { qubit: m.qubit });
        }
        if !seen.insert(m.qubit) {
            return Err(RouteError::DuplicateMover { qubit: m.qubit });
        }
        let found = p.site_of(m.qubit);
        if found != m.from {
            return Err(RouteError::StaleMove {
                qubit: m.qubit,
                expected: m.from,
                found,
            });
        }
    }

    let mut next = p.clone();
    for m in &cm.moves {
        next.relocate(m.qubit, m.to);
    }
    for m in &cm.moves {
        let cap = match m.to.zone {
            Zone::Compute => 2,
            Zone::Storage => 1,
        };
        let count = next.occupancy(m.to);
        if count > cap {
            return Err(RouteError::OccupancyViolation { site: m.to, count });
        }
    }
    Ok(next)
}

/// A breach of the stage-layout rules. `validate_layout` reports these
/// instead of failing, so a verifier can list every problem at once.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LayoutViolation {
    #[error("gate {gate} endpoints sit at {a_site} and {b_site}")]
    GateNotColocated {
        gate: crate::circuit::CZGate,
        a_site: Site,
        b_site: Site,
    },
    #[error("gate {gate} pair sits at {site}, outside the computation zone")]
    GateOutsideCompute {
        gate: crate::circuit::CZGate,
        site: Site,
    },
    #[error("site {site} holds {count} qubits")]
    SiteOverfull { site: Site, count: usize },
    #[error("qubits {q1} and {q2} share {site} but are not a stage pair")]
    NonPartnersColocated { site: Site, q1: QubitId, q2: QubitId },
    #[error("storage site {site} holds {count} qubits")]
    StorageSiteShared { site: Site, count: usize },
}

/// Checks the post-routing layout against a stage: every gate pair shares
/// one computation site, no compute site holds more than two qubits, every
/// co-located pair is a stage gate, and storage sites hold at most one.
pub fn validate_layout(p: &Placement, stage: &Stage) -> Vec<LayoutViolation> {
    let mut violations = Vec::new();

    for gate in stage.gates() {
        let a_site = p.site_of(gate.a());
        let b_site = p.site_of(gate.b());
        if a_site != b_site {
            violations.push(LayoutViolation::GateNotColocated {
                gate: *gate,
                a_site,
                b_site,
            });
        } else if a_site.zone != Zone::Compute {
            violations.push(LayoutViolation::GateOutsideCompute {
                gate: *gate,
                site: a_site,
            });
        }
    }

    for (site, occupants) in p.occupied_sites() {
        match site.zone {
            Zone::Compute => {
                if occupants.len() > 2 {
                    violations.push(LayoutViolation::SiteOverfull {
                        site,
                        count: occupants.len(),
                    });
                } else if occupants.len() == 2 {
                    let (q1, q2) = (occupants[0], occupants[1]);
                    let is_pair = stage
                        .gate_of(q1)
                        .is_some_and(|g| g.touches(q2));
                    if !is_pair {
                        violations.push(LayoutViolation::NonPartnersColocated { site, q1, q2 });
                    }
                }
            }
            Zone::Storage => {
                if occupants.len() > 1 {
                    violations.push(LayoutViolation::StorageSiteShared {
                        site,
                        count: occupants.len(),
                    });
                }
            }
        }
    }

    violations
}

/// Plans the movements that carry `current` into a layout satisfying
/// `stage`, returning the moves and the projected placement.
pub fn plan_stage_moves(
    current: &Placement,
    stage: &Stage,
    mode: Mode,
    layout: &ZoneLayout,
    params: &HardwareParams,
) -> Result<(Vec<Move1Q>, Placement), RouteError> {
    for q in stage.qubits() {
        if q.index() >= current.num_qubits() as usize {
            return Err(RouteError::UnplacedQubit { qubit: q });
        }
    }
    let mut planner = Planner {
        current,
        stage,
        layout,
        params,
        departing: BTreeSet::new(),
        reserved: BTreeSet::new(),
        statics: BTreeMap::new(),
        labels: BTreeMap::new(),
        moves: Vec::new(),
    };
    match mode {
        Mode::WithStorage => planner.evacuate_bystanders()?,
        Mode::NonStorage => planner.separate_stale_pairs()?,
    }
    let pending = planner.assign_labels();
    planner.resolve_undecided(pending)?;

    let mut next = current.clone();
    for m in &planner.moves {
        next.relocate(m.qubit, m.to);
    }
    debug_assert!(
        validate_layout(&next, stage).is_empty(),
        "projected layout violates stage rules: {:?}",
        validate_layout(&next, stage)
    );
    if cfg!(debug_assertions) {
        // Labels and moves must agree: static qubits stay, everyone else
        // labeled has exactly one move.
        for (&q, &label) in &planner.labels {
            let n_moves = planner.moves.iter().filter(|m| m.qubit == q).count();
            match label {
                Label::Static => debug_assert_eq!(n_moves, 0, "static {q} must not move"),
                Label::Mobile | Label::Undecided => {
                    debug_assert_eq!(n_moves, 1, "{q} must move exactly once")
                }
            }
        }
    }
    Ok((planner.moves, next))
}

struct Planner<'a> {
    current: &'a Placement,
    stage: &'a Stage,
    layout: &'a ZoneLayout,
    params: &'a HardwareParams,
    /// Qubits already decided to leave their current site this stage.
    departing: BTreeSet<QubitId>,
    /// Destination sites already promised to someone.
    reserved: BTreeSet<Site>,
    /// Static qubits by site.
    statics: BTreeMap<Site, Vec<QubitId>>,
    /// Role assigned to each touched qubit.
    labels: BTreeMap<QubitId, Label>,
    moves: Vec<Move1Q>,
}

/// Pending gate whose interaction site is chosen in step 3.
struct PendingSite {
    undecided: QubitId,
    follower: QubitId,
}

impl<'a> Planner<'a> {
    fn position_of(&self, q: QubitId) -> Position {
        physical_position(self.current.site_of(q), self.layout, self.params)
            .expect("placement sites lie within the layout")
    }

    fn push_move(&mut self, q: QubitId, to: Site) {
        let from = self.current.site_of(q);
        self.moves
            .push(Move1Q::new(q, from, to, self.layout, self.params));
    }

    fn has_static(&self, site: Site) -> bool {
        self.statics.get(&site).is_some_and(|v| !v.is_empty())
    }

    /// Step 1 (with storage): every non-interacting qubit in the computation
    /// zone moves straight down its column to the nearest free storage site;
    /// if the column is full, to the globally nearest free storage site.
    /// Qubits farther from storage pick first.
    fn evacuate_bystanders(&mut self) -> Result<(), RouteError> {
        let mut bystanders: Vec<QubitId> = (0..self.current.num_qubits())
            .map(QubitId)
            .filter(|&q| {
                !self.stage.involves(q) && self.current.site_of(q).zone == Zone::Compute
            })
            .collect();
        bystanders.sort_by_key(|&q| (std::cmp::Reverse(self.current.site_of(q).row), q));

        for q in bystanders {
            let from = self.current.site_of(q);
            let target = self
                .storage_below(from.col)
                .or_else(|| self.nearest_free_storage(self.position_of(q)))
                .ok_or(RouteError::InsufficientStorage { qubit: q })?;
            self.reserved.insert(target);
            self.departing.insert(q);
            self.labels.insert(q, Label::Mobile);
            self.push_move(q, target);
        }
        Ok(())
    }

    fn storage_below(&self, col: u32) -> Option<Site> {
        if col >= self.layout.storage_cols {
            return None;
        }
        (0..self.layout.storage_rows)
            .map(|row| Site::new(Zone::Storage, col, row))
            .find(|&s| self.current.is_unoccupied(s) && !self.reserved.contains(&s))
    }

    fn nearest_free_storage(&self, origin: Position) -> Option<Site> {
        self.layout
            .storage_sites()
            .filter(|&s| self.current.is_unoccupied(s) && !self.reserved.contains(&s))
            .min_by(|&a, &b| self.site_rank(origin, a).total_cmp(&self.site_rank(origin, b))
                .then(a.row.cmp(&b.row))
                .then(a.col.cmp(&b.col)))
    }

    fn site_rank(&self, origin: Position, s: Site) -> f64 {
        let p = physical_position(s, self.layout, self.params)
            .expect("layout sites are in bounds");
        ((p.x - origin.x).powi(2) + (p.y - origin.y).powi(2)).sqrt()
    }

    /// Step 1 without storage: a non-interacting qubit still sharing a site
    /// (the previous stage's pair partner, typically) is parked on the
    /// nearest free computation site so it cannot shadow the next stage.
    fn separate_stale_pairs(&mut self) -> Result<(), RouteError> {
        let bystanders: Vec<QubitId> = (0..self.current.num_qubits())
            .map(QubitId)
            .filter(|&q| {
                !self.stage.involves(q) && self.current.site_of(q).zone == Zone::Compute
            })
            .collect();

        for q in bystanders {
            let site = self.current.site_of(q);
            let shares = self
                .current
                .occupants_of(site)
                .iter()
                .any(|&other| other != q && !self.departing.contains(&other));
            if !shares {
                continue;
            }
            let target = self
                .nearest_free_compute(self.position_of(q))
                .ok_or(RouteError::InsufficientCompute { qubit: q })?;
            self.reserved.insert(target);
            self.departing.insert(q);
            self.labels.insert(q, Label::Mobile);
            self.push_move(q, target);
        }
        Ok(())
    }

    /// A computation site is free when no static qubit sits there, nobody
    /// staying behind occupies it, and no earlier decision reserved it.
    fn nearest_free_compute(&self, origin: Position) -> Option<Site> {
        self.layout
            .compute_sites()
            .filter(|&s| {
                !self.reserved.contains(&s)
                    && !self.has_static(s)
                    && self
                        .current
                        .occupants_of(s)
                        .iter()
                        .all(|q| self.departing.contains(q))
            })
            .min_by(|&a, &b| self.site_rank(origin, a).total_cmp(&self.site_rank(origin, b))
                .then(a.row.cmp(&b.row))
                .then(a.col.cmp(&b.col)))
    }

    /// Step 2: one pass over the stage's gates in ascending (min, max) qubit
    /// order, assigning static/mobile/undecided labels and resolving every
    /// move whose destination is already known.
    fn assign_labels(&mut self) -> Vec<PendingSite> {
        let mut gates = self.stage.gates().to_vec();
        gates.sort();

        let mut pending = Vec::new();
        for gate in gates {
            let (a, b) = (gate.a(), gate.b());
            let site_a = self.current.site_of(a);
            let site_b = self.current.site_of(b);
            match (site_a.zone, site_b.zone) {
                // Both in storage: the site is picked in step 3; the lower
                // id is the undecided one, its partner follows.
                (Zone::Storage, Zone::Storage) => {
                    self.departing.insert(a);
                    self.departing.insert(b);
                    self.labels.insert(a, Label::Undecided);
                    self.labels.insert(b, Label::Mobile);
                    pending.push(PendingSite {
                        undecided: a,
                        follower: b,
                    });
                }
                (Zone::Storage, Zone::Compute) => {
                    if let Some(p) = self.join_compute_partner(a, b) {
                        pending.push(p);
                    }
                }
                (Zone::Compute, Zone::Storage) => {
                    if let Some(p) = self.join_compute_partner(b, a) {
                        pending.push(p);
                    }
                }
                (Zone::Compute, Zone::Compute) => {
                    if site_a == site_b {
                        // Already co-located from a previous stage: both stay.
                        let entry = self.statics.entry(site_a).or_default();
                        entry.push(a);
                        entry.push(b);
                        self.labels.insert(a, Label::Static);
                        self.labels.insert(b, Label::Static);
                        continue;
                    }
                    // Keep the endpoint that can actually be static; when
                    // both (or neither) can, the lower id moves.
                    let can_a = !self.has_static(site_a);
                    let can_b = !self.has_static(site_b);
                    let (mobile, keeper) = match (can_a, can_b) {
                        (true, false) => (b, a),
                        _ => (a, b),
                    };
                    self.departing.insert(mobile);
                    self.labels.insert(mobile, Label::Mobile);
                    if let Some(p) = self.settle(mobile, keeper) {
                        pending.push(p);
                    }
                }
            }
        }
        pending
    }

    /// Cases (2)/(3): the storage-side qubit always moves; the compute-side
    /// partner stays if its site has no static qubit yet.
    fn join_compute_partner(&mut self, storage_q: QubitId, compute_q: QubitId) -> Option<PendingSite> {
        self.departing.insert(storage_q);
        self.labels.insert(storage_q, Label::Mobile);
        self.settle(storage_q, compute_q)
    }

    /// Marks `keeper` static and resolves `mobile`'s move onto it, or defers
    /// both to step 3 when the keeper's site already hosts a static qubit.
    fn settle(&mut self, mobile: QubitId, keeper: QubitId) -> Option<PendingSite> {
        let keeper_site = self.current.site_of(keeper);
        if !self.has_static(keeper_site) {
            self.statics.entry(keeper_site).or_default().push(keeper);
            self.labels.insert(keeper, Label::Static);
            self.push_move(mobile, keeper_site);
            None
        } else {
            self.departing.insert(keeper);
            self.labels.insert(keeper, Label::Undecided);
            Some(PendingSite {
                undecided: keeper,
                follower: mobile,
            })
        }
    }

    /// Step 3: runs only after step 2 has completed, so the full departing
    /// set is known. Each undecided qubit takes the nearest free computation
    /// site (ties by ascending row, then column), the site is reserved, and
    /// the partner's move resolves to the same site.
    fn resolve_undecided(&mut self, pending: Vec<PendingSite>) -> Result<(), RouteError> {
        for p in pending {
            let target = self
                .nearest_free_compute(self.position_of(p.undecided))
                .ok_or(RouteError::InsufficientCompute { qubit: p.undecided })?;
            self.reserved.insert(target);
            self.push_move(p.undecided, target);
            self.push_move(p.follower, target);
        }
        Ok(())
    }
}
