//! Zoned-architecture geometry and physical parameters.
//!
//! The machine model is two site grids: a computation zone where CZ gates
//! execute under a global Rydberg pulse, and a storage zone below it where
//! parked qubits see neither excitation nor appreciable decoherence. Sites
//! sit on a 15 um pitch; the zones are separated by a 30 um gap. Durations
//! are stored in seconds, distances in micrometers.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::Circuit;
use crate::placement::Placement;

/// Physical operation fidelities and timings.
///
/// Defaults are the current experimental values: 99.99% / 1 us single-qubit
/// gates, 99.5% / 270 ns CZ, 99.75% excitation survival for bystanders,
/// 99.9% / 15 us trap transfer, movement acceleration capped at 2750 m/s^2,
/// and a 1.5 s coherence time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardwareParams {
    /// Single-qubit gate fidelity.
    pub f1: f64,
    /// CZ gate fidelity.
    pub f2: f64,
    /// Survival fidelity of a non-interacting qubit left in the computation
    /// zone during one excitation.
    pub f_exc: f64,
    /// SLM <-> AOD transfer fidelity.
    pub f_trans: f64,
    /// Single-qubit gate duration, seconds.
    pub t_1q: f64,
    /// Rydberg excitation (and CZ) duration, seconds.
    pub t_rydberg: f64,
    /// Trap transfer duration, seconds.
    pub t_trans: f64,
    /// Maximum movement acceleration, m/s^2.
    pub accel: f64,
    /// Coherence time T2, seconds.
    pub t2: f64,
    /// Grid pitch between adjacent sites, micrometers.
    pub site_pitch: f64,
    /// Vertical gap between the computation and storage zones, micrometers.
    pub zone_gap: f64,
}

impl Default for HardwareParams {
    fn default() -> Self {
        Self {
            f1: 0.9999,
            f2: 0.995,
            f_exc: 0.9975,
            f_trans: 0.999,
            t_1q: 1e-6,
            t_rydberg: 270e-9,
            t_trans: 15e-6,
            accel: 2750.0,
            t2: 1.5,
            site_pitch: 15.0,
            zone_gap: 30.0,
        }
    }
}

/// Which zone a site belongs to.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Zone {
    Compute,
    Storage,
}

/// Compilation mode: whether the storage zone is used at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    WithStorage,
    NonStorage,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::WithStorage => write!(f, "with-storage"),
            Mode::NonStorage => write!(f, "non-storage"),
        }
    }
}

/// Grid dimensions of the two zones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZoneLayout {
    pub compute_cols: u32,
    pub compute_rows: u32,
    pub storage_cols: u32,
    pub storage_rows: u32,
}

impl ZoneLayout {
    pub fn compute_capacity(&self) -> u64 {
        self.compute_cols as u64 * self.compute_rows as u64
    }

    pub fn storage_capacity(&self) -> u64 {
        self.storage_cols as u64 * self.storage_rows as u64
    }

    pub fn contains(&self, s: Site) -> bool {
        match s.zone {
            Zone::Compute => s.col < self.compute_cols && s.row < self.compute_rows,
            Zone::Storage => s.col < self.storage_cols && s.row < self.storage_rows,
        }
    }

    /// All compute sites in row-major order (row 0 first).
    pub fn compute_sites(&self) -> impl Iterator<Item = Site> + '_ {
        let cols = self.compute_cols;
        (0..self.compute_rows)
            .flat_map(move |row| (0..cols).map(move |col| Site::new(Zone::Compute, col, row)))
    }

    /// All storage sites in row-major order (row 0 closest to the gap).
    pub fn storage_sites(&self) -> impl Iterator<Item = Site> + '_ {
        let cols = self.storage_cols;
        (0..self.storage_rows)
            .flat_map(move |row| (0..cols).map(move |col| Site::new(Zone::Storage, col, row)))
    }
}

/// One trap site: a zone plus grid indices within that zone.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(into = "(Zone, u32, u32)", from = "(Zone, u32, u32)")]
pub struct Site {
    pub zone: Zone,
    pub col: u32,
    pub row: u32,
}

impl Site {
    pub fn new(zone: Zone, col: u32, row: u32) -> Self {
        Self { zone, col, row }
    }
}

impl From<Site> for (Zone, u32, u32) {
    fn from(s: Site) -> Self {
        (s.zone, s.col, s.row)
    }
}

impl From<(Zone, u32, u32)> for Site {
    fn from((zone, col, row): (Zone, u32, u32)) -> Self {
        Site { zone, col, row }
    }
}

impl std::fmt::Display for Site {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let z = match self.zone {
            Zone::Compute => "C",
            Zone::Storage => "S",
        };
        write!(f, "{}({},{})", z, self.col, self.row)
    }
}

/// Physical coordinates in micrometers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Error)]
pub enum HardwareError {
    #[error("site {site} out of bounds for the configured layout")]
    SiteOutOfBounds { site: Site },
    #[error("{zone:?} zone holds {capacity} sites, cannot place {required} qubits")]
    InsufficientCapacity {
        zone: Zone,
        capacity: u64,
        required: u64,
    },
}

/// Default geometry for an n-qubit run: a ceil(sqrt(n)) square compute grid
/// and a storage grid of the same width and twice the height.
pub fn default_geometry(num_qubits: u32) -> ZoneLayout {
    let side = (num_qubits as f64).sqrt().ceil() as u32;
    let side = side.max(1);
    ZoneLayout {
        compute_cols: side,
        compute_rows: side,
        storage_cols: side,
        storage_rows: 2 * side,
    }
}

/// Maps a site to physical coordinates. Compute row 0 sits at y = 0 and rows
/// grow upward; storage hangs below the gap, rows growing downward, so
/// storage row 0 is the closest row to the computation zone.
pub fn physical_position(
    s: Site,
    layout: &ZoneLayout,
    params: &HardwareParams,
) -> Result<Position, HardwareError> {
    if !layout.contains(s) {
        return Err(HardwareError::SiteOutOfBounds { site: s });
    }
    let x = params.site_pitch * s.col as f64;
    let y = match s.zone {
        Zone::Compute => params.site_pitch * s.row as f64,
        Zone::Storage => -params.zone_gap - params.site_pitch * s.row as f64,
    };
    Ok(Position { x, y })
}

/// Travel time for a move of the given length, in seconds.
///
/// The acceleration bound and the two published (distance, time) anchor
/// points -- 100 us at 27.5 um and 200 us at 110 um -- are both reproduced
/// exactly by sqrt(d / a), so that power law is used as the duration model.
pub fn move_duration(distance_um: f64, params: &HardwareParams) -> f64 {
    debug_assert!(distance_um >= 0.0);
    (distance_um * 1e-6 / params.accel).sqrt()
}

/// Euclidean distance between two sites, micrometers.
pub fn euclidean_distance(
    a: Site,
    b: Site,
    layout: &ZoneLayout,
    params: &HardwareParams,
) -> Result<f64, HardwareError> {
    let pa = physical_position(a, layout, params)?;
    let pb = physical_position(b, layout, params)?;
    Ok(((pa.x - pb.x).powi(2) + (pa.y - pb.y).powi(2)).sqrt())
}

/// Hardware configuration file: every field optional, defaults to the stock
/// parameters and the square-rule geometry for the circuit's qubit count.
/// Time fields use the unit in their name; `compute`/`storage` are
/// `[cols, rows]`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardwareConfig {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub f1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub f2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub f_exc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub f_trans: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t_1q_us: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t_rydberg_ns: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t_trans_us: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub accel_m_s2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t2_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub site_pitch_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub zone_gap_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub compute: Option<[u32; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub storage: Option<[u32; 2]>,
}

impl HardwareConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("malformed hardware config: {e}"))
    }

    /// Fills in defaults and converts to internal units.
    pub fn resolve(&self, num_qubits: u32) -> (HardwareParams, ZoneLayout) {
        let d = HardwareParams::default();
        let params = HardwareParams {
            f1: self.f1.unwrap_or(d.f1),
            f2: self.f2.unwrap_or(d.f2),
            f_exc: self.f_exc.unwrap_or(d.f_exc),
            f_trans: self.f_trans.unwrap_or(d.f_trans),
            t_1q: self.t_1q_us.map_or(d.t_1q, |v| v / 1e6),
            t_rydberg: self.t_rydberg_ns.map_or(d.t_rydberg, |v| v / 1e9),
            t_trans: self.t_trans_us.map_or(d.t_trans, |v| v / 1e6),
            accel: self.accel_m_s2.unwrap_or(d.accel),
            t2: self.t2_s.unwrap_or(d.t2),
            site_pitch: self.site_pitch_um.unwrap_or(d.site_pitch),
            zone_gap: self.zone_gap_um.unwrap_or(d.zone_gap),
        };
        let default = default_geometry(num_qubits);
        let (compute_cols, compute_rows) = self
            .compute
            .map_or((default.compute_cols, default.compute_rows), |[c, r]| (c, r));
        let (storage_cols, storage_rows) = self
            .storage
            .map_or((default.storage_cols, default.storage_rows), |[c, r]| (c, r));
        (
            params,
            ZoneLayout {
                compute_cols,
                compute_rows,
                storage_cols,
                storage_rows,
            },
        )
    }

    /// Fully explicit config mirroring resolved parameters, for embedding in
    /// schedule files.
    pub fn from_resolved(params: &HardwareParams, layout: &ZoneLayout) -> Self {
        Self {
            f1: Some(params.f1),
            f2: Some(params.f2),
            f_exc: Some(params.f_exc),
            f_trans: Some(params.f_trans),
            t_1q_us: Some(params.t_1q * 1e6),
            t_rydberg_ns: Some(params.t_rydberg * 1e9),
            t_trans_us: Some(params.t_trans * 1e6),
            accel_m_s2: Some(params.accel),
            t2_s: Some(params.t2),
            site_pitch_um: Some(params.site_pitch),
            zone_gap_um: Some(params.zone_gap),
            compute: Some([layout.compute_cols, layout.compute_rows]),
            storage: Some([layout.storage_cols, layout.storage_rows]),
        }
    }
}

/// Row-major initial placement: qubit i goes to site (i mod cols, i div cols)
/// of the storage zone (`WithStorage`) or the computation zone (`NonStorage`).
pub fn initial_layout(
    c: &Circuit,
    layout: &ZoneLayout,
    mode: Mode,
) -> Result<Placement, HardwareError> {
    let n = c.num_qubits() as u64;
    let (zone, cols, capacity) = match mode {
        Mode::WithStorage => (Zone::Storage, layout.storage_cols, layout.storage_capacity()),
        Mode::NonStorage => (Zone::Compute, layout.compute_cols, layout.compute_capacity()),
    };
    if n > capacity {
        return Err(HardwareError::InsufficientCapacity {
            zone,
            capacity,
            required: n,
        });
    }
    let sites = (0..c.num_qubits())
        .map(|i| Site::new(zone, i % cols, i / cols))
        .collect();
    Ok(Placement::from_sites(sites))
}
