//! Base-station cells, the health-center registry and the wearable
//! telemetry store.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{GridDims, SimConfig};
use crate::epidemic::TelemetryRecord;
use crate::error::InfraError;
use crate::sensing::CameraZone;
use crate::types::{tile, AgentId, CellId, Minute, Position, Rect};
use crate::world::WorldState;

/// Coverage area of one base station.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellRegion {
    pub cell_id: CellId,
    pub rect: Rect,
}

/// Rectangular partition of the simulated area into base-station cells.
#[derive(Debug, Clone, PartialEq)]
pub struct CellMap {
    area: Rect,
    cells: Vec<CellRegion>,
}

impl CellMap {
    pub fn grid(area: Rect, dims: GridDims) -> Self {
        let cells = tile(&area, dims.rows, dims.cols)
            .into_iter()
            .enumerate()
            .map(|(i, rect)| CellRegion {
                cell_id: CellId(i as u32),
                rect,
            })
            .collect();
        CellMap { area, cells }
    }

    pub fn from_config(config: &SimConfig) -> Self {
        Self::grid(config.area(), config.cell_grid)
    }

    pub fn cells(&self) -> &[CellRegion] {
        &self.cells
    }

    pub fn area(&self) -> Rect {
        self.area
    }

    pub fn get(&self, id: CellId) -> Option<&CellRegion> {
        self.cells.get(id.0 as usize).filter(|c| c.cell_id == id)
    }

    pub fn contains(&self, id: CellId, p: Position) -> bool {
        self.get(id).is_some_and(|c| c.rect.contains_tiled(p, &self.area))
    }

    /// The unique cell holding `p`, using the half-open convention with the
    /// outer right/top edges closed.
    pub fn cell_of(&self, p: Position) -> Option<CellId> {
        self.cells
            .iter()
            .find(|c| c.rect.contains_tiled(p, &self.area))
            .map(|c| c.cell_id)
    }
}

/// Cells whose rectangles overlap the camera's field with positive area.
pub fn cells_for_camera(zone: &CameraZone, cells: &[CellRegion]) -> Vec<CellId> {
    cells
        .iter()
        .filter(|c| c.rect.overlaps(&zone.world_rect))
        .map(|c| c.cell_id)
        .collect()
}

/// Agents currently located in any of `cell_ids`.
pub fn active_users(cell_ids: &[CellId], cells: &CellMap, world: &WorldState) -> Result<BTreeSet<AgentId>, InfraError> {
    let rects = cell_ids
        .iter()
        .map(|id| cells.get(*id).map(|c| c.rect).ok_or(InfraError::UnknownCell(*id)))
        .collect::<Result<Vec<_>, _>>()?;
    if rects.is_empty() {
        return Ok(BTreeSet::new());
    }
    let area = cells.area();
    Ok(world
        .agents
        .iter()
        .filter(|a| rects.iter().any(|r| r.contains_tiled(a.position, &area)))
        .map(|a| a.id)
        .collect())
}

/// Agents per cell at one instant; answers [`active_users`] without a scan
/// over the whole population.
#[derive(Debug, Clone, PartialEq)]
pub struct CellOccupancy {
    members: Vec<Vec<AgentId>>,
}

impl CellOccupancy {
    pub fn build(cells: &CellMap, world: &WorldState) -> Self {
        let mut members = vec![Vec::new(); cells.cells().len()];
        for a in &world.agents {
            if let Some(c) = cells.cell_of(a.position) {
                members[c.0 as usize].push(a.id);
            }
        }
        CellOccupancy { members }
    }

    /// Agents in one cell, ascending by id.
    pub fn members(&self, cell: CellId) -> Result<&[AgentId], InfraError> {
        self.members
            .get(cell.0 as usize)
            .map(Vec::as_slice)
            .ok_or(InfraError::UnknownCell(cell))
    }

    pub fn users(&self, cell_ids: &[CellId]) -> Result<BTreeSet<AgentId>, InfraError> {
        let mut out = BTreeSet::new();
        for &id in cell_ids {
            let m = self.members.get(id.0 as usize).ok_or(InfraError::UnknownCell(id))?;
            out.extend(m.iter().copied());
        }
        Ok(out)
    }
}

/// Agent ids with a confirmed active diagnosis.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HealthRegistry {
    confirmed: BTreeSet<AgentId>,
}

impl HealthRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: AgentId) -> bool {
        self.confirmed.insert(id)
    }

    pub fn contains(&self, id: AgentId) -> bool {
        self.confirmed.contains(&id)
    }

    pub fn len(&self) -> usize {
        self.confirmed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.confirmed.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &AgentId> {
        self.confirmed.iter()
    }

    /// Reads a JSON array of agent ids, e.g. `[3, 17, 42]`.
    pub fn load(path: &Path) -> Result<Vec<AgentId>, std::io::Error> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(std::io::Error::other)
    }
}

impl FromIterator<AgentId> for HealthRegistry {
    fn from_iter<I: IntoIterator<Item = AgentId>>(iter: I) -> Self {
        HealthRegistry {
            confirmed: iter.into_iter().collect(),
        }
    }
}

pub fn confirmed_in(users: &BTreeSet<AgentId>, registry: &HealthRegistry) -> BTreeSet<AgentId> {
    users.iter().copied().filter(|id| registry.contains(*id)).collect()
}

pub fn symptomatic_in(
    users: &BTreeSet<AgentId>,
    telemetry: &TelemetryStore,
    now: Minute,
    config: &SimConfig,
) -> BTreeSet<AgentId> {
    users
        .iter()
        .copied()
        .filter(|id| telemetry.is_flagged(*id, now, config.symptom_persistence))
        .collect()
}

#[derive(Debug, Clone, Default)]
struct Track {
    last: Option<TelemetryRecord>,
    /// Minutes of consecutive at-or-above-threshold samples ending at
    /// `last.timestamp`.
    streak: Minute,
    history: Vec<TelemetryRecord>,
}

/// Latest wearable readings per agent plus the running length of the
/// current above-threshold window.
///
/// Full per-sample history is kept only when `retain_history` is set; the
/// flag decision needs just the streak.
#[derive(Debug, Clone)]
pub struct TelemetryStore {
    threshold: f64,
    tick: Minute,
    retain_history: bool,
    tracks: Vec<Track>,
}

impl TelemetryStore {
    pub fn new(population: usize, threshold: f64, tick: Minute, retain_history: bool) -> Self {
        TelemetryStore {
            threshold,
            tick,
            retain_history,
            tracks: vec![Track::default(); population],
        }
    }

    pub fn for_config(config: &SimConfig, retain_history: bool) -> Self {
        Self::new(config.population, config.symptom_threshold, config.tick, retain_history)
    }

    pub fn record(&mut self, rec: TelemetryRecord) {
        let tick = self.tick;
        let threshold = self.threshold;
        let Some(track) = self.tracks.get_mut(rec.agent.index()) else {
            return;
        };
        let contiguous = track.last.as_ref().is_some_and(|l| l.timestamp + tick == rec.timestamp);
        track.streak = if rec.composite >= threshold {
            if contiguous {
                track.streak + tick
            } else {
                tick
            }
        } else {
            0
        };
        if self.retain_history {
            track.history.push(rec.clone());
        }
        track.last = Some(rec);
    }

    /// Minutes of the current above-threshold run, if the newest sample is
    /// at `now`.
    pub fn streak(&self, id: AgentId, now: Minute) -> Minute {
        match self.tracks.get(id.index()) {
            Some(t) if t.last.as_ref().is_some_and(|l| l.timestamp == now) => t.streak,
            _ => 0,
        }
    }

    pub fn is_flagged(&self, id: AgentId, now: Minute, persistence: Minute) -> bool {
        self.streak(id, now) >= persistence
    }

    pub fn latest(&self, id: AgentId) -> Option<&TelemetryRecord> {
        self.tracks.get(id.index()).and_then(|t| t.last.as_ref())
    }

    /// Empty unless the store was built with `retain_history`.
    pub fn history(&self, id: AgentId) -> &[TelemetryRecord] {
        self.tracks.get(id.index()).map(|t| t.history.as_slice()).unwrap_or(&[])
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }
}
