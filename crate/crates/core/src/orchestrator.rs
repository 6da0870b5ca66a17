//! The containment loop: sensing → area scan → quarantine or self-isolation,
//! plus the epidemic bookkeeping that feeds the exposure metrics.
//!
//! Phase order inside one tick is fixed:
//!
//! 1. pending quarantines take effect, then mobility
//! 2. symptom advance and telemetry
//! 3. contacts, exposures, infection draws
//! 4. per-camera projection and violation detection
//! 5. area scans for rising-edge violations (and the optional global
//!    symptom watch)
//! 6. metrics row, ledger append

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use crate::config::SimConfig;
use crate::epidemic::{
    advance_symptoms, emit_telemetry, resolve_infection, update_contacts, ContactLedger, ExposureEvent,
    InfectionOutcome, SourceKind,
};
use crate::error::{ConfigError, OrchestratorError};
use crate::infra::{CellMap, CellOccupancy, TelemetryStore};
use crate::ledger::{Event, EventLedger};
use crate::metrics::{MetricsSeries, Totals};
use crate::rng::{self, pair_key, RngStream, Stream};
use crate::sensing::{build_cameras, detect_violations, project_agents, CameraZone, Detection, Frame, ViolationEvent};
use crate::types::{AgentId, Minute};
use crate::world::{init_world, neighbors_within, step_mobility, Health, WorldState};

/// Read-only view of everything an area scan consults.
pub struct AreaContext<'a> {
    pub config: &'a SimConfig,
    pub world: &'a WorldState,
    pub occupancy: &'a CellOccupancy,
    pub telemetry: &'a TelemetryStore,
}

impl<'a> AreaContext<'a> {
    pub fn new(
        config: &'a SimConfig,
        world: &'a WorldState,
        occupancy: &'a CellOccupancy,
        telemetry: &'a TelemetryStore,
    ) -> Self {
        AreaContext {
            config,
            world,
            occupancy,
            telemetry,
        }
    }
}

/// What an area scan finds in a camera's cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AreaFindings {
    pub active_users: usize,
    pub confirmed: BTreeSet<AgentId>,
    /// Only consulted when `confirmed` is empty; left empty otherwise.
    pub symptomatic: BTreeSet<AgentId>,
}

pub fn scan_area(zone: &CameraZone, ctx: &AreaContext<'_>) -> AreaFindings {
    let mut active_users = 0;
    let mut confirmed = BTreeSet::new();
    let mut flagged = BTreeSet::new();
    let persistence = ctx.config.symptom_persistence;
    for &cell in &zone.mapped_cells {
        let members = ctx
            .occupancy
            .members(cell)
            .expect("camera cells come from the same cell map");
        active_users += members.len();
        for &id in members {
            if ctx.world.registry.contains(id) {
                confirmed.insert(id);
            } else if ctx.telemetry.is_flagged(id, ctx.world.now, persistence) {
                flagged.insert(id);
            }
        }
    }
    // a flagged agent only counts when no patient is present
    let symptomatic = if confirmed.is_empty() { flagged } else { BTreeSet::new() };
    AreaFindings {
        active_users,
        confirmed,
        symptomatic,
    }
}

/// Runs the area-at-risk procedure for one violation and returns the
/// resulting events, starting with the `AreaScan`.
///
/// Confirmed patients in the scanned cells take precedence: each one not in
/// `already_ordered` gets a `QuarantineOrder`, and the area receives one
/// anonymous `AreaAdvisory`. Only when no confirmed patient is present are
/// flagged wearables consulted; each flagged agent and every agent within
/// `proximity_threshold` of one receives a `SelfIsolationNotice`.
pub fn handle_violation(
    v: &ViolationEvent,
    zone: &CameraZone,
    ctx: &AreaContext<'_>,
    scan: u64,
    already_ordered: &BTreeSet<AgentId>,
) -> Vec<Event> {
    area_actions(v, zone, &scan_area(zone, ctx), ctx, scan, already_ordered)
}

fn area_actions(
    v: &ViolationEvent,
    zone: &CameraZone,
    found: &AreaFindings,
    ctx: &AreaContext<'_>,
    scan: u64,
    already_ordered: &BTreeSet<AgentId>,
) -> Vec<Event> {
    let mut events = vec![Event::AreaScan {
        scan,
        camera_id: v.camera_id.clone(),
        cells: zone.mapped_cells.clone(),
        active_users: found.active_users,
        confirmed: found.confirmed.len(),
        symptomatic: found.symptomatic.len(),
    }];

    if !found.confirmed.is_empty() {
        for &agent in found.confirmed.difference(already_ordered) {
            events.push(Event::QuarantineOrder {
                scan,
                camera_id: v.camera_id.clone(),
                agent,
            });
        }
        events.push(Event::AreaAdvisory {
            scan,
            camera_id: v.camera_id.clone(),
            cells: zone.mapped_cells.clone(),
            recipients: found.active_users,
        });
    } else if !found.symptomatic.is_empty() {
        let recipients = isolation_recipients(&found.symptomatic, ctx.world, ctx.config.proximity_threshold);
        for (agent, flagged) in recipients {
            events.push(Event::SelfIsolationNotice {
                scan: Some(scan),
                camera_id: Some(v.camera_id.clone()),
                agent,
                flagged,
            });
        }
    }
    events
}

/// Each flagged agent plus everyone within `radius` of one, mapped to the
/// lowest-id flagged agent that reached them.
fn isolation_recipients(flagged: &BTreeSet<AgentId>, world: &WorldState, radius: f64) -> BTreeMap<AgentId, AgentId> {
    let mut out: BTreeMap<AgentId, AgentId> = flagged.iter().map(|&f| (f, f)).collect();
    for &f in flagged {
        for n in neighbors_within(world, world.agent(f).position, radius) {
            out.entry(n).or_insert(f);
        }
    }
    out
}

/// Takes a registered patient out of mobility and out of the infectious
/// source set.
pub fn apply_quarantine(id: AgentId, world: &mut WorldState) -> Result<(), OrchestratorError> {
    if !world.registry.contains(id) {
        return Err(OrchestratorError::NotInRegistry(id));
    }
    world.agent_mut(id).quarantined = true;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum PairKey {
    Agents(AgentId, AgentId),
    Detections(usize, usize),
}

impl PairKey {
    fn of(v: &ViolationEvent) -> Self {
        match v.agents {
            Some((a, b)) => PairKey::Agents(a.min(b), a.max(b)),
            None => PairKey::Detections(v.pair.0, v.pair.1),
        }
    }
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub ledger: EventLedger,
    pub metrics: MetricsSeries,
    pub world: WorldState,
}

impl ScenarioOutcome {
    pub fn final_totals(&self) -> Totals {
        self.metrics.final_totals()
    }
}

pub struct Simulation {
    config: SimConfig,
    world: WorldState,
    cells: CellMap,
    cameras: Vec<CameraZone>,
    contacts: ContactLedger,
    telemetry: TelemetryStore,
    ledger: EventLedger,
    metrics: MetricsSeries,
    mobility_rng: RngStream,
    telemetry_rng: RngStream,
    sensing_rng: RngStream,
    /// Violating pairs seen in each camera's previous frame.
    active_pairs: BTreeMap<String, BTreeSet<PairKey>>,
    ordered: BTreeSet<AgentId>,
    pending_quarantine: Vec<AgentId>,
    next_scan: u64,
    exposed_confirmed: Vec<bool>,
    exposed_symptomatic: Vec<bool>,
    flagged_prev: Vec<bool>,
    totals: Totals,
    telemetry_sink: Option<Box<dyn Write + Send>>,
}

impl Simulation {
    pub fn new(config: SimConfig) -> Result<Self, ConfigError> {
        let world = init_world(&config)?;
        Ok(Self::with_world(config, world))
    }

    /// Uses a prepared world instead of [`init_world`]. The config must
    /// describe the same area and population.
    pub fn with_world(config: SimConfig, world: WorldState) -> Self {
        let cells = CellMap::from_config(&config);
        let cameras = build_cameras(&config, &cells);
        let seed = config.rng_seed;
        let n = world.len();
        Simulation {
            telemetry: TelemetryStore::new(n, config.symptom_threshold, config.tick, false),
            contacts: ContactLedger::new(),
            ledger: EventLedger::new(),
            metrics: MetricsSeries::default(),
            mobility_rng: rng::stream(seed, Stream::Mobility),
            telemetry_rng: rng::stream(seed, Stream::Telemetry),
            sensing_rng: rng::stream(seed, Stream::Sensing),
            active_pairs: BTreeMap::new(),
            ordered: BTreeSet::new(),
            pending_quarantine: Vec::new(),
            next_scan: 0,
            exposed_confirmed: vec![false; n],
            exposed_symptomatic: vec![false; n],
            flagged_prev: vec![false; n],
            totals: Totals::default(),
            telemetry_sink: None,
            config,
            world,
            cells,
            cameras,
        }
    }

    /// Keep every telemetry sample in memory (off by default).
    pub fn retain_telemetry_history(mut self) -> Self {
        self.telemetry = TelemetryStore::new(self.world.len(), self.config.symptom_threshold, self.config.tick, true);
        self
    }

    /// Streams every telemetry sample as one JSON line.
    pub fn set_telemetry_sink(&mut self, sink: Box<dyn Write + Send>) {
        self.telemetry_sink = Some(sink);
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn world(&self) -> &WorldState {
        &self.world
    }

    pub fn world_mut(&mut self) -> &mut WorldState {
        &mut self.world
    }

    pub fn cells(&self) -> &CellMap {
        &self.cells
    }

    pub fn cameras(&self) -> &[CameraZone] {
        &self.cameras
    }

    pub fn telemetry(&self) -> &TelemetryStore {
        &self.telemetry
    }

    pub fn ledger(&self) -> &EventLedger {
        &self.ledger
    }

    pub fn metrics(&self) -> &MetricsSeries {
        &self.metrics
    }

    pub fn totals(&self) -> Totals {
        self.totals
    }

    pub fn now(&self) -> Minute {
        self.world.now
    }

    /// One full tick in the fixed phase order.
    pub fn tick(&mut self) {
        self.begin_tick();
        step_mobility(&mut self.world, &self.config, &mut self.mobility_rng);
        let mut events = Vec::new();
        self.phase_symptoms();
        self.phase_contacts(&mut events);
        let frames = self.phase_sensing();
        self.phase_violations(&frames, &mut events);
        self.phase_symptom_watch(&mut events);
        self.finish_tick(events);
    }

    /// Advances the clock without moving anyone or tracking contacts, and
    /// feeds `frames` (external detections for this tick) through the
    /// violation pipeline. Used for scripted worlds.
    pub fn static_tick(&mut self, frames: &[Frame]) {
        self.begin_tick();
        self.world.now += self.config.tick;
        let mut events = Vec::new();
        self.phase_symptoms();
        let frames: Vec<(usize, Vec<Detection>)> = frames
            .iter()
            .filter_map(|f| {
                self.cameras
                    .iter()
                    .position(|c| c.camera_id == f.camera_id)
                    .map(|i| (i, f.detections.clone()))
            })
            .collect();
        self.phase_violations(&frames, &mut events);
        self.phase_symptom_watch(&mut events);
        self.finish_tick(events);
    }

    /// Replays an external detection stream. Each frame is processed in the
    /// first tick whose end time is at or after its `frame_time`; the run
    /// stops after the tick holding the last frame.
    pub fn ingest(&mut self, frames: &[Frame]) {
        let mut rest = frames;
        while let Some(first) = rest.first() {
            let end = f64::from(self.world.now + self.config.tick);
            if first.frame_time > end {
                self.static_tick(&[]);
                continue;
            }
            let n = rest.iter().take_while(|f| f.frame_time <= end).count();
            self.static_tick(&rest[..n]);
            rest = &rest[n..];
        }
    }

    pub fn run(mut self) -> ScenarioOutcome {
        for _ in 0..self.config.ticks() {
            self.tick();
        }
        self.into_outcome()
    }

    pub fn into_outcome(mut self) -> ScenarioOutcome {
        if let Some(sink) = self.telemetry_sink.as_mut() {
            let _ = sink.flush();
        }
        ScenarioOutcome {
            ledger: self.ledger,
            metrics: self.metrics,
            world: self.world,
        }
    }

    fn begin_tick(&mut self) {
        for id in std::mem::take(&mut self.pending_quarantine) {
            apply_quarantine(id, &mut self.world).expect("orders reference registry members");
        }
    }

    fn phase_symptoms(&mut self) {
        advance_symptoms(&mut self.world, &self.config);
        let now = self.world.now;
        for agent in &self.world.agents {
            let rec = emit_telemetry(agent, now, self.config.telemetry_noise, &mut self.telemetry_rng);
            if let Some(sink) = self.telemetry_sink.as_mut() {
                // Debug output only; a failing sink must not stop the run.
                if serde_json::to_writer(&mut *sink, &rec).is_ok() {
                    let _ = sink.write_all(b"\n");
                }
            }
            self.telemetry.record(rec);
        }
    }

    fn is_flagged(&self, id: AgentId) -> bool {
        self.telemetry
            .is_flagged(id, self.world.now, self.config.symptom_persistence)
    }

    /// Infectious sources this tick, ascending by id. Confirmed status wins
    /// over a raised wearable flag.
    pub fn sources(&self) -> Vec<(AgentId, SourceKind)> {
        self.world
            .agents
            .iter()
            .filter(|a| !a.quarantined)
            .filter_map(|a| {
                if a.health == Health::ConfirmedPatient && self.world.registry.contains(a.id) {
                    Some((a.id, SourceKind::Confirmed))
                } else if self.is_flagged(a.id) {
                    Some((a.id, SourceKind::Symptomatic))
                } else {
                    None
                }
            })
            .collect()
    }

    fn phase_contacts(&mut self, events: &mut Vec<Event>) {
        let sources = self.sources();
        let exposures = update_contacts(&self.world, &mut self.contacts, &sources, &self.config);
        if exposures.is_empty() {
            return;
        }
        for e in &exposures {
            self.world.agent_mut(e.susceptible).health = Health::ExposedPending;
        }
        // one agent-tick counts once, towards a confirmed source if any
        let mut by_agent: BTreeMap<AgentId, SourceKind> = BTreeMap::new();
        for e in &exposures {
            by_agent
                .entry(e.susceptible)
                .and_modify(|k| *k = (*k).min(e.source_kind))
                .or_insert(e.source_kind);
        }
        for (agent, kind) in by_agent {
            let seen = match kind {
                SourceKind::Confirmed => &mut self.exposed_confirmed,
                SourceKind::Symptomatic => &mut self.exposed_symptomatic,
            };
            if !seen[agent.index()] {
                seen[agent.index()] = true;
                match kind {
                    SourceKind::Confirmed => self.totals.exposed_to_confirmed += 1,
                    SourceKind::Symptomatic => self.totals.exposed_to_symptomatic += 1,
                }
            }
        }

        for e in &exposures {
            events.push(Event::Exposure {
                agent: e.susceptible,
                source: e.source,
                source_kind: e.source_kind,
            });
            if self.world.agent(e.susceptible).health == Health::Infected {
                continue;
            }
            if self.draw_infection(e) == InfectionOutcome::Infected {
                let now = self.world.now;
                let agent = self.world.agent_mut(e.susceptible);
                agent.health = Health::Infected;
                agent.infected_at = Some(now);
                self.totals.infected_total += 1;
                events.push(Event::Infection {
                    agent: e.susceptible,
                    source: e.source,
                });
            }
        }
        for e in &exposures {
            let agent = self.world.agent_mut(e.susceptible);
            if agent.health == Health::ExposedPending {
                agent.health = Health::Susceptible;
            }
        }
    }

    /// The variate for a pair is fixed by the seed, so runs that differ only
    /// in mask policy see the same uniform for the same exposure.
    fn draw_infection(&self, e: &ExposureEvent) -> InfectionOutcome {
        let mut rng = rng::keyed(
            self.config.rng_seed,
            Stream::Infection,
            pair_key(e.susceptible, e.source),
        );
        resolve_infection(e, &self.world, &self.config, &mut rng)
    }

    fn phase_sensing(&mut self) -> Vec<(usize, Vec<Detection>)> {
        self.cameras
            .iter()
            .enumerate()
            .map(|(i, zone)| (i, project_agents(zone, &self.world, &mut self.sensing_rng)))
            .collect()
    }

    fn phase_violations(&mut self, frames: &[(usize, Vec<Detection>)], events: &mut Vec<Event>) {
        // positions are fixed for the rest of the tick
        let mut occupancy: Option<CellOccupancy> = None;
        let mut order: Vec<&(usize, Vec<Detection>)> = frames.iter().collect();
        order.sort_by(|a, b| self.cameras[a.0].camera_id.cmp(&self.cameras[b.0].camera_id));
        for (cam, detections) in order {
            let zone = self.cameras[*cam].clone();
            let violations = detect_violations(detections, &zone, self.config.distance_violation_threshold);
            let previous = self.active_pairs.remove(&zone.camera_id).unwrap_or_default();
            let mut current = BTreeSet::new();
            let mut rising = Vec::new();
            for v in &violations {
                let key = PairKey::of(v);
                let handled = !previous.contains(&key);
                current.insert(key);
                events.push(Event::Violation {
                    camera_id: v.camera_id.clone(),
                    frame_time: v.frame_time,
                    detections: [v.pair.0, v.pair.1],
                    agents: v.agents.map(|(a, b)| [a, b]),
                    distance: v.distance,
                    handled,
                });
                if handled {
                    rising.push(v);
                }
            }
            if !rising.is_empty() && occupancy.is_none() {
                occupancy = Some(CellOccupancy::build(&self.cells, &self.world));
            }
            let mut found: Option<AreaFindings> = None;
            for v in rising {
                let scan = self.next_scan;
                self.next_scan += 1;
                let ctx = AreaContext::new(
                    &self.config,
                    &self.world,
                    occupancy.as_ref().expect("built above"),
                    &self.telemetry,
                );
                let found = found.get_or_insert_with(|| scan_area(&zone, &ctx));
                let out = area_actions(v, &zone, found, &ctx, scan, &self.ordered);
                self.record_actions(&out);
                events.extend(out);
            }
            self.active_pairs.insert(zone.camera_id.clone(), current);
        }
    }

    fn record_actions(&mut self, events: &[Event]) {
        for e in events {
            match e {
                Event::QuarantineOrder { agent, .. } => {
                    self.ordered.insert(*agent);
                    self.totals.quarantines += 1;
                    if self.config.enforce_quarantine {
                        self.pending_quarantine.push(*agent);
                    }
                }
                Event::SelfIsolationNotice { .. } => self.totals.notices_sent += 1,
                _ => {}
            }
        }
    }

    fn phase_symptom_watch(&mut self, events: &mut Vec<Event>) {
        if !self.config.global_symptom_watch {
            return;
        }
        let mut rising = BTreeSet::new();
        for i in 0..self.world.len() {
            let id = AgentId(i as u32);
            let now = self.is_flagged(id);
            if now && !self.flagged_prev[i] {
                rising.insert(id);
            }
            self.flagged_prev[i] = now;
        }
        if rising.is_empty() {
            return;
        }
        let recipients = isolation_recipients(&rising, &self.world, self.config.proximity_threshold);
        let out: Vec<Event> = recipients
            .into_iter()
            .map(|(agent, flagged)| Event::SelfIsolationNotice {
                scan: None,
                camera_id: None,
                agent,
                flagged,
            })
            .collect();
        self.record_actions(&out);
        events.extend(out);
    }

    fn finish_tick(&mut self, events: Vec<Event>) {
        let now = self.world.now;
        self.metrics.push(now, self.totals);
        self.ledger.extend_tick(now, events);
    }
}

/// Runs `config` with `seed` for the configured horizon.
pub fn run_scenario(config: &SimConfig, seed: u64) -> Result<ScenarioOutcome, ConfigError> {
    let config = SimConfig {
        rng_seed: seed,
        ..config.clone()
    };
    Ok(Simulation::new(config)?.run())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::GridDims;
    use crate::types::{Position, Rect};
    use crate::world::Agent;

    fn micro_config(population: usize) -> SimConfig {
        SimConfig {
            area_width: 100.0,
            area_height: 100.0,
            population,
            initial_confirmed: 0,
            initial_carriers: 0,
            camera_grid: GridDims::new(1, 1),
            cell_grid: GridDims::new(1, 1),
            proximity_threshold: 3.0,
            distance_violation_threshold: 2.0,
            ..SimConfig::default()
        }
    }

    fn micro_world(points: &[(f64, f64)], confirmed: &[u32]) -> WorldState {
        let agents = points
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| {
                let mut a = Agent::new(AgentId(i as u32), Position::new(x, y));
                if confirmed.contains(&(i as u32)) {
                    a.health = Health::ConfirmedPatient;
                }
                a
            })
            .collect();
        WorldState::from_agents(Rect::new(0.0, 0.0, 100.0, 100.0), agents, 3.0).unwrap()
    }

    fn violation(a: u32, b: u32) -> ViolationEvent {
        ViolationEvent {
            camera_id: "cam-00-00".into(),
            frame_time: 0.0,
            pair: (0, 1),
            agents: Some((AgentId(a), AgentId(b))),
            distance: 1.0,
        }
    }

    #[test]
    fn confirmed_branch() {
        let cfg = micro_config(4);
        let world = micro_world(&[(10.0, 10.0), (11.0, 10.0), (50.0, 50.0), (80.0, 80.0)], &[3]);
        let sim = Simulation::with_world(cfg.clone(), world);
        let occupancy = CellOccupancy::build(sim.cells(), sim.world());
        let ctx = AreaContext::new(&cfg, sim.world(), &occupancy, sim.telemetry());
        let out = handle_violation(&violation(0, 1), &sim.cameras()[0], &ctx, 0, &BTreeSet::new());
        let kinds: Vec<&str> = out.iter().map(Event::kind_name).collect();
        assert_eq!(kinds, ["AreaScan", "QuarantineOrder", "AreaAdvisory"]);
        assert!(matches!(out[1], Event::QuarantineOrder { agent: AgentId(3), .. }));
        // a second scan does not re-order the same patient
        let ordered: BTreeSet<AgentId> = [AgentId(3)].into();
        let out = handle_violation(&violation(0, 1), &sim.cameras()[0], &ctx, 1, &ordered);
        assert_eq!(out.iter().filter(|e| e.kind_name() == "QuarantineOrder").count(), 0);
    }

    #[test]
    fn clean_area_scan_only() {
        let cfg = micro_config(3);
        let world = micro_world(&[(10.0, 10.0), (11.0, 10.0), (50.0, 50.0)], &[]);
        let sim = Simulation::with_world(cfg.clone(), world);
        let occupancy = CellOccupancy::build(sim.cells(), sim.world());
        let ctx = AreaContext::new(&cfg, sim.world(), &occupancy, sim.telemetry());
        let out = handle_violation(&violation(0, 1), &sim.cameras()[0], &ctx, 0, &BTreeSet::new());
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].kind_name(), "AreaScan");
    }

    #[test]
    fn quarantine_requires_registry() {
        let mut w = micro_world(&[(1.0, 1.0), (2.0, 2.0)], &[1]);
        assert_eq!(
            apply_quarantine(AgentId(0), &mut w),
            Err(OrchestratorError::NotInRegistry(AgentId(0)))
        );
        apply_quarantine(AgentId(1), &mut w).unwrap();
        assert!(w.agent(AgentId(1)).quarantined);
    }

    #[test]
    fn horizon_zero_is_empty() {
        let cfg = SimConfig {
            horizon: 0,
            ..SimConfig::default()
        };
        let out = run_scenario(&cfg, 3).unwrap();
        assert!(out.ledger.is_empty());
        assert!(out.metrics.rows().is_empty());
        assert_eq!(out.final_totals(), Totals::default());
    }

    #[test]
    fn colocated_pair_violates_once_per_rising_edge() {
        let cfg = SimConfig {
            speed_min: 0.001,
            speed_max: 0.001,
            horizon: 3,
            ..micro_config(2)
        };
        let world = micro_world(&[(40.0, 40.0), (40.0, 40.0)], &[]);
        let out = Simulation::with_world(cfg, world).run();
        let handled: Vec<bool> = out
            .ledger
            .entries()
            .iter()
            .filter_map(|e| match e.event {
                Event::Violation { handled, .. } => Some(handled),
                _ => None,
            })
            .collect();
        assert_eq!(handled, [true, false, false]);
        assert_eq!(out.ledger.count("AreaScan"), 1);
    }

    #[test]
    fn no_sources_no_exposures() {
        let cfg = SimConfig {
            population: 800,
            initial_confirmed: 0,
            initial_carriers: 0,
            area_width: 200.0,
            area_height: 200.0,
            horizon: 100,
            ..SimConfig::default()
        };
        let out = run_scenario(&cfg, 1).unwrap();
        assert_eq!(out.ledger.count("Exposure"), 0);
        assert_eq!(out.ledger.count("Infection"), 0);
        assert!(out.ledger.count("Violation") > 0);
    }
}
