//! Population, bounded area and random-walk mobility.

use std::f64::consts::TAU;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::{MaskPolicy, SimConfig};
use crate::error::{ConfigError, InfraError};
use crate::infra::HealthRegistry;
use crate::rng::{self, RngStream, Stream};
use crate::spatial::GridIndex;
use crate::types::{AgentId, Minute, Position, Rect};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Health {
    #[default]
    Susceptible,
    /// Exposed this tick; the infection draw has not been resolved yet.
    ExposedPending,
    Infected,
    ConfirmedPatient,
}

/// Only `id` and `position` are required when deserializing; everything else
/// defaults to a healthy, unmasked, stationary agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Agent {
    pub id: AgentId,
    pub position: Position,
    /// Radians, last heading drawn (after any boundary reflection).
    #[serde(default)]
    pub heading: f64,
    #[serde(default)]
    pub speed: f64,
    #[serde(default)]
    pub masked: bool,
    #[serde(default)]
    pub health: Health,
    #[serde(default)]
    pub symptom_level: f64,
    #[serde(default)]
    pub infected_at: Option<Minute>,
    /// Set once a quarantine order takes effect; the agent no longer moves
    /// and stops being an infectious source.
    #[serde(default)]
    pub quarantined: bool,
}

impl Agent {
    pub fn new(id: AgentId, position: Position) -> Self {
        Agent {
            id,
            position,
            heading: 0.0,
            speed: 0.0,
            masked: false,
            health: Health::Susceptible,
            symptom_level: 0.0,
            infected_at: None,
            quarantined: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct WorldState {
    pub area: Rect,
    pub now: Minute,
    pub agents: Vec<Agent>,
    pub registry: HealthRegistry,
    positions: Vec<Position>,
    index: GridIndex,
    index_cell: f64,
}

impl WorldState {
    /// Builds a world from explicit agents. Ids must be `0..n` in order.
    /// Agents marked `ConfirmedPatient` are entered into the registry.
    pub fn from_agents(area: Rect, agents: Vec<Agent>, index_hint: f64) -> Result<Self, InfraError> {
        for (i, a) in agents.iter().enumerate() {
            if a.id.index() != i {
                return Err(InfraError::UnknownAgent(a.id));
            }
        }
        let registry = agents
            .iter()
            .filter(|a| a.health == Health::ConfirmedPatient)
            .map(|a| a.id)
            .collect();
        let positions: Vec<Position> = agents.iter().map(|a| a.position).collect();
        let index_cell = GridIndex::auto_cell_size(&area, agents.len(), index_hint);
        let index = GridIndex::build(area, index_cell, &positions);
        Ok(WorldState {
            area,
            now: 0,
            agents,
            registry,
            positions,
            index,
            index_cell,
        })
    }

    pub fn agent(&self, id: AgentId) -> &Agent {
        &self.agents[id.index()]
    }

    pub fn agent_mut(&mut self, id: AgentId) -> &mut Agent {
        &mut self.agents[id.index()]
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    /// Marks `id` as a confirmed patient and registers it.
    pub fn confirm(&mut self, id: AgentId) -> Result<(), InfraError> {
        let agent = self.agents.get_mut(id.index()).ok_or(InfraError::UnknownAgent(id))?;
        agent.health = Health::ConfirmedPatient;
        self.registry.insert(id);
        Ok(())
    }

    /// Re-indexes agent positions. Call after moving agents by hand.
    pub fn reindex(&mut self) {
        self.positions.clear();
        self.positions.extend(self.agents.iter().map(|a| a.position));
        self.index = GridIndex::build(self.area, self.index_cell, &self.positions);
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }
}

/// Places `config.population` agents uniformly at random and assigns the
/// confirmed and carrier roles, all from the `world` stream.
pub fn init_world(config: &SimConfig) -> Result<WorldState, ConfigError> {
    config.validate()?;
    let mut rng = rng::stream(config.rng_seed, Stream::World);
    let masked = config.mask_policy == MaskPolicy::AllMasked;
    let mut agents: Vec<Agent> = (0..config.population)
        .map(|i| {
            let x = rng.random_range(0.0..=config.area_width);
            let y = rng.random_range(0.0..=config.area_height);
            let mut a = Agent::new(AgentId(i as u32), Position::new(x, y));
            a.heading = rng.random::<f64>() * TAU;
            a.speed = rng.random_range(config.speed_min..=config.speed_max);
            a.masked = masked;
            a
        })
        .collect();
    let seeded = config.initial_confirmed + config.initial_carriers;
    let picks = index::sample(&mut rng, config.population, seeded);
    for (k, i) in picks.iter().enumerate() {
        let agent = &mut agents[i];
        if k < config.initial_confirmed {
            agent.health = Health::ConfirmedPatient;
        } else {
            agent.health = Health::Infected;
            agent.infected_at = Some(0);
        }
    }
    let world = WorldState::from_agents(config.area(), agents, config.proximity_threshold).expect("ids are sequential");
    Ok(world)
}

/// Folds a coordinate into `[0, len]` by specular reflection. Returns the
/// folded coordinate and whether the direction of travel ended up flipped.
pub fn reflect(x: f64, len: f64) -> (f64, bool) {
    if (0.0..=len).contains(&x) {
        return (x, false);
    }
    if len <= 0.0 {
        return (0.0, false);
    }
    let period = 2.0 * len;
    let m = x.rem_euclid(period);
    let bounces = (x / len).floor() as i64;
    let flipped = bounces.rem_euclid(2) == 1;
    let folded = if m > len { period - m } else { m };
    (folded.clamp(0.0, len), flipped)
}

/// One random-walk step: fresh uniform heading and speed per agent, move
/// `speed · tick`, reflect off the walls, advance the clock.
///
/// Quarantined agents still consume their draws so the stream stays aligned
/// across scenarios, but they do not move.
pub fn step_mobility(world: &mut WorldState, config: &SimConfig, rng: &mut RngStream) {
    let tick = f64::from(config.tick);
    let (w, h) = (world.area.width(), world.area.height());
    for agent in &mut world.agents {
        let heading = rng.random::<f64>() * TAU;
        let speed = rng.random_range(config.speed_min..=config.speed_max);
        agent.speed = speed;
        if agent.quarantined {
            agent.heading = heading;
            continue;
        }
        move_agent(agent, heading, speed * tick, w, h, world.area);
    }
    world.now += config.tick;
    world.reindex();
}

pub(crate) fn move_agent(agent: &mut Agent, heading: f64, dist: f64, w: f64, h: f64, area: Rect) {
    let (dx, dy) = (heading.cos() * dist, heading.sin() * dist);
    let (x, fx) = reflect(agent.position.x - area.x0 + dx, w);
    let (y, fy) = reflect(agent.position.y - area.y0 + dy, h);
    agent.position = Position::new(x + area.x0, y + area.y0);
    let (mut hx, mut hy) = (heading.cos(), heading.sin());
    if fx {
        hx = -hx;
    }
    if fy {
        hy = -hy;
    }
    agent.heading = hy.atan2(hx).rem_euclid(TAU);
}

/// Ids of all agents within Euclidean distance `radius` of `center`,
/// ascending.
pub fn neighbors_within(world: &WorldState, center: Position, radius: f64) -> Vec<AgentId> {
    world
        .index
        .query(&world.positions, center, radius)
        .into_iter()
        .map(AgentId)
        .collect()
}
