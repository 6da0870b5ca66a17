//! Transmission, symptom progression and wearable telemetry.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::SimConfig;
use crate::types::{AgentId, Minute};
use crate::world::{neighbors_within, Health, WorldState};

/// Relative prevalence of fever, fatigue and dry cough among cases.
pub const SYMPTOM_PREVALENCE: [f64; 3] = [0.986, 0.70, 0.60];

/// Composite-score weights: prevalence normalized to sum to one.
pub const SYMPTOM_WEIGHTS: [f64; 3] = [
    SYMPTOM_PREVALENCE[0] / (SYMPTOM_PREVALENCE[0] + SYMPTOM_PREVALENCE[1] + SYMPTOM_PREVALENCE[2]),
    SYMPTOM_PREVALENCE[1] / (SYMPTOM_PREVALENCE[0] + SYMPTOM_PREVALENCE[1] + SYMPTOM_PREVALENCE[2]),
    SYMPTOM_PREVALENCE[2] / (SYMPTOM_PREVALENCE[0] + SYMPTOM_PREVALENCE[1] + SYMPTOM_PREVALENCE[2]),
];

/// Why an agent counts as infectious this tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceKind {
    Confirmed,
    Symptomatic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExposureEvent {
    pub time: Minute,
    pub susceptible: AgentId,
    pub source: AgentId,
    pub source_kind: SourceKind,
}

/// Consecutive-proximity counters per `(susceptible, source)` pair and the
/// set of pairs that have already produced an exposure.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ContactLedger {
    counters: BTreeMap<(AgentId, AgentId), Minute>,
    exposed: BTreeSet<(AgentId, AgentId)>,
}

impl ContactLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn counter(&self, susceptible: AgentId, source: AgentId) -> Minute {
        self.counters.get(&(susceptible, source)).copied().unwrap_or(0)
    }

    pub fn was_exposed(&self, susceptible: AgentId, source: AgentId) -> bool {
        self.exposed.contains(&(susceptible, source))
    }

    pub fn exposed_pairs(&self) -> usize {
        self.exposed.len()
    }
}

/// Advances contact counters for every susceptible agent within
/// `proximity_threshold` of an infectious source. A pair that reaches
/// `contact_duration` consecutive minutes emits one [`ExposureEvent`] and
/// never emits again; a pair that separates restarts from zero.
///
/// `sources` must be sorted by id. Events come back ordered by
/// `(susceptible, source)`.
pub fn update_contacts(
    world: &WorldState,
    ledger: &mut ContactLedger,
    sources: &[(AgentId, SourceKind)],
    config: &SimConfig,
) -> Vec<ExposureEvent> {
    let mut next = BTreeMap::new();
    let mut events = Vec::new();
    for &(src, kind) in sources {
        let center = world.agent(src).position;
        for s in neighbors_within(world, center, config.proximity_threshold) {
            if s == src {
                continue;
            }
            let target = world.agent(s);
            if target.health != Health::Susceptible || target.quarantined {
                continue;
            }
            let key = (s, src);
            if ledger.exposed.contains(&key) {
                continue;
            }
            let count = ledger.counters.get(&key).copied().unwrap_or(0) + config.tick;
            if count >= config.contact_duration {
                ledger.exposed.insert(key);
                events.push(ExposureEvent {
                    time: world.now,
                    susceptible: s,
                    source: src,
                    source_kind: kind,
                });
            } else {
                next.insert(key, count);
            }
        }
    }
    ledger.counters = next;
    events.sort_by_key(|e| (e.susceptible, e.source));
    events
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfectionOutcome {
    Infected,
    Unaffected,
}

/// Bernoulli draw with the mask-dependent probability for the exposed agent.
/// Consumes exactly one uniform from `rng`.
pub fn resolve_infection(
    event: &ExposureEvent,
    world: &WorldState,
    config: &SimConfig,
    rng: &mut impl Rng,
) -> InfectionOutcome {
    let masked = world.agent(event.susceptible).masked;
    infection_from_variate(config.infect_prob(masked), rng.random::<f64>())
}

/// `u < p` with `u` uniform on `[0, 1)`.
pub fn infection_from_variate(p: f64, u: f64) -> InfectionOutcome {
    if u < p {
        InfectionOutcome::Infected
    } else {
        InfectionOutcome::Unaffected
    }
}

/// Linear ramp from 0 at infection to 1 after `ramp_duration` minutes.
pub fn ramp_level(now: Minute, infected_at: Minute, ramp_duration: Minute) -> f64 {
    let elapsed = f64::from(now.saturating_sub(infected_at));
    (elapsed / f64::from(ramp_duration)).min(1.0)
}

/// Recomputes every agent's symptom level. Infected agents follow the ramp;
/// everyone else sits at the baseline 0 (wearable noise is added at
/// emission time).
pub fn advance_symptoms(world: &mut WorldState, config: &SimConfig) {
    let now = world.now;
    for agent in &mut world.agents {
        agent.symptom_level = match (agent.health, agent.infected_at) {
            (Health::Infected, Some(t0)) => ramp_level(now, t0, config.ramp_duration),
            _ => 0.0,
        };
    }
}

/// One wearable sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TelemetryRecord {
    pub agent: AgentId,
    pub timestamp: Minute,
    pub fever: f64,
    pub fatigue: f64,
    pub cough: f64,
    pub composite: f64,
}

pub fn composite_score(fever: f64, fatigue: f64, cough: f64) -> f64 {
    let c = SYMPTOM_WEIGHTS[0] * fever + SYMPTOM_WEIGHTS[1] * fatigue + SYMPTOM_WEIGHTS[2] * cough;
    c.clamp(0.0, 1.0)
}

/// Samples the three vitals as `symptom_level` plus independent uniform noise
/// in `[-noise, noise]`, clamped to `[0, 1]`. Always consumes three draws.
pub fn emit_telemetry(agent: &crate::world::Agent, now: Minute, noise: f64, rng: &mut impl Rng) -> TelemetryRecord {
    let mut vital = || {
        let u: f64 = rng.random();
        (agent.symptom_level + noise * (2.0 * u - 1.0)).clamp(0.0, 1.0)
    };
    let fever = vital();
    let fatigue = vital();
    let cough = vital();
    TelemetryRecord {
        agent: agent.id,
        timestamp: now,
        fever,
        fatigue,
        cough,
        composite: composite_score(fever, fatigue, cough),
    }
}

/// True iff the newest `persistence` minutes of `history` are all at or
/// above `threshold`, sampled every `tick` with no gaps. `history` is in
/// time order and its last element is "now".
pub fn symptom_flag(history: &[TelemetryRecord], threshold: f64, persistence: Minute, tick: Minute) -> bool {
    let mut run: Minute = 0;
    let mut prev: Option<Minute> = None;
    for rec in history.iter().rev() {
        if rec.composite < threshold {
            break;
        }
        if let Some(p) = prev {
            if rec.timestamp + tick != p {
                break;
            }
        }
        run += tick;
        if run >= persistence {
            return true;
        }
        prev = Some(rec.timestamp);
    }
    false
}
