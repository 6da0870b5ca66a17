//! Seeded agent-based simulation of a three-layer containment system:
//! fixed cameras flag social-distancing violations, base stations resolve
//! which users are in the affected area, and wearables flag persistent
//! symptoms. The orchestrator turns each violation into an area scan and
//! then into quarantine orders or self-isolation notices, while an
//! epidemic model counts who was exposed to whom.
//!
//! ```
//! use cotrace::{run_scenario, SimConfig};
//!
//! let cfg = SimConfig { population: 100, horizon: 20, ..SimConfig::default() };
//! let out = run_scenario(&cfg, 7).unwrap();
//! assert_eq!(out.metrics.rows().len(), 20);
//! ```

pub mod config;
pub mod epidemic;
pub mod error;
pub mod harness;
pub mod infra;
pub mod ledger;
pub mod metrics;
pub mod orchestrator;
pub mod rng;
pub mod sensing;
pub mod spatial;
pub mod types;
pub mod world;

pub use config::{resolve, ConfigPatch, GridDims, MaskPolicy, Preset, SimConfig};
pub use epidemic::{ExposureEvent, SourceKind, TelemetryRecord};
pub use error::{ConfigError, HarnessError, InfraError, IngestError, OrchestratorError, SensingError};
pub use harness::{aggregate, run_sweep, Replication, SummaryRow, SweepSpec};
pub use infra::{CellMap, HealthRegistry, TelemetryStore};
pub use ledger::{Event, EventLedger, LedgerEntry};
pub use metrics::{MetricsSeries, Totals};
pub use orchestrator::{run_scenario, ScenarioOutcome, Simulation};
pub use sensing::{CameraZone, Detection, Frame, ViolationEvent};
pub use types::{AgentId, CellId, Minute, Position, Rect};
pub use world::{Agent, Health, WorldState};
