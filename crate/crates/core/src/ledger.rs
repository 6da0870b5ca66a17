//! Append-only record of everything the orchestrator observed or decided.
//!
//! Export format: one JSON object per line with the fields `time`, `kind`
//! and `payload`. Within a tick, entries are ordered by kind (in the
//! declaration order of [`Event`]), then camera id, then agent ids; entries
//! that tie keep the order in which they were produced.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::epidemic::SourceKind;
use crate::types::{AgentId, CellId, Minute};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload")]
pub enum Event {
    Exposure {
        agent: AgentId,
        source: AgentId,
        source_kind: SourceKind,
    },
    Infection {
        agent: AgentId,
        source: AgentId,
    },
    Violation {
        camera_id: String,
        frame_time: f64,
        detections: [usize; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        agents: Option<[AgentId; 2]>,
        distance: f64,
        /// False when debouncing suppressed the area scan.
        handled: bool,
    },
    AreaScan {
        scan: u64,
        camera_id: String,
        cells: Vec<CellId>,
        active_users: usize,
        confirmed: usize,
        symptomatic: usize,
    },
    QuarantineOrder {
        scan: u64,
        camera_id: String,
        agent: AgentId,
    },
    SelfIsolationNotice {
        /// `None` when raised by the global symptom watch rather than a scan.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scan: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        camera_id: Option<String>,
        agent: AgentId,
        flagged: AgentId,
    },
    /// Anonymous notice to everyone in the area; carries counts only.
    AreaAdvisory {
        scan: u64,
        camera_id: String,
        cells: Vec<CellId>,
        recipients: usize,
    },
}

impl Event {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Event::Exposure { .. } => "Exposure",
            Event::Infection { .. } => "Infection",
            Event::Violation { .. } => "Violation",
            Event::AreaScan { .. } => "AreaScan",
            Event::QuarantineOrder { .. } => "QuarantineOrder",
            Event::SelfIsolationNotice { .. } => "SelfIsolationNotice",
            Event::AreaAdvisory { .. } => "AreaAdvisory",
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Event::Exposure { .. } => 0,
            Event::Infection { .. } => 1,
            Event::Violation { .. } => 2,
            Event::AreaScan { .. } => 3,
            Event::QuarantineOrder { .. } => 4,
            Event::SelfIsolationNotice { .. } => 5,
            Event::AreaAdvisory { .. } => 6,
        }
    }

    pub fn camera_id(&self) -> Option<&str> {
        match self {
            Event::Violation { camera_id, .. }
            | Event::AreaScan { camera_id, .. }
            | Event::QuarantineOrder { camera_id, .. }
            | Event::AreaAdvisory { camera_id, .. } => Some(camera_id),
            Event::SelfIsolationNotice { camera_id, .. } => camera_id.as_deref(),
            Event::Exposure { .. } | Event::Infection { .. } => None,
        }
    }

    pub fn agents(&self) -> Vec<AgentId> {
        match self {
            Event::Exposure { agent, source, .. } | Event::Infection { agent, source } => {
                vec![*agent, *source]
            }
            Event::Violation { agents, .. } => agents.map(|a| a.to_vec()).unwrap_or_default(),
            Event::QuarantineOrder { agent, .. } => vec![*agent],
            Event::SelfIsolationNotice { agent, flagged, .. } => vec![*agent, *flagged],
            Event::AreaScan { .. } | Event::AreaAdvisory { .. } => vec![],
        }
    }

    pub fn scan(&self) -> Option<u64> {
        match self {
            Event::AreaScan { scan, .. } | Event::QuarantineOrder { scan, .. } | Event::AreaAdvisory { scan, .. } => {
                Some(*scan)
            }
            Event::SelfIsolationNotice { scan, .. } => *scan,
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub time: Minute,
    #[serde(flatten)]
    pub event: Event,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EventLedger {
    entries: Vec<LedgerEntry>,
}

impl EventLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends all events of one tick in canonical order.
    ///
    /// # Panics
    /// If `time` is earlier than the last appended entry.
    pub fn extend_tick(&mut self, time: Minute, mut events: Vec<Event>) {
        if let Some(last) = self.entries.last() {
            assert!(time >= last.time, "ledger time went backwards");
        }
        events.sort_by_cached_key(|e| (e.rank(), e.camera_id().unwrap_or("").to_owned(), e.agents()));
        self.entries
            .extend(events.into_iter().map(|event| LedgerEntry { time, event }));
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, kind: &str) -> usize {
        self.entries.iter().filter(|e| e.event.kind_name() == kind).count()
    }

    pub fn write_jsonl(&self, out: &mut impl Write) -> std::io::Result<()> {
        for e in &self.entries {
            serde_json::to_writer(&mut *out, e)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("json is utf-8")
    }

    pub fn read_jsonl(input: impl BufRead) -> std::io::Result<Self> {
        let mut entries = Vec::new();
        for line in input.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            entries.push(serde_json::from_str(&line).map_err(std::io::Error::other)?);
        }
        Ok(EventLedger { entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_within_tick() {
        let mut l = EventLedger::new();
        l.extend_tick(
            3,
            vec![
                Event::AreaScan {
                    scan: 0,
                    camera_id: "cam-b".into(),
                    cells: vec![CellId(1)],
                    active_users: 4,
                    confirmed: 0,
                    symptomatic: 0,
                },
                Event::Infection {
                    agent: AgentId(5),
                    source: AgentId(1),
                },
                Event::Exposure {
                    agent: AgentId(5),
                    source: AgentId(1),
                    source_kind: SourceKind::Confirmed,
                },
                Event::AreaScan {
                    scan: 1,
                    camera_id: "cam-a".into(),
                    cells: vec![CellId(0)],
                    active_users: 2,
                    confirmed: 0,
                    symptomatic: 0,
                },
            ],
        );
        let kinds: Vec<&str> = l.entries().iter().map(|e| e.event.kind_name()).collect();
        assert_eq!(kinds, ["Exposure", "Infection", "AreaScan", "AreaScan"]);
        assert_eq!(l.entries()[2].event.camera_id(), Some("cam-a"));
    }

    #[test]
    fn jsonl_shape_and_round_trip() {
        let mut l = EventLedger::new();
        l.extend_tick(
            1,
            vec![Event::AreaAdvisory {
                scan: 2,
                camera_id: "cam-00-00".into(),
                cells: vec![CellId(0)],
                recipients: 17,
            }],
        );
        l.extend_tick(
            2,
            vec![Event::Violation {
                camera_id: "cam-00-00".into(),
                frame_time: 2.0,
                detections: [0, 3],
                agents: Some([AgentId(4), AgentId(9)]),
                distance: 1.25,
                handled: true,
            }],
        );
        let text = l.to_jsonl();
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first["time"], 1);
        assert_eq!(first["kind"], "AreaAdvisory");
        assert_eq!(first["payload"]["recipients"], 17);
        let back = EventLedger::read_jsonl(text.as_bytes()).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    #[should_panic(expected = "backwards")]
    fn time_must_not_decrease() {
        let mut l = EventLedger::new();
        l.extend_tick(5, vec![]);
        l.extend_tick(
            5,
            vec![Event::Infection {
                agent: AgentId(0),
                source: AgentId(1),
            }],
        );
        l.extend_tick(4, vec![]);
    }
}
