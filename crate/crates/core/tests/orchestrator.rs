use std::collections::{BTreeMap, BTreeSet, HashSet};

use cotrace::infra::CellOccupancy;
use cotrace::orchestrator::{apply_quarantine, handle_violation, AreaContext};
use cotrace::{
    run_scenario, AgentId, Event, EventLedger, GridDims, Health, MaskPolicy, Preset, SimConfig, Simulation, SourceKind,
    Totals,
};

fn small(population: usize, horizon: u32) -> SimConfig {
    SimConfig {
        area_width: 300.0,
        area_height: 300.0,
        population,
        initial_confirmed: 10,
        initial_carriers: 10,
        horizon,
        ..SimConfig::default()
    }
}

fn table_small() -> SimConfig {
    SimConfig {
        population: 400,
        area_width: 400.0,
        area_height: 400.0,
        ..Preset::PaperTable.config()
    }
}

#[test]
fn same_seed_same_bytes() {
    let cfg = small(300, 200);
    let a = run_scenario(&cfg, 42).unwrap();
    let b = run_scenario(&cfg, 42).unwrap();
    assert_eq!(a.ledger.to_jsonl(), b.ledger.to_jsonl());
    assert_eq!(a.metrics, b.metrics);
    let c = run_scenario(&cfg, 43).unwrap();
    assert_ne!(a.ledger.to_jsonl(), c.ledger.to_jsonl());
}

#[test]
fn ledger_time_is_nondecreasing_and_ordered_within_tick() {
    let out = run_scenario(&small(300, 200), 5).unwrap();
    let rank = |e: &Event| {
        [
            "Exposure",
            "Infection",
            "Violation",
            "AreaScan",
            "QuarantineOrder",
            "SelfIsolationNotice",
            "AreaAdvisory",
        ]
        .iter()
        .position(|k| *k == e.kind_name())
        .unwrap()
    };
    for w in out.ledger.entries().windows(2) {
        assert!(w[0].time <= w[1].time);
        if w[0].time == w[1].time {
            let k0 = (rank(&w[0].event), w[0].event.camera_id().unwrap_or(""));
            let k1 = (rank(&w[1].event), w[1].event.camera_id().unwrap_or(""));
            assert!(k0 <= k1, "{:?} before {:?}", w[0], w[1]);
        }
    }
}

#[test]
fn cumulative_metrics_are_monotone_and_bounded() {
    for seed in 0..3 {
        let cfg = small(400, 300);
        let out = run_scenario(&cfg, seed).unwrap();
        let rows = out.metrics.rows();
        assert_eq!(rows.len(), 300);
        for w in rows.windows(2) {
            assert!(w[0].cumulative.dominated_by(&w[1].cumulative));
            assert_eq!(w[1].time, w[0].time + 1);
        }
        let t = out.final_totals();
        let seeds = (cfg.initial_confirmed + cfg.initial_carriers) as u64;
        assert!(t.infected_total <= t.exposed_to_confirmed + t.exposed_to_symptomatic + seeds);
        assert!(t.exposed_to_confirmed > 0);
    }
}

/// Every infection follows an exposure of the same pair in the same tick,
/// every pair is exposed at most once, and no agent is infected twice.
#[test]
fn infections_are_caused_and_exposures_unique() {
    let out = run_scenario(&small(400, 300), 9).unwrap();
    let mut exposed_pairs = HashSet::new();
    let mut this_tick: HashSet<(AgentId, AgentId)> = HashSet::new();
    let mut infected = HashSet::new();
    let mut tick = 0;
    for e in out.ledger.entries() {
        if e.time != tick {
            tick = e.time;
            this_tick.clear();
        }
        match &e.event {
            Event::Exposure { agent, source, .. } => {
                assert!(exposed_pairs.insert((*agent, *source)), "pair exposed twice");
                this_tick.insert((*agent, *source));
            }
            Event::Infection { agent, source } => {
                assert!(this_tick.contains(&(*agent, *source)));
                assert!(infected.insert(*agent));
            }
            _ => {}
        }
    }
    assert!(!infected.is_empty());
    assert_eq!(infected.len() as u64, out.final_totals().infected_total);
    let ever_infected = out
        .world
        .agents
        .iter()
        .filter(|a| a.health == Health::Infected && a.infected_at.is_some_and(|t| t > 0))
        .count();
    assert_eq!(ever_infected, infected.len());
}

#[test]
fn exposure_counters_match_distinct_agents() {
    let out = run_scenario(&small(400, 300), 2).unwrap();
    let mut per_tick: BTreeMap<(u32, AgentId), SourceKind> = BTreeMap::new();
    for e in out.ledger.entries() {
        if let Event::Exposure { agent, source_kind, .. } = &e.event {
            per_tick
                .entry((e.time, *agent))
                .and_modify(|k| *k = (*k).min(*source_kind))
                .or_insert(*source_kind);
        }
    }
    let mut confirmed = BTreeSet::new();
    let mut symptomatic = BTreeSet::new();
    for ((_, agent), kind) in per_tick {
        match kind {
            SourceKind::Confirmed => confirmed.insert(agent),
            SourceKind::Symptomatic => symptomatic.insert(agent),
        };
    }
    let t = out.final_totals();
    assert_eq!(t.exposed_to_confirmed, confirmed.len() as u64);
    assert_eq!(t.exposed_to_symptomatic, symptomatic.len() as u64);
}

#[test]
fn no_sources_means_no_exposures() {
    let cfg = SimConfig {
        initial_confirmed: 0,
        initial_carriers: 0,
        ..small(400, 200)
    };
    let out = run_scenario(&cfg, 1).unwrap();
    assert_eq!(out.ledger.count("Exposure"), 0);
    assert_eq!(out.ledger.count("Infection"), 0);
    assert_eq!(out.final_totals().infected_total, 0);
}

/// Orders and notices come after a violation and a scan of the same
/// camera in the same tick, and scans that quarantine never notify.
#[test]
fn causality_exclusivity_and_anonymity() {
    for cfg in [small(400, 300), table_small()] {
        let out = run_scenario(&cfg, 4).unwrap();
        let mut scans: BTreeMap<u64, (u32, String)> = BTreeMap::new();
        let mut violations: HashSet<(u32, String)> = HashSet::new();
        let mut actions: BTreeMap<u64, BTreeSet<&str>> = BTreeMap::new();
        for e in out.ledger.entries() {
            match &e.event {
                Event::Violation {
                    camera_id,
                    handled: true,
                    ..
                } => {
                    violations.insert((e.time, camera_id.clone()));
                }
                Event::AreaScan { scan, camera_id, .. } => {
                    assert!(violations.contains(&(e.time, camera_id.clone())));
                    scans.insert(*scan, (e.time, camera_id.clone()));
                }
                Event::QuarantineOrder { scan, camera_id, agent } => {
                    assert_eq!(scans[scan], (e.time, camera_id.clone()));
                    assert!(out.world.registry.contains(*agent));
                    actions.entry(*scan).or_default().insert("order");
                }
                Event::SelfIsolationNotice { scan, camera_id, .. } => {
                    let scan = scan.expect("watch is off");
                    assert_eq!(scans[&scan], (e.time, camera_id.clone().unwrap()));
                    actions.entry(scan).or_default().insert("notice");
                }
                Event::AreaAdvisory { scan, .. } => {
                    actions.entry(*scan).or_default().insert("advisory");
                }
                _ => {}
            }
        }
        assert!(!scans.is_empty());
        for kinds in actions.values() {
            assert!(!(kinds.contains("notice") && (kinds.contains("order") || kinds.contains("advisory"))));
        }
        for line in out.ledger.to_jsonl().lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            if v["kind"] == "AreaAdvisory" {
                let keys: BTreeSet<&str> = v["payload"].as_object().unwrap().keys().map(String::as_str).collect();
                assert_eq!(keys, BTreeSet::from(["camera_id", "cells", "recipients", "scan"]));
            }
        }
    }
}

#[test]
fn quarantined_patients_stop_exposing() {
    let cfg = table_small();
    assert!(cfg.enforce_quarantine);
    let out = run_scenario(&cfg, 3).unwrap();
    let mut ordered_at: BTreeMap<AgentId, u32> = BTreeMap::new();
    for e in out.ledger.entries() {
        match &e.event {
            Event::QuarantineOrder { agent, .. } => {
                ordered_at.entry(*agent).or_insert(e.time);
            }
            Event::Exposure { source, .. } => {
                if let Some(&t) = ordered_at.get(source) {
                    assert!(e.time <= t, "quarantined source {source} exposed someone at {}", e.time);
                }
            }
            _ => {}
        }
    }
    assert!(!ordered_at.is_empty());
    for id in ordered_at.keys() {
        assert!(out.world.agent(*id).quarantined);
    }
    // one order per patient
    assert_eq!(out.ledger.count("QuarantineOrder"), ordered_at.len());
}

#[test]
fn quarantining_every_patient_up_front() {
    let cfg = SimConfig {
        initial_carriers: 0,
        ..small(400, 200)
    };
    let mut sim = Simulation::new(cfg).unwrap();
    let ids: Vec<AgentId> = sim.world().registry.iter().copied().collect();
    assert_eq!(ids.len(), 10);
    for id in ids {
        apply_quarantine(id, sim.world_mut()).unwrap();
    }
    let out = sim.run();
    assert_eq!(out.final_totals().exposed_to_confirmed, 0);
    assert_eq!(out.ledger.count("Exposure"), 0);
}

#[test]
fn enforcement_never_increases_confirmed_exposure() {
    for seed in 0..5 {
        let on = table_small();
        let off = SimConfig {
            enforce_quarantine: false,
            ..on.clone()
        };
        let a = run_scenario(&on, seed).unwrap().final_totals();
        let b = run_scenario(&off, seed).unwrap().final_totals();
        assert!(
            a.exposed_to_confirmed <= b.exposed_to_confirmed,
            "seed {seed}: {a:?} vs {b:?}"
        );
    }
}

#[test]
fn masks_dominate_on_paired_seeds() {
    for seed in 0..5 {
        let none = small(400, 300);
        let all = SimConfig {
            mask_policy: MaskPolicy::AllMasked,
            ..none.clone()
        };
        let a = run_scenario(&all, seed).unwrap().final_totals();
        let n = run_scenario(&none, seed).unwrap().final_totals();
        assert!(a.infected_total <= n.infected_total, "seed {seed}: {a:?} vs {n:?}");
    }
}

#[test]
fn global_watch_notifies_without_violations() {
    let cfg = SimConfig {
        global_symptom_watch: true,
        distance_violation_threshold: 1e-9,
        ..small(300, 200)
    };
    let out = run_scenario(&cfg, 8).unwrap();
    assert_eq!(out.ledger.count("Violation"), 0);
    assert!(out.ledger.count("SelfIsolationNotice") > 0);
    for e in out.ledger.entries() {
        if let Event::SelfIsolationNotice { scan, camera_id, .. } = &e.event {
            assert!(scan.is_none() && camera_id.is_none());
        }
    }
}

#[test]
fn watch_is_off_by_default() {
    let cfg = SimConfig {
        distance_violation_threshold: 1e-9,
        ..small(300, 200)
    };
    let out = run_scenario(&cfg, 8).unwrap();
    assert_eq!(out.ledger.count("SelfIsolationNotice"), 0);
    assert_eq!(out.final_totals().notices_sent, 0);
}

#[test]
fn ledger_file_round_trip() {
    let out = run_scenario(&small(200, 100), 6).unwrap();
    let text = out.ledger.to_jsonl();
    let back = EventLedger::read_jsonl(text.as_bytes()).unwrap();
    assert_eq!(back, out.ledger);
    assert_eq!(back.to_jsonl(), text);
}

#[test]
fn horizon_zero() {
    let cfg = SimConfig {
        horizon: 0,
        ..SimConfig::default()
    };
    let out = run_scenario(&cfg, 1).unwrap();
    assert!(out.ledger.is_empty());
    assert_eq!(out.final_totals(), Totals::default());
}

#[test]
fn invalid_config_is_rejected() {
    let cfg = SimConfig {
        speed_min: 5.0,
        speed_max: 1.0,
        ..SimConfig::default()
    };
    assert!(run_scenario(&cfg, 1).is_err());
}

#[test]
fn handle_violation_is_pure() {
    let cfg = SimConfig {
        camera_grid: GridDims::new(2, 2),
        cell_grid: GridDims::new(2, 2),
        ..small(300, 1)
    };
    let sim = Simulation::new(cfg.clone()).unwrap();
    let occupancy = CellOccupancy::build(sim.cells(), sim.world());
    let ctx = AreaContext::new(&cfg, sim.world(), &occupancy, sim.telemetry());
    let v = cotrace::ViolationEvent {
        camera_id: sim.cameras()[0].camera_id.clone(),
        frame_time: 0.0,
        pair: (0, 1),
        agents: None,
        distance: 0.5,
    };
    let a = handle_violation(&v, &sim.cameras()[0], &ctx, 0, &BTreeSet::new());
    let b = handle_violation(&v, &sim.cameras()[0], &ctx, 0, &BTreeSet::new());
    assert_eq!(a, b);
    assert_eq!(a[0].kind_name(), "AreaScan");
}
