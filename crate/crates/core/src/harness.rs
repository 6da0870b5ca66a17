//! Multi-seed replication sweeps and their summary tables.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{MaskPolicy, SimConfig};
use crate::error::HarnessError;
use crate::metrics::Totals;
use crate::orchestrator::run_scenario;

/// The swept configuration field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepVariable {
    Population,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<usize>,
    pub seeds: Vec<u64>,
    pub scenarios: Vec<MaskPolicy>,
}

impl SweepSpec {
    pub fn population(values: Vec<usize>, seeds: Vec<u64>, scenarios: Vec<MaskPolicy>) -> Self {
        SweepSpec {
            variable: SweepVariable::Population,
            values,
            seeds,
            scenarios,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.values.is_empty() {
            return Err(HarnessError::Sweep("sweep values must not be empty".into()));
        }
        if self.values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HarnessError::Sweep("sweep values must be strictly increasing".into()));
        }
        if self.seeds.is_empty() {
            return Err(HarnessError::Sweep("at least one seed is required".into()));
        }
        if self.scenarios.is_empty() {
            return Err(HarnessError::Sweep("at least one scenario is required".into()));
        }
        Ok(())
    }

    /// Every (value, scenario, seed) point in sort order.
    fn points(&self) -> Vec<(usize, MaskPolicy, u64)> {
        let mut scenarios = self.scenarios.clone();
        scenarios.sort();
        scenarios.dedup();
        let mut seeds = self.seeds.clone();
        seeds.sort();
        seeds.dedup();
        let mut out = Vec::new();
        for &v in &self.values {
            for &s in &scenarios {
                for &seed in &seeds {
                    out.push((v, s, seed));
                }
            }
        }
        out
    }
}

/// Final totals of one replication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replication {
    pub population: usize,
    pub scenario: MaskPolicy,
    pub seed: u64,
    pub totals: Totals,
}

/// Applies one sweep point to the base configuration.
pub fn point_config(base: &SimConfig, population: usize, scenario: MaskPolicy, seed: u64) -> SimConfig {
    SimConfig {
        population,
        mask_policy: scenario,
        rng_seed: seed,
        ..base.clone()
    }
}

/// Runs every point of the sweep on at most `jobs` threads (0 = all cores).
/// The result is sorted by (population, scenario, seed) regardless of
/// scheduling.
pub fn run_sweep(base: &SimConfig, spec: &SweepSpec, jobs: usize) -> Result<Vec<Replication>, HarnessError> {
    spec.validate()?;
    let points = spec.points();
    for &(v, s, seed) in &points {
        point_config(base, v, s, seed).validate()?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| HarnessError::Sweep(e.to_string()))?;
    let mut out: Vec<Replication> = pool.install(|| {
        points
            .par_iter()
            .map(|&(population, scenario, seed)| {
                let cfg = point_config(base, population, scenario, seed);
                let outcome = run_scenario(&cfg, seed)?;
                Ok(Replication {
                    population,
                    scenario,
                    seed,
                    totals: outcome.final_totals(),
                })
            })
            .collect::<Result<_, HarnessError>>()
    })?;
    out.sort_by_key(|r| (r.population, r.scenario, r.seed));
    Ok(out)
}

/// Same as [`run_sweep`] on the calling thread.
pub fn run_sweep_sequential(base: &SimConfig, spec: &SweepSpec) -> Result<Vec<Replication>, HarnessError> {
    spec.validate()?;
    spec.points()
        .into_iter()
        .map(|(population, scenario, seed)| {
            let cfg = point_config(base, population, scenario, seed);
            Ok(Replication {
                population,
                scenario,
                seed,
                totals: run_scenario(&cfg, seed)?.final_totals(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SummaryMetric {
    ExposedToConfirmed,
    ExposedToSymptomatic,
    InfectedTotal,
}

impl SummaryMetric {
    pub const ALL: [SummaryMetric; 3] = [
        SummaryMetric::ExposedToConfirmed,
        SummaryMetric::ExposedToSymptomatic,
        SummaryMetric::InfectedTotal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SummaryMetric::ExposedToConfirmed => "exposed_to_confirmed",
            SummaryMetric::ExposedToSymptomatic => "exposed_to_symptomatic",
            SummaryMetric::InfectedTotal => "infected_total",
        }
    }

    pub fn of(self, t: &Totals) -> u64 {
        match self {
            SummaryMetric::ExposedToConfirmed => t.exposed_to_confirmed,
            SummaryMetric::ExposedToSymptomatic => t.exposed_to_symptomatic,
            SummaryMetric::InfectedTotal => t.infected_total,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub population: usize,
    pub scenario: MaskPolicy,
    pub metric: SummaryMetric,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single replication.
    pub stddev: f64,
    pub min: f64,
    pub max: f64,
}

pub const SUMMARY_HEADER: &str = "population,scenario,metric,mean,stddev,min,max";

/// Mean, sample stddev, min and max per (population, scenario, metric).
pub fn aggregate(results: &[Replication]) -> Vec<SummaryRow> {
    let mut sorted: Vec<&Replication> = results.iter().collect();
    sorted.sort_by_key(|r| (r.population, r.scenario, r.seed));
    let mut rows = Vec::new();
    for group in sorted.chunk_by(|a, b| (a.population, a.scenario) == (b.population, b.scenario)) {
        for metric in SummaryMetric::ALL {
            let xs: Vec<f64> = group.iter().map(|r| metric.of(&r.totals) as f64).collect();
            let n = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / n;
            let stddev = if xs.len() > 1 {
                (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
            } else {
                0.0
            };
            rows.push(SummaryRow {
                population: group[0].population,
                scenario: group[0].scenario,
                metric,
                mean,
                stddev,
                min: xs.iter().copied().fold(f64::INFINITY, f64::min),
                max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            });
        }
    }
    rows
}

/// Formats `x` with 6 significant digits, trailing zeros kept so column
/// widths stay stable.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0.00000".into() } else { x.to_string() };
    }
    let sci = format!("{x:.5e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if !(-4..6).contains(&exp) {
        return sci;
    }
    let decimals = (5 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Rounds to 6 significant digits.
pub fn round_sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().unwrap()
}

pub fn write_summary_csv(rows: &[SummaryRow], out: &mut impl Write) -> Result<(), HarnessError> {
    writeln!(out, "{SUMMARY_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.population,
            r.scenario,
            r.metric.as_str(),
            sig6(r.mean),
            sig6(r.stddev),
            sig6(r.min),
            sig6(r.max)
        )?;
    }
    Ok(())
}

/// Pretty JSON array of rows with numbers rounded to 6 significant digits.
pub fn write_summary_json(rows: &[SummaryRow], out: &mut impl Write) -> Result<(), HarnessError> {
    let rounded: Vec<SummaryRow> = rows
        .iter()
        .map(|r| SummaryRow {
            mean: round_sig6(r.mean),
            stddev: round_sig6(r.stddev),
            min: round_sig6(r.min),
            max: round_sig6(r.max),
            ..r.clone()
        })
        .collect();
    serde_json::to_writer_pretty(&mut *out, &rounded)?;
    writeln!(out)?;
    Ok(())
}

pub fn read_summary_json(text: &str) -> Result<Vec<SummaryRow>, HarnessError> {
    Ok(serde_json::from_str(text)?)
}
