use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::types::Minute;

/// Running totals at the end of a tick.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    /// Distinct agents ever exposed to a confirmed patient.
    pub exposed_to_confirmed: u64,
    /// Distinct agents ever exposed to a flagged, unconfirmed carrier.
    pub exposed_to_symptomatic: u64,
    /// Transmissions during the run; initial seeds are not counted.
    pub infected_total: u64,
    pub notices_sent: u64,
    pub quarantines: u64,
}

impl Totals {
    pub fn minus(&self, earlier: &Totals) -> Totals {
        Totals {
            exposed_to_confirmed: self.exposed_to_confirmed - earlier.exposed_to_confirmed,
            exposed_to_symptomatic: self.exposed_to_symptomatic - earlier.exposed_to_symptomatic,
            infected_total: self.infected_total - earlier.infected_total,
            notices_sent: self.notices_sent - earlier.notices_sent,
            quarantines: self.quarantines - earlier.quarantines,
        }
    }

    pub fn dominated_by(&self, other: &Totals) -> bool {
        self.exposed_to_confirmed <= other.exposed_to_confirmed
            && self.exposed_to_symptomatic <= other.exposed_to_symptomatic
            && self.infected_total <= other.infected_total
            && self.notices_sent <= other.notices_sent
            && self.quarantines <= other.quarantines
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TickMetrics {
    pub time: Minute,
    pub new: Totals,
    pub cumulative: Totals,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MetricsSeries {
    rows: Vec<TickMetrics>,
}

pub const METRICS_HEADER: &str = "time,exposed_to_confirmed,exposed_to_symptomatic,infected_total,notices_sent,quarantines,new_exposed_to_confirmed,new_exposed_to_symptomatic,new_infected,new_notices,new_quarantines";

impl MetricsSeries {
    pub fn push(&mut self, time: Minute, cumulative: Totals) {
        let prev = self.final_totals();
        self.rows.push(TickMetrics {
            time,
            new: cumulative.minus(&prev),
            cumulative,
        });
    }

    pub fn rows(&self) -> &[TickMetrics] {
        &self.rows
    }

    /// Totals after the last tick; all zero for an empty run.
    pub fn final_totals(&self) -> Totals {
        self.rows.last().map(|r| r.cumulative).unwrap_or_default()
    }

    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "{METRICS_HEADER}")?;
        for r in &self.rows {
            let c = &r.cumulative;
            let n = &r.new;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.time,
                c.exposed_to_confirmed,
                c.exposed_to_symptomatic,
                c.infected_total,
                c.notices_sent,
                c.quarantines,
                n.exposed_to_confirmed,
                n.exposed_to_symptomatic,
                n.infected_total,
                n.notices_sent,
                n.quarantines,
            )?;
        }
        Ok(())
    }
}
