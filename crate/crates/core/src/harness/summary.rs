use std::fmt;

use super::InstanceRecord;
use crate::{Error, Result};

/// Relative slack when comparing HH against the single-hub cost.
const HUB_TOLERANCE: f64 = 1e-9;

/// Win counts split by whether the HH placement used several hubs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HubSplit {
    pub multiple_hubs: usize,
    pub single_hub: usize,
}

impl HubSplit {
    fn count(&mut self, r: &InstanceRecord) {
        if r.distinct_hubs > 1 {
            self.multiple_hubs += 1;
        } else {
            self.single_hub += 1;
        }
    }

    pub fn total(&self) -> usize {
        self.multiple_hubs + self.single_hub
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub instances: usize,
    /// HH strictly cheaper than SP.
    pub hh_beats_sp: HubSplit,
    /// HH strictly cheaper than SP and no worse than the best single hub.
    pub hh_cheapest: HubSplit,
    pub ratio_min: f64,
    pub ratio_median: f64,
    pub ratio_max: f64,
}

pub fn summarize(records: &[InstanceRecord]) -> Result<Summary> {
    if records.is_empty() {
        return Err(Error::Empty("no records to summarize"));
    }
    let mut beats = HubSplit::default();
    let mut cheapest = HubSplit::default();
    for r in records {
        if r.hh_link_cost < r.sp_link_cost {
            beats.count(r);
            if r.hh_link_cost <= r.hub_link_cost + HUB_TOLERANCE * r.hub_link_cost.abs() {
                cheapest.count(r);
            }
        }
    }
    let mut ratios: Vec<f64> = records.iter().map(|r| r.cost_ratio).collect();
    ratios.sort_by(f64::total_cmp);
    let k = ratios.len();
    let median = if k % 2 == 1 { ratios[k / 2] } else { (ratios[k / 2 - 1] + ratios[k / 2]) / 2.0 };
    Ok(Summary {
        instances: k,
        hh_beats_sp: beats,
        hh_cheapest: cheapest,
        ratio_min: ratios[0],
        ratio_median: median,
        ratio_max: ratios[k - 1],
    })
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "instances                      {}", self.instances)?;
        writeln!(f, "                               HH < SP   HH cheapest")?;
        writeln!(f, "multiple hubs                  {:>7}   {:>11}", self.hh_beats_sp.multiple_hubs, self.hh_cheapest.multiple_hubs)?;
        writeln!(f, "single hub                     {:>7}   {:>11}", self.hh_beats_sp.single_hub, self.hh_cheapest.single_hub)?;
        writeln!(f, "total                          {:>7}   {:>11}", self.hh_beats_sp.total(), self.hh_cheapest.total())?;
        write!(f, "cost ratio SP/HH  min {:.6}  median {:.6}  max {:.6}", self.ratio_min, self.ratio_median, self.ratio_max)
    }
}
