use serde::{Deserialize, Serialize};

use super::trace::EpisodeTrace;
use crate::error::{Error, Result};
use crate::model::SliceId;

/// Pooled sums over any number of traces. Merging is plain addition, so
/// totals can be built per trace and combined in a fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricTotals {
    pub t_exe: f64,
    pub t_local: f64,
    pub urllc_t_exe: f64,
    pub urllc_t_local: f64,
    pub mmtc_e_exe: f64,
    pub mmtc_e_local: f64,
    pub tasks: [u64; 2],
    pub offloaded: [u64; 2],
    pub episodes: u64,
    pub reward: f64,
}

impl MetricTotals {
    pub fn from_trace(trace: &EpisodeTrace) -> Self {
        let mut t = MetricTotals {
            episodes: 1,
            ..Default::default()
        };
        for s in &trace.steps {
            let o = &s.outcome;
            let slice = s.arrival.task.slice;
            t.t_exe += o.t_exe;
            t.t_local += o.t_local;
            match slice {
                SliceId::Urllc => {
                    t.urllc_t_exe += o.t_exe;
                    t.urllc_t_local += o.t_local;
                }
                SliceId::Mmtc => {
                    t.mmtc_e_exe += o.e_exe;
                    t.mmtc_e_local += o.e_local;
                }
            }
            t.tasks[slice.index()] += 1;
            t.offloaded[slice.index()] += u64::from(s.decision.offload);
            t.reward += s.reward;
        }
        t
    }

    pub fn merge(&mut self, other: &MetricTotals) {
        self.t_exe += other.t_exe;
        self.t_local += other.t_local;
        self.urllc_t_exe += other.urllc_t_exe;
        self.urllc_t_local += other.urllc_t_local;
        self.mmtc_e_exe += other.mmtc_e_exe;
        self.mmtc_e_local += other.mmtc_e_local;
        for i in 0..2 {
            self.tasks[i] += other.tasks[i];
            self.offloaded[i] += other.offloaded[i];
        }
        self.episodes += other.episodes;
        self.reward += other.reward;
    }

    pub fn metrics(&self) -> Result<RoundMetrics> {
        let pct = |num: f64, den: f64, what: &str| {
            if den > 0.0 {
                Ok(100.0 * (num / den))
            } else {
                Err(Error::EmptyMetrics(format!("no {what} in the evaluated rounds")))
            }
        };
        Ok(RoundMetrics {
            total_time_pct: pct(self.t_exe, self.t_local, "tasks")?,
            mmtc_energy_pct: pct(self.mmtc_e_exe, self.mmtc_e_local, "mMTC tasks")?,
            urllc_time_pct: pct(self.urllc_t_exe, self.urllc_t_local, "URLLC tasks")?,
            tasks: self.tasks,
            offloaded: self.offloaded,
            episodes: self.episodes,
            mean_episode_reward: self.reward / self.episodes as f64,
        })
    }
}

/// The three headline percentages, each relative to all-local execution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundMetrics {
    pub total_time_pct: f64,
    pub mmtc_energy_pct: f64,
    pub urllc_time_pct: f64,
    pub tasks: [u64; 2],
    pub offloaded: [u64; 2],
    pub episodes: u64,
    pub mean_episode_reward: f64,
}

impl RoundMetrics {
    pub fn acceptance_rate(&self, slice: SliceId) -> f64 {
        let i = slice.index();
        if self.tasks[i] == 0 {
            0.0
        } else {
            self.offloaded[i] as f64 / self.tasks[i] as f64
        }
    }
}

/// Pools sums across every trace before dividing.
pub fn aggregate_metrics(traces: &[EpisodeTrace]) -> Result<RoundMetrics> {
    if traces.is_empty() {
        return Err(Error::EmptyMetrics("no traces".into()));
    }
    let mut totals = MetricTotals::default();
    for t in traces {
        totals.merge(&MetricTotals::from_trace(t));
    }
    totals.metrics()
}
