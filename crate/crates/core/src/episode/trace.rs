use std::io::Write;

use serde::{Deserialize, Serialize};

use super::arrivals::Arrival;
use super::observation::Observation;
use super::pools::ResourcePools;
use crate::error::Result;
use crate::model::{AllocationDecision, ExecutionOutcome, SliceId};

/// One decided task. This is also the JSON-lines record schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub position: usize,
    pub arrival: Arrival,
    pub observation: Observation,
    pub action: usize,
    pub decision: AllocationDecision,
    pub outcome: ExecutionOutcome,
    pub reward: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeTrace {
    pub round_seed: u64,
    pub pools_initial: ResourcePools,
    pub pools_final: ResourcePools,
    pub steps: Vec<StepRecord>,
}

impl EpisodeTrace {
    pub fn grants(&self) -> impl Iterator<Item = &AllocationDecision> {
        self.steps.iter().map(|s| &s.decision)
    }

    pub fn total_reward(&self) -> f64 {
        self.steps.iter().map(|s| s.reward).sum()
    }

    /// Initial pools minus every grant equals the final pools, per pool.
    pub fn telescopes(&self) -> bool {
        let (comm, comp) = self.grants().fold((0u64, 0u64), |(c, p), g| {
            (c + u64::from(g.k_comm), p + u64::from(g.k_comp))
        });
        u64::from(self.pools_initial.comm_remaining) == comm + u64::from(self.pools_final.comm_remaining)
            && u64::from(self.pools_initial.comp_remaining) == comp + u64::from(self.pools_final.comp_remaining)
    }

    /// Writes one JSON object per step, newline separated.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for step in &self.steps {
            serde_json::to_writer(&mut out, step)?;
            out.write_all(b"\n").map_err(|e| crate::Error::io("<trace>", e))?;
        }
        Ok(())
    }
}

/// Per-episode numbers used for training curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpisodeSummary {
    pub episode: u64,
    pub tasks: usize,
    pub reward: f64,
    pub offloaded_urllc: usize,
    pub offloaded_mmtc: usize,
}

impl EpisodeSummary {
    pub fn from_trace(episode: u64, trace: &EpisodeTrace) -> Self {
        let offloaded = |slice: SliceId| {
            trace
                .steps
                .iter()
                .filter(|s| s.arrival.task.slice == slice && s.decision.offload)
                .count()
        };
        EpisodeSummary {
            episode,
            tasks: trace.steps.len(),
            reward: trace.total_reward(),
            offloaded_urllc: offloaded(SliceId::Urllc),
            offloaded_mmtc: offloaded(SliceId::Mmtc),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::RandomPolicy;
    use crate::episode::{run_episode, EnvConfig};
    use crate::reward::RewardWeights;
    use crate::seed::{stream, Domain};

    #[test]
    fn jsonl_has_one_parseable_line_per_step() {
        let env = EnvConfig::default();
        let trace = run_episode(
            &mut RandomPolicy,
            &mut stream(3, Domain::Audit, 0),
            &env,
            &RewardWeights::default(),
            0,
        )
        .unwrap();
        let mut buf = Vec::new();
        trace.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), trace.steps.len());
        let back: StepRecord = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(back, trace.steps[0]);
    }
}
