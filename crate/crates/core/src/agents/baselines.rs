//! Rule-based allocators.
//!
//! Both baselines scan the menu's offloading pairs from the smallest total
//! grant upwards (ties: fewer RBs first) and take the first pair that fits
//! the available resources and meets the slice's criterion: URLLC must finish
//! within its deadline, mMTC must spend less device energy than running
//! locally. If nothing qualifies the task runs locally.

use crate::episode::{Arrival, DecisionContext, EnvConfig, ResourcePools};
use crate::error::Result;
use crate::model::{execution_outcome, AllocationDecision, RadioParams, SliceId};
use crate::seed::SimRng;

use super::policy::Policy;

/// Whether offloading with `decision` meets the slice criterion.
pub fn offload_qualifies(arrival: &Arrival, radio: &RadioParams, env: &EnvConfig, decision: &AllocationDecision) -> Result<bool> {
    if !decision.offload {
        return Ok(false);
    }
    let o = execution_outcome(&arrival.task, &arrival.ue, radio, &env.mec, decision)?;
    Ok(match arrival.task.slice {
        SliceId::Urllc => o.t_trans + o.t_mec <= arrival.task.deadline.unwrap_or(f64::INFINITY),
        SliceId::Mmtc => o.e_mec < o.e_local,
    })
}

/// Smallest qualifying menu pair within `(comm_available, comp_available)`,
/// or the local index.
pub fn smallest_qualifying_action(
    arrival: &Arrival,
    radio: &RadioParams,
    env: &EnvConfig,
    comm_available: u32,
    comp_available: u32,
) -> Result<usize> {
    for i in env.menu.offload_indices_by_size() {
        let (c, p) = env.menu.pair(i);
        if c <= comm_available && p <= comp_available && offload_qualifies(arrival, radio, env, &env.menu.decision(i))? {
            return Ok(i);
        }
    }
    Ok(env.menu.local_index())
}

/// First-come first-served against the shared pools.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Policy for Sequential {
    fn name(&self) -> String {
        "sequential".into()
    }

    fn act(&mut self, ctx: &DecisionContext<'_>, _rng: &mut SimRng) -> Result<usize> {
        smallest_qualifying_action(
            ctx.arrival,
            &ctx.radio,
            ctx.env,
            ctx.pools.comm_remaining,
            ctx.pools.comp_remaining,
        )
    }

    fn is_deterministic(&self) -> bool {
        true
    }
}

/// Splits both pools evenly between the slices at the start of each round and
/// applies the sequential rule inside the task's own share.
#[derive(Debug, Clone, Default)]
pub struct FairShare {
    shares: [(u32, u32); 2],
}

impl FairShare {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn share(&self, slice: SliceId) -> (u32, u32) {
        self.shares[slice.index()]
    }
}

impl Policy for FairShare {
    fn name(&self) -> String {
        "fair".into()
    }

    fn begin_episode(&mut self, pools: &ResourcePools) {
        let (comm, comp) = (pools.comm_total, pools.comp_total);
        self.shares = [(comm / 2, comp / 2), (comm - comm / 2, comp - comp / 2)];
    }

    fn act(&mut self, ctx: &DecisionContext<'_>, _rng: &mut SimRng) -> Result<usize> {
        let slice = ctx.arrival.task.slice.index();
        let (comm, comp) = self.shares[slice];
        let comm = comm.min(ctx.pools.comm_remaining);
        let comp = comp.min(ctx.pools.comp_remaining);
        let action = smallest_qualifying_action(ctx.arrival, &ctx.radio, ctx.env, comm, comp)?;
        let d = ctx.env.menu.decision(action);
        self.shares[slice].0 -= d.k_comm;
        self.shares[slice].1 -= d.k_comp;
        Ok(action)
    }

    fn is_deterministic(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::episode::{run_episode, Round};
    use crate::model::{Task, UserEquipment};
    use crate::reward::RewardWeights;
    use crate::seed::{stream, Domain};

    fn urllc(bytes: f64, cycles: f64, distance: f64, deadline: f64) -> Arrival {
        Arrival {
            task: Task::new(SliceId::Urllc, bytes, cycles, Some(deadline)).unwrap(),
            ue: UserEquipment::new(distance, 6e8, 0.2, 0.0).unwrap(),
            channel_gain: 1.0,
        }
    }

    /// Independent scan of every menu pair.
    fn brute_force(arrival: &Arrival, env: &EnvConfig, comm: u32, comp: u32) -> usize {
        let radio = env.radio.with_gain(arrival.channel_gain);
        let mut best: Option<(u32, u32, usize)> = None;
        for i in 0..env.menu.len() {
            let (c, p) = env.menu.pair(i);
            if c == 0 || p == 0 || c > comm || p > comp {
                continue;
            }
            let t_trans = arrival.task.bytes * 8.0
                / (f64::from(c) * env.radio.rb_bandwidth
                    * (1.0 + arrival.ue.tx_power * arrival.ue.distance.powf(-env.radio.path_loss_exp) * radio.channel_gain
                        / env.radio.noise_variance)
                        .log2());
            let t_mec = arrival.task.cycles / (f64::from(p) * env.mec.unit_freq);
            let ok = match arrival.task.slice {
                SliceId::Urllc => t_trans + t_mec <= arrival.task.deadline.unwrap(),
                SliceId::Mmtc => arrival.ue.tx_power * t_trans < arrival.ue.local_process_power * arrival.task.cycles / arrival.ue.local_cpu_freq,
            };
            if ok && best.is_none_or(|(bc, bp, _)| (c + p, c) < (bc + bp, bc)) {
                best = Some((c, p, i));
            }
        }
        best.map_or(0, |(_, _, i)| i)
    }

    #[test]
    fn reference_urllc_task_matches_brute_force() {
        let env = EnvConfig::default();
        let a = urllc(2e6, 1.8e8, 1000.0, 0.7);
        let radio = env.radio.with_gain(1.0);
        let got = smallest_qualifying_action(&a, &radio, &env, 80, 40).unwrap();
        assert_eq!(got, brute_force(&a, &env, 80, 40));
        assert_ne!(got, env.menu.local_index());
        // (1, 2) needs 0.31 + 0.45 s; (2, 2) needs 0.15 + 0.45 s.
        assert_eq!(env.menu.pair(got), (2, 2));
    }

    #[test]
    fn empty_pools_and_impossible_deadlines_go_local() {
        let env = EnvConfig::default();
        let a = urllc(2e6, 1.8e8, 1000.0, 0.7);
        let radio = env.radio.with_gain(1.0);
        assert_eq!(smallest_qualifying_action(&a, &radio, &env, 0, 0).unwrap(), 0);
        let hopeless = urllc(5e6, 6.6e8, 1800.0, 0.01);
        assert_eq!(smallest_qualifying_action(&hopeless, &radio, &env, 80, 40).unwrap(), 0);
    }

    #[test]
    fn fair_share_isolates_slices() {
        let env = EnvConfig::default();
        let mut fair = FairShare::new();
        fair.begin_episode(&env.full_pools());
        fair.shares[SliceId::Urllc.index()] = (0, 0);
        let w = RewardWeights::default();
        let arrivals = vec![urllc(2e6, 1.8e8, 500.0, 0.7)];
        let round = Round::from_arrivals(&env, &w, arrivals, 0);
        let ctx = round.context().unwrap();
        assert_eq!(fair.act(&ctx, &mut stream(0, Domain::Audit, 0)).unwrap(), 0);
        assert_eq!(fair.share(SliceId::Mmtc), (40, 20));
    }

    #[test]
    fn fair_urllc_grants_stay_within_half() {
        let mut env = EnvConfig::default();
        env.urllc.count_mean = 40.0;
        let w = RewardWeights::default();
        for i in 0..50 {
            let t = run_episode(&mut FairShare::new(), &mut stream(8, Domain::Audit, i), &env, &w, i).unwrap();
            let (c, p) = t
                .steps
                .iter()
                .filter(|s| s.arrival.task.slice == SliceId::Urllc)
                .fold((0, 0), |(c, p), s| (c + s.decision.k_comm, p + s.decision.k_comp));
            assert!(c <= 40 && p <= 20, "urllc took ({c}, {p})");
        }
    }

    #[test]
    fn fair_equals_sequential_until_urllc_share_runs_out() {
        let mut env = EnvConfig::default();
        env.mmtc.count_mean = 0.0;
        env.mmtc.count_variance = 0.0;
        let w = RewardWeights::default();
        for i in 0..30 {
            let seq = run_episode(&mut Sequential, &mut stream(6, Domain::Audit, i), &env, &w, i).unwrap();
            let fair = run_episode(&mut FairShare::new(), &mut stream(6, Domain::Audit, i), &env, &w, i).unwrap();
            let (mut c, mut p) = (0, 0);
            for (s, f) in seq.steps.iter().zip(&fair.steps) {
                assert_eq!(s.arrival, f.arrival);
                let (nc, np) = (c + s.decision.k_comm, p + s.decision.k_comp);
                if nc > 40 || np > 20 {
                    break;
                }
                assert_eq!(s.decision, f.decision);
                (c, p) = (nc, np);
            }
        }
    }
}
