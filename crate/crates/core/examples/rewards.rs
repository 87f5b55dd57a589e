//! Slice rewards for a handful of outcomes, and a pool-constraint audit.

use mecsim::episode::ResourcePools;
use mecsim::model::{AllocationDecision, ExecutionOutcome, SliceId};
use mecsim::reward::{check_pool_constraints, step_reward, RewardWeights};

fn outcome(t_local: f64, t_exe: f64, e_local: f64, e_exe: f64) -> ExecutionOutcome {
    ExecutionOutcome {
        t_local,
        t_exe,
        e_local,
        e_exe,
        ..Default::default()
    }
}

fn main() -> mecsim::Result<()> {
    let w = RewardWeights::default();
    let cases = [
        ("URLLC, local", SliceId::Urllc, outcome(0.5, 0.5, 0.0, 0.0)),
        ("URLLC, offloaded in time", SliceId::Urllc, outcome(0.5, 0.25, 0.0, 0.0)),
        ("URLLC, deadline missed", SliceId::Urllc, outcome(0.5, 0.9, 0.0, 0.0)),
        ("mMTC, local", SliceId::Mmtc, outcome(1.0, 1.0, 0.4, 0.4)),
        ("mMTC, offloaded", SliceId::Mmtc, outcome(1.0, 0.4, 0.4, 0.1)),
        ("mMTC, slower than local", SliceId::Mmtc, outcome(1.0, 2.0, 0.4, 0.4)),
    ];
    for (label, slice, o) in cases {
        let deadline = (slice == SliceId::Urllc).then_some(0.7);
        println!("{label:<28} reward {:+.4}", step_reward(slice, &o, deadline, &w)?);
    }

    let pools = ResourcePools::full(80, 40);
    let grants = [AllocationDecision::from_grants(16, 12), AllocationDecision::from_grants(16, 12)];
    println!("\n(32, 24) of (80, 40): ok = {}", check_pool_constraints(&grants, &pools).is_ok());
    let too_many = vec![AllocationDecision::from_grants(16, 8); 6];
    let audit = check_pool_constraints(&too_many, &pools);
    for v in &audit.violations {
        println!("(96, 48) of (80, 40): {:?} overshoot {}", v.pool, v.overshoot);
    }
    Ok(())
}
