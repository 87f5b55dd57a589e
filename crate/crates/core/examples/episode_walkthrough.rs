//! Steps through one arrival round by hand: observation, mask, action,
//! reward and shrinking pools. Writes the trace as JSON lines to stdout when
//! `--jsonl` is given.

use mecsim::episode::{EnvConfig, Round};
use mecsim::reward::RewardWeights;
use mecsim::seed::{stream, Domain};

fn main() -> mecsim::Result<()> {
    let jsonl = std::env::args().any(|a| a == "--jsonl");
    let env = EnvConfig::default();
    let weights = RewardWeights::default();
    let mut rng = stream(7, Domain::Evaluation, 0);
    let mut round = Round::start(&env, &weights, &mut rng, 0);
    if !jsonl {
        println!("round with {} tasks, pools {:?}", round.len(), round.pools());
    }

    while let Some(ctx) = round.context() {
        // Grant the largest feasible pair to every third task, local otherwise.
        let action = if ctx.position % 3 == 0 {
            ctx.mask
                .feasible()
                .filter(|&i| env.menu.decision(i).offload)
                .max_by_key(|&i| env.menu.pair(i))
                .unwrap_or(env.menu.local_index())
        } else {
            env.menu.local_index()
        };
        let slice = ctx.arrival.task.slice;
        let feasible = ctx.mask.count();
        let position = ctx.position;
        let step = round.apply_action(action)?;
        if !jsonl {
            println!(
                "#{:<3}{:<6} feasible {feasible:>2}  grant {:?}  reward {:+.3}  left ({}, {})",
                position,
                slice.name(),
                env.menu.pair(action),
                step.reward,
                step.pools.comm_remaining,
                step.pools.comp_remaining
            );
        }
    }
    let trace = round.finish();
    if jsonl {
        trace.write_jsonl(std::io::stdout().lock())?;
    } else {
        println!("total reward {:+.3}, pools telescope: {}", trace.total_reward(), trace.telescopes());
    }
    Ok(())
}
