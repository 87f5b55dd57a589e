//! Trains PPO at the default operating point and compares the greedy policy
//! with the rule-based baselines on the same evaluation rounds.
//!
//!     cargo run --release --example train_ppo -- [episodes] [seed] [experiments]

use std::time::Instant;

use mecsim::agents::{AgentKind, PpoStats};
use mecsim::episode::EpisodeSummary;
use mecsim::harness::{evaluate, leading_trailing_means, train_agent, PolicySource, RunConfig, TrainObserver};

#[derive(Default)]
struct Progress {
    curve: Vec<EpisodeSummary>,
    last: Option<PpoStats>,
}

impl TrainObserver for Progress {
    fn episode(&mut self, s: &EpisodeSummary) -> mecsim::Result<()> {
        self.curve.push(*s);
        if (s.episode + 1) % 500 == 0 {
            let tail = &self.curve[self.curve.len() - 500..];
            let mean = tail.iter().map(|e| e.reward).sum::<f64>() / 500.0;
            let off: usize = tail.iter().map(|e| e.offloaded_urllc + e.offloaded_mmtc).sum();
            let tasks: usize = tail.iter().map(|e| e.tasks).sum();
            let st = self.last.unwrap_or_default();
            println!(
                "episode {:>6}  mean reward {:>8.3}  offloaded {:>5.1}%  entropy {:.3}  kl {:.5}",
                s.episode + 1,
                mean,
                100.0 * off as f64 / tasks as f64,
                st.entropy,
                st.approx_kl
            );
        }
        Ok(())
    }

    fn ppo_update(&mut self, stats: &PpoStats) {
        self.last = Some(*stats);
    }
}

fn main() -> mecsim::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let mut cfg = RunConfig::default();
    cfg.run.episodes = args.first().copied().unwrap_or(2000);
    cfg.run.seed = args.get(1).copied().unwrap_or(0);
    let experiments = args.get(2).copied().unwrap_or(2000);

    let started = Instant::now();
    let mut progress = Progress::default();
    let ck = train_agent(&cfg, AgentKind::Ppo, &mut progress)?;
    println!("trained {} episodes in {:.1?}", cfg.run.episodes, started.elapsed());
    if let Some((lead, trail)) = leading_trailing_means(&progress.curve, 1000) {
        println!("mean episode reward: first 1000 {lead:.3}, last 1000 {trail:.3}");
    }

    let ppo = PolicySource::Ppo(ck.into_ppo()?.policy(true));
    println!("{:<12}{:>12}{:>14}{:>13}{:>14}", "policy", "total time%", "mMTC energy%", "URLLC time%", "mean reward");
    for source in [PolicySource::Local, PolicySource::Sequential, PolicySource::Fair, ppo] {
        let m = evaluate(&source, &cfg.env, &cfg.reward, 1_000_003, experiments)?;
        println!(
            "{:<12}{:>12.2}{:>14.2}{:>13.2}{:>14.3}",
            source.label(),
            m.total_time_pct,
            m.mmtc_energy_pct,
            m.urllc_time_pct,
            m.mean_episode_reward
        );
    }
    Ok(())
}
