//! Trains the DQN agent and evaluates its greedy policy.
//!
//!     cargo run --release --example train_dqn -- [episodes] [seed]

use mecsim::agents::{AgentKind, DqnConfig};
use mecsim::episode::EpisodeSummary;
use mecsim::harness::{evaluate, leading_trailing_means, train_agent, PolicySource, RunConfig, TrainObserver};

struct Curve(Vec<EpisodeSummary>);

impl TrainObserver for Curve {
    fn episode(&mut self, s: &EpisodeSummary) -> mecsim::Result<()> {
        self.0.push(*s);
        Ok(())
    }
}

fn main() -> mecsim::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let mut cfg = RunConfig::default();
    cfg.run.episodes = args.first().copied().unwrap_or(500);
    cfg.run.seed = args.get(1).copied().unwrap_or(0);
    // Shorter exploration so a desk-scale run still ends mostly greedy.
    cfg.agent.dqn = DqnConfig {
        epsilon_decay_episodes: cfg.run.episodes / 2,
        ..DqnConfig::default()
    };

    let mut curve = Curve(Vec::new());
    let ck = train_agent(&cfg, AgentKind::Dqn, &mut curve)?;
    let window = (cfg.run.episodes as usize / 5).max(1);
    if let Some((lead, trail)) = leading_trailing_means(&curve.0, window) {
        println!("mean episode reward: first {window} {lead:.3}, last {window} {trail:.3}");
    }
    let dqn = PolicySource::Dqn(ck.into_dqn()?.policy());
    let m = evaluate(&dqn, &cfg.env, &cfg.reward, 99, 500)?;
    println!(
        "dqn: total time {:.2}%, mMTC energy {:.2}%, URLLC time {:.2}%",
        m.total_time_pct, m.mmtc_energy_pct, m.urllc_time_pct
    );
    Ok(())
}
