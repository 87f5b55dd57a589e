//! Local-only, sequential and fair-share baselines on identical arrival
//! rounds at the default operating point.
//!
//!     cargo run --release --example baselines -- [experiments]

use mecsim::harness::{evaluate, PolicySource, RunConfig};

fn main() -> mecsim::Result<()> {
    let experiments = std::env::args().nth(1).map_or(2000, |a| a.parse().expect("experiment count"));
    let cfg = RunConfig::default();
    println!("{experiments} rounds, URLLC mean {}, mMTC mean {}", cfg.env.urllc.count_mean, cfg.env.mmtc.count_mean);
    println!("{:<12}{:>12}{:>14}{:>13}{:>12}{:>12}", "policy", "total time%", "mMTC energy%", "URLLC time%", "URLLC off", "mMTC off");
    for source in [PolicySource::Local, PolicySource::Sequential, PolicySource::Fair] {
        let m = evaluate(&source, &cfg.env, &cfg.reward, cfg.run.seed, experiments)?;
        println!(
            "{:<12}{:>12.2}{:>14.2}{:>13.2}{:>12.3}{:>12.3}",
            source.label(),
            m.total_time_pct,
            m.mmtc_energy_pct,
            m.urllc_time_pct,
            m.acceptance_rate(mecsim::model::SliceId::Urllc),
            m.acceptance_rate(mecsim::model::SliceId::Mmtc)
        );
    }
    Ok(())
}
