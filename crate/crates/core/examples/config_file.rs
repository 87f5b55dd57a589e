//! Loads a partial TOML configuration, shows the filled-in defaults and a
//! path-qualified validation error.

use mecsim::harness::RunConfig;

const PARTIAL: &str = r#"
[env.urllc]
count_mean = 15.0

[reward]
slice_weight_urllc = 2.0

[run]
seed = 7
experiments = 1000
"#;

fn main() -> mecsim::Result<()> {
    let cfg = RunConfig::from_toml_str(PARTIAL, "inline")?;
    println!("URLLC mean {}, deadline {:?}", cfg.env.urllc.count_mean, cfg.env.urllc.deadline);
    println!("PPO lr {}, discount {}", cfg.ppo_config().learning_rate, cfg.ppo_config().discount);
    println!("--- full configuration ---\n{}", cfg.to_toml_string()?);

    match RunConfig::from_toml_str("[env.mec]\ntotal_comm_rbs = -1\n", "bad.toml") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("negative pool accepted"),
    }
    Ok(())
}
