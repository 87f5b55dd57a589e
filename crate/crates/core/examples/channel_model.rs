//! Capacity, delays and energy for one URLLC and one mMTC task across a few
//! grants, including the local branch.

use mecsim::episode::EnvConfig;
use mecsim::model::{execution_outcome, AllocationDecision, SliceId, Task, UserEquipment};

fn main() -> mecsim::Result<()> {
    let env = EnvConfig::default();
    let radio = env.radio.with_gain(1.0);

    for (slice, cycles) in [(SliceId::Urllc, 3.0e8), (SliceId::Mmtc, 2.2e8)] {
        let cfg = env.slice(slice);
        let task = Task::new(slice, 3e6, cycles, cfg.deadline)?;
        let ue = UserEquipment::new(1000.0, cfg.local_cpu_freq, cfg.tx_power, cfg.local_process_power)?;
        println!("{} task: {} bytes, {:.0e} cycles, UE at 1 km", slice.name(), task.bytes, task.cycles);
        println!("  k_comm k_comp  capacity[Mb/s]  t_trans[s]  t_mec[s]  t_exe[s]  e_exe[J]");
        for (c, p) in [(0, 0), (1, 1), (2, 2), (4, 4), (16, 12)] {
            let d = AllocationDecision::from_grants(c, p);
            let o = execution_outcome(&task, &ue, &radio, &env.mec, &d)?;
            println!(
                "  {c:>6} {p:>6}  {:>14.2}  {:>10.4}  {:>8.4}  {:>8.4}  {:>8.4}",
                o.capacity / 1e6,
                o.t_trans,
                o.t_mec,
                o.t_exe,
                o.e_exe
            );
        }
        println!();
    }
    Ok(())
}
