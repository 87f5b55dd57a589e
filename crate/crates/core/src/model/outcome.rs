use serde::{Deserialize, Serialize};

use super::{
    channel_capacity, local_energy, local_processing_time, mec_energy, mec_equiv_frequency, mec_processing_time,
    transmission_delay, AllocationDecision, MecParams, RadioParams, Task, UserEquipment,
};
use crate::error::{Error, Result};

/// Latencies and energies of one task under one decision. Offload-only fields
/// (`capacity`, `t_trans`, `f_equiv`, `t_mec`, `e_mec`) are zero on the local
/// branch.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ExecutionOutcome {
    pub capacity: f64,
    pub t_trans: f64,
    pub f_equiv: f64,
    pub t_local: f64,
    pub t_mec: f64,
    pub t_exe: f64,
    pub e_local: f64,
    pub e_mec: f64,
    pub e_exe: f64,
}

pub fn execution_outcome(
    task: &Task,
    ue: &UserEquipment,
    radio: &RadioParams,
    mec: &MecParams,
    decision: &AllocationDecision,
) -> Result<ExecutionOutcome> {
    if !decision.is_consistent() {
        return Err(Error::invalid(
            "decision",
            format!("offload flag disagrees with grants {decision:?}"),
        ));
    }
    let t_local = local_processing_time(task, ue)?;
    let e_local = local_energy(ue, t_local);
    if !decision.offload {
        return Ok(ExecutionOutcome {
            t_local,
            t_exe: t_local,
            e_local,
            e_exe: e_local,
            ..ExecutionOutcome::default()
        });
    }
    let capacity = channel_capacity(decision.k_comm, radio, ue)?;
    let t_trans = transmission_delay(task, capacity)?;
    let f_equiv = mec_equiv_frequency(decision.k_comp, mec);
    let t_mec = mec_processing_time(task, f_equiv)?;
    let e_mec = mec_energy(ue, t_trans, t_mec);
    Ok(ExecutionOutcome {
        capacity,
        t_trans,
        f_equiv,
        t_local,
        t_mec,
        t_exe: t_trans + t_mec,
        e_local,
        e_mec,
        e_exe: e_mec,
    })
}
