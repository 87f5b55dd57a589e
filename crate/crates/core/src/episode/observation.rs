use serde::{Deserialize, Serialize};

use super::config::EnvConfig;
use super::pools::ResourcePools;
use crate::model::{channel_capacity, MecParams, RadioParams, SliceId, Task, UserEquipment};

pub const OBS_DIM: usize = 9;

/// Normalized per-task observation. Component order:
///
/// | idx | component                    |
/// |-----|------------------------------|
/// | 0   | slice code (URLLC 0, mMTC 1) |
/// | 1   | task bytes                   |
/// | 2   | task cycles                  |
/// | 3   | deadline (0 for mMTC)        |
/// | 4   | single-RB uplink capacity    |
/// | 5   | remaining communication RBs  |
/// | 6   | remaining computation units  |
/// | 7   | device CPU frequency         |
/// | 8   | per-unit MEC frequency       |
///
/// Every component is `value / bound`, clipped to [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Observation(pub [f64; OBS_DIM]);

impl Observation {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Fixed normalization bounds, derived once from the environment config so
/// observations stay stationary across sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservationBounds {
    pub bytes: f64,
    pub cycles: f64,
    pub deadline: f64,
    pub capacity: f64,
    pub comm: f64,
    pub comp: f64,
    pub cpu_freq: f64,
    pub unit_freq: f64,
}

impl ObservationBounds {
    pub fn from_env(env: &EnvConfig) -> Self {
        let slices = [&env.urllc, &env.mmtc];
        let max_of = |f: &dyn Fn(&super::SliceArrivalConfig) -> f64| slices.iter().map(|s| f(s)).fold(0.0, f64::max);
        let tx_power = max_of(&|s| s.tx_power);
        // Capacity of one RB at 1 m under unit fading gain.
        let reference = UserEquipment {
            distance: 1.0,
            local_cpu_freq: 1.0,
            tx_power,
            local_process_power: 0.0,
            idle_power: 0.0,
        };
        let capacity = channel_capacity(1, &env.radio.with_gain(1.0), &reference).unwrap_or(1.0);
        ObservationBounds {
            bytes: max_of(&|s| s.bytes_range[1]),
            cycles: max_of(&|s| s.cycles_range[1]),
            deadline: env.deadline_bound,
            capacity,
            comm: f64::from(env.mec.total_comm_rbs),
            comp: f64::from(env.mec.total_comp_units),
            cpu_freq: max_of(&|s| s.local_cpu_freq),
            unit_freq: env.mec.unit_freq,
        }
    }
}

fn scaled(value: f64, bound: f64) -> f64 {
    if bound > 0.0 {
        (value / bound).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

pub fn build_observation(
    task: &Task,
    ue: &UserEquipment,
    radio: &RadioParams,
    mec: &MecParams,
    pools: &ResourcePools,
    bounds: &ObservationBounds,
) -> Observation {
    let per_rb = channel_capacity(1, radio, ue).unwrap_or(0.0);
    Observation([
        match task.slice {
            SliceId::Urllc => 0.0,
            SliceId::Mmtc => 1.0,
        },
        scaled(task.bytes, bounds.bytes),
        scaled(task.cycles, bounds.cycles),
        scaled(task.deadline.unwrap_or(0.0), bounds.deadline),
        scaled(per_rb, bounds.capacity),
        scaled(f64::from(pools.comm_remaining), bounds.comm),
        scaled(f64::from(pools.comp_remaining), bounds.comp),
        scaled(ue.local_cpu_freq, bounds.cpu_freq),
        scaled(mec.unit_freq, bounds.unit_freq),
    ])
}
