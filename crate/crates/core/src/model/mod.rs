//! Physical-layer and compute-layer model of one offloading request.
//!
//! Everything here is a pure function of its arguments. Units are SI
//! throughout: bytes, cycles, seconds, hertz, watts, joules, meters.

mod compute;
mod outcome;
mod radio;

pub use compute::{local_energy, local_processing_time, mec_energy, mec_equiv_frequency, mec_processing_time};
pub use outcome::{execution_outcome, ExecutionOutcome};
pub use radio::{channel_capacity, transmission_delay};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Network slice a request belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SliceId {
    Urllc,
    Mmtc,
}

impl SliceId {
    pub const ALL: [SliceId; 2] = [SliceId::Urllc, SliceId::Mmtc];

    /// Numeric code used in observations (URLLC = 0, mMTC = 1).
    pub fn code(self) -> f64 {
        match self {
            SliceId::Urllc => 0.0,
            SliceId::Mmtc => 1.0,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            SliceId::Urllc => "urllc",
            SliceId::Mmtc => "mmtc",
        }
    }
}

/// One offloading request.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Task {
    pub slice: SliceId,
    pub bytes: f64,
    pub cycles: f64,
    /// Latency budget in seconds. URLLC tasks always carry one, mMTC never.
    pub deadline: Option<f64>,
}

impl Task {
    pub fn new(slice: SliceId, bytes: f64, cycles: f64, deadline: Option<f64>) -> Result<Self> {
        let task = Task {
            slice,
            bytes,
            cycles,
            deadline,
        };
        task.validate()?;
        Ok(task)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bytes > 0.0 && self.bytes.is_finite()) {
            return Err(Error::invalid("bytes", format!("must be positive, got {}", self.bytes)));
        }
        if !(self.cycles > 0.0 && self.cycles.is_finite()) {
            return Err(Error::invalid("cycles", format!("must be positive, got {}", self.cycles)));
        }
        match (self.slice, self.deadline) {
            (SliceId::Urllc, Some(d)) if d > 0.0 && d.is_finite() => Ok(()),
            (SliceId::Urllc, Some(d)) => Err(Error::invalid("deadline", format!("must be positive, got {d}"))),
            (SliceId::Urllc, None) => Err(Error::SliceMismatch("URLLC task without a deadline".into())),
            (SliceId::Mmtc, None) => Ok(()),
            (SliceId::Mmtc, Some(_)) => Err(Error::SliceMismatch("mMTC task with a deadline".into())),
        }
    }
}

/// Device that issued a task.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserEquipment {
    /// Distance to the radio unit in meters.
    pub distance: f64,
    pub local_cpu_freq: f64,
    pub tx_power: f64,
    pub local_process_power: f64,
    /// Power drawn while waiting on the MEC server. Negligible, pinned to zero.
    pub idle_power: f64,
}

impl UserEquipment {
    pub fn new(distance: f64, local_cpu_freq: f64, tx_power: f64, local_process_power: f64) -> Result<Self> {
        if !(distance > 0.0) {
            return Err(Error::invalid("distance", format!("must be positive, got {distance}")));
        }
        if !(local_cpu_freq > 0.0) {
            return Err(Error::invalid("local_cpu_freq", format!("must be positive, got {local_cpu_freq}")));
        }
        if !(tx_power > 0.0) {
            return Err(Error::invalid("tx_power", format!("must be positive, got {tx_power}")));
        }
        if !(local_process_power >= 0.0) {
            return Err(Error::invalid(
                "local_process_power",
                format!("must be non-negative, got {local_process_power}"),
            ));
        }
        Ok(UserEquipment {
            distance,
            local_cpu_freq,
            tx_power,
            local_process_power,
            idle_power: 0.0,
        })
    }
}

/// Uplink parameters for one task. `channel_gain` is the task's own Rayleigh
/// power-gain draw and is never shared between tasks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioParams {
    pub rb_bandwidth: f64,
    pub path_loss_exp: f64,
    pub noise_variance: f64,
    pub channel_gain: f64,
}

/// MEC server resources.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MecParams {
    /// Frequency contributed by one computation unit, in Hz.
    pub unit_freq: f64,
    pub total_comp_units: u32,
    pub total_comm_rbs: u32,
}

/// Grant for one task. `offload` is true exactly when both grants are non-zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AllocationDecision {
    pub k_comm: u32,
    pub k_comp: u32,
    pub offload: bool,
}

impl AllocationDecision {
    pub const LOCAL: AllocationDecision = AllocationDecision {
        k_comm: 0,
        k_comp: 0,
        offload: false,
    };

    /// Builds a decision from a pair of grants. A pair where either side is
    /// zero cannot carry a task to the server, so it collapses to local
    /// execution with nothing granted.
    pub fn from_grants(k_comm: u32, k_comp: u32) -> Self {
        if k_comm > 0 && k_comp > 0 {
            AllocationDecision {
                k_comm,
                k_comp,
                offload: true,
            }
        } else {
            AllocationDecision::LOCAL
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.offload == (self.k_comm > 0 && self.k_comp > 0) && (self.offload || (self.k_comm == 0 && self.k_comp == 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn task_deadline_follows_slice() {
        assert!(Task::new(SliceId::Urllc, 1.0, 1.0, Some(0.7)).is_ok());
        assert!(Task::new(SliceId::Mmtc, 1.0, 1.0, None).is_ok());
        assert!(matches!(
            Task::new(SliceId::Urllc, 1.0, 1.0, None),
            Err(Error::SliceMismatch(_))
        ));
        assert!(matches!(
            Task::new(SliceId::Mmtc, 1.0, 1.0, Some(1.0)),
            Err(Error::SliceMismatch(_))
        ));
        assert!(Task::new(SliceId::Mmtc, 0.0, 1.0, None).is_err());
        assert!(Task::new(SliceId::Urllc, 1.0, 1.0, Some(0.0)).is_err());
    }

    #[test]
    fn half_zero_grants_collapse_to_local() {
        assert_eq!(AllocationDecision::from_grants(4, 0), AllocationDecision::LOCAL);
        assert_eq!(AllocationDecision::from_grants(0, 8), AllocationDecision::LOCAL);
        let d = AllocationDecision::from_grants(1, 10);
        assert!(d.offload && d.is_consistent());
        assert!(!AllocationDecision { k_comm: 3, k_comp: 0, offload: false }.is_consistent());
    }

    #[test]
    fn ue_rejects_bad_values() {
        assert!(UserEquipment::new(0.0, 1.0, 1.0, 0.0).is_err());
        assert!(UserEquipment::new(1.0, 0.0, 1.0, 0.0).is_err());
        assert_eq!(UserEquipment::new(1.0, 1.0, 1.0, 0.4).unwrap().idle_power, 0.0);
    }
}
