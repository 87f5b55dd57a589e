use super::{RadioParams, Task, UserEquipment};
use crate::error::{Error, Result};

/// Uplink capacity in bits/s of `k_comm` OFDMA resource blocks:
/// `K * B * log2(1 + P * d^-eta * |h|^2 / noise)`.
pub fn channel_capacity(k_comm: u32, radio: &RadioParams, ue: &UserEquipment) -> Result<f64> {
    if !(ue.distance > 0.0) {
        return Err(Error::invalid("distance", format!("must be positive, got {}", ue.distance)));
    }
    if !(radio.noise_variance > 0.0) {
        return Err(Error::invalid(
            "noise_variance",
            format!("must be positive, got {}", radio.noise_variance),
        ));
    }
    if k_comm == 0 {
        return Ok(0.0);
    }
    let snr = ue.tx_power * ue.distance.powf(-radio.path_loss_exp) * radio.channel_gain / radio.noise_variance;
    Ok(f64::from(k_comm) * radio.rb_bandwidth * snr.ln_1p() / std::f64::consts::LN_2)
}

/// Time to push the task payload over a link of `capacity` bits/s.
pub fn transmission_delay(task: &Task, capacity: f64) -> Result<f64> {
    if !(capacity > 0.0) {
        return Err(Error::NoUplink);
    }
    Ok(task.bytes * 8.0 / capacity)
}
