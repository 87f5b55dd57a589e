use serde::{Deserialize, Serialize};

use super::arrivals::{deserialize_mmtc, deserialize_urllc, SliceArrivalConfig};
use super::menu::ActionMenu;
use super::pools::ResourcePools;
use crate::error::{Error, Result};
use crate::model::{MecParams, RadioParams, SliceId};

/// Radio parameters shared by every task; the fading gain is drawn per task.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadioConfig {
    pub rb_bandwidth: f64,
    pub path_loss_exp: f64,
    pub noise_variance: f64,
}

impl Default for RadioConfig {
    fn default() -> Self {
        RadioConfig {
            rb_bandwidth: 4e6,
            path_loss_exp: 2.8,
            noise_variance: 1e-13,
        }
    }
}

impl RadioConfig {
    pub fn with_gain(&self, channel_gain: f64) -> RadioParams {
        RadioParams {
            rb_bandwidth: self.rb_bandwidth,
            path_loss_exp: self.path_loss_exp,
            noise_variance: self.noise_variance,
            channel_gain,
        }
    }
}

/// Coverage rectangle with the base station at its center, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Area {
    pub width: f64,
    pub height: f64,
    pub min_distance: f64,
}

impl Default for Area {
    fn default() -> Self {
        Area {
            width: 2000.0,
            height: 3000.0,
            min_distance: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnvConfig {
    pub radio: RadioConfig,
    pub mec: MecParams,
    pub area: Area,
    #[serde(deserialize_with = "deserialize_urllc")]
    pub urllc: SliceArrivalConfig,
    #[serde(deserialize_with = "deserialize_mmtc")]
    pub mmtc: SliceArrivalConfig,
    pub menu: ActionMenu,
    /// Upper bound used to normalize the deadline observation component.
    pub deadline_bound: f64,
}

impl Default for MecParams {
    fn default() -> Self {
        MecParams {
            unit_freq: 2e8,
            total_comp_units: 40,
            total_comm_rbs: 80,
        }
    }
}

impl Default for EnvConfig {
    fn default() -> Self {
        EnvConfig {
            radio: RadioConfig::default(),
            mec: MecParams::default(),
            area: Area::default(),
            urllc: SliceArrivalConfig::urllc_default(),
            mmtc: SliceArrivalConfig::mmtc_default(),
            menu: ActionMenu::default(),
            deadline_bound: 1.0,
        }
    }
}

impl EnvConfig {
    pub fn slice(&self, slice: SliceId) -> &SliceArrivalConfig {
        match slice {
            SliceId::Urllc => &self.urllc,
            SliceId::Mmtc => &self.mmtc,
        }
    }

    pub fn slice_mut(&mut self, slice: SliceId) -> &mut SliceArrivalConfig {
        match slice {
            SliceId::Urllc => &mut self.urllc,
            SliceId::Mmtc => &mut self.mmtc,
        }
    }

    pub fn full_pools(&self) -> ResourcePools {
        ResourcePools::full(self.mec.total_comm_rbs, self.mec.total_comp_units)
    }

    /// Checks every invariant; errors name the offending key relative to the
    /// environment block.
    pub fn validate(&self) -> Result<()> {
        let positive = |path: &str, v: f64| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config {
                    path: path.to_string(),
                    message: format!("must be positive and finite, got {v}"),
                })
            }
        };
        positive("radio.rb_bandwidth", self.radio.rb_bandwidth)?;
        positive("radio.path_loss_exp", self.radio.path_loss_exp)?;
        positive("radio.noise_variance", self.radio.noise_variance)?;
        positive("mec.unit_freq", self.mec.unit_freq)?;
        if self.mec.total_comm_rbs == 0 {
            return Err(Error::Config {
                path: "mec.total_comm_rbs".into(),
                message: "must be positive".into(),
            });
        }
        if self.mec.total_comp_units == 0 {
            return Err(Error::Config {
                path: "mec.total_comp_units".into(),
                message: "must be positive".into(),
            });
        }
        positive("area.width", self.area.width)?;
        positive("area.height", self.area.height)?;
        positive("area.min_distance", self.area.min_distance)?;
        positive("deadline_bound", self.deadline_bound)?;
        self.urllc.validate("urllc", SliceId::Urllc)?;
        self.mmtc.validate("mmtc", SliceId::Mmtc)?;
        self.menu
            .validate(&self.full_pools())
            .map_err(|message| Error::Config {
                path: "menu".into(),
                message,
            })
    }
}
