use serde::{Deserialize, Serialize};

use super::adam::AdamState;
use super::mlp::{Layer, Mlp, MlpSpec};
use crate::error::Result;

/// JSON form of one network. Field order is fixed:
/// `spec`, `layers` (each `rows`, `cols`, row-major `weights`, `bias`),
/// `adam` (optional), `step`, `seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkCheckpoint {
    pub spec: MlpSpec,
    pub layers: Vec<Layer>,
    pub adam: Option<AdamState>,
    pub step: u64,
    pub seed: u64,
}

impl NetworkCheckpoint {
    pub fn capture(net: &Mlp, adam: Option<&AdamState>) -> Self {
        NetworkCheckpoint {
            spec: net.spec.clone(),
            layers: net.layers.clone(),
            adam: adam.cloned(),
            step: adam.map_or(0, |a| a.step),
            seed: net.seed,
        }
    }

    pub fn restore(&self) -> Result<(Mlp, Option<AdamState>)> {
        let net = Mlp::from_layers(self.spec.clone(), self.layers.clone(), self.seed)?;
        Ok((net, self.adam.clone()))
    }
}
