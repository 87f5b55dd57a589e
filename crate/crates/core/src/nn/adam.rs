use serde::{Deserialize, Serialize};

use super::mlp::{Gradients, Mlp};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            learning_rate: 1e-4,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Bias-corrected Adam moments for one network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub config: AdamConfig,
    pub step: u64,
    pub first_moment: Gradients,
    pub second_moment: Gradients,
}

impl AdamState {
    pub fn new(net: &Mlp, config: AdamConfig) -> Self {
        AdamState {
            config,
            step: 0,
            first_moment: Gradients::zeros_like(net),
            second_moment: Gradients::zeros_like(net),
        }
    }

    pub fn step(&mut self, net: &mut Mlp, grads: &Gradients) -> Result<()> {
        let shapes_match = grads.layers.len() == net.layers.len()
            && self.first_moment.layers.len() == net.layers.len()
            && grads
                .layers
                .iter()
                .zip(&net.layers)
                .zip(&self.first_moment.layers)
                .all(|((g, p), m)| {
                    g.weights.len() == p.weights.len()
                        && g.bias.len() == p.bias.len()
                        && m.weights.len() == p.weights.len()
                        && m.bias.len() == p.bias.len()
                });
        if !shapes_match {
            return Err(Error::Dimension {
                expected: net.param_count(),
                actual: grads.values().count(),
            });
        }
        self.step += 1;
        let AdamConfig {
            learning_rate,
            beta1,
            beta2,
            epsilon,
        } = self.config;
        let t = self.step as i32;
        let bc1 = 1.0 - beta1.powi(t);
        let bc2 = 1.0 - beta2.powi(t);
        let m = self.first_moment.values_mut();
        let v = self.second_moment.values_mut();
        for (((p, g), m), v) in net.params_mut().zip(grads.values()).zip(m).zip(v) {
            *m = beta1 * *m + (1.0 - beta1) * g;
            *v = beta2 * *v + (1.0 - beta2) * g * g;
            let m_hat = *m / bc1;
            let v_hat = *v / bc2;
            *p -= learning_rate * m_hat / (v_hat.sqrt() + epsilon);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::{Layer, MlpSpec};

    fn scalar(w: f64) -> Mlp {
        Mlp::from_layers(
            MlpSpec::new(1, vec![], 1),
            vec![Layer {
                rows: 1,
                cols: 1,
                weights: vec![w],
                bias: vec![0.0],
            }],
            0,
        )
        .unwrap()
    }

    fn grad(gw: f64) -> Gradients {
        Gradients {
            layers: vec![Layer {
                rows: 1,
                cols: 1,
                weights: vec![gw],
                bias: vec![0.0],
            }],
        }
    }

    #[test]
    fn zero_gradient_leaves_parameters() {
        let mut net = Mlp::new(MlpSpec::new(3, vec![4], 2), 5).unwrap();
        let before = net.flat();
        let mut adam = AdamState::new(&net, AdamConfig::default());
        let g = Gradients::zeros_like(&net);
        adam.step(&mut net, &g).unwrap();
        assert_eq!(net.flat(), before);
        assert_eq!(adam.step, 1);
    }

    #[test]
    fn first_step_moves_by_learning_rate() {
        for g in [3.0, -0.02, 250.0] {
            let mut net = scalar(1.0);
            let cfg = AdamConfig::default();
            let mut adam = AdamState::new(&net, cfg);
            adam.step(&mut net, &grad(g)).unwrap();
            // m_hat / sqrt(v_hat) = g / |g| exactly on the first step.
            let expected = 1.0 - cfg.learning_rate * g.signum() * g.abs() / (g.abs() + cfg.epsilon);
            assert!((net.layers[0].weights[0] - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn repeated_gradient_moves_monotonically() {
        let mut net = scalar(0.0);
        let mut adam = AdamState::new(&net, AdamConfig::default());
        adam.step(&mut net, &grad(1.0)).unwrap();
        let w1 = net.layers[0].weights[0];
        adam.step(&mut net, &grad(1.0)).unwrap();
        let w2 = net.layers[0].weights[0];
        assert!(w1 < 0.0 && w2 < w1);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let mut net = scalar(0.0);
        let mut adam = AdamState::new(&net, AdamConfig::default());
        let other = Mlp::new(MlpSpec::new(2, vec![], 1), 0).unwrap();
        assert!(adam.step(&mut net, &Gradients::zeros_like(&other)).is_err());
    }
}
