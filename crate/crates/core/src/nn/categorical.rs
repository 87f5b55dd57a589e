use rand::Rng;

use crate::episode::ActionMask;
use crate::error::{Error, Result};

/// Replaces logits of infeasible actions with negative infinity.
pub fn masked_logits(logits: &[f64], mask: &ActionMask) -> Vec<f64> {
    logits
        .iter()
        .enumerate()
        .map(|(i, &l)| if mask.is_feasible(i) { l } else { f64::NEG_INFINITY })
        .collect()
}

/// Categorical distribution over logits, where `-inf` marks an excluded
/// option. Probabilities come from a max-shifted softmax.
#[derive(Debug, Clone, PartialEq)]
pub struct Categorical {
    log_probs: Vec<f64>,
    probs: Vec<f64>,
}

impl Categorical {
    pub fn from_logits(logits: &[f64]) -> Result<Self> {
        if logits.iter().any(|l| l.is_nan() || *l == f64::INFINITY) {
            return Err(Error::invalid("logits", "NaN or +inf logit"));
        }
        let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return Err(Error::AllMasked);
        }
        let sum: f64 = logits.iter().map(|l| (l - max).exp()).sum();
        let log_z = max + sum.ln();
        let log_probs: Vec<f64> = logits.iter().map(|l| l - log_z).collect();
        let probs = log_probs.iter().map(|lp| lp.exp()).collect();
        Ok(Categorical { log_probs, probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn log_prob(&self, index: usize) -> f64 {
        self.log_probs[index]
    }

    pub fn entropy(&self) -> f64 {
        self.probs
            .iter()
            .zip(&self.log_probs)
            .filter(|(p, _)| **p > 0.0)
            .map(|(p, lp)| -p * lp)
            .sum()
    }

    /// Index of the most likely option (lowest index on ties).
    pub fn mode(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.probs.iter().enumerate() {
            if p > self.probs[best] {
                best = i;
            }
        }
        best
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last = 0;
        for (i, &p) in self.probs.iter().enumerate() {
            if p > 0.0 {
                acc += p;
                last = i;
                if u < acc {
                    return i;
                }
            }
        }
        last
    }

    /// Gradient of `log p(index)` with respect to the logits.
    pub fn grad_log_prob(&self, index: usize) -> Vec<f64> {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, &p)| if i == index { 1.0 - p } else { -p })
            .collect()
    }

    /// Gradient of the entropy with respect to the logits.
    pub fn grad_entropy(&self) -> Vec<f64> {
        let h = self.entropy();
        self.probs
            .iter()
            .zip(&self.log_probs)
            .map(|(&p, &lp)| if p > 0.0 { -p * (lp + h) } else { 0.0 })
            .collect()
    }
}
