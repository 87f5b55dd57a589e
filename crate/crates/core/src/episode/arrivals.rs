use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Exp1, Normal};
use serde::{Deserialize, Serialize};

use super::config::EnvConfig;
use crate::error::{Error, Result};
use crate::model::{SliceId, Task, UserEquipment};

/// Per-slice arrival and device parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceArrivalConfig {
    /// Mean number of requesting UEs per round.
    pub count_mean: f64,
    /// Variance (not standard deviation) of the per-round count.
    pub count_variance: f64,
    pub bytes_range: [f64; 2],
    pub cycles_range: [f64; 2],
    /// Seconds; URLLC only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deadline: Option<f64>,
    pub local_cpu_freq: f64,
    pub tx_power: f64,
    #[serde(default)]
    pub local_process_power: f64,
}

impl SliceArrivalConfig {
    pub fn urllc_default() -> Self {
        SliceArrivalConfig {
            count_mean: 10.0,
            count_variance: 2.0,
            bytes_range: [2e6, 5e6],
            cycles_range: [180e6, 660e6],
            deadline: Some(0.7),
            local_cpu_freq: 600e6,
            tx_power: 0.2,
            // Not listed for URLLC devices; URLLC energy never enters a reward
            // or a metric.
            local_process_power: 0.0,
        }
    }

    pub fn mmtc_default() -> Self {
        SliceArrivalConfig {
            count_mean: 30.0,
            count_variance: 5.0,
            bytes_range: [2e6, 5e6],
            cycles_range: [60e6, 220e6],
            deadline: None,
            local_cpu_freq: 200e6,
            tx_power: 0.2,
            local_process_power: 0.4,
        }
    }

    pub(crate) fn validate(&self, prefix: &str, slice: SliceId) -> Result<()> {
        let err = |key: &str, message: String| Error::Config {
            path: format!("{prefix}.{key}"),
            message,
        };
        if !(self.count_mean >= 0.0 && self.count_mean.is_finite()) {
            return Err(err("count_mean", format!("must be non-negative, got {}", self.count_mean)));
        }
        if !(self.count_variance >= 0.0 && self.count_variance.is_finite()) {
            return Err(err(
                "count_variance",
                format!("must be non-negative, got {}", self.count_variance),
            ));
        }
        for (key, [lo, hi]) in [("bytes_range", self.bytes_range), ("cycles_range", self.cycles_range)] {
            if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
                return Err(err(key, format!("need 0 < min <= max, got [{lo}, {hi}]")));
            }
        }
        for (key, v) in [("local_cpu_freq", self.local_cpu_freq), ("tx_power", self.tx_power)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(err(key, format!("must be positive, got {v}")));
            }
        }
        if !(self.local_process_power >= 0.0) {
            return Err(err(
                "local_process_power",
                format!("must be non-negative, got {}", self.local_process_power),
            ));
        }
        match (slice, self.deadline) {
            (SliceId::Urllc, Some(d)) if d > 0.0 => {}
            (SliceId::Urllc, _) => return Err(err("deadline", "URLLC needs a positive deadline".into())),
            (SliceId::Mmtc, None) => {}
            (SliceId::Mmtc, Some(_)) => return Err(err("deadline", "mMTC tasks carry no deadline".into())),
        }
        if slice == SliceId::Mmtc && !(self.local_process_power > 0.0) {
            return Err(err(
                "local_process_power",
                "mMTC energy reward needs a positive local processing power".into(),
            ));
        }
        Ok(())
    }
}

/// Same keys as [`SliceArrivalConfig`], all optional; omitted keys keep the
/// slice's own defaults.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SliceArrivalPatch {
    count_mean: Option<f64>,
    count_variance: Option<f64>,
    bytes_range: Option<[f64; 2]>,
    cycles_range: Option<[f64; 2]>,
    deadline: Option<f64>,
    local_cpu_freq: Option<f64>,
    tx_power: Option<f64>,
    local_process_power: Option<f64>,
}

impl SliceArrivalPatch {
    fn apply(self, mut base: SliceArrivalConfig) -> SliceArrivalConfig {
        macro_rules! take {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { base.$f = v; })* };
        }
        take!(count_mean, count_variance, bytes_range, cycles_range, local_cpu_freq, tx_power, local_process_power);
        if self.deadline.is_some() {
            base.deadline = self.deadline;
        }
        base
    }
}

pub(crate) fn deserialize_urllc<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<SliceArrivalConfig, D::Error> {
    SliceArrivalPatch::deserialize(d).map(|p| p.apply(SliceArrivalConfig::urllc_default()))
}

pub(crate) fn deserialize_mmtc<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<SliceArrivalConfig, D::Error> {
    SliceArrivalPatch::deserialize(d).map(|p| p.apply(SliceArrivalConfig::mmtc_default()))
}

/// One request in a round: the task, its device and the device's fading draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arrival {
    pub task: Task,
    pub ue: UserEquipment,
    pub channel_gain: f64,
}

fn sample_count<R: Rng + ?Sized>(rng: &mut R, cfg: &SliceArrivalConfig) -> usize {
    let draw = Normal::new(cfg.count_mean, cfg.count_variance.sqrt())
        .expect("validated mean and variance")
        .sample(rng);
    draw.round().max(0.0) as usize
}

/// Draws one arrival round: a Gaussian count of UEs per slice, uniformly
/// placed in the coverage rectangle, each with one uniformly drawn task and
/// an exponential(1) channel power gain. The result is shuffled across slices.
pub fn sample_arrivals<R: Rng + ?Sized>(rng: &mut R, env: &EnvConfig) -> Vec<Arrival> {
    let mut arrivals = Vec::new();
    for slice in SliceId::ALL {
        let cfg = env.slice(slice);
        let n = sample_count(rng, cfg);
        for _ in 0..n {
            let bytes = rng.random_range(cfg.bytes_range[0]..=cfg.bytes_range[1]);
            let cycles = rng.random_range(cfg.cycles_range[0]..=cfg.cycles_range[1]);
            let x = rng.random_range(-0.5..=0.5) * env.area.width;
            let y = rng.random_range(-0.5..=0.5) * env.area.height;
            let distance = x.hypot(y).max(env.area.min_distance);
            let channel_gain: f64 = Exp1.sample(rng);
            arrivals.push(Arrival {
                task: Task {
                    slice,
                    bytes,
                    cycles,
                    deadline: cfg.deadline,
                },
                ue: UserEquipment {
                    distance,
                    local_cpu_freq: cfg.local_cpu_freq,
                    tx_power: cfg.tx_power,
                    local_process_power: cfg.local_process_power,
                    idle_power: 0.0,
                },
                // Exp1 can return exactly 0 only with negligible probability;
                // keep the gain strictly positive regardless.
                channel_gain: channel_gain.max(f64::MIN_POSITIVE),
            });
        }
    }
    arrivals.shuffle(rng);
    arrivals
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::{stream, Domain};

    #[test]
    fn zero_variance_gives_exact_counts() {
        let mut env = EnvConfig::default();
        env.urllc.count_variance = 0.0;
        env.mmtc.count_mean = 0.0;
        env.mmtc.count_variance = 0.0;
        for i in 0..50 {
            let a = sample_arrivals(&mut stream(1, Domain::Audit, i), &env);
            assert_eq!(a.len(), 10);
            assert!(a.iter().all(|x| x.task.slice == SliceId::Urllc));
        }
    }

    #[test]
    fn urllc_count_mean_converges() {
        let env = EnvConfig::default();
        let rounds = 10_000u64;
        let total: usize = (0..rounds)
            .map(|i| {
                sample_arrivals(&mut stream(2, Domain::Audit, i), &env)
                    .iter()
                    .filter(|a| a.task.slice == SliceId::Urllc)
                    .count()
            })
            .sum();
        let mean = total as f64 / rounds as f64;
        assert!((9.9..=10.1).contains(&mean), "mean {mean}");
    }

    #[test]
    fn sampled_values_respect_config() {
        let env = EnvConfig::default();
        let half_diagonal = (1000.0f64 * 1000.0 + 1500.0 * 1500.0).sqrt();
        assert!((half_diagonal - 1802.775_637_731_994_6).abs() < 1e-9);
        for i in 0..500 {
            for a in sample_arrivals(&mut stream(3, Domain::Audit, i), &env) {
                a.task.validate().unwrap();
                let cfg = env.slice(a.task.slice);
                assert!(a.ue.distance >= 1.0 && a.ue.distance <= half_diagonal);
                assert!(a.task.bytes >= cfg.bytes_range[0] && a.task.bytes <= cfg.bytes_range[1]);
                assert!(a.task.cycles >= cfg.cycles_range[0] && a.task.cycles <= cfg.cycles_range[1]);
                assert!(a.channel_gain > 0.0);
            }
        }
    }

    #[test]
    fn rounds_mix_slices() {
        let env = EnvConfig::default();
        let a = sample_arrivals(&mut stream(4, Domain::Audit, 0), &env);
        let first_mmtc = a.iter().position(|x| x.task.slice == SliceId::Mmtc).unwrap();
        let last_urllc = a.iter().rposition(|x| x.task.slice == SliceId::Urllc).unwrap();
        assert!(first_mmtc < last_urllc, "round was not shuffled");
    }
}
