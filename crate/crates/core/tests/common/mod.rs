//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use mecsim::episode::{Arrival, EnvConfig};
use mecsim::model::{SliceId, Task, UserEquipment};
use mecsim::nn::{Mlp, MlpSpec};
use mecsim::seed::SimRng;
use rand::Rng;

/// Largest relative error between backprop and central differences for
/// the scalar loss `c . f(x)` on one random network no larger than 4x8x8x2.
pub fn gradient_check(rng: &mut SimRng, h: f64) -> f64 {
    let input = rng.random_range(1..=4);
    let depth = rng.random_range(1..=2);
    let hidden: Vec<usize> = (0..depth).map(|_| rng.random_range(1..=8)).collect();
    let output = rng.random_range(1..=2);
    let mut net = Mlp::new(MlpSpec::new(input, hidden, output), rng.random()).unwrap();
    // Non-zero biases so the check also covers them.
    let mut flat = net.flat();
    for v in &mut flat {
        *v += rng.random_range(-0.1..0.1);
    }
    net.set_flat(&flat).unwrap();
    let x: Vec<f64> = (0..input).map(|_| rng.random_range(-1.0..1.0)).collect();
    let c: Vec<f64> = (0..output).map(|_| rng.random_range(-1.0..1.0)).collect();

    let loss = |n: &Mlp| -> f64 { n.predict(&x).unwrap().iter().zip(&c).map(|(o, k)| o * k).sum() };
    let (_, cache) = net.forward(&x).unwrap();
    let analytic: Vec<f64> = net.backward(&cache, &c).unwrap().values().collect();

    let mut worst: f64 = 0.0;
    for (i, &a) in analytic.iter().enumerate() {
        let mut p = flat.clone();
        p[i] += h;
        net.set_flat(&p).unwrap();
        let up = loss(&net);
        p[i] -= 2.0 * h;
        net.set_flat(&p).unwrap();
        let down = loss(&net);
        let numeric = (up - down) / (2.0 * h);
        // Absolute floor for parameters whose true gradient is ~0.
        let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-6);
        worst = worst.max(rel);
    }
    net.set_flat(&flat).unwrap();
    worst
}

/// A task and device drawn from wide ranges, independent of the sampler.
pub fn random_arrival(rng: &mut SimRng, env: &EnvConfig) -> Arrival {
    let slice = if rng.random_bool(0.5) { SliceId::Urllc } else { SliceId::Mmtc };
    let cfg = env.slice(slice);
    let task = Task::new(
        slice,
        rng.random_range(1e5..8e6),
        rng.random_range(1e7..1e9),
        cfg.deadline.map(|_| rng.random_range(0.05..1.5)),
    )
    .unwrap();
    let ue = UserEquipment::new(
        rng.random_range(1.0..2000.0),
        cfg.local_cpu_freq,
        cfg.tx_power,
        cfg.local_process_power,
    )
    .unwrap();
    Arrival {
        task,
        ue,
        channel_gain: rng.random_range(0.01..4.0),
    }
}

/// Brute force: every menu pair with both grants positive that fits and
/// meets the slice criterion, minimised by (total grant, comm grant). The
/// criterion is recomputed from first principles rather than through the
/// library's outcome code.
pub fn brute_force_smallest_pair(arrival: &Arrival, env: &EnvConfig, comm: u32, comp: u32) -> (u32, u32) {
    let a = arrival;
    let snr = a.ue.tx_power * a.ue.distance.powf(-env.radio.path_loss_exp) * a.channel_gain / env.radio.noise_variance;
    let per_rb = env.radio.rb_bandwidth * (1.0 + snr).log2();
    let t_local = a.task.cycles / a.ue.local_cpu_freq;
    let e_local = a.ue.local_process_power * t_local;
    let mut best: Option<(u32, u32)> = None;
    for &c in &env.menu.comm_options {
        for &p in &env.menu.comp_options {
            if c == 0 || p == 0 || c > comm || p > comp {
                continue;
            }
            let t_trans = a.task.bytes * 8.0 / (c as f64 * per_rb);
            let t_mec = a.task.cycles / (p as f64 * env.mec.unit_freq);
            let ok = match a.task.slice {
                SliceId::Urllc => t_trans + t_mec <= a.task.deadline.unwrap(),
                SliceId::Mmtc => a.ue.tx_power * t_trans < e_local,
            };
            if ok && best.is_none_or(|(bc, bp)| (c + p, c) < (bc + bp, bc)) {
                best = Some((c, p));
            }
        }
    }
    best.unwrap_or((0, 0))
}
