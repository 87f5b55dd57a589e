//! Counter-based seed splitting.
//!
//! Every random stream in the crate is derived from a master seed, a domain tag
//! and an index, so episode `i` sees the same stream no matter which thread runs
//! it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Domain tags keep training, evaluation and agent-internal streams disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Evaluation = 1,
    Training = 2,
    AgentInit = 3,
    AgentUpdate = 4,
    Audit = 5,
}

pub fn stream(master: u64, domain: Domain, index: u64) -> SimRng {
    let key = splitmix64(master ^ (domain as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(index);
    rng
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = stream(7, Domain::Evaluation, 3).random();
        let b: u64 = stream(7, Domain::Evaluation, 3).random();
        let c: u64 = stream(7, Domain::Evaluation, 4).random();
        let d: u64 = stream(7, Domain::Training, 3).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }
}
